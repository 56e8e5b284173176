#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "theta/covering.hpp"
#include "theta/projection.hpp"
#include "theta/sampling.hpp"
#include "theta/subspace.hpp"

#include <random>

using namespace theta;

namespace {

Element unit(Eigen::Index n, Eigen::Index i) {
    Element f = Element::Zero(n, 1);
    f(i, 0) = 1.0;
    return f;
}

}  // namespace

TEST_CASE("kernel subspaces: codimension equals functional rank") {
    const SpaceSpec r3 = SpaceSpec::ell_p(2.0, 3);

    const Subspace y = subspace_from_kernel(r3, {unit(3, 0)});
    CHECK(y.codim() == 1);
    CHECK(y.contains(flatten(unit(3, 1))));
    CHECK(y.contains(flatten(unit(3, 2))));
    CHECK_FALSE(y.contains(flatten(unit(3, 0))));

    const Subspace full = subspace_from_kernel(r3, {});
    CHECK(full.codim() == 0);
    CHECK(full.dim() == 3);

    // duplicate functionals collapse to rank 1
    const SpaceSpec r4 = SpaceSpec::ell_p(2.0, 4);
    Element f(4, 1);
    f << 1, 1, 0, 0;
    const Subspace dup = subspace_from_kernel(r4, {f, f});
    CHECK(dup.codim() == 1);
}

TEST_CASE("intersection counts coordinates") {
    const SpaceSpec r8 = SpaceSpec::ell_p(2.0, 8);
    const Subspace y = subspace_from_kernel(r8, {unit(8, 0)});
    // H = span(e_0..e_3) as the kernel of the trailing coordinates
    std::vector<Element> trailing;
    for (Eigen::Index i = 4; i < 8; ++i) trailing.push_back(unit(8, i));
    const Subspace h = subspace_from_kernel(r8, trailing);
    CHECK(h.dim() == 4);

    const Subspace z = intersect_subspaces(y, h);
    CHECK(z.dim() == 3);
    CHECK(z.codim() <= y.codim() + h.codim());

    const Subspace full = Subspace::full(r8);
    const Subspace same = intersect_subspaces(y, full);
    CHECK(same.dim() == y.dim());

    const Subspace idem = intersect_subspaces(y, y);
    CHECK(idem.dim() == y.dim());
}

TEST_CASE("subspace invariants hold for random kernels") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    const SpaceSpec space = SpaceSpec::ell_p(2.0, 12);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd funcs(3, 12);
        for (Eigen::Index i = 0; i < 3; ++i)
            for (Eigen::Index k = 0; k < 12; ++k) funcs(i, k) = normal(rng);
        const Subspace y = Subspace::from_kernel(space, funcs);
        CHECK(y.codim() == 3);
        const Eigen::MatrixXd gram = y.basis().transpose() * y.basis();
        CHECK((gram - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((funcs * y.basis()).cwiseAbs().maxCoeff() <= 1e-10 * funcs.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("coordinate blocks zero the complement") {
    const SpaceSpec r4 = SpaceSpec::ell_p(2.0, 4);
    Element f(4, 1);
    f << 1, 2, 3, 4;

    Element expected(4, 1);
    expected << 1, 2, 0, 0;
    CHECK(BlockProjection::coord(r4, {0, 1}).apply(f) == expected);
    CHECK(BlockProjection::full(r4).apply(f) == f);
    CHECK(BlockProjection::coord(r4, {}).apply(f) == Element::Zero(4, 1));
    CHECK_THROWS_AS(BlockProjection::coord(r4, {4}), std::out_of_range);
}

TEST_CASE("projections are idempotent and contractive") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal(0.0, 1.0);

    const SpaceSpec lp = SpaceSpec::weighted_lp(
        1.5, (Eigen::VectorXd(6) << 1, 2, 1, 0.5, 1, 3).finished());
    const BlockProjection coord = BlockProjection::coord(lp, {1, 3, 4});

    const SpaceSpec l2 = SpaceSpec::ell_p(2.0, 6);
    Eigen::MatrixXd basis(6, 2);
    basis.setZero();
    basis(0, 0) = basis(1, 1) = 1.0;
    // rotate to a non-coordinate orthonormal pair
    Eigen::MatrixXd g(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i)
        for (Eigen::Index j = 0; j < 6; ++j) g(i, j) = normal(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    const BlockProjection ortho = BlockProjection::ortho(l2, q.leftCols(2));

    const SpaceSpec boch = SpaceSpec::bochner(2.0, Eigen::VectorXd::Ones(5), 3.0, 3);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
    e[0] = 1.0;
    const BlockProjection bb =
        BlockProjection::bochner(boch, e, e, CoordBlock{{0, 2}});

    auto rand_elem = [&](const SpaceSpec& s) {
        Element f(s.elem_rows(), s.elem_cols());
        for (Eigen::Index r = 0; r < f.rows(); ++r)
            for (Eigen::Index c = 0; c < f.cols(); ++c) f(r, c) = normal(rng);
        return f;
    };

    for (int i = 0; i < 10000; ++i) {
        const Element f = rand_elem(lp);
        const Element pf = coord.apply(f);
        CHECK(coord.apply(pf) == pf);  // exact for coordinate blocks
        CHECK(lp.norm(pf) <= lp.norm(f) + 1e-10);
    }
    for (int i = 0; i < 2000; ++i) {
        const Element f = rand_elem(l2);
        const Element pf = ortho.apply(f);
        CHECK((ortho.apply(pf) - pf).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(l2.norm(pf) <= l2.norm(f) + 1e-10);
    }
    for (int i = 0; i < 2000; ++i) {
        const Element f = rand_elem(boch);
        const Element pf = bb.apply(f);
        CHECK((bb.apply(pf) - pf).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(boch.norm(pf) <= boch.norm(f) + 1e-10);
    }
}

TEST_CASE("projection matrices agree with apply") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> normal(0.0, 1.0);

    const SpaceSpec boch = SpaceSpec::bochner(2.0, Eigen::VectorXd::Ones(4), 2.0, 3);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
    e[0] = 1.0;
    const BlockProjection bb = BlockProjection::bochner(boch, e, e, CoordBlock{{1, 2}});
    const Eigen::MatrixXd m = bb.matrix();
    CHECK((m * m - m).cwiseAbs().maxCoeff() <= 1e-12);

    for (int i = 0; i < 100; ++i) {
        Element f(4, 3);
        for (Eigen::Index r = 0; r < 4; ++r)
            for (Eigen::Index c = 0; c < 3; ++c) f(r, c) = normal(rng);
        const Eigen::VectorXd via_matrix = m * flatten(f);
        CHECK((via_matrix - flatten(bb.apply(f))).cwiseAbs().maxCoeff() <= 1e-12);
    }

    const Eigen::MatrixXd range = bb.range_basis();
    CHECK(range.cols() == 2);
    CHECK((range.transpose() * range - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <=
          1e-12);
}

TEST_CASE("bochner blocks validate their inner data") {
    const SpaceSpec boch = SpaceSpec::bochner(2.0, Eigen::VectorXd::Ones(4), 3.0, 3);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
    e[0] = 2.0;  // not a unit vector
    CHECK_THROWS_AS(BlockProjection::bochner(boch, e, e, CoordBlock{{0}}),
                    std::invalid_argument);

    e[0] = 1.0;
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(3);
    phi[0] = 1.5;  // phi(e) != 1
    CHECK_THROWS_AS(BlockProjection::bochner(boch, e, phi, CoordBlock{{0}}),
                    std::invalid_argument);

    // dual norm above one: phi = e_0* + e_1* has l_{3/2} norm > 1
    phi.setZero();
    phi[0] = 1.0;
    phi[1] = 1.0;
    CHECK_THROWS_AS(BlockProjection::bochner(boch, e, phi, CoordBlock{{0}}),
                    std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "theta/sampling.hpp"
#include "theta/space.hpp"

#include <random>

using namespace theta;

namespace {

Element vec(std::initializer_list<double> vals) {
    Element f(static_cast<Eigen::Index>(vals.size()), 1);
    Eigen::Index i = 0;
    for (double v : vals) f(i++, 0) = v;
    return f;
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

}  // namespace

TEST_CASE("norm matches hand-computed values") {
    CHECK(SpaceSpec::ell_p(2.0, 2).norm(vec({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-15));

    Element diag = Element::Zero(2, 2);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    CHECK(SpaceSpec::schatten(1.0, 2, 2).norm(diag) == doctest::Approx(3.0).epsilon(1e-12));

    // sum of w_i |f_i|^3 = 2 + 1 = 3
    Eigen::VectorXd w(2);
    w << 2.0, 1.0;
    CHECK(SpaceSpec::weighted_lp(3.0, w).norm(vec({1.0, 1.0})) ==
          doctest::Approx(std::cbrt(3.0)).epsilon(1e-14));
}

TEST_CASE("invalid spaces and elements are rejected") {
    CHECK_THROWS_AS(SpaceSpec::ell_p(0.5, 4), std::invalid_argument);
    CHECK_THROWS_AS(SpaceSpec::ell_p(2.0, 0), std::invalid_argument);
    Eigen::VectorXd w(2);
    w << 1.0, -1.0;
    CHECK_THROWS_AS(SpaceSpec::weighted_lp(2.0, w), std::invalid_argument);

    const SpaceSpec s = SpaceSpec::ell_p(2.0, 3);
    CHECK_THROWS_AS(s.norm(vec({1.0, 2.0})), std::invalid_argument);
    Element bad = vec({1.0, 2.0, std::numeric_limits<double>::quiet_NaN()});
    CHECK_THROWS_AS(s.norm(bad), std::invalid_argument);
}

TEST_CASE("ell_p agrees exactly with unit-weight weighted_lp") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
        const SpaceSpec a = SpaceSpec::ell_p(p, 6);
        const SpaceSpec b = SpaceSpec::weighted_lp(p, Eigen::VectorXd::Ones(6));
        for (int i = 0; i < 200; ++i) {
            Element f(6, 1);
            for (Eigen::Index k = 0; k < 6; ++k) f(k, 0) = normal(rng);
            CHECK(a.norm(f) == b.norm(f));  // identical code path, bitwise
        }
    }
}

TEST_CASE("triangle inequality holds on random pairs") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<SpaceSpec> spaces = {
        SpaceSpec::ell_p(1.0, 8),
        SpaceSpec::ell_p(1.5, 8),
        SpaceSpec::ell_p(3.0, 8),
        SpaceSpec::weighted_lp(2.5, (Eigen::VectorXd(4) << 0.5, 1.0, 2.0, 3.0).finished()),
        SpaceSpec::schatten(1.0, 4, 4),
        SpaceSpec::schatten(4.0, 4, 4),
        SpaceSpec::bochner(2.0, Eigen::VectorXd::Ones(4), 3.0, 3),
    };
    for (const auto& s : spaces) {
        for (int i = 0; i < 10000; ++i) {
            Element f(s.elem_rows(), s.elem_cols());
            Element g(s.elem_rows(), s.elem_cols());
            for (Eigen::Index r = 0; r < f.rows(); ++r)
                for (Eigen::Index c = 0; c < f.cols(); ++c) {
                    f(r, c) = normal(rng);
                    g(r, c) = normal(rng);
                }
            CHECK(s.norm(f + g) <= s.norm(f) + s.norm(g) + 1e-10);
        }
    }
}

TEST_CASE("schatten p=2 is the Frobenius norm and unitarily invariant") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> normal(0.0, 1.0);
    const SpaceSpec s2 = SpaceSpec::schatten(2.0, 5, 5);
    const SpaceSpec s3 = SpaceSpec::schatten(3.0, 5, 5);
    for (int i = 0; i < 100; ++i) {
        Element m(5, 5);
        for (Eigen::Index r = 0; r < 5; ++r)
            for (Eigen::Index c = 0; c < 5; ++c) m(r, c) = normal(rng);
        CHECK(s2.norm(m) == doctest::Approx(m.norm()).epsilon(1e-12));

        const Eigen::MatrixXd u = random_orthogonal(5, rng);
        const Eigen::MatrixXd v = random_orthogonal(5, rng);
        for (const auto* s : {&s2, &s3})
            CHECK(s->norm(u * m * v) == doctest::Approx(s->norm(m)).epsilon(1e-10));
    }
}

TEST_CASE("bochner with inner dimension 1 equals the scalar norm exactly") {
    Eigen::VectorXd w(3);
    w << 0.5, 1.0, 2.5;
    const SpaceSpec scalar = SpaceSpec::weighted_lp(3.0, w);
    const SpaceSpec boch = SpaceSpec::bochner(3.0, w, 2.0, 1);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        Element f(3, 1);
        for (Eigen::Index k = 0; k < 3; ++k) f(k, 0) = normal(rng);
        CHECK(scalar.norm(f) == boch.norm(f));
    }
}

TEST_CASE("norm gradient matches finite differences where smooth") {
    std::mt19937_64 rng(91);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<SpaceSpec> spaces = {
        SpaceSpec::ell_p(2.0, 6),
        SpaceSpec::ell_p(3.0, 6),
        SpaceSpec::weighted_lp(2.5, (Eigen::VectorXd(4) << 0.5, 1.0, 2.0, 3.0).finished()),
        SpaceSpec::schatten(3.0, 4, 4),
        SpaceSpec::bochner(2.0, Eigen::VectorXd::Ones(3), 3.0, 2),
    };
    const double eps = 1e-6;
    for (const auto& s : spaces) {
        for (int i = 0; i < 20; ++i) {
            Element f(s.elem_rows(), s.elem_cols());
            Element d(s.elem_rows(), s.elem_cols());
            for (Eigen::Index r = 0; r < f.rows(); ++r)
                for (Eigen::Index c = 0; c < f.cols(); ++c) {
                    f(r, c) = normal(rng) + 0.1;
                    d(r, c) = normal(rng);
                }
            const Element g = norm_gradient(s, f);
            const double fd = (s.norm(f + eps * d) - s.norm(f - eps * d)) / (2.0 * eps);
            const double lin = flatten(g).dot(flatten(d));
            CHECK(fd == doctest::Approx(lin).epsilon(1e-4));
        }
    }
}

TEST_CASE("sphere samples are unit, deterministic, and symmetric") {
    std::vector<SpaceSpec> spaces = {
        SpaceSpec::ell_p(1.5, 8),
        SpaceSpec::weighted_lp(3.0, (Eigen::VectorXd(4) << 2.0, 1.0, 1.0, 0.5).finished()),
        SpaceSpec::schatten(2.5, 4, 3),
        SpaceSpec::bochner(2.0, Eigen::VectorXd::Ones(4), 3.0, 2),
    };
    for (const auto& s : spaces) {
        const auto batch = sample_sphere(s, 42, 200);
        for (const auto& f : batch) CHECK(std::abs(s.norm(f) - 1.0) <= 1e-12);
        const auto again = sample_sphere(s, 42, 200);
        for (size_t i = 0; i < batch.size(); ++i) CHECK(batch[i] == again[i]);
    }

    // symmetry of the uniform sphere measure on l_2^2
    const auto big = sample_sphere(SpaceSpec::ell_p(2.0, 2), 7, 100000);
    double mean = 0.0;
    for (const auto& f : big) mean += f(0, 0);
    mean /= static_cast<double>(big.size());
    CHECK(std::abs(mean) <= 0.02);
}

TEST_CASE("ball samples stay inside the ball") {
    const SpaceSpec s = SpaceSpec::ell_p(3.0, 6);
    for (const auto& f : sample_ball(s, 9, 500)) CHECK(s.norm(f) <= 1.0 + 1e-12);
}

TEST_CASE("space and element json round-trips") {
    std::vector<SpaceSpec> spaces = {
        SpaceSpec::ell_p(2.0, 16),
        SpaceSpec::weighted_lp(1.5, (Eigen::VectorXd(3) << 1.0, 2.0, 3.0).finished()),
        SpaceSpec::schatten(4.0, 8, 8),
        SpaceSpec::bochner(2.0, Eigen::VectorXd::Ones(4), 3.0, 5),
    };
    for (const auto& s : spaces) {
        const SpaceSpec back = SpaceSpec::from_json(s.to_json());
        CHECK(back == s);
    }
    CHECK_THROWS_AS(SpaceSpec::from_json(nlohmann::json{{"variant", "cantor"}, {"p", 2.0}}),
                    std::invalid_argument);

    Element m(2, 3);
    m << 1, 2, 3, 4, 5, 6;
    CHECK(element_from_json(element_to_json(m)) == m);
    Element v = vec({1.0, -2.0});
    CHECK(element_from_json(element_to_json(v)) == v);

    const SpaceSpec boch = spaces[3];
    Element f(4, 5);
    f.setRandom();
    CHECK(unflatten(boch, flatten(f)) == f);
}

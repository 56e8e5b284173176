#include "theta/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace theta {

namespace {

constexpr double kUnitTol = 1e-12;

std::vector<Eigen::Index> normalize_indices(std::vector<Eigen::Index> idx, Eigen::Index bound) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (!idx.empty() && (idx.front() < 0 || idx.back() >= bound))
        throw std::out_of_range("projection: block index out of range");
    return idx;
}

void check_ortho_columns(const Eigen::MatrixXd& basis) {
    if (basis.cols() == 0) return;
    const Eigen::MatrixXd gram =
        basis.transpose() * basis - Eigen::MatrixXd::Identity(basis.cols(), basis.cols());
    if (gram.cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("projection: basis columns not orthonormal");
}

Eigen::VectorXd apply_scalar_op(const std::variant<CoordBlock, OrthoBlock>& op,
                                const Eigen::VectorXd& x) {
    if (const auto* c = std::get_if<CoordBlock>(&op)) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
        for (Eigen::Index i : c->indices) out[i] = x[i];
        return out;
    }
    const auto& o = std::get<OrthoBlock>(op);
    return o.basis * (o.basis.transpose() * x);
}

}  // namespace

double dual_lq_norm(const Eigen::VectorXd& phi, double q) {
    if (q == 1.0) return phi.cwiseAbs().maxCoeff();
    const double qdual = q / (q - 1.0);
    return weighted_lp_norm(phi, Eigen::VectorXd::Ones(phi.size()), qdual);
}

BlockProjection BlockProjection::coord(const SpaceSpec& ambient,
                                       std::vector<Eigen::Index> indices) {
    if (ambient.is_schatten())
        throw std::invalid_argument("projection: no coordinate blocks on Schatten spaces");
    return BlockProjection(ambient, CoordBlock{normalize_indices(std::move(indices),
                                                                 ambient.elem_rows())});
}

BlockProjection BlockProjection::full(const SpaceSpec& ambient) {
    std::vector<Eigen::Index> all(ambient.elem_rows());
    for (Eigen::Index i = 0; i < ambient.elem_rows(); ++i) all[static_cast<size_t>(i)] = i;
    return coord(ambient, std::move(all));
}

BlockProjection BlockProjection::ortho(const SpaceSpec& ambient, Eigen::MatrixXd basis) {
    if (!ambient.coordinate_based())
        throw std::invalid_argument("projection: ortho blocks need coordinate ambient");
    if (basis.rows() != ambient.flat_dim())
        throw std::invalid_argument("projection: ortho basis row mismatch");
    check_ortho_columns(basis);
    return BlockProjection(ambient, OrthoBlock{std::move(basis)});
}

BlockProjection BlockProjection::bochner(const SpaceSpec& ambient, Eigen::VectorXd e,
                                         Eigen::VectorXd phi, Op scalar_op) {
    const auto* spec = std::get_if<BochnerSpec>(&ambient.variant());
    if (!spec) throw std::invalid_argument("projection: bochner block needs Bochner ambient");
    if (e.size() != spec->inner_dim || phi.size() != spec->inner_dim)
        throw std::invalid_argument("projection: inner vector size mismatch");
    const Eigen::VectorXd inner_w = Eigen::VectorXd::Ones(spec->inner_dim);
    if (std::abs(weighted_lp_norm(e, inner_w, spec->inner_p) - 1.0) > kUnitTol)
        throw std::invalid_argument("projection: e must be an inner unit vector");
    if (std::abs(phi.dot(e) - 1.0) > kUnitTol)
        throw std::invalid_argument("projection: phi(e) must equal 1");
    if (dual_lq_norm(phi, spec->inner_p) > 1.0 + kUnitTol)
        throw std::invalid_argument("projection: phi must have dual norm at most 1");

    BochnerBlock block{std::move(e), std::move(phi), {}};
    if (auto* c = std::get_if<CoordBlock>(&scalar_op)) {
        block.scalar_op = CoordBlock{normalize_indices(std::move(c->indices), spec->weights.size())};
    } else {
        auto& o = std::get<OrthoBlock>(scalar_op);
        if (o.basis.rows() != spec->weights.size())
            throw std::invalid_argument("projection: scalar ortho basis row mismatch");
        check_ortho_columns(o.basis);
        block.scalar_op = std::move(o);
    }
    return BlockProjection(ambient, std::move(block));
}

Element BlockProjection::apply(const Element& f) const {
    ambient_.check_shape(f);
    if (const auto* c = std::get_if<CoordBlock>(&op_)) {
        Element out = Element::Zero(f.rows(), f.cols());
        for (Eigen::Index i : c->indices) out.row(i) = f.row(i);
        return out;
    }
    if (const auto* o = std::get_if<OrthoBlock>(&op_)) {
        return unflatten(ambient_, o->basis * (o->basis.transpose() * flatten(f)));
    }
    const auto& b = std::get<BochnerBlock>(op_);
    const Eigen::VectorXd coeffs = apply_scalar_op(b.scalar_op, f * b.phi);
    return coeffs * b.e.transpose();
}

bool BlockProjection::is_zero() const {
    if (const auto* c = std::get_if<CoordBlock>(&op_)) return c->indices.empty();
    if (const auto* o = std::get_if<OrthoBlock>(&op_)) return o->basis.cols() == 0;
    const auto& b = std::get<BochnerBlock>(op_);
    if (const auto* c = std::get_if<CoordBlock>(&b.scalar_op)) return c->indices.empty();
    return std::get<OrthoBlock>(b.scalar_op).basis.cols() == 0;
}

Eigen::MatrixXd BlockProjection::matrix() const {
    const Eigen::Index n = ambient_.flat_dim();
    const Eigen::Index rows = ambient_.elem_rows();
    if (const auto* c = std::get_if<CoordBlock>(&op_)) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        // column-major flattening: coordinate (i, a) sits at i + a * rows
        for (Eigen::Index i : c->indices)
            for (Eigen::Index a = 0; a < ambient_.elem_cols(); ++a)
                m(i + a * rows, i + a * rows) = 1.0;
        return m;
    }
    if (const auto* o = std::get_if<OrthoBlock>(&op_)) return o->basis * o->basis.transpose();
    const auto& b = std::get<BochnerBlock>(op_);
    Eigen::MatrixXd scalar(rows, rows);
    if (const auto* c = std::get_if<CoordBlock>(&b.scalar_op)) {
        scalar.setZero();
        for (Eigen::Index i : c->indices) scalar(i, i) = 1.0;
    } else {
        const auto& ob = std::get<OrthoBlock>(b.scalar_op);
        scalar = ob.basis * ob.basis.transpose();
    }
    // vec(S F phi e^T) = (e phi^T kron S) vec(F)
    const Eigen::Index m_in = b.e.size();
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index a = 0; a < m_in; ++a)
        for (Eigen::Index bcol = 0; bcol < m_in; ++bcol)
            out.block(a * rows, bcol * rows, rows, rows) = (b.e[a] * b.phi[bcol]) * scalar;
    return out;
}

Eigen::MatrixXd BlockProjection::range_basis() const {
    const Eigen::Index rows = ambient_.elem_rows();
    if (const auto* c = std::get_if<CoordBlock>(&op_)) {
        const Eigen::Index cols = ambient_.elem_cols();
        Eigen::MatrixXd basis =
            Eigen::MatrixXd::Zero(ambient_.flat_dim(),
                                  static_cast<Eigen::Index>(c->indices.size()) * cols);
        Eigen::Index k = 0;
        for (Eigen::Index a = 0; a < cols; ++a)
            for (Eigen::Index i : c->indices) basis(i + a * rows, k++) = 1.0;
        return basis;
    }
    if (const auto* o = std::get_if<OrthoBlock>(&op_)) return o->basis;
    const auto& b = std::get<BochnerBlock>(op_);
    Eigen::MatrixXd scalar_basis;
    if (const auto* c = std::get_if<CoordBlock>(&b.scalar_op)) {
        scalar_basis = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(c->indices.size()));
        Eigen::Index k = 0;
        for (Eigen::Index i : c->indices) scalar_basis(i, k++) = 1.0;
    } else {
        scalar_basis = std::get<OrthoBlock>(b.scalar_op).basis;
    }
    const double e2 = b.e.norm();
    Eigen::MatrixXd basis(ambient_.flat_dim(), scalar_basis.cols());
    for (Eigen::Index k = 0; k < scalar_basis.cols(); ++k) {
        const Element rank_one = (scalar_basis.col(k) / e2) * b.e.transpose();
        basis.col(k) = flatten(rank_one);
    }
    return basis;
}

nlohmann::json BlockProjection::to_json() const {
    nlohmann::json j;
    if (const auto* c = std::get_if<CoordBlock>(&op_)) {
        j["kind"] = "coord";
        j["block"] = c->indices;
        return j;
    }
    if (const auto* o = std::get_if<OrthoBlock>(&op_)) {
        j["kind"] = "ortho";
        nlohmann::json cols = nlohmann::json::array();
        for (Eigen::Index k = 0; k < o->basis.cols(); ++k)
            cols.push_back(std::vector<double>(o->basis.col(k).begin(), o->basis.col(k).end()));
        j["basis"] = cols;
        return j;
    }
    const auto& b = std::get<BochnerBlock>(op_);
    j["kind"] = "bochner";
    j["e"] = std::vector<double>(b.e.begin(), b.e.end());
    j["phi"] = std::vector<double>(b.phi.begin(), b.phi.end());
    if (const auto* c = std::get_if<CoordBlock>(&b.scalar_op))
        j["block"] = c->indices;
    else {
        const auto& o = std::get<OrthoBlock>(b.scalar_op);
        nlohmann::json cols = nlohmann::json::array();
        for (Eigen::Index k = 0; k < o.basis.cols(); ++k)
            cols.push_back(std::vector<double>(o.basis.col(k).begin(), o.basis.col(k).end()));
        j["basis"] = cols;
    }
    return j;
}

BlockProjection BlockProjection::from_json(const SpaceSpec& ambient, const nlohmann::json& j) {
    const std::string kind = j.value("kind", "coord");
    auto read_basis = [](const nlohmann::json& cols) {
        if (cols.empty()) return Eigen::MatrixXd(0, 0);
        const auto first = cols.front().get<std::vector<double>>();
        Eigen::MatrixXd basis(static_cast<Eigen::Index>(first.size()),
                              static_cast<Eigen::Index>(cols.size()));
        for (size_t k = 0; k < cols.size(); ++k) {
            const auto col = cols[k].get<std::vector<double>>();
            basis.col(static_cast<Eigen::Index>(k)) =
                Eigen::Map<const Eigen::VectorXd>(col.data(), col.size());
        }
        return basis;
    };
    if (kind == "coord")
        return coord(ambient, j.at("block").get<std::vector<Eigen::Index>>());
    if (kind == "ortho") return ortho(ambient, read_basis(j.at("basis")));
    if (kind == "bochner") {
        const auto ev = j.at("e").get<std::vector<double>>();
        const auto pv = j.at("phi").get<std::vector<double>>();
        Op scalar_op;
        if (j.contains("block"))
            scalar_op = CoordBlock{j.at("block").get<std::vector<Eigen::Index>>()};
        else
            scalar_op = OrthoBlock{read_basis(j.at("basis"))};
        return bochner(ambient, Eigen::Map<const Eigen::VectorXd>(ev.data(), ev.size()),
                       Eigen::Map<const Eigen::VectorXd>(pv.data(), pv.size()),
                       std::move(scalar_op));
    }
    throw std::invalid_argument("projection: unknown kind " + kind);
}

}  // namespace theta

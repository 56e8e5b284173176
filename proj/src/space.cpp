#include "theta/space.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace theta {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_weights(const Eigen::VectorXd& w) {
    require(w.size() >= 1, "space: needs at least one weight");
    for (Eigen::Index i = 0; i < w.size(); ++i)
        require(std::isfinite(w[i]) && w[i] > 0.0, "space: weights must be positive");
}

void check_exponent(double p) {
    require(std::isfinite(p) && p >= 1.0, "space: exponent p must satisfy p >= 1");
}

}  // namespace

SpaceSpec::SpaceSpec(Variant v) : v_(std::move(v)) {}

SpaceSpec SpaceSpec::ell_p(double p, Eigen::Index dim) {
    check_exponent(p);
    require(dim >= 1, "space: dim must be >= 1");
    return SpaceSpec(EllPSpec{p, dim});
}

SpaceSpec SpaceSpec::weighted_lp(double p, Eigen::VectorXd weights) {
    check_exponent(p);
    check_weights(weights);
    return SpaceSpec(WeightedLpSpec{p, std::move(weights)});
}

SpaceSpec SpaceSpec::schatten(double p, Eigen::Index rows, Eigen::Index cols) {
    check_exponent(p);
    require(rows >= 1 && cols >= 1, "space: matrix dimensions must be >= 1");
    return SpaceSpec(SchattenSpec{p, rows, cols});
}

SpaceSpec SpaceSpec::bochner(double p, Eigen::VectorXd weights, double inner_p,
                             Eigen::Index inner_dim) {
    check_exponent(p);
    check_exponent(inner_p);
    check_weights(weights);
    require(inner_dim >= 1, "space: inner dim must be >= 1");
    return SpaceSpec(BochnerSpec{p, std::move(weights), inner_p, inner_dim});
}

double SpaceSpec::p() const {
    return std::visit([](const auto& s) { return s.p; }, v_);
}

Eigen::Index SpaceSpec::elem_rows() const {
    if (const auto* e = std::get_if<EllPSpec>(&v_)) return e->dim;
    if (const auto* w = std::get_if<WeightedLpSpec>(&v_)) return w->weights.size();
    if (const auto* s = std::get_if<SchattenSpec>(&v_)) return s->rows;
    return std::get<BochnerSpec>(v_).weights.size();
}

Eigen::Index SpaceSpec::elem_cols() const {
    if (const auto* s = std::get_if<SchattenSpec>(&v_)) return s->cols;
    if (const auto* b = std::get_if<BochnerSpec>(&v_)) return b->inner_dim;
    return 1;
}

bool SpaceSpec::is_hilbert_sequence() const {
    if (const auto* e = std::get_if<EllPSpec>(&v_)) return e->p == 2.0;
    if (const auto* w = std::get_if<WeightedLpSpec>(&v_))
        return w->p == 2.0 && (w->weights.array() == 1.0).all();
    return false;
}

Eigen::VectorXd SpaceSpec::outer_weights() const {
    if (const auto* w = std::get_if<WeightedLpSpec>(&v_)) return w->weights;
    if (const auto* b = std::get_if<BochnerSpec>(&v_)) return b->weights;
    return Eigen::VectorXd::Ones(elem_rows());
}

void SpaceSpec::check_shape(const Element& f) const {
    if (f.rows() != elem_rows() || f.cols() != elem_cols()) {
        std::ostringstream os;
        os << "element shape " << f.rows() << "x" << f.cols() << " does not match space "
           << describe();
        throw std::invalid_argument(os.str());
    }
    if (!f.allFinite()) throw std::invalid_argument("element has non-finite entries");
}

double weighted_lp_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double p) {
    if (p == 1.0) return (w.array() * x.array().abs()).sum();
    if (p == 2.0) return std::sqrt((w.array() * x.array().square()).sum());
    const double scale = x.array().abs().maxCoeff();
    if (scale == 0.0) return 0.0;
    const double acc = (w.array() * (x.array().abs() / scale).pow(p)).sum();
    return scale * std::pow(acc, 1.0 / p);
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
}

double SpaceSpec::norm(const Element& f) const {
    check_shape(f);
    if (const auto* e = std::get_if<EllPSpec>(&v_))
        return weighted_lp_norm(f.col(0), Eigen::VectorXd::Ones(e->dim), e->p);
    if (const auto* w = std::get_if<WeightedLpSpec>(&v_))
        return weighted_lp_norm(f.col(0), w->weights, w->p);
    if (const auto* s = std::get_if<SchattenSpec>(&v_)) {
        const Eigen::VectorXd sv = singular_values(f);
        return weighted_lp_norm(sv, Eigen::VectorXd::Ones(sv.size()), s->p);
    }
    const auto& b = std::get<BochnerSpec>(v_);
    const Eigen::VectorXd inner_w = Eigen::VectorXd::Ones(b.inner_dim);
    Eigen::VectorXd row_norms(f.rows());
    for (Eigen::Index i = 0; i < f.rows(); ++i)
        row_norms[i] = weighted_lp_norm(f.row(i).transpose(), inner_w, b.inner_p);
    return weighted_lp_norm(row_norms, b.weights, b.p);
}

namespace {

// d||x||/dx_i = w_i |x_i|^(p-1) sgn(x_i) / ||x||^(p-1); entries vanishing to
// within float noise get derivative 0, a valid subgradient choice for p <= 2.
Eigen::VectorXd lp_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double p,
                            double norm_value) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    if (norm_value == 0.0) return g;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double ratio = std::abs(x[i]) / norm_value;
        if (ratio == 0.0) continue;
        g[i] = w[i] * std::pow(ratio, p - 1.0) * (x[i] > 0 ? 1.0 : -1.0);
    }
    return g;
}

}  // namespace

Element norm_gradient(const SpaceSpec& space, const Element& f) {
    space.check_shape(f);
    const auto& v = space.variant();
    if (const auto* e = std::get_if<EllPSpec>(&v)) {
        const Eigen::VectorXd w = Eigen::VectorXd::Ones(e->dim);
        return lp_gradient(f.col(0), w, e->p, weighted_lp_norm(f.col(0), w, e->p));
    }
    if (const auto* w = std::get_if<WeightedLpSpec>(&v))
        return lp_gradient(f.col(0), w->weights, w->p,
                           weighted_lp_norm(f.col(0), w->weights, w->p));
    if (const auto* s = std::get_if<SchattenSpec>(&v)) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd sv = svd.singularValues();
        const double nrm = weighted_lp_norm(sv, Eigen::VectorXd::Ones(sv.size()), s->p);
        if (nrm == 0.0) return Element::Zero(f.rows(), f.cols());
        Eigen::VectorXd scaled(sv.size());
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            const double ratio = sv[i] / nrm;
            scaled[i] = ratio == 0.0 ? 0.0 : std::pow(ratio, s->p - 1.0);
        }
        return svd.matrixU() * scaled.asDiagonal() * svd.matrixV().transpose();
    }
    const auto& b = std::get<BochnerSpec>(v);
    const Eigen::VectorXd inner_w = Eigen::VectorXd::Ones(b.inner_dim);
    Eigen::VectorXd row_norms(f.rows());
    for (Eigen::Index i = 0; i < f.rows(); ++i)
        row_norms[i] = weighted_lp_norm(f.row(i).transpose(), inner_w, b.inner_p);
    const double nrm = weighted_lp_norm(row_norms, b.weights, b.p);
    Element g = Element::Zero(f.rows(), f.cols());
    if (nrm == 0.0) return g;
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        if (row_norms[i] == 0.0) continue;
        const double outer = b.weights[i] * std::pow(row_norms[i] / nrm, b.p - 1.0);
        // inner gradient of ||row||_q times the outer weight
        const Eigen::VectorXd inner =
            lp_gradient(f.row(i).transpose(), inner_w, b.inner_p, row_norms[i]);
        g.row(i) = (outer * inner).transpose();
    }
    return g;
}

bool SpaceSpec::operator==(const SpaceSpec& other) const {
    if (v_.index() != other.v_.index()) return false;
    if (const auto* e = std::get_if<EllPSpec>(&v_)) {
        const auto& o = std::get<EllPSpec>(other.v_);
        return e->p == o.p && e->dim == o.dim;
    }
    if (const auto* w = std::get_if<WeightedLpSpec>(&v_)) {
        const auto& o = std::get<WeightedLpSpec>(other.v_);
        return w->p == o.p && w->weights.size() == o.weights.size() && w->weights == o.weights;
    }
    if (const auto* s = std::get_if<SchattenSpec>(&v_)) {
        const auto& o = std::get<SchattenSpec>(other.v_);
        return s->p == o.p && s->rows == o.rows && s->cols == o.cols;
    }
    const auto& b = std::get<BochnerSpec>(v_);
    const auto& o = std::get<BochnerSpec>(other.v_);
    return b.p == o.p && b.weights.size() == o.weights.size() && b.weights == o.weights &&
           b.inner_p == o.inner_p && b.inner_dim == o.inner_dim;
}

std::string SpaceSpec::describe() const {
    std::ostringstream os;
    if (const auto* e = std::get_if<EllPSpec>(&v_))
        os << "ell_p(p=" << e->p << ", dim=" << e->dim << ")";
    else if (const auto* w = std::get_if<WeightedLpSpec>(&v_))
        os << "weighted_lp(p=" << w->p << ", dim=" << w->weights.size() << ")";
    else if (const auto* s = std::get_if<SchattenSpec>(&v_))
        os << "schatten(p=" << s->p << ", " << s->rows << "x" << s->cols << ")";
    else {
        const auto& b = std::get<BochnerSpec>(v_);
        os << "bochner(p=" << b.p << ", dim=" << b.weights.size() << ", q=" << b.inner_p
           << ", inner_dim=" << b.inner_dim << ")";
    }
    return os.str();
}

nlohmann::json SpaceSpec::to_json() const {
    nlohmann::json j;
    if (const auto* e = std::get_if<EllPSpec>(&v_)) {
        j["variant"] = "ell_p";
        j["p"] = e->p;
        j["dim"] = e->dim;
    } else if (const auto* w = std::get_if<WeightedLpSpec>(&v_)) {
        j["variant"] = "weighted_lp";
        j["p"] = w->p;
        j["weights"] = std::vector<double>(w->weights.begin(), w->weights.end());
    } else if (const auto* s = std::get_if<SchattenSpec>(&v_)) {
        j["variant"] = "schatten";
        j["p"] = s->p;
        j["rows"] = s->rows;
        j["cols"] = s->cols;
    } else {
        const auto& b = std::get<BochnerSpec>(v_);
        j["variant"] = "bochner";
        j["p"] = b.p;
        j["weights"] = std::vector<double>(b.weights.begin(), b.weights.end());
        j["inner"] = {{"variant", "ell_p"}, {"p", b.inner_p}, {"dim", b.inner_dim}};
    }
    return j;
}

SpaceSpec SpaceSpec::from_json(const nlohmann::json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    const double p = j.at("p").get<double>();
    if (variant == "ell_p") return ell_p(p, j.at("dim").get<Eigen::Index>());
    if (variant == "weighted_lp") {
        const auto wv = j.at("weights").get<std::vector<double>>();
        return weighted_lp(p, Eigen::Map<const Eigen::VectorXd>(wv.data(), wv.size()));
    }
    if (variant == "schatten")
        return schatten(p, j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
    if (variant == "bochner") {
        const auto wv = j.at("weights").get<std::vector<double>>();
        const auto& inner = j.at("inner");
        if (inner.at("variant").get<std::string>() != "ell_p")
            throw std::invalid_argument("bochner inner variant must be ell_p");
        return bochner(p, Eigen::Map<const Eigen::VectorXd>(wv.data(), wv.size()),
                       inner.at("p").get<double>(), inner.at("dim").get<Eigen::Index>());
    }
    throw std::invalid_argument("unknown space variant: " + variant);
}

Eigen::VectorXd flatten(const Element& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
}

Element unflatten(const SpaceSpec& space, const Eigen::VectorXd& flat) {
    if (flat.size() != space.flat_dim())
        throw std::invalid_argument("unflatten: size does not match space");
    return Eigen::Map<const Element>(flat.data(), space.elem_rows(), space.elem_cols());
}

nlohmann::json element_to_json(const Element& f) {
    if (f.cols() == 1) {
        return nlohmann::json(std::vector<double>(f.col(0).begin(), f.col(0).end()));
    }
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        std::vector<double> row(f.cols());
        for (Eigen::Index k = 0; k < f.cols(); ++k) row[static_cast<size_t>(k)] = f(i, k);
        rows.push_back(row);
    }
    return rows;
}

Element element_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("element: expected array");
    if (!j.front().is_array()) {
        const auto v = j.get<std::vector<double>>();
        Element f(v.size(), 1);
        for (size_t i = 0; i < v.size(); ++i) f(static_cast<Eigen::Index>(i), 0) = v[i];
        return f;
    }
    const size_t rows = j.size();
    const size_t cols = j.front().size();
    Element f(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        const auto row = j[i].get<std::vector<double>>();
        if (row.size() != cols) throw std::invalid_argument("element: ragged rows");
        for (size_t k = 0; k < cols; ++k)
            f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
    return f;
}

}  // namespace theta

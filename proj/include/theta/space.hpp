#ifndef THETA_SPACE_HPP
#define THETA_SPACE_HPP

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace theta {

// Points are dense real arrays: N x 1 for sequence spaces, rows x cols for
// Schatten, N x M for Bochner surrogates.
using Element = Eigen::MatrixXd;

struct EllPSpec {
    double p = 2.0;
    Eigen::Index dim = 1;
};

struct WeightedLpSpec {
    double p = 2.0;
    Eigen::VectorXd weights;  // atom masses, all > 0
};

struct SchattenSpec {
    double p = 2.0;
    Eigen::Index rows = 1;
    Eigen::Index cols = 1;
};

// Outer weighted l_p over rows, inner l_q of length inner_dim per row.
struct BochnerSpec {
    double p = 2.0;
    Eigen::VectorXd weights;
    double inner_p = 2.0;
    Eigen::Index inner_dim = 1;
};

class SpaceSpec {
  public:
    using Variant = std::variant<EllPSpec, WeightedLpSpec, SchattenSpec, BochnerSpec>;

    static SpaceSpec ell_p(double p, Eigen::Index dim);
    static SpaceSpec weighted_lp(double p, Eigen::VectorXd weights);
    static SpaceSpec schatten(double p, Eigen::Index rows, Eigen::Index cols);
    static SpaceSpec bochner(double p, Eigen::VectorXd weights, double inner_p,
                             Eigen::Index inner_dim);

    const Variant& variant() const { return v_; }

    double p() const;
    // Element shape and the flattened coordinate count.
    Eigen::Index elem_rows() const;
    Eigen::Index elem_cols() const;
    Eigen::Index flat_dim() const { return elem_rows() * elem_cols(); }

    bool is_schatten() const { return std::holds_alternative<SchattenSpec>(v_); }
    bool is_bochner() const { return std::holds_alternative<BochnerSpec>(v_); }
    // Coordinate-based spaces admit coordinate functionals and blocks.
    bool coordinate_based() const { return !is_schatten(); }
    bool is_hilbert_sequence() const;  // l_2^N with unit weights

    // Outer atom masses; ones for EllP and Schatten (counting trace).
    Eigen::VectorXd outer_weights() const;

    double norm(const Element& f) const;
    void check_shape(const Element& f) const;  // throws std::invalid_argument

    nlohmann::json to_json() const;
    static SpaceSpec from_json(const nlohmann::json& j);

    bool operator==(const SpaceSpec& other) const;
    std::string describe() const;

  private:
    explicit SpaceSpec(Variant v);
    Variant v_;
};

// (sum_i w_i |x_i|^p)^(1/p), scaled against overflow for large p.
double weighted_lp_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double p);

// Gradient (an element of the subdifferential where the norm is not smooth)
// of f -> ||f|| at f != 0, same shape as f.
Element norm_gradient(const SpaceSpec& space, const Element& f);

// Singular values, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

// Column-major flattening; the fixed convention for functionals and
// subspace bases over matrix-shaped elements.
Eigen::VectorXd flatten(const Element& f);
Element unflatten(const SpaceSpec& space, const Eigen::VectorXd& flat);

nlohmann::json element_to_json(const Element& f);
Element element_from_json(const nlohmann::json& j);

}  // namespace theta

#endif

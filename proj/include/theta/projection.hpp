#ifndef THETA_PROJECTION_HPP
#define THETA_PROJECTION_HPP

#include "theta/space.hpp"

#include <variant>

namespace theta {

// Coordinate block E_k: zero everything outside the listed indices. On a
// Bochner element the indices select rows.
struct CoordBlock {
    std::vector<Eigen::Index> indices;
};

// Orthogonal projection onto the span of orthonormal columns, acting on
// flattened coordinates. Contractive only in Euclidean-flat spaces.
struct OrthoBlock {
    Eigen::MatrixXd basis;
};

// Row block composed with the rank-one inner projection v -> phi(v) e on each
// row, then a scalar-space block on the resulting coefficients. This is the
// shape pullbacks through the Bochner projection produce.
struct BochnerBlock {
    Eigen::VectorXd e;    // inner unit vector
    Eigen::VectorXd phi;  // inner functional, phi(e) = 1, dual norm <= 1
    std::variant<CoordBlock, OrthoBlock> scalar_op;
};

class BlockProjection {
  public:
    using Op = std::variant<CoordBlock, OrthoBlock, BochnerBlock>;

    static BlockProjection coord(const SpaceSpec& ambient, std::vector<Eigen::Index> indices);
    static BlockProjection full(const SpaceSpec& ambient);
    static BlockProjection ortho(const SpaceSpec& ambient, Eigen::MatrixXd basis);
    static BlockProjection bochner(const SpaceSpec& ambient, Eigen::VectorXd e,
                                   Eigen::VectorXd phi, Op scalar_op);

    const SpaceSpec& ambient() const { return ambient_; }
    const Op& op() const { return op_; }

    Element apply(const Element& f) const;
    bool is_zero() const;
    // Dense matrix of the operator on flattened coordinates.
    Eigen::MatrixXd matrix() const;
    // Euclidean-orthonormal basis of the range.
    Eigen::MatrixXd range_basis() const;

    nlohmann::json to_json() const;
    static BlockProjection from_json(const SpaceSpec& ambient, const nlohmann::json& j);

  private:
    BlockProjection(SpaceSpec ambient, Op op) : ambient_(std::move(ambient)), op_(std::move(op)) {}

    SpaceSpec ambient_;
    Op op_;
};

inline Element project(const BlockProjection& proj, const Element& f) { return proj.apply(f); }

// Dual (l_q*) norm of an inner functional over ell_q.
double dual_lq_norm(const Eigen::VectorXd& phi, double q);

}  // namespace theta

#endif

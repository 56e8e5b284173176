#ifndef THETA_SUBSPACE_HPP
#define THETA_SUBSPACE_HPP

#include "theta/space.hpp"

namespace theta {

// Singular values below kRankTol * sigma_max count as zero in rank decisions.
inline constexpr double kRankTol = 1e-10;
// A functional is considered to vanish on a basis vector below this.
inline constexpr double kSubspaceTol = 1e-10;

// Finite-codimension subspace of a coordinate-based space, kept in dual
// representation: a Euclidean-orthonormal basis of the common kernel and the
// defining functionals (rows, flattened coordinates).
class Subspace {
  public:
    static Subspace full(const SpaceSpec& ambient);
    static Subspace from_kernel(const SpaceSpec& ambient, const Eigen::MatrixXd& functionals);

    const SpaceSpec& ambient() const { return ambient_; }
    const Eigen::MatrixXd& basis() const { return basis_; }        // flat_dim x dim
    const Eigen::MatrixXd& functionals() const { return funcs_; }  // m x flat_dim

    Eigen::Index dim() const { return basis_.cols(); }
    Eigen::Index codim() const { return ambient_.flat_dim() - dim(); }

    // Euclidean distance from a flattened vector to the subspace.
    double distance(const Eigen::VectorXd& flat) const;
    bool contains(const Eigen::VectorXd& flat, double tol = kSubspaceTol) const;
    // Euclidean projection, flattened in and out.
    Eigen::VectorXd project(const Eigen::VectorXd& flat) const;

    nlohmann::json to_json() const;

  private:
    Subspace(SpaceSpec ambient, Eigen::MatrixXd basis, Eigen::MatrixXd funcs);

    SpaceSpec ambient_;
    Eigen::MatrixXd basis_;
    Eigen::MatrixXd funcs_;
};

Subspace subspace_from_kernel(const SpaceSpec& ambient, const std::vector<Element>& functionals);
Subspace intersect_subspaces(const Subspace& a, const Subspace& b);

// Orthonormal basis of the null space of a (possibly empty) m x n matrix.
Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& m, Eigen::Index n_cols);
Eigen::Index numerical_rank(const Eigen::MatrixXd& m);

}  // namespace theta

#endif

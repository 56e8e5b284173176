#include "theta/subspace.hpp"

#include <Eigen/SVD>

#include <stdexcept>

namespace theta {

Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& m, Eigen::Index n_cols) {
    if (m.rows() == 0) return Eigen::MatrixXd::Identity(n_cols, n_cols);
    if (m.cols() != n_cols) throw std::invalid_argument("null_space_basis: column mismatch");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv[0] * kRankTol : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    return svd.matrixV().rightCols(n_cols - rank);
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? sv[0] * kRankTol : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    return rank;
}

Subspace::Subspace(SpaceSpec ambient, Eigen::MatrixXd basis, Eigen::MatrixXd funcs)
    : ambient_(std::move(ambient)), basis_(std::move(basis)), funcs_(std::move(funcs)) {
    // Consistency of the dual representation is an invariant, not a convention.
    const Eigen::Index n = ambient_.flat_dim();
    if (basis_.rows() != n) throw std::invalid_argument("subspace: basis row mismatch");
    if (funcs_.cols() != n && funcs_.rows() > 0)
        throw std::invalid_argument("subspace: functional length mismatch");
    const Eigen::MatrixXd gram =
        basis_.transpose() * basis_ - Eigen::MatrixXd::Identity(basis_.cols(), basis_.cols());
    if (basis_.cols() > 0 && gram.cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("subspace: basis not orthonormal");
    if (funcs_.rows() > 0 && basis_.cols() > 0) {
        for (Eigen::Index i = 0; i < funcs_.rows(); ++i) {
            const double fscale = std::max(1.0, funcs_.row(i).norm());
            if ((funcs_.row(i) * basis_).cwiseAbs().maxCoeff() > kSubspaceTol * fscale)
                throw std::invalid_argument("subspace: functional does not vanish on basis");
        }
    }
}

Subspace Subspace::full(const SpaceSpec& ambient) {
    const Eigen::Index n = ambient.flat_dim();
    return Subspace(ambient, Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd(0, n));
}

Subspace Subspace::from_kernel(const SpaceSpec& ambient, const Eigen::MatrixXd& functionals) {
    if (!ambient.coordinate_based())
        throw std::invalid_argument("subspace: Schatten ambient has no coordinate functionals");
    const Eigen::Index n = ambient.flat_dim();
    if (functionals.rows() > 0 && functionals.cols() != n)
        throw std::invalid_argument("subspace: functional length mismatch");
    return Subspace(ambient, null_space_basis(functionals, n), functionals);
}

double Subspace::distance(const Eigen::VectorXd& flat) const {
    return (flat - project(flat)).norm();
}

bool Subspace::contains(const Eigen::VectorXd& flat, double tol) const {
    return distance(flat) <= tol * std::max(1.0, flat.norm());
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& flat) const {
    if (flat.size() != basis_.rows()) throw std::invalid_argument("subspace: size mismatch");
    return basis_ * (basis_.transpose() * flat);
}

nlohmann::json Subspace::to_json() const {
    nlohmann::json j;
    j["ambient"] = ambient_.to_json();
    j["codim"] = codim();
    nlohmann::json funcs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < funcs_.rows(); ++i)
        funcs.push_back(std::vector<double>(funcs_.row(i).begin(), funcs_.row(i).end()));
    j["functionals"] = funcs;
    return j;
}

Subspace subspace_from_kernel(const SpaceSpec& ambient, const std::vector<Element>& functionals) {
    const Eigen::Index n = ambient.flat_dim();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(functionals.size()), n);
    for (size_t i = 0; i < functionals.size(); ++i) {
        ambient.check_shape(functionals[i]);
        rows.row(static_cast<Eigen::Index>(i)) = flatten(functionals[i]).transpose();
    }
    return Subspace::from_kernel(ambient, rows);
}

Subspace intersect_subspaces(const Subspace& a, const Subspace& b) {
    if (!(a.ambient() == b.ambient()))
        throw std::invalid_argument("intersect_subspaces: ambient spaces differ");
    Eigen::MatrixXd funcs(a.functionals().rows() + b.functionals().rows(), a.ambient().flat_dim());
    funcs << a.functionals(), b.functionals();
    return Subspace::from_kernel(a.ambient(), funcs);
}

}  // namespace theta

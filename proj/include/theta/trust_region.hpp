#ifndef THETA_TRUST_REGION_HPP
#define THETA_TRUST_REGION_HPP

#include <Eigen/Dense>

namespace theta {

struct SphereQuadMax {
    double value = 0.0;
    Eigen::VectorXd arg;  // a maximizer on the unit sphere
};

// Exact maximum of z^T A z + 2 b^T z over ||z||_2 = 1 (A symmetric), via
// eigendecomposition and the secular equation, including the hard case.
SphereQuadMax max_quadratic_on_sphere(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace theta

#endif

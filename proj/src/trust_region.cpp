#include "theta/trust_region.hpp"

#include <cmath>
#include <stdexcept>

namespace theta {

namespace {

double evaluate(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& z) {
    return z.dot(a * z) + 2.0 * b.dot(z);
}

}  // namespace

SphereQuadMax max_quadratic_on_sphere(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.size() != n)
        throw std::invalid_argument("max_quadratic_on_sphere: dimension mismatch");
    if (n == 0) throw std::invalid_argument("max_quadratic_on_sphere: empty problem");
    if (n == 1) {
        // z = +-1
        const double plus = a(0, 0) + 2.0 * b[0];
        const double minus = a(0, 0) - 2.0 * b[0];
        SphereQuadMax out;
        out.arg = Eigen::VectorXd::Constant(1, plus >= minus ? 1.0 : -1.0);
        out.value = std::max(plus, minus);
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (a + a.transpose()));
    const Eigen::VectorXd d = eig.eigenvalues();  // ascending
    const Eigen::MatrixXd v = eig.eigenvectors();
    const Eigen::VectorXd beta = v.transpose() * b;
    const double dmax = d[n - 1];
    const double scale = std::max({1.0, std::abs(dmax), b.norm()});

    // Stationarity: (lambda I - A) z = b with lambda >= dmax and ||z|| = 1.
    // s(lambda) = sum beta_i^2 / (lambda - d_i)^2 is decreasing on (dmax, inf).
    const double cluster = 1e-13 * scale;
    double s_at_top = 0.0;  // limit of s as lambda -> dmax, top cluster excluded
    bool top_coupled = false;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (dmax - d[i] <= cluster) {
            if (std::abs(beta[i]) > 1e-14 * scale) top_coupled = true;
        } else {
            const double q = beta[i] / (dmax - d[i]);
            s_at_top += q * q;
        }
    }

    Eigen::VectorXd z(n);
    if (!top_coupled && s_at_top <= 1.0) {
        // hard case: fill the remaining length along the top eigenspace
        for (Eigen::Index i = 0; i < n; ++i)
            z[i] = (dmax - d[i] <= cluster) ? 0.0 : beta[i] / (dmax - d[i]);
        Eigen::Index top = n - 1;
        z[top] = std::sqrt(std::max(0.0, 1.0 - z.squaredNorm()));
    } else {
        auto s_of = [&](double lambda) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double q = beta[i] / (lambda - d[i]);
                s += q * q;
            }
            return s;
        };
        double lo = dmax;
        double hi = dmax + b.norm() + 1e-12 * scale;
        while (s_of(hi) > 1.0) hi = dmax + 2.0 * (hi - dmax);
        for (int it = 0; it < 200 && hi - lo > 1e-16 * scale; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (s_of(mid) > 1.0 ? lo : hi) = mid;
        }
        const double lambda = hi;
        for (Eigen::Index i = 0; i < n; ++i) z[i] = beta[i] / (lambda - d[i]);
    }

    const double zn = z.norm();
    if (zn > 0.0) z /= zn;

    SphereQuadMax out;
    out.arg = v * z;
    out.value = evaluate(a, b, out.arg);
    return out;
}

}  // namespace theta

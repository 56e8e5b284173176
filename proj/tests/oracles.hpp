#ifndef THETA_TESTS_ORACLES_HPP
#define THETA_TESTS_ORACLES_HPP

// Independent oracles for expected values: brute-force grids and closed-form
// enumerations that never touch the implementation paths they check.

#include "theta/space.hpp"

#include <cmath>
#include <vector>

namespace theta::oracles {

// p-sphere of R^2 parametrized by angle: (cos a, sin a) / ||.||_p.
inline Eigen::Vector2d p_sphere_point(double p, double angle) {
    Eigen::Vector2d v(std::cos(angle), std::sin(angle));
    const double n = std::pow(std::pow(std::abs(v[0]), p) + std::pow(std::abs(v[1]), p), 1.0 / p);
    return v / n;
}

// Grid maximization of (||x+ty|| + ||x-ty||)/2 - 1 over the 2-D p-sphere,
// with one local refinement pass around the best cell.
inline double symmetric_modulus_2d(double p, double t, int grid = 720, int refine = 200) {
    auto value = [&](double a, double b) {
        const Eigen::Vector2d x = p_sphere_point(p, a);
        const Eigen::Vector2d y = p_sphere_point(p, b);
        auto lp = [&](const Eigen::Vector2d& v) {
            return std::pow(std::pow(std::abs(v[0]), p) + std::pow(std::abs(v[1]), p), 1.0 / p);
        };
        return 0.5 * (lp(x + t * y) + lp(x - t * y)) - 1.0;
    };
    const double pi = 3.14159265358979323846;
    double best = -1.0, best_a = 0.0, best_b = 0.0;
    const double step = 2.0 * pi / grid;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double v = value(i * step, j * step);
            if (v > best) {
                best = v;
                best_a = i * step;
                best_b = j * step;
            }
        }
    const double fine = 2.0 * step / refine;
    for (int i = -refine; i <= refine; ++i)
        for (int j = -refine; j <= refine; ++j)
            best = std::max(best, value(best_a + i * fine, best_b + j * fine));
    return best;
}

// Asymptotic modulus at a coordinate unit probe for the coordinate-tail
// family with budget k: any kill containing the support coordinate makes all
// unit y in Y extremal with ||e_i + t y||_p^p = 1 + t^p; a kill missing it
// admits y = e_i with value 1 + t >= (1+t^p)^(1/p), so the infimum over the
// exhaustive family is the disjoint-support value.
inline double asymptotic_tail_value_at_unit_probe(double p, double t) {
    return std::pow(1.0 + std::pow(t, p), 1.0 / p) - 1.0;
}

// Angle-grid maximum of z^T A z + 2 b^T z on the unit circle.
inline double quad_sphere_max_2d(const Eigen::Matrix2d& a, const Eigen::Vector2d& b,
                                 int grid = 400000) {
    const double pi = 3.14159265358979323846;
    double best = -1e300;
    for (int i = 0; i < grid; ++i) {
        const double ang = 2.0 * pi * i / grid;
        const Eigen::Vector2d z(std::cos(ang), std::sin(ang));
        best = std::max(best, z.dot(a * z) + 2.0 * b.dot(z));
    }
    return best;
}

}  // namespace theta::oracles

#endif

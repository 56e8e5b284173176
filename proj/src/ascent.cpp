#include "theta/ascent.hpp"

#include <cmath>
#include <optional>
#include <random>

namespace theta {

AscentOut ascend_norm_max(const SpaceSpec& space, const BlockProjection* w, const Element& x,
                          double r, const Subspace& y, const AscentConfig& cfg) {
    const Eigen::MatrixXd& basis = y.basis();
    Eigen::MatrixXd wmat_t;
    if (w) wmat_t = w->matrix().transpose();

    auto value_of = [&](const Element& u) {
        const Element g = x + r * u;
        return space.norm(w ? w->apply(g) : g);
    };
    auto gradient_of = [&](const Element& u) -> Eigen::VectorXd {
        const Element g = x + r * u;
        if (!w) return r * flatten(norm_gradient(space, g));
        return r * (wmat_t * flatten(norm_gradient(space, w->apply(g))));
    };
    auto to_unit = [&](const Eigen::VectorXd& flat) -> std::optional<Element> {
        Element u = unflatten(space, flat);
        const double n = space.norm(u);
        if (n == 0.0) return std::nullopt;
        return Element(u / n);
    };

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<Eigen::VectorXd> starts;
    {  // structured starts: x and the cap's range, pushed into Y
        const Eigen::VectorXd xy = basis * (basis.transpose() * flatten(x));
        if (xy.norm() > 1e-12) starts.push_back(xy);
        if (w) {
            const Eigen::MatrixXd range = w->range_basis();
            if (range.cols() > 0) {
                const Eigen::VectorXd ry = basis * (basis.transpose() * range.col(0));
                if (ry.norm() > 1e-12) starts.push_back(ry);
            }
        }
    }
    while (starts.size() < static_cast<size_t>(std::max(1, cfg.restarts))) {
        Eigen::VectorXd z(y.dim());
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
        starts.push_back(basis * z);
    }

    AscentOut out;
    out.best = -std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        auto u0 = to_unit(start);
        if (!u0) continue;
        Element u = *u0;
        double fu = value_of(u);
        double eta = 0.5;
        for (int it = 0; it < cfg.max_iters; ++it) {
            ++out.iters;
            const Eigen::VectorXd gy = basis * (basis.transpose() * gradient_of(u));
            const double gn = gy.norm();
            if (gn < 1e-15 * std::max(1.0, fu)) break;
            bool improved = false;
            while (eta > 1e-14) {
                auto cand = to_unit(flatten(u) + eta * (gy / gn));
                if (cand) {
                    const double fc = value_of(*cand);
                    if (fc > fu) {
                        u = *cand;
                        fu = fc;
                        eta *= 1.5;
                        improved = true;
                        break;
                    }
                }
                eta *= 0.5;
            }
            if (!improved) break;
        }
        if (fu > out.best) {
            out.best = fu;
            out.arg = u;
        }
    }
    return out;
}

}  // namespace theta

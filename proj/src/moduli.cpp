#include "theta/moduli.hpp"

#include "theta/ascent.hpp"
#include "theta/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace theta {

namespace {

// canonical unit vector concentrated on outer coordinate i (inner coordinate 0
// for Bochner, matrix unit E_ii for Schatten)
Element concentrated_unit(const SpaceSpec& space, Eigen::Index i) {
    Element f = Element::Zero(space.elem_rows(), space.elem_cols());
    if (space.is_schatten()) {
        f(i % space.elem_rows(), i % space.elem_cols()) = 1.0;
    } else {
        f(i, 0) = 1.0;
    }
    return f / space.norm(f);
}

struct PairValue {
    double value;
    double plus_norm;
    double minus_norm;
};

PairValue pair_value(const SpaceSpec& space, const Element& x, const Element& y, double t) {
    const double plus = space.norm(x + t * y);
    const double minus = space.norm(x - t * y);
    return {0.5 * (plus + minus) - 1.0, plus, minus};
}

}  // namespace

std::string modulus_kind_name(ModulusKind k) {
    return k == ModulusKind::symmetric ? "symmetric" : "asymptotic_surrogate";
}

nlohmann::json ModulusSample::to_json() const {
    nlohmann::json j;
    j["space"] = space.to_json();
    j["kind"] = modulus_kind_name(kind);
    j["t"] = t;
    j["value"] = value;
    j["codim_budget"] = codim_budget;
    j["restarts"] = stats.restarts;
    j["iters"] = stats.iters;
    if (arg_x.size() > 0) j["arg_x"] = element_to_json(arg_x);
    if (arg_y.size() > 0) j["arg_y"] = element_to_json(arg_y);
    if (!killed.empty()) j["killed"] = killed;
    return j;
}

ModulusSample symmetric_modulus(const SpaceSpec& space, double t, const ModulusConfig& cfg) {
    if (!(t > 0.0)) throw std::invalid_argument("symmetric_modulus: t must be positive");

    ModulusSample sample(space, t);
    sample.kind = ModulusKind::symmetric;

    std::vector<std::pair<Element, Element>> starts = cfg.warm_pairs;
    const Eigen::Index slots = space.is_schatten()
                                   ? std::min(space.elem_rows(), space.elem_cols())
                                   : space.elem_rows();
    starts.emplace_back(concentrated_unit(space, 0),
                        concentrated_unit(space, slots > 1 ? 1 : 0));
    if (slots > 1)  // orthonormal pair, exact on l_2
        starts.emplace_back(concentrated_unit(space, 1), concentrated_unit(space, 0));

    std::mt19937_64 rng(cfg.seed);
    while (starts.size() < static_cast<size_t>(std::max(1, cfg.restarts))) {
        Element x = sample_sphere_one(space, rng);
        Element y = sample_sphere_one(space, rng);
        starts.emplace_back(std::move(x), std::move(y));
    }
    sample.stats.restarts = static_cast<int>(starts.size());

    double best = -1.0;
    for (auto& [x0, y0] : starts) {
        space.check_shape(x0);
        space.check_shape(y0);
        Element x = x0 / space.norm(x0);
        Element y = y0 / space.norm(y0);
        PairValue fv = pair_value(space, x, y, t);
        double eta = 0.25;
        for (int it = 0; it < cfg.max_iters; ++it) {
            ++sample.stats.iters;
            const Element gp = norm_gradient(space, x + t * y);
            const Element gm = norm_gradient(space, x - t * y);
            const Element gx = 0.5 * (gp + gm);
            const Element gy = (0.5 * t) * (gp - gm);
            const double gn = std::sqrt(flatten(gx).squaredNorm() + flatten(gy).squaredNorm());
            if (gn < 1e-15) break;
            bool improved = false;
            while (eta > 1e-14) {
                Element xc = x + (eta / gn) * gx;
                Element yc = y + (eta / gn) * gy;
                const double xn = space.norm(xc), yn = space.norm(yc);
                if (xn > 0.0 && yn > 0.0) {
                    xc /= xn;
                    yc /= yn;
                    const PairValue fc = pair_value(space, xc, yc, t);
                    if (fc.value > fv.value) {
                        x = std::move(xc);
                        y = std::move(yc);
                        fv = fc;
                        eta *= 1.5;
                        improved = true;
                        break;
                    }
                }
                eta *= 0.5;
            }
            if (!improved) break;
        }
        if (fv.value > best) {
            best = fv.value;
            sample.arg_x = x;
            sample.arg_y = y;
        }
    }
    sample.value = std::max(0.0, best);
    return sample;
}

std::vector<ModulusSample> symmetric_modulus_sweep(const SpaceSpec& space,
                                                   const std::vector<double>& t_grid,
                                                   const ModulusConfig& cfg) {
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<ModulusSample> out;
    ModulusConfig step_cfg = cfg;
    for (double t : grid) {
        ModulusSample s = symmetric_modulus(space, t, step_cfg);
        if (s.arg_x.size() > 0) step_cfg.warm_pairs.emplace_back(s.arg_x, s.arg_y);
        out.push_back(std::move(s));
    }
    return out;
}

ModulusSample asymptotic_modulus_surrogate(const SpaceSpec& space, double t,
                                           const AsymptoticConfig& cfg) {
    if (!(t > 0.0)) throw std::invalid_argument("asymptotic_modulus: t must be positive");
    if (!space.coordinate_based())
        throw std::invalid_argument("asymptotic_modulus: coordinate-tail family needs a "
                                    "coordinate-based space");
    if (cfg.codim_budget < 1)
        throw std::invalid_argument("asymptotic_modulus: codim budget must be >= 1");
    const Eigen::Index n = space.elem_rows();
    if (n <= cfg.codim_budget)
        throw std::invalid_argument("asymptotic_modulus: budget exhausts the space");

    ModulusSample sample(space, t);
    sample.kind = ModulusKind::asymptotic_surrogate;
    sample.codim_budget = cfg.codim_budget;

    // probes: coordinate units first, optional sphere samples
    std::vector<Element> probes;
    for (Eigen::Index i = 0; i < n; ++i) probes.push_back(concentrated_unit(space, i));
    if (cfg.extra_sample_probes > 0) {
        for (auto& s : sample_sphere(space, cfg.seed, cfg.extra_sample_probes))
            probes.push_back(std::move(s));
    }

    // sup over unit y in the kill-subspace of ||x + t y||
    AscentConfig ascent{cfg.restarts, cfg.max_iters, cfg.seed ^ 0x2545f4914f6cdd1dULL};
    auto inner_sup = [&](const Element& x, const std::vector<Eigen::Index>& kill,
                         Element* arg) -> double {
        Eigen::MatrixXd funcs(static_cast<Eigen::Index>(kill.size()), space.flat_dim());
        funcs.setZero();
        for (size_t j = 0; j < kill.size(); ++j) funcs(static_cast<Eigen::Index>(j), kill[j]) = 1.0;
        const Subspace y = Subspace::from_kernel(space, funcs);

        bool disjoint = true;  // x supported inside the killed set?
        for (Eigen::Index i = 0; i < n && disjoint; ++i) {
            if (x(i, 0) != 0.0 && std::find(kill.begin(), kill.end(), i) == kill.end())
                disjoint = false;
        }
        if (disjoint) {
            // disjoint supports make every unit y in Y extremal:
            // ||x + t y||^p = ||x||^p + t^p
            const double p = space.p();
            if (arg) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (std::find(kill.begin(), kill.end(), i) == kill.end()) {
                        *arg = concentrated_unit(space, i);
                        break;
                    }
                }
            }
            return std::pow(std::pow(space.norm(x), p) + std::pow(t, p), 1.0 / p);
        }
        if (space.is_hilbert_sequence()) {
            const Eigen::VectorXd bx = y.basis().transpose() * flatten(x);
            if (arg && bx.norm() > 0)
                *arg = unflatten(space, y.basis() * (bx / bx.norm()));
            return std::sqrt(flatten(x).squaredNorm() + 2.0 * t * bx.norm() + t * t);
        }
        // general p: multi-restart ascent (certified lower bound)
        const AscentOut got = ascend_norm_max(space, nullptr, x, t, y, ascent);
        sample.stats.iters += got.iters;
        if (arg) *arg = got.arg;
        return got.best;
    };

    double best = -std::numeric_limits<double>::infinity();
    for (const Element& x : probes) {
        // coordinates ranked by |x_i| descending, lowest index on ties
        std::vector<Eigen::Index> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::abs(x(a, 0)) > std::abs(x(b, 0));
        });

        std::vector<std::vector<Eigen::Index>> kills;
        if (cfg.exhaustive_subspaces) {
            // every subset of size <= budget (oracle-sized spaces only)
            std::vector<Eigen::Index> subset;
            auto recurse = [&](auto&& self, Eigen::Index from, int left) -> void {
                if (!subset.empty()) kills.push_back(subset);
                if (left == 0) return;
                for (Eigen::Index i = from; i < n; ++i) {
                    subset.push_back(i);
                    self(self, i + 1, left - 1);
                    subset.pop_back();
                }
            };
            recurse(recurse, 0, cfg.codim_budget);
        } else {
            for (int j = 1; j <= cfg.codim_budget; ++j)
                kills.emplace_back(order.begin(), order.begin() + j);
        }

        double inf_val = std::numeric_limits<double>::infinity();
        Element inf_arg = probes.front();
        std::vector<Eigen::Index> inf_kill;
        for (const auto& kill : kills) {
            Element arg = probes.front();
            const double v = inner_sup(x, kill, &arg);
            if (v < inf_val) {
                inf_val = v;
                inf_arg = arg;
                inf_kill = kill;
            }
        }
        if (inf_val - 1.0 > best) {
            best = inf_val - 1.0;
            sample.arg_x = x;
            sample.arg_y = inf_arg;
            sample.killed = inf_kill;
        }
    }
    sample.value = std::max(0.0, best);
    sample.stats.restarts = cfg.restarts;
    return sample;
}

PowerFit power_type_fit(const std::vector<std::pair<double, double>>& samples) {
    PowerFit fit;
    std::vector<double> lt, lv;
    std::vector<double> distinct;
    for (const auto& [t, v] : samples) {
        if (!(t > 0.0)) throw std::invalid_argument("power_type_fit: t must be positive");
        if (v <= 0.0) {
            ++fit.rejected;  // log undefined; drop and warn via the counter
            continue;
        }
        fit.samples.emplace_back(t, v);
        lt.push_back(std::log(t));
        lv.push_back(std::log(v));
        if (t >= 1e-3 && t <= 1e-1 &&
            std::find(distinct.begin(), distinct.end(), t) == distinct.end())
            distinct.push_back(t);
    }
    if (distinct.size() < 5)
        throw std::invalid_argument(
            "power_type_fit: needs >= 5 distinct t in [1e-3, 1e-1] with positive values");

    const size_t n = lt.size();
    const double mt = std::accumulate(lt.begin(), lt.end(), 0.0) / static_cast<double>(n);
    const double mv = std::accumulate(lv.begin(), lv.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (lt[i] - mt) * (lt[i] - mt);
        sxy += (lt[i] - mt) * (lv[i] - mv);
    }
    fit.r = sxy / sxx;
    const double intercept = mv - fit.r * mt;
    fit.c = std::exp(intercept);
    for (size_t i = 0; i < n; ++i)
        fit.residual = std::max(fit.residual, std::abs(lv[i] - (intercept + fit.r * lt[i])));
    return fit;
}

nlohmann::json PowerFit::to_json() const {
    nlohmann::json j;
    j["C"] = c;
    j["r"] = r;
    j["residual"] = residual;
    j["rejected"] = rejected;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [t, v] : samples) pts.push_back({t, v});
    j["samples"] = pts;
    return j;
}

ClarksonReport clarkson_check(const SpaceSpec& space, const Element& x, const Element& y) {
    if (!space.is_schatten())
        throw std::invalid_argument("clarkson_check: Schatten spaces only");
    const double p = space.p();
    if (p <= 1.0) throw std::invalid_argument("clarkson_check: requires p > 1");
    space.check_shape(x);
    space.check_shape(y);

    const double sum = space.norm(x + y);
    const double diff = space.norm(x - y);
    const double nx = space.norm(x);
    const double ny = space.norm(y);

    ClarksonReport rep;
    rep.p = p;
    if (p >= 2.0) {
        rep.form = "||x+y||^p + ||x-y||^p <= 2^(p-1) (||x||^p + ||y||^p)";
        rep.lhs = std::pow(sum, p) + std::pow(diff, p);
        rep.rhs = std::pow(2.0, p - 1.0) * (std::pow(nx, p) + std::pow(ny, p));
    } else {
        const double pd = p / (p - 1.0);
        rep.form = "||x+y||^p' + ||x-y||^p' <= 2 (||x||^p + ||y||^p)^(p'/p)";
        rep.lhs = std::pow(sum, pd) + std::pow(diff, pd);
        rep.rhs = 2.0 * std::pow(std::pow(nx, p) + std::pow(ny, p), pd / p);
    }
    rep.holds = rep.lhs <= rep.rhs + 1e-9 * std::max(1.0, rep.rhs);
    return rep;
}

nlohmann::json ClarksonReport::to_json() const {
    nlohmann::json j;
    j["p"] = p;
    j["form"] = form;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["holds"] = holds;
    return j;
}

}  // namespace theta

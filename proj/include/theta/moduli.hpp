#ifndef THETA_MODULI_HPP
#define THETA_MODULI_HPP

#include "theta/space.hpp"
#include "theta/subspace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace theta {

enum class ModulusKind { symmetric, asymptotic_surrogate };
std::string modulus_kind_name(ModulusKind k);

struct OptimizerStats {
    int restarts = 0;
    long iters = 0;
};

struct ModulusSample {
    SpaceSpec space;
    double t = 0.0;
    double value = 0.0;  // certified lower bound on the modulus
    ModulusKind kind = ModulusKind::symmetric;
    int codim_budget = 0;   // asymptotic surrogate only
    OptimizerStats stats;
    Element arg_x, arg_y;   // achieving pair / direction
    std::vector<Eigen::Index> killed;  // achieving annihilated coordinates

    ModulusSample(SpaceSpec space_, double t_) : space(std::move(space_)), t(t_) {}
    nlohmann::json to_json() const;
};

struct ModulusConfig {
    int restarts = 32;
    int max_iters = 500;
    std::uint64_t seed = 7;
    // extra start pairs, e.g. maximizers carried over from a smaller t
    std::vector<std::pair<Element, Element>> warm_pairs;
};

// sup over unit x, y of (||x+ty|| + ||x-ty||)/2 - 1 by multi-restart joint
// ascent; disjoint-support and orthonormal canonical pairs are always seeded,
// so on l_2 the closed form sqrt(1+t^2) - 1 is attained exactly.
ModulusSample symmetric_modulus(const SpaceSpec& space, double t, const ModulusConfig& cfg = {});

// Sweep with warm-started pairs; values are nondecreasing in t by
// construction since every earlier maximizer is re-evaluated at the larger t.
std::vector<ModulusSample> symmetric_modulus_sweep(const SpaceSpec& space,
                                                   const std::vector<double>& t_grid,
                                                   const ModulusConfig& cfg = {});

struct AsymptoticConfig {
    int codim_budget = 1;
    // x-probes: always the coordinate unit vectors (where the coordinate-tail
    // family reflects the infinite-dimensional tail exactly), plus optional
    // sphere samples for stress
    int extra_sample_probes = 0;
    bool exhaustive_subspaces = false;  // all coordinate kills up to the budget
    std::uint64_t seed = 11;
    int restarts = 8;
    int max_iters = 300;
};

// sup over probe x of inf over coordinate-tail subspaces (codim <= budget) of
// sup over unit y in Y of ||x+ty|| - 1.
ModulusSample asymptotic_modulus_surrogate(const SpaceSpec& space, double t,
                                           const AsymptoticConfig& cfg = {});

struct PowerFit {
    std::vector<std::pair<double, double>> samples;  // (t, value) used
    double c = 0.0;        // value ~ c * t^r
    double r = 0.0;
    double residual = 0.0; // max |log value - log fit|
    int rejected = 0;      // nonpositive values dropped

    nlohmann::json to_json() const;
};

// Least squares on (log t, log value); needs >= 5 distinct t in [1e-3, 1e-1].
PowerFit power_type_fit(const std::vector<std::pair<double, double>>& samples);

struct ClarksonReport {
    double p = 0.0;
    std::string form;  // which inequality was checked
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;

    nlohmann::json to_json() const;
};

// McCarthy's Schatten Clarkson inequalities: the p >= 2 form
// ||x+y||^p + ||x-y||^p <= 2^(p-1) (||x||^p + ||y||^p), and for 1 < p < 2 the
// dual form with exponent p' = p/(p-1).
ClarksonReport clarkson_check(const SpaceSpec& space, const Element& x, const Element& y);

}  // namespace theta

#endif

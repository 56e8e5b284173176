#ifndef THETA_EXPERIMENT_HPP
#define THETA_EXPERIMENT_HPP

#include "theta/covering.hpp"
#include "theta/inradius.hpp"
#include "theta/moduli.hpp"

#include <string>

namespace theta {

// One experiment invocation; round-trips through JSON with a fixed schema and
// rejects unknown keys.
struct ExperimentConfig {
    std::string experiment = "cover_verify";  // cover_verify | inradius | modulus | clarkson
                                              // | hilbert2 | lp_sweep | compare_raja
    SpaceSpec space = SpaceSpec::ell_p(2.0, 16);

    int n = 2;                                        // pieces for block coverings
    std::vector<std::vector<Eigen::Index>> partition; // explicit blocks (optional)
    std::vector<double> t_grid = {0.001, 0.003, 0.01, 0.03, 0.1};
    std::string modulus_kind = "symmetric";
    int codim_budget = 1;
    std::uint64_t seed = 1;
    int samples = 10000;
    int pair_count = 10000;         // clarkson
    int refute_probes = 0;          // random (x, Y) refutations
    int cert_probes = 0;            // random (x, Y) certificate search
    double bisect_rel_tol = 1e-4;
    int restarts = 32;
    int n_min = 2, n_max = 8;       // lp_sweep
    int block_size = 8;             // lp_sweep: dim = block_size * n
    std::vector<double> refute_radii;  // extra refutation radii (hilbert2)

    nlohmann::ordered_json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);  // throws on unknown keys
};

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 1 soundness re-check failed, 2 invalid config
    nlohmann::ordered_json report;
    std::string csv;
};

RunOutcome run_experiment(const ExperimentConfig& cfg);

// Report with the wall-time field removed, the determinism comparison key.
nlohmann::ordered_json strip_wall_time(nlohmann::ordered_json report);

std::string modulus_csv(const std::vector<ModulusSample>& sweep, std::uint64_t seed);

}  // namespace theta

#endif

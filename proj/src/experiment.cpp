#include "theta/experiment.hpp"

#include "theta/sampling.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace theta {

namespace {

using ojson = nlohmann::ordered_json;

const std::set<std::string> kExperiments = {"cover_verify", "inradius", "modulus", "clarkson",
                                            "hilbert2",     "lp_sweep", "compare_raja"};

std::vector<std::vector<Eigen::Index>> equal_partition(Eigen::Index dim, int n) {
    if (n < 1 || dim < n)
        throw std::invalid_argument("partition: need dim >= n >= 1");
    std::vector<std::vector<Eigen::Index>> blocks(static_cast<size_t>(n));
    Eigen::Index start = 0;
    for (int k = 0; k < n; ++k) {
        const Eigen::Index len = dim / n + (k < dim % n ? 1 : 0);
        for (Eigen::Index i = 0; i < len; ++i) blocks[static_cast<size_t>(k)].push_back(start + i);
        start += len;
    }
    return blocks;
}

Element zero_of(const SpaceSpec& s) { return Element::Zero(s.elem_rows(), s.elem_cols()); }

// rejection draw of a point of the set; the caps here keep >= 1/n of the ball
std::optional<Element> random_member(const NormCapSet& set, std::mt19937_64& rng) {
    const SpaceSpec space = set.ambient();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double inv_dim = 1.0 / static_cast<double>(space.flat_dim());
    for (int tries = 0; tries < 512; ++tries) {
        Element cand = std::pow(unif(rng), inv_dim) * sample_sphere_one(space, rng);
        if (membership(set, cand)) return cand;
    }
    return std::nullopt;
}

Subspace random_codim_subspace(const SpaceSpec& space, int codim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd funcs(codim, space.flat_dim());
    for (Eigen::Index i = 0; i < funcs.rows(); ++i)
        for (Eigen::Index k = 0; k < funcs.cols(); ++k) funcs(i, k) = normal(rng);
    return Subspace::from_kernel(space, funcs);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

ojson hilbert2_run(const ExperimentConfig& cfg, std::string& csv, bool& sound,
                   std::vector<std::string>& warnings) {
    const SpaceSpec& space = cfg.space;
    if (!space.is_hilbert_sequence() || space.elem_rows() < 4)
        throw std::invalid_argument("hilbert2: needs an l_2 space of dimension >= 4");

    auto halves = cfg.partition.empty() ? equal_partition(space.elem_rows(), 2) : cfg.partition;
    if (halves.size() != 2) throw std::invalid_argument("hilbert2: expected two halves");
    const CoveringFamily family = build_hilbert_two_cover(space, halves[0], halves[1]);
    const double cap = family.sets[0].cap;

    ojson results;
    const CoverReport cover = verify_cover(family, cfg.seed, cfg.samples);
    results["cover"] = cover.to_json();
    sound = sound && cover.covered() && cover.analytic_ok;

    const SectionCertificate cert = certify_lower(family.sets[0], zero_of(space),
                                                  Subspace::full(space), cap);
    results["certificate"] = cert.to_json();
    sound = sound && cert.verified() && cert.rigor == Rigor::analytic;
    const long cert_viol = certificate_violations_by_sampling(
        cert, std::min(cfg.samples, 10000), cfg.seed ^ 0x5bf03635ULL);
    results["certificate_sample_violations"] = cert_viol;
    sound = sound && cert_viol == 0;

    std::vector<double> radii = cfg.refute_radii;
    if (radii.empty()) radii = {cap + 1e-3, 0.72, 0.8, 0.93};
    std::mt19937_64 rng(cfg.seed ^ 0xc2b2ae3d27d4eb4fULL);
    ojson refutations = ojson::array();
    for (const double r : radii) {
        ojson entry;
        entry["r"] = r;
        long refuted = 0, inconclusive = 0;
        for (size_t k = 0; k < family.sets.size(); ++k) {
            const RefutationWitness w =
                refute_hilbert(family.sets[k], zero_of(space), Subspace::full(space), r);
            if (k == 0) entry["witness_x0"] = w.to_json();
            const bool ok = w.refuted() && recheck_witness(w);
            sound = sound && ok;
            ok ? ++refuted : ++inconclusive;
        }
        for (int probe = 0; probe < cfg.refute_probes; ++probe) {
            const auto& set = family.sets[probe % family.sets.size()];
            const auto x = random_member(set, rng);
            if (!x) {
                ++inconclusive;
                continue;
            }
            const Subspace y = random_codim_subspace(space, cfg.codim_budget, rng);
            const RefutationWitness w = refute_hilbert(set, *x, y, r);
            const bool ok = w.refuted() && recheck_witness(w);
            sound = sound && ok;
            ok ? ++refuted : ++inconclusive;
        }
        entry["refuted"] = refuted;
        entry["inconclusive"] = inconclusive;
        refutations.push_back(std::move(entry));
    }
    results["refutations"] = refutations;

    InradiusConfig icfg;
    icfg.bisect_rel_tol = cfg.bisect_rel_tol;
    icfg.seed = cfg.seed;
    const InradiusInterval interval = estimate_inradius(family.sets[0], cfg.codim_budget, icfg);
    results["interval"] = interval.to_json();
    sound = sound && interval.lower <= interval.upper && !interval.upper_vacuous;
    if (interval.upper_vacuous) warnings.push_back("inradius upper bound vacuous");

    std::ostringstream os;
    os << "quantity,lower,upper,reference\n";
    os << "ess_inradius,"
       << interval.lower << "," << interval.upper << "," << cap << "\n";
    csv = os.str();
    return results;
}

ojson lp_sweep_run(const ExperimentConfig& cfg, std::string& csv, bool& sound,
                   std::vector<std::string>& warnings) {
    const auto* ell = std::get_if<EllPSpec>(&cfg.space.variant());
    if (!ell) throw std::invalid_argument("lp_sweep: space must be ell_p (dim is derived)");
    const double p = ell->p;
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min)
        throw std::invalid_argument("lp_sweep: bad n range");

    std::ostringstream os;
    os << "n,dim,certified_lower,refuted_upper,reference\n";
    ojson rows = ojson::array();
    std::mt19937_64 rng(cfg.seed ^ 0x94d049bb133111ebULL);
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        const Eigen::Index dim = static_cast<Eigen::Index>(cfg.block_size) * n;
        const SpaceSpec space = SpaceSpec::ell_p(p, dim);
        const CoveringFamily family = build_block_covering(space, equal_partition(dim, n));
        const double reference = std::pow(static_cast<double>(n), -1.0 / p);
        sound = sound && family.sets[0].cap == reference;

        const CoverReport cover = verify_cover(family, cfg.seed + static_cast<std::uint64_t>(n),
                                               std::max(1, cfg.samples / 10));
        sound = sound && cover.covered() && cover.analytic_ok;

        InradiusConfig icfg;
        icfg.bisect_rel_tol = cfg.bisect_rel_tol;
        icfg.seed = cfg.seed;
        icfg.refuter = RefuterChoice::lp;
        const InradiusInterval interval = estimate_inradius(family.sets[0], cfg.codim_budget,
                                                            icfg);
        sound = sound && interval.lower == reference && interval.lower <= interval.upper;
        if (interval.upper_vacuous) warnings.push_back("lp_sweep: vacuous upper at n=" +
                                                       std::to_string(n));

        // the paper's adversarial construction at a hair above the cap
        const double r = reference * (1.0 + 1e-3);
        const RefutationWitness w0 =
            refute_lp(family.sets[0], zero_of(space), Subspace::full(space), r, n);
        sound = sound && w0.refuted() && recheck_witness(w0);
        long refuted = 0, inconclusive = 0;
        for (int probe = 0; probe < cfg.refute_probes; ++probe) {
            const auto x = random_member(family.sets[0], rng);
            if (!x) {
                ++inconclusive;
                continue;
            }
            const Subspace y = random_codim_subspace(space, std::min(cfg.codim_budget, 3), rng);
            const RefutationWitness w = refute_lp(family.sets[0], *x, y, r, n);
            if (w.refuted() && recheck_witness(w))
                ++refuted;
            else
                ++inconclusive;
        }

        ojson row;
        row["n"] = n;
        row["dim"] = dim;
        row["certified_lower"] = interval.lower;
        row["refuted_upper"] = interval.upper;
        row["reference"] = reference;
        row["refuted_x0"] = w0.refuted();
        row["probe_refuted"] = refuted;
        row["probe_inconclusive"] = inconclusive;
        rows.push_back(row);
        os << n << "," << dim << "," << interval.lower << "," << interval.upper << ","
           << reference << "\n";
    }
    csv = os.str();
    ojson results;
    results["rows"] = rows;
    return results;
}

ojson cover_verify_run(const ExperimentConfig& cfg, std::string& csv, bool& sound,
                       std::vector<std::string>& warnings) {
    const auto partition = cfg.partition.empty()
                               ? equal_partition(cfg.space.elem_rows(), cfg.n)
                               : cfg.partition;
    const CoveringFamily family = build_block_covering(cfg.space, partition);
    const CoverReport report = verify_cover(family, cfg.seed, cfg.samples);
    sound = sound && report.covered() && report.analytic_ok;
    if (!report.covered()) warnings.push_back("cover violations found");

    std::ostringstream os;
    os << "checked,violations,max_slack,analytic_max_dev\n"
       << report.checked << "," << report.violation_count << "," << report.max_slack << ","
       << report.analytic_max_dev << "\n";
    csv = os.str();

    ojson results;
    results["family"] = family.to_json();
    results["cover"] = report.to_json();
    return results;
}

ojson inradius_run(const ExperimentConfig& cfg, std::string& csv, bool& sound,
                   std::vector<std::string>& warnings) {
    const auto partition = cfg.partition.empty()
                               ? equal_partition(cfg.space.elem_rows(), cfg.n)
                               : cfg.partition;
    const CoveringFamily family = build_block_covering(cfg.space, partition);

    InradiusConfig icfg;
    icfg.bisect_rel_tol = cfg.bisect_rel_tol;
    icfg.seed = cfg.seed;
    icfg.cert_probes = cfg.cert_probes;
    icfg.refute_probes = cfg.refute_probes;

    std::ostringstream os;
    os << "set,lower,upper,cap\n";
    ojson intervals = ojson::array();
    for (size_t k = 0; k < family.sets.size(); ++k) {
        const InradiusInterval interval =
            estimate_inradius(family.sets[k], cfg.codim_budget, icfg);
        sound = sound && interval.lower <= interval.upper;
        if (interval.upper_vacuous)
            warnings.push_back("inradius: vacuous upper for set " + std::to_string(k));
        ojson entry = interval.to_json();
        entry["set"] = k;
        entry["cap"] = family.sets[k].cap;
        intervals.push_back(std::move(entry));
        os << k << "," << interval.lower << "," << interval.upper << "," << family.sets[k].cap
           << "\n";
    }
    csv = os.str();

    const SectionCertificate cert = certify_lower(
        family.sets[0], zero_of(cfg.space), Subspace::full(cfg.space), family.sets[0].cap);
    const long viol = certificate_violations_by_sampling(cert, std::min(cfg.samples, 10000),
                                                         cfg.seed ^ 0x2545f491ULL);
    sound = sound && cert.verified() && viol == 0;

    ojson results;
    results["intervals"] = intervals;
    results["certificate"] = cert.to_json();
    results["certificate_sample_violations"] = viol;
    return results;
}

ojson modulus_run(const ExperimentConfig& cfg, std::string& csv, bool& sound,
                  std::vector<std::string>& warnings) {
    std::vector<ModulusSample> sweep;
    if (cfg.modulus_kind == "symmetric") {
        ModulusConfig mcfg;
        mcfg.restarts = cfg.restarts;
        mcfg.seed = cfg.seed;
        sweep = symmetric_modulus_sweep(cfg.space, cfg.t_grid, mcfg);
    } else if (cfg.modulus_kind == "asymptotic") {
        AsymptoticConfig acfg;
        acfg.codim_budget = cfg.codim_budget;
        acfg.seed = cfg.seed;
        acfg.restarts = cfg.restarts;
        std::vector<double> grid = cfg.t_grid;
        std::sort(grid.begin(), grid.end());
        for (double t : grid) sweep.push_back(asymptotic_modulus_surrogate(cfg.space, t, acfg));
    } else {
        throw std::invalid_argument("modulus: kind must be symmetric or asymptotic");
    }

    ojson results;
    ojson samples = ojson::array();
    double prev = -1.0;
    for (const auto& s : sweep) {
        samples.push_back(s.to_json());
        sound = sound && s.value <= s.t + 1e-9;  // triangle inequality bound
        if (cfg.modulus_kind == "symmetric") {
            sound = sound && s.value >= prev - 1e-6;  // warm starts force monotone values
            prev = s.value;
            if (cfg.space.is_hilbert_sequence()) {
                const double closed = std::sqrt(1.0 + s.t * s.t) - 1.0;
                if (std::abs(s.value - closed) > 1e-6) {
                    sound = false;
                    warnings.push_back("l2 closed form mismatch at t=" + std::to_string(s.t));
                }
            }
        }
    }
    results["samples"] = samples;

    std::vector<std::pair<double, double>> pts;
    for (const auto& s : sweep) pts.emplace_back(s.t, s.value);
    try {
        const PowerFit fit = power_type_fit(pts);
        results["fit"] = fit.to_json();
        if (fit.rejected > 0)
            warnings.push_back(std::to_string(fit.rejected) + " nonpositive samples rejected");
    } catch (const std::invalid_argument& e) {
        warnings.push_back(std::string("no power fit: ") + e.what());
    }

    csv = modulus_csv(sweep, cfg.seed);
    return results;
}

ojson clarkson_run(const ExperimentConfig& cfg, std::string& csv, bool& sound,
                   std::vector<std::string>& warnings) {
    if (!cfg.space.is_schatten())
        throw std::invalid_argument("clarkson: space must be schatten");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long violations = 0;
    double worst_ratio = 0.0;
    double max_equality_dev = 0.0;  // p = 2 parallelogram law
    ojson example;
    for (int i = 0; i < cfg.pair_count; ++i) {
        const Element x = (0.1 + 1.9 * unif(rng)) * sample_sphere_one(cfg.space, rng);
        const Element y = (0.1 + 1.9 * unif(rng)) * sample_sphere_one(cfg.space, rng);
        const ClarksonReport rep = clarkson_check(cfg.space, x, y);
        worst_ratio = std::max(worst_ratio, rep.lhs / rep.rhs);
        if (cfg.space.p() == 2.0)
            max_equality_dev = std::max(max_equality_dev, std::abs(rep.lhs - rep.rhs));
        if (!rep.holds) {
            ++violations;
            if (example.empty()) example = rep.to_json();
        }
    }
    sound = sound && violations == 0;
    if (violations > 0) warnings.push_back("clarkson inequality violated");

    ojson results;
    results["pairs"] = cfg.pair_count;
    results["violations"] = violations;
    results["worst_ratio"] = worst_ratio;
    if (cfg.space.p() == 2.0) results["max_parallelogram_deviation"] = max_equality_dev;
    if (!example.empty()) results["example_violation"] = example;

    std::ostringstream os;
    os << "p,pairs,violations,worst_ratio\n"
       << cfg.space.p() << "," << cfg.pair_count << "," << violations << "," << worst_ratio
       << "\n";
    csv = os.str();
    return results;
}

ojson compare_raja_run(const ExperimentConfig& cfg, std::string& csv, bool& sound,
                       std::vector<std::string>& warnings) {
    ojson results;

    {  // measured two-piece Hilbert interval
        const SpaceSpec h = SpaceSpec::ell_p(2.0, 16);
        const CoveringFamily two = build_hilbert_two_cover(h, equal_partition(16, 2)[0],
                                                           equal_partition(16, 2)[1]);
        InradiusConfig icfg;
        icfg.seed = cfg.seed;
        const InradiusInterval iv = estimate_inradius(two.sets[0], cfg.codim_budget, icfg);
        sound = sound && !iv.upper_vacuous;
        results["hilbert_two_piece"] = {
            {"measured_lower", iv.lower},
            {"measured_upper", iv.upper},
            {"recorded_interval", {{"lower", 0.707}, {"upper", 0.931}}},
            {"exact", 1.0 / std::sqrt(2.0)}};
    }

    const double p = cfg.space.p();
    const double r_exp = std::min(p, 2.0);
    std::ostringstream os;
    os << "n,measured_lower,measured_upper,n^(-1/p),n^(-1/r)\n";
    ojson rows = ojson::array();
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        const Eigen::Index dim = static_cast<Eigen::Index>(cfg.block_size) * n;
        const SpaceSpec space = SpaceSpec::ell_p(p, dim);
        const CoveringFamily family = build_block_covering(space, equal_partition(dim, n));
        InradiusConfig icfg;
        icfg.seed = cfg.seed;
        icfg.refuter = RefuterChoice::lp;
        const InradiusInterval iv = estimate_inradius(family.sets[0], cfg.codim_budget, icfg);
        const double up = std::pow(static_cast<double>(n), -1.0 / p);
        const double low_curve = std::pow(static_cast<double>(n), -1.0 / r_exp);
        if (iv.upper_vacuous) warnings.push_back("compare_raja: vacuous upper");
        ojson row;
        row["n"] = n;
        row["measured_lower"] = iv.lower;
        row["measured_upper"] = iv.upper;
        row["upper_curve_n^-1/p"] = up;
        row["lower_curve_n^-1/r"] = low_curve;
        rows.push_back(row);
        os << n << "," << iv.lower << "," << iv.upper << "," << up << "," << low_curve << "\n";
    }
    results["p"] = p;
    results["r"] = r_exp;
    results["rows"] = rows;
    results["note"] = "reference curves only; the true infimum and the constant c are not "
                      "computable at this scale";
    csv = os.str();
    return results;
}

}  // namespace

std::string modulus_csv(const std::vector<ModulusSample>& sweep, std::uint64_t seed) {
    std::ostringstream os;
    os << "space,kind,t,value,codim_budget,restarts,seed\n";
    for (const auto& s : sweep) {
        os << csv_quote(s.space.describe()) << "," << modulus_kind_name(s.kind) << "," << s.t
           << "," << s.value << "," << s.codim_budget << "," << s.stats.restarts << "," << seed
           << "\n";
    }
    return os.str();
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
    ojson j;
    j["experiment"] = experiment;
    j["space"] = space.to_json();
    j["n"] = n;
    ojson part = ojson::array();
    for (const auto& block : partition) part.push_back(block);
    j["partition"] = part;
    j["t_grid"] = t_grid;
    j["modulus_kind"] = modulus_kind;
    j["codim_budget"] = codim_budget;
    j["seed"] = seed;
    j["samples"] = samples;
    j["pair_count"] = pair_count;
    j["refute_probes"] = refute_probes;
    j["cert_probes"] = cert_probes;
    j["bisect_rel_tol"] = bisect_rel_tol;
    j["restarts"] = restarts;
    j["n_min"] = n_min;
    j["n_max"] = n_max;
    j["block_size"] = block_size;
    j["refute_radii"] = refute_radii;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "experiment", "space",      "n",          "partition",      "t_grid",
        "modulus_kind", "codim_budget", "seed",   "samples",        "pair_count",
        "refute_probes", "cert_probes", "bisect_rel_tol", "restarts", "n_min",
        "n_max",      "block_size", "refute_radii"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() + "'");

    ExperimentConfig cfg;
    if (j.contains("experiment")) cfg.experiment = j.at("experiment").get<std::string>();
    if (!kExperiments.count(cfg.experiment))
        throw std::invalid_argument("config: unknown experiment '" + cfg.experiment + "'");
    if (j.contains("space")) cfg.space = SpaceSpec::from_json(j.at("space"));
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("partition")) {
        cfg.partition.clear();
        for (const auto& block : j.at("partition"))
            cfg.partition.push_back(block.get<std::vector<Eigen::Index>>());
    }
    if (j.contains("t_grid")) cfg.t_grid = j.at("t_grid").get<std::vector<double>>();
    if (j.contains("modulus_kind")) cfg.modulus_kind = j.at("modulus_kind").get<std::string>();
    if (j.contains("codim_budget")) cfg.codim_budget = j.at("codim_budget").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) cfg.samples = j.at("samples").get<int>();
    if (j.contains("pair_count")) cfg.pair_count = j.at("pair_count").get<int>();
    if (j.contains("refute_probes")) cfg.refute_probes = j.at("refute_probes").get<int>();
    if (j.contains("cert_probes")) cfg.cert_probes = j.at("cert_probes").get<int>();
    if (j.contains("bisect_rel_tol")) cfg.bisect_rel_tol = j.at("bisect_rel_tol").get<double>();
    if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
    if (j.contains("n_min")) cfg.n_min = j.at("n_min").get<int>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    if (j.contains("block_size")) cfg.block_size = j.at("block_size").get<int>();
    if (j.contains("refute_radii"))
        cfg.refute_radii = j.at("refute_radii").get<std::vector<double>>();
    return cfg;
}

nlohmann::ordered_json strip_wall_time(nlohmann::ordered_json report) {
    report.erase("wall_time_ms");
    return report;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    RunOutcome out;
    Timer timer;
    bool sound = true;
    std::vector<std::string> warnings;
    ojson results;

    try {
        if (cfg.experiment == "hilbert2")
            results = hilbert2_run(cfg, out.csv, sound, warnings);
        else if (cfg.experiment == "lp_sweep")
            results = lp_sweep_run(cfg, out.csv, sound, warnings);
        else if (cfg.experiment == "cover_verify")
            results = cover_verify_run(cfg, out.csv, sound, warnings);
        else if (cfg.experiment == "inradius")
            results = inradius_run(cfg, out.csv, sound, warnings);
        else if (cfg.experiment == "modulus")
            results = modulus_run(cfg, out.csv, sound, warnings);
        else if (cfg.experiment == "clarkson")
            results = clarkson_run(cfg, out.csv, sound, warnings);
        else if (cfg.experiment == "compare_raja")
            results = compare_raja_run(cfg, out.csv, sound, warnings);
        else
            throw std::invalid_argument("unknown experiment: " + cfg.experiment);
    } catch (const std::invalid_argument&) {
        out.exit_code = 2;
        throw;
    }

    out.report["config"] = cfg.to_json();
    out.report["results"] = results;
    out.report["tolerances"] = {{"membership", kMembershipTol},
                                {"certificate", kCertTol},
                                {"rank", kRankTol}};
    out.report["warnings"] = warnings;
    out.report["sound"] = sound;
    out.report["wall_time_ms"] = timer.ms();
    out.exit_code = sound ? 0 : 1;
    return out;
}

}  // namespace theta

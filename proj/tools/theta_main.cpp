#include "theta/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

// "0-3;4-7" or "0,1;2,3": semicolons split blocks, entries are indices or
// inclusive ranges
std::vector<std::vector<Eigen::Index>> parse_partition(const std::string& s) {
    std::vector<std::vector<Eigen::Index>> blocks;
    std::stringstream ss(s);
    std::string block;
    while (std::getline(ss, block, ';')) {
        std::vector<Eigen::Index> indices;
        std::stringstream bs(block);
        std::string tok;
        while (std::getline(bs, tok, ',')) {
            if (tok.empty()) continue;
            const auto dash = tok.find('-', 1);
            if (dash != std::string::npos) {
                const long a = std::stol(tok.substr(0, dash));
                const long b = std::stol(tok.substr(dash + 1));
                for (long i = a; i <= b; ++i) indices.push_back(i);
            } else {
                indices.push_back(std::stol(tok));
            }
        }
        if (!indices.empty()) blocks.push_back(std::move(indices));
    }
    return blocks;
}

struct SpaceFlags {
    std::string kind = "ellp";
    double p = 2.0;
    long dim = 16;
    std::string weights;
    long rows = 8, cols = 8;
    double inner_p = 2.0;
    long inner_dim = 2;

    theta::SpaceSpec build() const {
        if (kind == "ellp") return theta::SpaceSpec::ell_p(p, dim);
        if (kind == "weighted") {
            const auto w = parse_doubles(weights);
            if (w.empty()) throw CLI::ValidationError("--weights required for weighted spaces");
            return theta::SpaceSpec::weighted_lp(
                p, Eigen::Map<const Eigen::VectorXd>(w.data(), w.size()));
        }
        if (kind == "schatten") return theta::SpaceSpec::schatten(p, rows, cols);
        if (kind == "bochner") {
            Eigen::VectorXd w;
            if (weights.empty()) {
                w = Eigen::VectorXd::Ones(dim);
            } else {
                const auto wv = parse_doubles(weights);
                w = Eigen::Map<const Eigen::VectorXd>(wv.data(), wv.size());
            }
            return theta::SpaceSpec::bochner(p, w, inner_p, inner_dim);
        }
        throw CLI::ValidationError("unknown --space kind: " + kind);
    }
};

int emit(const theta::RunOutcome& outcome, const std::string& out_path,
         const std::string& format) {
    const std::string payload =
        format == "csv" ? outcome.csv : outcome.report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return 2;
        }
        f << payload;
    }
    if (!outcome.report["warnings"].empty())
        std::cerr << "warnings: " << outcome.report["warnings"].dump() << "\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"covering-index laboratory for finite surrogate Banach spaces"};
    app.require_subcommand(0, 1);

    std::string config_path, out_path, format = "json", partition, t_grid;
    SpaceFlags sf;
    theta::ExperimentConfig cfg;

    app.add_option("--config", config_path, "JSON config file (overrides other flags)");
    app.add_option("--out", out_path, "output path (stdout when omitted)");
    app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--space", sf.kind, "ellp|weighted|schatten|bochner");
        cmd->add_option("--p", sf.p, "norm exponent");
        cmd->add_option("--dim", sf.dim, "coordinate dimension");
        cmd->add_option("--weights", sf.weights, "comma-separated atom masses");
        cmd->add_option("--rows", sf.rows, "matrix rows (schatten)");
        cmd->add_option("--cols", sf.cols, "matrix cols (schatten)");
        cmd->add_option("--inner-p", sf.inner_p, "inner exponent (bochner)");
        cmd->add_option("--inner-dim", sf.inner_dim, "inner dimension (bochner)");
        cmd->add_option("--n", cfg.n, "number of pieces");
        cmd->add_option("--partition", partition, "blocks, e.g. 0-3;4-7");
        cmd->add_option("--codim-budget", cfg.codim_budget, "functional budget for subspaces");
        cmd->add_option("--t-grid", t_grid, "comma-separated t values");
        cmd->add_option("--seed", cfg.seed, "rng seed");
        cmd->add_option("--samples", cfg.samples, "sample count");
        cmd->add_option("--pairs", cfg.pair_count, "clarkson pair count");
        cmd->add_option("--refute-probes", cfg.refute_probes, "random (x,Y) refutations");
        cmd->add_option("--cert-probes", cfg.cert_probes, "random (x,Y) certificate search");
        cmd->add_option("--bisect-tol", cfg.bisect_rel_tol, "relative bisection tolerance");
        cmd->add_option("--restarts", cfg.restarts, "ascent restarts");
        cmd->add_option("--n-min", cfg.n_min, "sweep start");
        cmd->add_option("--n-max", cfg.n_max, "sweep end");
        cmd->add_option("--block-size", cfg.block_size, "sweep block size (dim = n * block)");
        cmd->add_option("--kind", cfg.modulus_kind, "modulus kind: symmetric|asymptotic");
    };

    std::map<std::string, std::string> subs = {
        {"hilbert2", "two-piece Hilbert cover: verify, certify, refute, bracket"},
        {"lp-sweep", "block coverings of l_p across n with certified brackets"},
        {"cover-verify", "Monte-Carlo + analytic covering check"},
        {"inradius", "essential-inradius intervals for block caps"},
        {"modulus", "modulus-of-smoothness sweep and power fit"},
        {"clarkson", "Clarkson inequality spot checks on Schatten pairs"},
        {"compare-raja", "measured intervals against the recorded reference bounds"},
    };
    std::map<std::string, CLI::App*> cmds;
    for (const auto& [name, desc] : subs) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        add_common(cmd);
        cmds[name] = cmd;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                std::cerr << "cannot read " << config_path << "\n";
                return 2;
            }
            nlohmann::json j;
            f >> j;
            cfg = theta::ExperimentConfig::from_json(j);
        } else {
            std::string chosen;
            for (const auto& [name, cmd] : cmds)
                if (cmd->parsed()) chosen = name;
            if (chosen.empty()) {
                std::cerr << app.help();
                return 2;
            }
            std::string exp = chosen;
            std::replace(exp.begin(), exp.end(), '-', '_');
            cfg.experiment = exp;
            cfg.space = sf.build();
            if (!partition.empty()) cfg.partition = parse_partition(partition);
            if (!t_grid.empty()) cfg.t_grid = parse_doubles(t_grid);
        }
        const theta::RunOutcome outcome = theta::run_experiment(cfg);
        return emit(outcome, out_path, format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

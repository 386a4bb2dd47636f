#include "covchain/chain_core.hpp"
#include "covchain/chaining.hpp"
#include "covchain/cover_time.hpp"
#include "covchain/errors.hpp"
#include "covchain/growth.hpp"
#include "covchain/io.hpp"
#include "covchain/suite.hpp"
#include "covchain/zoo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace covchain;

MarkovChain load_chain(const std::string& file, const std::string& name) {
    if (!name.empty() && !file.empty()) {
        throw ValidationError("give either --chain FILE or --name SPEC, not both");
    }
    if (!name.empty()) return make_zoo_chain(name);
    if (!file.empty()) return read_chain_file(file);
    throw ValidationError("a chain is required: --chain FILE or --name SPEC");
}

void print_report(const BoundReport& r, std::ostream& os) {
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": lhs=" << format_sig17(r.lhs)
       << " rhs=" << format_sig17(r.rhs) << " slack=" << format_sig17(r.slack);
    if (!r.hard) os << " (soft)";
    if (!r.context.empty()) os << "\n       " << r.context;
    os << "\n";
}

ZooParams parse_params(const std::vector<std::string>& kvs) {
    ZooParams params;
    for (const std::string& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ValidationError("parameter must look like key=value: " + kv);
        }
        params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return params;
}

std::vector<std::vector<std::size_t>> read_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
    if (!doc.is_array()) throw ValidationError(path + ": expected an array of index arrays");
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& entry : doc) {
        if (!entry.is_array()) throw ValidationError(path + ": expected an array of index arrays");
        std::vector<std::size_t> group;
        for (const auto& v : entry) {
            if (!v.is_number_unsigned()) {
                throw ValidationError(path + ": group entries must be nonnegative integers");
            }
            group.push_back(v.get<std::size_t>());
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

void apply_config_file(const std::string& path, SuiteConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
    if (!doc.is_object()) throw ValidationError(path + ": config must be a JSON object");
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("trials")) cfg.trials = doc["trials"].get<std::uint64_t>();
    if (doc.contains("tolerance")) cfg.tolerance = doc["tolerance"].get<double>();
    if (doc.contains("chains")) cfg.chain_selection = doc["chains"].get<std::vector<std::string>>();
    if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cover times, hitting times, and chaining functionals for finite Markov chains"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0x5eed;
    std::uint64_t trials = 100000;
    double tol = 1e-9;
    std::string out_dir;
    std::string config_file;
    auto* seed_opt = app.add_option("--seed", seed, "master RNG seed");
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials per estimate");
    auto* tol_opt = app.add_option("--tol", tol, "numeric tolerance for identity checks");
    auto* out_opt = app.add_option("--out", out_dir, "output directory for reports");
    app.add_option("--config", config_file, "JSON config file (seed, trials, tolerance, chains, out_dir)");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "per-chain summary as CSV blocks");
    std::string analyze_file, analyze_name;
    analyze_cmd->add_option("--chain", analyze_file, "chain JSON file");
    analyze_cmd->add_option("--name", analyze_name, "generator spec, e.g. complete_graph(6)");

    // verify (+ growth)
    auto* verify_cmd = app.add_subcommand("verify", "run the full inequality suite");
    std::vector<std::string> verify_chains;
    verify_cmd->add_option("--chains", verify_chains, "generator specs replacing the default set")
        ->delimiter(',');
    auto* growth_cmd = verify_cmd->add_subcommand(
        "growth", "check one separated-family cover lower bound instance");
    std::string growth_file, growth_name, growth_sets;
    double growth_scale = 0.0;
    growth_cmd->add_option("--chain", growth_file, "chain JSON file");
    growth_cmd->add_option("--name", growth_name, "generator spec");
    growth_cmd->add_option("--sets", growth_sets, "JSON file: array of state-index arrays")
        ->required();
    growth_cmd->add_option("--scale", growth_scale,
                           "separation scale a (default: smallest cross-group commute distance)");

    // gamma
    auto* gamma_cmd = app.add_subcommand("gamma", "partition functional estimates for a metric");
    std::string gamma_metric, gamma_file, gamma_name, gamma_method = "greedy";
    int gamma_alpha = 2;
    bool gamma_sqrt = false;
    gamma_cmd->add_option("--metric", gamma_metric, "metric CSV file");
    gamma_cmd->add_option("--chain", gamma_file, "chain JSON file (commute metric)");
    gamma_cmd->add_option("--name", gamma_name, "generator spec (commute metric)");
    gamma_cmd->add_option("--alpha", gamma_alpha, "functional exponent, 1 or 2")
        ->check(CLI::IsMember({1, 2}));
    gamma_cmd->add_flag("--sqrt", gamma_sqrt, "use the square-root metric");
    gamma_cmd->add_option("--method", gamma_method, "estimate kind")
        ->check(CLI::IsMember({"exact", "greedy", "packing", "dudley"}));

    // zoo
    auto* zoo_cmd = app.add_subcommand("zoo", "generate a chain and write it as JSON");
    std::string zoo_kind, zoo_name, zoo_out;
    std::vector<std::string> zoo_params;
    zoo_cmd->add_option("--kind", zoo_kind, "generator kind, e.g. complete_graph");
    zoo_cmd->add_option("--params", zoo_params, "generator parameters as key=value")
        ->delimiter(',');
    zoo_cmd->add_option("--name", zoo_name, "shorthand spec, e.g. cycle_srw(12)");
    zoo_cmd->add_option("--file", zoo_out, "output chain file")->required();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo cover-time estimate");
    std::string sim_file, sim_name;
    std::vector<std::size_t> sim_subset;
    std::size_t sim_start = 0;
    sim_cmd->add_option("--chain", sim_file, "chain JSON file");
    sim_cmd->add_option("--name", sim_name, "generator spec");
    sim_cmd->add_option("--subset", sim_subset, "states to cover (default: all)")->delimiter(',');
    sim_cmd->add_option("--start", sim_start, "starting state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        SuiteConfig cfg;
        if (!config_file.empty()) apply_config_file(config_file, cfg);
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (trials_opt->count() > 0) cfg.trials = trials;
        if (tol_opt->count() > 0) cfg.tolerance = tol;
        if (out_opt->count() > 0) cfg.out_dir = out_dir;
        validate_suite_config(cfg);

        if (*analyze_cmd) {
            const MarkovChain chain = load_chain(analyze_file, analyze_name);
            if (cfg.out_dir.empty()) {
                analyze_chain(chain, cfg, std::cout);
            } else {
                std::filesystem::create_directories(cfg.out_dir);
                const auto path = std::filesystem::path(cfg.out_dir) / "analysis.csv";
                std::ofstream out(path);
                if (!out) throw ValidationError("cannot write " + path.string());
                analyze_chain(chain, cfg, out);
                std::cout << "wrote " << path.string() << "\n";
            }
            return 0;
        }

        if (*growth_cmd) {
            const MarkovChain chain = load_chain(growth_file, growth_name);
            const auto groups = read_group_file(growth_sets);
            const auto commute = commute_distance(expected_hitting_times(chain));
            double scale = growth_scale;
            if (!(scale > 0.0)) {
                scale = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < groups.size(); ++i) {
                    for (std::size_t j = i + 1; j < groups.size(); ++j) {
                        for (std::size_t u : groups[i]) {
                            for (std::size_t v : groups[j]) {
                                if (u < chain.n && v < chain.n) {
                                    scale = std::min(scale, commute.distance(u, v));
                                }
                            }
                        }
                    }
                }
            }
            CoverOptions options;
            options.trials = cfg.trials;
            options.seed = cfg.seed;
            const BoundReport row = growth_step_verify(chain, groups, commute, scale, options);
            print_report(row, std::cout);
            return row.passed ? 0 : 1;
        }

        if (*verify_cmd) {
            cfg.chain_selection = verify_chains.empty() ? cfg.chain_selection : verify_chains;
            const SuiteResult result = run_verification_suite(cfg);
            std::size_t shown = 0;
            for (const BoundReport& r : result.reports) {
                if (r.hard && !r.passed) {
                    print_report(r, std::cout);
                    ++shown;
                }
            }
            std::cout << "rows=" << result.reports.size() << " hard_failures="
                      << result.hard_failures() << " soft_rows=" << result.soft_rows()
                      << " elapsed=" << format_sig17(result.elapsed_seconds) << "s\n";
            if (!cfg.out_dir.empty()) {
                std::cout << "reports written to " << cfg.out_dir << "\n";
            }
            return result.hard_failures() == 0 ? 0 : 1;
        }

        if (*gamma_cmd) {
            FiniteMetric metric;
            if (!gamma_metric.empty()) {
                metric = read_metric_csv(gamma_metric);
            } else {
                const MarkovChain chain = load_chain(gamma_file, gamma_name);
                metric = commute_distance(expected_hitting_times(chain));
            }
            if (gamma_sqrt) metric = sqrt_metric(metric);
            GammaEstimate est;
            if (gamma_method == "exact") est = exact_gamma(metric, gamma_alpha);
            else if (gamma_method == "greedy") est = greedy_gamma_upper(metric, gamma_alpha);
            else if (gamma_method == "packing") est = gamma_lower_packing(metric, gamma_alpha);
            else est = dudley_bound(metric, gamma_alpha);
            std::cout << "alpha=" << gamma_alpha << " method=" << gamma_method
                      << " points=" << metric.distance.rows()
                      << " value=" << format_sig17(est.value) << "\n";
            return 0;
        }

        if (*zoo_cmd) {
            MarkovChain chain;
            if (!zoo_name.empty()) {
                chain = make_zoo_chain(zoo_name);
            } else if (!zoo_kind.empty()) {
                chain = make_zoo_chain(zoo_kind, parse_params(zoo_params));
            } else {
                throw ValidationError("give --name SPEC or --kind KIND [--params ...]");
            }
            write_chain_file(zoo_out, chain);
            std::cout << "wrote " << zoo_out << " (" << chain.n << " states)\n";
            return 0;
        }

        if (*sim_cmd) {
            const MarkovChain chain = load_chain(sim_file, sim_name);
            std::vector<std::size_t> subset = sim_subset;
            if (subset.empty()) {
                subset.resize(chain.n);
                std::iota(subset.begin(), subset.end(), std::size_t{0});
            }
            const auto est = mc_cover_time(chain, subset, sim_start, cfg.trials, cfg.seed);
            std::cout << "cover_estimate=" << format_sig17(est.value)
                      << " ci3=" << format_sig17(est.ci_halfwidth) << " trials=" << est.trials
                      << " seed=" << cfg.seed << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

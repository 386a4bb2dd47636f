#pragma once

#include "covchain/chain_core.hpp"
#include "covchain/report.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace covchain {

struct SuiteConfig {
    std::uint64_t seed = 0x5eed;
    std::uint64_t trials = 100000;
    double tolerance = 1e-9;
    std::vector<std::string> chain_selection; // "kind(arg)" specs; empty = default zoo
    std::string out_dir;                      // empty = no files written
};

void validate_suite_config(const SuiteConfig& cfg);

// A zoo chain with the derived quantities most checks need, computed once.
struct ChainData {
    std::string name;
    MarkovChain chain;
    std::vector<double> pi;
    HittingMatrix hitting;
    FiniteMetric commute;
    bool reversible = false;
};

std::vector<std::string> default_chain_selection();
std::vector<ChainData> build_chain_data(const std::vector<std::string>& selection);

struct SuiteResult {
    std::vector<BoundReport> reports;
    // Two-column series for external plotting, keyed by file stem.
    std::map<std::string, std::vector<std::array<double, 2>>> plot_series;
    double elapsed_seconds = 0.0;

    std::size_t hard_failures() const;
    std::size_t soft_rows() const;
    void add(BoundReport report) { reports.push_back(std::move(report)); }
};

// Check sections, exposed one by one so a harness can gate and time each.
// Sections with pinned instances build their own chains; the others sweep
// whatever zoo they are handed.
void run_hitting_exactness(SuiteResult& result);
void run_return_identities(const std::vector<ChainData>& zoo, SuiteResult& result);
void run_cover_cross_validation(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                                SuiteResult& result);
void run_matthews_checks(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                         SuiteResult& result);
void run_cover_monotonicity(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                            SuiteResult& result);
void run_excursion_laws(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                        SuiteResult& result);
void run_tail_estimates(const SuiteConfig& cfg, SuiteResult& result);
void run_restart_bounds(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                        SuiteResult& result);
void run_chaining_certificates(const SuiteConfig& cfg, SuiteResult& result);
void run_gamma_ordering(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                        SuiteResult& result);
void run_cycle_identities(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                          SuiteResult& result);
void run_sparsification(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                        SuiteResult& result);
void run_growth_steps(const SuiteConfig& cfg, SuiteResult& result);
void run_tree_checks(const SuiteConfig& cfg, SuiteResult& result);
void run_soft_ratios(const std::vector<ChainData>& zoo, const SuiteConfig& cfg,
                     SuiteResult& result);

// Runs every section over the configured zoo and, when cfg.out_dir is set,
// writes reports.csv, summary.json, and the plot data files there.
SuiteResult run_verification_suite(const SuiteConfig& cfg);

void write_suite_outputs(const SuiteResult& result, const std::string& out_dir);
void write_plot_data(const SuiteResult& result, const std::string& out_dir);
void write_summary_json(const SuiteResult& result, std::ostream& os);

// CSV blocks: summary (size, reversibility, cover extremes, functional
// estimates), stationary vector, hitting matrix, commute matrix.
void analyze_chain(const MarkovChain& chain, const SuiteConfig& cfg, std::ostream& os);

} // namespace covchain

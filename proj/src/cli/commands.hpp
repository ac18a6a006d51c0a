#ifndef BENFORD_CLI_COMMANDS_HPP
#define BENFORD_CLI_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "benford/report.hpp"

namespace benford::cli {

/// Everything the subcommands share. Parsed by main(), validated again
/// here so the library surface can be driven programmatically in tests.
struct RunConfig {
    std::vector<std::string> series;     // [var=]path; long-format tests detected by header
    std::vector<std::string> indicators; // indicator CSV paths
    std::string policy = "max-ma";       // max-ma | global-day | since-first
    int ma_window = 7;
    std::optional<int> offset;           // global-day: days from origin; since-first: days
    std::vector<int> window_offsets;     // non-empty: average stats over shifted cutoffs
    int digit = 1;
    std::vector<std::string> variables;  // default {confirmed, deaths}
    double alpha = 0.01;
    bool regional = false;
    bool state_mode = false;
    bool use_appendix_a1 = false;
    std::uint64_t seed = 42;
    std::string format = "json";         // csv | json | both
    std::string out_dir;                 // empty: canonical JSON to stdout
    bool no_timestamp = false;

    // regress / corr / quartiles
    std::vector<std::string> indicator_names; // e.g. eiu, ln_gdp, eiu_component:elect
    std::string model = "ols";                // ols | logit
    std::string scheme = "linear";            // linear | weibull
    bool listwise = false;

    // critical-values
    bool simulate = false;
    long long mc_n = 100;
    long long mc_trials = 10000;
};

/// Throws ValidationError on any bad flag combination or missing path.
/// `needs_data`: the subcommand reads series/fixture input.
void validate_config(const RunConfig& cfg, bool needs_data);

int run_ingest_check(const RunConfig& cfg);
int run_cutoff(const RunConfig& cfg);
int run_gof(const RunConfig& cfg);
int run_regress(const RunConfig& cfg);
int run_corr(const RunConfig& cfg);
int run_quartiles(const RunConfig& cfg);
int run_critical_values(const RunConfig& cfg);
int run_report(const RunConfig& cfg);

} // namespace benford::cli

#endif // BENFORD_CLI_COMMANDS_HPP

#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "benford/errors.hpp"
#include "benford/version.hpp"
#include "commands.hpp"

namespace {

using benford::cli::RunConfig;

void add_common_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--series", cfg.series,
                    "Cumulative series CSV, optionally VAR=PATH with VAR in "
                    "{confirmed,deaths,cured,tests}; repeatable. Long-format test "
                    "counts are detected by their header.");
    sub->add_option("--indicators", cfg.indicators, "Development-indicator CSV; repeatable");
    sub->add_option("--policy", cfg.policy, "Cutoff policy")
        ->check(CLI::IsMember({"max-ma", "global-day", "since-first"}));
    sub->add_option("--ma-window", cfg.ma_window, "Moving-average window (max-ma policy)");
    sub->add_option("--offset", cfg.offset,
                    "Policy parameter: days from 2020-01-22 (global-day) or days since the "
                    "first case (since-first)");
    sub->add_option("--window-offsets", cfg.window_offsets,
                    "Comma-separated day offsets; statistics are averaged over the shifted "
                    "cutoffs")
        ->delimiter(',');
    sub->add_option("--digit", cfg.digit, "Significant-digit position")->check(CLI::Range(1, 2));
    sub->add_option("--variable", cfg.variables, "Series variable; repeatable")
        ->check(CLI::IsMember({"confirmed", "deaths", "cured", "tests"}));
    sub->add_option("--alpha", cfg.alpha, "Significance level in (0,1)");
    sub->add_flag("--regional", cfg.regional, "Keep Country/Province entities unaggregated");
    sub->add_flag("--state-mode", cfg.state_mode,
                  "Use the bundled US-state reference table and politics indicators");
    sub->add_flag("--use-appendix-a1", cfg.use_appendix_a1,
                  "Use the bundled country reference table instead of recomputing");
    sub->add_option("--seed", cfg.seed, "Monte Carlo seed");
    sub->add_option("--format", cfg.format, "Output format (csv needs --out)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--out", cfg.out_dir, "Output directory (default: JSON to stdout)");
    sub->add_flag("--no-timestamp", cfg.no_timestamp,
                  "Omit the provenance timestamp for byte-identical reruns");
}

void add_cross_section_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--indicator", cfg.indicator_names,
                    "Indicator column (e.g. eiu, ln_gdp, he_gdp, uhc, eiu_component:elect, "
                    "fh_av, fh_dem); repeatable");
    sub->add_option("--model", cfg.model, "Regression model")
        ->check(CLI::IsMember({"ols", "logit"}));
    sub->add_option("--scheme", cfg.scheme, "Quartile boundary scheme")
        ->check(CLI::IsMember({"linear", "weibull"}));
    sub->add_flag("--listwise", cfg.listwise,
                  "Correlations over rows complete on every column (default pairwise)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Digit-distribution conformance analysis for epidemic surveillance series"};
    app.set_version_flag("--version", std::string(benford::kToolName) + " " + benford::kVersion);
    app.require_subcommand(1);

    RunConfig cfg;
    std::function<int()> action;

    auto wire = [&](const char* name, const char* help, int (*fn)(const RunConfig&),
                    bool cross_flags) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common_flags(sub, cfg);
        if (cross_flags) add_cross_section_flags(sub, cfg);
        sub->callback([&action, &cfg, fn] { action = [&cfg, fn] { return fn(cfg); }; });
        return sub;
    };

    wire("ingest-check", "Validate inputs and fixture checksums without computing",
         benford::cli::run_ingest_check, false);
    wire("cutoff", "Per-entity growth-window cutoff dates and day counts",
         benford::cli::run_cutoff, false);
    wire("gof", "Per-entity digit goodness-of-fit statistics with rejection flags",
         benford::cli::run_gof, false);
    wire("regress", "Descriptives, quartiles, correlations and regression panels",
         benford::cli::run_regress, true);
    wire("corr", "Pearson correlation matrix of the analysis columns",
         benford::cli::run_corr, true);
    wire("quartiles", "Indicator-quartile contrasts of the goodness-of-fit columns",
         benford::cli::run_quartiles, true);
    CLI::App* cv = wire("critical-values", "Published and simulated critical values",
                        benford::cli::run_critical_values, false);
    cv->add_flag("--simulate", cfg.simulate, "Add Monte Carlo thresholds at --alpha");
    cv->add_option("--n", cfg.mc_n, "Simulated sample size");
    cv->add_option("--trials", cfg.mc_trials, "Monte Carlo trials (>= 1000)");
    wire("report", "Full pipeline: cutoffs, statistics and cross-sectional tables",
         benford::cli::run_report, true);

    try {
        app.parse(argc, argv);
        return action ? action() : 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const benford::Error& e) {
        const char* kind = e.kind() == benford::ErrorKind::validation ? "validation"
                           : e.kind() == benford::ErrorKind::data     ? "data"
                                                                      : "internal";
        std::cerr << "{\"error\":{\"kind\":\"" << kind << "\",\"message\":"
                  << benford::json(std::string(e.what())).dump() << "}}\n";
        return e.kind() == benford::ErrorKind::validation ? 1
               : e.kind() == benford::ErrorKind::data     ? 2
                                                          : 3;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":{\"kind\":\"internal\",\"message\":"
                  << benford::json(std::string(e.what())).dump() << "}}\n";
        return 3;
    }
}

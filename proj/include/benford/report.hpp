#ifndef BENFORD_REPORT_HPP
#define BENFORD_REPORT_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "benford/ingest.hpp"
#include "benford/regress.hpp"

namespace benford {

using json = nlohmann::ordered_json;

/// Analysis dataset: one row per entity, numeric columns in a DataTable.
struct AnalysisData {
    std::vector<std::string> entities;
    DataTable table;
};

/// The eight goodness-of-fit columns of the standard analysis dataset.
extern const std::vector<std::string> kGofColumns;
/// Statistic behind each gof column name (for critical-value flagging).
const std::map<std::string, Statistic>& gof_column_statistics();

/// Country dataset from the bundled reference table, optionally widened
/// with extra indicator files (per-component democracy scores, freedom
/// scores) joined by normalized entity name. Columns: the eight gof
/// statistics, eiu, ln_gdp, he_gdp, uhc, ln_population, days_confirmed,
/// days_deaths, plus any extra indicator fields present.
AnalysisData a1_analysis_data(const A1Table& a1,
                              const std::vector<const std::vector<IndicatorRecord>*>& extra = {},
                              const AliasTable* aliases = nullptr);

/// US-state dataset (won_rep/senate_rep/governor_rep as indicators).
AnalysisData state_analysis_data(const A1Table& a1_2);

/// Dataset recomputed end-to-end from joined series + indicators under a
/// cutoff policy (first-digit statistics).
AnalysisData analysis_from_joined(const std::vector<JoinedEntity>& joined,
                                  const CutoffPolicy& policy, int position = 1,
                                  bool include_cutoff_day = false);

/// Adds "<gof>_reject" dummy columns: 1 when the statistic exceeds its
/// published critical value at `alpha`, absent when the statistic is.
void add_rejection_dummies(DataTable& table, double alpha = 0.01);

/// Regressors divided by 100 for a given indicator column (index-scaled
/// families and the day counter; dummies and ln/percent scales stay raw).
std::vector<std::string> scaling_for(const std::string& indicator, const std::string& days_col);

struct PanelFit {
    std::string response;
    RegressionResult result;
    std::string error; // non-empty when the fit failed (result is empty)
};

/// One regression panel: the four statistics of `variable` regressed on
/// `indicator` with the standard controls. Fit errors are captured per
/// response, not thrown.
std::vector<PanelFit> run_panel(const DataTable& table, const std::string& indicator,
                                Variable variable, Model model = Model::ols);

/// ISO-8601 UTC timestamp of now.
std::string iso8601_utc_now();

struct InputFile {
    std::string role; // "series:confirmed", "indicators", "fixture:appendix_a1.csv", ...
    std::string path;
};

/// Provenance block embedded in every report: tool version, input file
/// checksums, policy/seed echo. Timestamp omitted when `no_timestamp`.
json provenance_block(const std::vector<InputFile>& inputs, const json& options,
                      bool no_timestamp);

/// Runs f(0..count-1) across a small bounded worker pool; results must be
/// written to index-addressed slots so scheduling cannot reorder output.
/// The first exception (if any) is rethrown after all workers join.
void parallel_indexed(std::size_t count, const std::function<void(std::size_t)>& f);

} // namespace benford

#endif // BENFORD_REPORT_HPP

#ifndef BENFORD_SERIES_HPP
#define BENFORD_SERIES_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "benford/dates.hpp"
#include "benford/gof.hpp"

namespace benford {

/// Per-entity dated cumulative counts. Dates are daily and contiguous;
/// cumulative series are expected nondecreasing, but violations (reporting
/// corrections) are recorded in quality_flags rather than rejected.
struct EpidemicSeries {
    std::string entity_id;
    std::vector<Date> dates;
    std::map<Variable, std::vector<long long>> cumulative; // aligned to dates
    std::vector<std::string> quality_flags;

    const std::vector<long long>* variable(Variable v) const;
    /// Validates date contiguity and alignment; flags nonmonotone series.
    void validate();
};

/// How the end of the exponential-growth window is chosen.
struct CutoffPolicy {
    enum class Kind {
        per_entity_max_ma, // earliest argmax of the MA of new daily confirmed
        global_day,        // fixed calendar day: origin + offset_days
        since_first,       // first confirmed case + days_since_first
        window_average     // base policy, statistics averaged over offsets
    };

    Kind kind = Kind::per_entity_max_ma;
    int ma_window = 7;                          // per_entity_max_ma
    int offset_days = 80;                       // global_day
    Date origin = make_date(2020, 1, 22);       // global_day
    int days_since_first = 45;                  // since_first
    std::vector<int> offsets;                   // window_average
    std::shared_ptr<CutoffPolicy> base;         // window_average

    static CutoffPolicy max_ma(int window = 7);
    static CutoffPolicy global_day(int offset = 80, Date origin = make_date(2020, 1, 22));
    static CutoffPolicy since_first(int days = 45);
    static CutoffPolicy window_average(CutoffPolicy base_policy, std::vector<int> offsets);
};

/// The usable digit sample for one entity: cumulative values on days that
/// are strictly before the cutoff and at least 1, per variable.
struct GrowthWindow {
    std::string entity_id;
    Date cutoff_date{};
    std::map<Variable, std::vector<long long>> usable_values;
    std::map<Variable, long long> nonzero_days; // == usable_values[v].size()
};

struct DailyNew {
    std::vector<long long> values;
    std::vector<std::size_t> negative_at; // indices of negative differences
};

/// First element unchanged, then first differences. Negative differences
/// (corrections in the feed) are preserved and their positions flagged.
DailyNew daily_new(const std::vector<long long>& cumulative);

/// Trailing moving average with partial windows at the start: output[i] is
/// the mean of the last min(window, i+1) inputs. Output length == input.
std::vector<double> moving_average(const std::vector<double>& series, int window);

/// Cutoff date under a policy. Always derived from the confirmed series
/// (one cutoff per entity). Throws NoCutoffError when underivable (all-zero
/// or missing confirmed series for the policies that need one).
Date growth_cutoff(const EpidemicSeries& series, const CutoffPolicy& policy);

/// Growth-window extraction. `include_cutoff_day` widens "strictly before"
/// to "on or before" for reconciliation runs.
GrowthWindow extract_growth_window(const EpidemicSeries& series, const CutoffPolicy& policy,
                                   bool include_cutoff_day = false);

/// gof_all at cutoff+delta for each offset, averaged element-wise over the
/// four statistics. Offsets whose shifted window is empty are skipped; if
/// every offset skips, throws UndefinedStatisticError. n is reported from
/// the base (unshifted) cutoff window.
GofResult windowed_gof(const EpidemicSeries& series, const CutoffPolicy& base_policy,
                       const std::vector<int>& offsets, int position, Variable variable);

} // namespace benford

#endif // BENFORD_SERIES_HPP

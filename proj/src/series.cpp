#include "benford/series.hpp"

#include <algorithm>

#include "benford/errors.hpp"

namespace benford {

const std::vector<long long>* EpidemicSeries::variable(Variable v) const {
    auto it = cumulative.find(v);
    return it == cumulative.end() ? nullptr : &it->second;
}

void EpidemicSeries::validate() {
    for (size_t i = 1; i < dates.size(); ++i) {
        if (dates[i] - dates[i - 1] != Days{1})
            throw ValidationError(entity_id + ": dates not contiguous at " + to_iso(dates[i]));
    }
    for (const auto& [var, values] : cumulative) {
        if (values.size() != dates.size())
            throw ValidationError(entity_id + ": " + variable_name(var) +
                                  " series length does not match date axis");
        for (size_t i = 1; i < values.size(); ++i) {
            if (values[i] < values[i - 1]) {
                quality_flags.push_back(entity_id + ": " + variable_name(var) +
                                        " decreases on " + to_iso(dates[i]) + " (" +
                                        std::to_string(values[i - 1]) + " -> " +
                                        std::to_string(values[i]) + ")");
            }
        }
    }
}

CutoffPolicy CutoffPolicy::max_ma(int window) {
    if (window < 1) throw DomainError("moving-average window must be >= 1");
    CutoffPolicy p;
    p.kind = Kind::per_entity_max_ma;
    p.ma_window = window;
    return p;
}

CutoffPolicy CutoffPolicy::global_day(int offset, Date origin) {
    CutoffPolicy p;
    p.kind = Kind::global_day;
    p.offset_days = offset;
    p.origin = origin;
    return p;
}

CutoffPolicy CutoffPolicy::since_first(int days) {
    CutoffPolicy p;
    p.kind = Kind::since_first;
    p.days_since_first = days;
    return p;
}

CutoffPolicy CutoffPolicy::window_average(CutoffPolicy base_policy, std::vector<int> offsets) {
    if (offsets.empty()) throw DomainError("window_average needs at least one offset");
    CutoffPolicy p;
    p.kind = Kind::window_average;
    p.offsets = std::move(offsets);
    p.base = std::make_shared<CutoffPolicy>(std::move(base_policy));
    return p;
}

DailyNew daily_new(const std::vector<long long>& cumulative) {
    DailyNew out;
    out.values.reserve(cumulative.size());
    for (size_t i = 0; i < cumulative.size(); ++i) {
        long long v = i == 0 ? cumulative[0] : cumulative[i] - cumulative[i - 1];
        if (v < 0) out.negative_at.push_back(i);
        out.values.push_back(v);
    }
    return out;
}

std::vector<double> moving_average(const std::vector<double>& series, int window) {
    if (window < 1) throw DomainError("moving-average window must be >= 1");
    std::vector<double> out(series.size());
    double acc = 0.0;
    for (size_t i = 0; i < series.size(); ++i) {
        acc += series[i];
        if (i >= size_t(window)) acc -= series[i - size_t(window)];
        out[i] = acc / double(std::min<size_t>(size_t(window), i + 1));
    }
    return out;
}

namespace {

// Date of the first confirmed value >= 1, or nullopt.
std::optional<Date> first_case_date(const EpidemicSeries& series) {
    const auto* confirmed = series.variable(Variable::confirmed);
    if (!confirmed) return std::nullopt;
    for (size_t i = 0; i < confirmed->size(); ++i)
        if ((*confirmed)[i] >= 1) return series.dates[i];
    return std::nullopt;
}

} // namespace

Date growth_cutoff(const EpidemicSeries& series, const CutoffPolicy& policy) {
    if (series.dates.empty()) throw NoCutoffError(series.entity_id + ": empty series");
    switch (policy.kind) {
        case CutoffPolicy::Kind::global_day:
            return policy.origin + Days{policy.offset_days};
        case CutoffPolicy::Kind::since_first: {
            auto first = first_case_date(series);
            if (!first)
                throw NoCutoffError(series.entity_id + ": no confirmed case, cutoff undefined");
            return *first + Days{policy.days_since_first};
        }
        case CutoffPolicy::Kind::window_average:
            return growth_cutoff(series, *policy.base);
        case CutoffPolicy::Kind::per_entity_max_ma:
            break;
    }
    const auto* confirmed = series.variable(Variable::confirmed);
    if (!confirmed || std::all_of(confirmed->begin(), confirmed->end(),
                                  [](long long v) { return v == 0; }))
        throw NoCutoffError(series.entity_id + ": no confirmed case, cutoff undefined");

    DailyNew dn = daily_new(*confirmed);
    std::vector<double> as_real(dn.values.begin(), dn.values.end());
    std::vector<double> ma = moving_average(as_real, policy.ma_window);
    // earliest argmax wins ties
    size_t best = 0;
    for (size_t i = 1; i < ma.size(); ++i)
        if (ma[i] > ma[best]) best = i;
    return series.dates[best];
}

GrowthWindow extract_growth_window(const EpidemicSeries& series, const CutoffPolicy& policy,
                                   bool include_cutoff_day) {
    GrowthWindow w;
    w.entity_id = series.entity_id;
    w.cutoff_date = growth_cutoff(series, policy);
    for (const auto& [var, values] : series.cumulative) {
        std::vector<long long> usable;
        for (size_t i = 0; i < values.size(); ++i) {
            bool in_window = include_cutoff_day ? series.dates[i] <= w.cutoff_date
                                                : series.dates[i] < w.cutoff_date;
            if (in_window && values[i] >= 1) usable.push_back(values[i]);
        }
        w.nonzero_days[var] = (long long)usable.size();
        w.usable_values[var] = std::move(usable);
    }
    return w;
}

GofResult windowed_gof(const EpidemicSeries& series, const CutoffPolicy& base_policy,
                       const std::vector<int>& offsets, int position, Variable variable) {
    if (offsets.empty()) throw DomainError("windowed_gof needs at least one offset");
    Date base_cutoff = growth_cutoff(series, base_policy);
    const auto* values = series.variable(variable);
    if (!values)
        throw UndefinedStatisticError(series.entity_id + ": no " +
                                          std::string(variable_name(variable)) + " series",
                                      0);

    auto usable_before = [&](Date cutoff) {
        std::vector<long long> usable;
        for (size_t i = 0; i < values->size(); ++i)
            if (series.dates[i] < cutoff && (*values)[i] >= 1) usable.push_back((*values)[i]);
        return usable;
    };

    long long base_n = (long long)usable_before(base_cutoff).size();
    double sum_chi = 0.0, sum_kuiper = 0.0, sum_m = 0.0, sum_d = 0.0;
    int used = 0;
    for (int delta : offsets) {
        std::vector<long long> usable = usable_before(base_cutoff + Days{delta});
        if (usable.empty()) continue; // shifted window precedes the first nonzero day
        GofResult g = gof_all(usable, position, variable);
        sum_chi += g.chi_squared;
        sum_kuiper += g.kuiper;
        sum_m += g.m_stat;
        sum_d += g.d_stat;
        ++used;
    }
    if (used == 0)
        throw UndefinedStatisticError(series.entity_id +
                                          ": every offset window is empty, statistic undefined",
                                      0);
    GofResult out;
    out.chi_squared = sum_chi / used;
    out.kuiper = sum_kuiper / used;
    out.m_stat = sum_m / used;
    out.d_stat = sum_d / used;
    out.n = base_n;
    out.position = position;
    out.variable = variable;
    return out;
}

} // namespace benford

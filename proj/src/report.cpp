#include "benford/report.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <mutex>

#include "benford/errors.hpp"
#include "benford/version.hpp"

namespace benford {

const std::vector<std::string> kGofColumns = {
    "chi_confirmed", "kuiper_confirmed", "m_confirmed", "d_confirmed",
    "chi_deaths",    "kuiper_deaths",    "m_deaths",    "d_deaths",
};

const std::map<std::string, Statistic>& gof_column_statistics() {
    static const std::map<std::string, Statistic> map = {
        {"chi_confirmed", Statistic::chi_squared}, {"kuiper_confirmed", Statistic::kuiper},
        {"m_confirmed", Statistic::m_stat},        {"d_confirmed", Statistic::d_stat},
        {"chi_deaths", Statistic::chi_squared},    {"kuiper_deaths", Statistic::kuiper},
        {"m_deaths", Statistic::m_stat},           {"d_deaths", Statistic::d_stat},
    };
    return map;
}

namespace {

using OptCol = std::vector<std::optional<double>>;

std::optional<double> opt_ln(const std::optional<double>& v) {
    if (!v || *v <= 0) return std::nullopt;
    return std::log(*v);
}

std::optional<double> opt_int(const std::optional<int>& v) {
    if (!v) return std::nullopt;
    return double(*v);
}

void add_gof_columns(DataTable& t, const std::vector<const GofResult*>& gof,
                     const std::string& suffix) {
    OptCol chi(gof.size()), kui(gof.size()), m(gof.size()), d(gof.size());
    for (size_t i = 0; i < gof.size(); ++i) {
        if (!gof[i]) continue;
        chi[i] = gof[i]->chi_squared;
        kui[i] = gof[i]->kuiper;
        m[i] = gof[i]->m_stat;
        d[i] = gof[i]->d_stat;
    }
    t.add_column("chi_" + suffix, std::move(chi));
    t.add_column("kuiper_" + suffix, std::move(kui));
    t.add_column("m_" + suffix, std::move(m));
    t.add_column("d_" + suffix, std::move(d));
}

// Adds a column only when some record actually carries the field.
template <class Get>
void add_if_any(DataTable& t, const std::string& name, size_t rows, Get get) {
    OptCol col(rows);
    bool any = false;
    for (size_t i = 0; i < rows; ++i) {
        col[i] = get(i);
        any = any || col[i].has_value();
    }
    if (any) t.add_column(name, std::move(col));
}

} // namespace

AnalysisData a1_analysis_data(const A1Table& a1,
                              const std::vector<const std::vector<IndicatorRecord>*>& extra,
                              const AliasTable* aliases) {
    AnalysisData out;
    size_t n = a1.rows.size();
    std::vector<const GofResult*> conf(n, nullptr), death(n, nullptr);
    for (size_t i = 0; i < n; ++i) {
        out.entities.push_back(a1.rows[i].indicators.entity_id);
        if (a1.rows[i].gof_confirmed) conf[i] = &*a1.rows[i].gof_confirmed;
        if (a1.rows[i].gof_deaths) death[i] = &*a1.rows[i].gof_deaths;
    }
    add_gof_columns(out.table, conf, "confirmed");
    add_gof_columns(out.table, death, "deaths");

    auto ind = [&](size_t i) -> const IndicatorRecord& { return a1.rows[i].indicators; };
    add_if_any(out.table, "eiu", n, [&](size_t i) { return ind(i).eiu; });
    add_if_any(out.table, "ln_gdp", n, [&](size_t i) { return opt_ln(ind(i).gdp_per_capita); });
    add_if_any(out.table, "he_gdp", n, [&](size_t i) { return ind(i).he_gdp; });
    add_if_any(out.table, "uhc", n, [&](size_t i) { return ind(i).uhc; });
    add_if_any(out.table, "ln_population", n, [&](size_t i) { return opt_ln(ind(i).population); });
    out.table.add_column("days_confirmed", [&] {
        OptCol c(n);
        for (size_t i = 0; i < n; ++i) c[i] = double(a1.rows[i].days_confirmed);
        return c;
    }());
    out.table.add_column("days_deaths", [&] {
        OptCol c(n);
        for (size_t i = 0; i < n; ++i) c[i] = double(a1.rows[i].days_deaths);
        return c;
    }());

    // widen with extra indicator tables, joined on normalized names
    std::map<std::string, IndicatorRecord> by_key;
    auto key_of = [&](const std::string& name) {
        return normalize_entity(aliases ? aliases->canonicalize(name) : name);
    };
    for (const auto* recs : extra) {
        if (!recs) continue;
        for (const auto& rec : *recs) {
            auto [it, inserted] = by_key.emplace(key_of(rec.entity_id), rec);
            if (!inserted) merge_indicator_fields(it->second, rec);
        }
    }
    if (!by_key.empty()) {
        auto lookup = [&](size_t i) -> const IndicatorRecord* {
            auto it = by_key.find(key_of(out.entities[i]));
            return it == by_key.end() ? nullptr : &it->second;
        };
        auto opt_field = [&](size_t i, auto member) -> std::optional<double> {
            const IndicatorRecord* r = lookup(i);
            if (!r) return std::nullopt;
            return member(*r);
        };
        add_if_any(out.table, "elect", n,
                   [&](size_t i) { return opt_field(i, [](auto& r) { return r.elect; }); });
        add_if_any(out.table, "gvmt", n,
                   [&](size_t i) { return opt_field(i, [](auto& r) { return r.gvmt; }); });
        add_if_any(out.table, "part", n,
                   [&](size_t i) { return opt_field(i, [](auto& r) { return r.part; }); });
        add_if_any(out.table, "cult", n,
                   [&](size_t i) { return opt_field(i, [](auto& r) { return r.cult; }); });
        add_if_any(out.table, "libert", n,
                   [&](size_t i) { return opt_field(i, [](auto& r) { return r.libert; }); });
        add_if_any(out.table, "fh_av", n,
                   [&](size_t i) { return opt_field(i, [](auto& r) { return r.fh_av; }); });
        add_if_any(out.table, "fh_dem", n, [&](size_t i) {
            return opt_field(i, [](auto& r) { return opt_int(r.fh_dem); });
        });
    }
    return out;
}

AnalysisData state_analysis_data(const A1Table& a1_2) {
    AnalysisData out;
    size_t n = a1_2.rows.size();
    std::vector<const GofResult*> conf(n, nullptr), death(n, nullptr);
    for (size_t i = 0; i < n; ++i) {
        out.entities.push_back(a1_2.rows[i].indicators.entity_id);
        if (a1_2.rows[i].gof_confirmed) conf[i] = &*a1_2.rows[i].gof_confirmed;
        if (a1_2.rows[i].gof_deaths) death[i] = &*a1_2.rows[i].gof_deaths;
    }
    add_gof_columns(out.table, conf, "confirmed");
    add_gof_columns(out.table, death, "deaths");
    auto ind = [&](size_t i) -> const IndicatorRecord& { return a1_2.rows[i].indicators; };
    add_if_any(out.table, "ln_gdp", n, [&](size_t i) { return opt_ln(ind(i).gdp_per_capita); });
    add_if_any(out.table, "he_gdp", n, [&](size_t i) { return ind(i).he_gdp; });
    add_if_any(out.table, "ln_population", n, [&](size_t i) { return opt_ln(ind(i).population); });
    add_if_any(out.table, "won_rep", n, [&](size_t i) { return opt_int(ind(i).won_rep); });
    add_if_any(out.table, "senate_rep", n, [&](size_t i) { return opt_int(ind(i).senate_rep); });
    add_if_any(out.table, "governor_rep", n,
               [&](size_t i) { return opt_int(ind(i).governor_rep); });
    out.table.add_column("days_confirmed", [&] {
        OptCol c(n);
        for (size_t i = 0; i < n; ++i) c[i] = double(a1_2.rows[i].days_confirmed);
        return c;
    }());
    out.table.add_column("days_deaths", [&] {
        OptCol c(n);
        for (size_t i = 0; i < n; ++i) c[i] = double(a1_2.rows[i].days_deaths);
        return c;
    }());
    return out;
}

AnalysisData analysis_from_joined(const std::vector<JoinedEntity>& joined,
                                  const CutoffPolicy& policy, int position,
                                  bool include_cutoff_day) {
    size_t n = joined.size();
    std::vector<std::optional<GofResult>> conf(n), death(n);
    std::vector<std::optional<long long>> days_c(n), days_d(n);

    parallel_indexed(n, [&](size_t i) {
        const EpidemicSeries& s = joined[i].series;
        try {
            GrowthWindow w = extract_growth_window(s, policy, include_cutoff_day);
            auto run = [&](Variable v, std::optional<GofResult>* out,
                           std::optional<long long>* days) {
                auto it = w.usable_values.find(v);
                if (it == w.usable_values.end()) return;
                *days = w.nonzero_days.at(v);
                try {
                    if (policy.kind == CutoffPolicy::Kind::window_average)
                        *out = windowed_gof(s, *policy.base, policy.offsets, position, v);
                    else
                        *out = gof_all(it->second, position, v);
                } catch (const UndefinedStatisticError&) {
                    // empty window: the row keeps absent statistics
                }
            };
            run(Variable::confirmed, &conf[i], &days_c[i]);
            run(Variable::deaths, &death[i], &days_d[i]);
        } catch (const NoCutoffError&) {
            // entity keeps a fully absent row
        }
    });

    AnalysisData out;
    std::vector<const GofResult*> conf_p(n, nullptr), death_p(n, nullptr);
    for (size_t i = 0; i < n; ++i) {
        out.entities.push_back(joined[i].series.entity_id);
        if (conf[i]) conf_p[i] = &*conf[i];
        if (death[i]) death_p[i] = &*death[i];
    }
    add_gof_columns(out.table, conf_p, "confirmed");
    add_gof_columns(out.table, death_p, "deaths");

    auto ind = [&](size_t i) -> const IndicatorRecord& { return joined[i].indicators; };
    add_if_any(out.table, "eiu", n, [&](size_t i) { return ind(i).eiu; });
    add_if_any(out.table, "ln_gdp", n, [&](size_t i) { return opt_ln(ind(i).gdp_per_capita); });
    add_if_any(out.table, "he_gdp", n, [&](size_t i) { return ind(i).he_gdp; });
    add_if_any(out.table, "uhc", n, [&](size_t i) { return ind(i).uhc; });
    add_if_any(out.table, "ln_population", n, [&](size_t i) { return opt_ln(ind(i).population); });
    add_if_any(out.table, "elect", n, [&](size_t i) { return ind(i).elect; });
    add_if_any(out.table, "gvmt", n, [&](size_t i) { return ind(i).gvmt; });
    add_if_any(out.table, "part", n, [&](size_t i) { return ind(i).part; });
    add_if_any(out.table, "cult", n, [&](size_t i) { return ind(i).cult; });
    add_if_any(out.table, "libert", n, [&](size_t i) { return ind(i).libert; });
    add_if_any(out.table, "fh_av", n, [&](size_t i) { return ind(i).fh_av; });
    add_if_any(out.table, "fh_dem", n, [&](size_t i) { return opt_int(ind(i).fh_dem); });
    add_if_any(out.table, "days_confirmed", n, [&](size_t i) -> std::optional<double> {
        if (!days_c[i]) return std::nullopt;
        return double(*days_c[i]);
    });
    add_if_any(out.table, "days_deaths", n, [&](size_t i) -> std::optional<double> {
        if (!days_d[i]) return std::nullopt;
        return double(*days_d[i]);
    });
    return out;
}

void add_rejection_dummies(DataTable& table, double alpha) {
    CriticalValueTable published = published_critical_values();
    const auto& stat_of = gof_column_statistics();
    for (const auto& name : kGofColumns) {
        if (table.column_index(name) < 0) continue;
        const auto& col = table.column(name);
        double cut = published.threshold(stat_of.at(name), alpha);
        OptCol dummy(col.size());
        for (size_t i = 0; i < col.size(); ++i)
            if (col[i]) dummy[i] = *col[i] > cut ? 1.0 : 0.0;
        table.add_column(name + "_reject", std::move(dummy));
    }
}

std::vector<std::string> scaling_for(const std::string& indicator, const std::string& days_col) {
    static const std::vector<std::string> index_scaled = {"eiu",  "uhc",  "elect", "gvmt",
                                                          "part", "cult", "libert", "fh_av"};
    std::vector<std::string> scaled = {days_col};
    if (std::count(index_scaled.begin(), index_scaled.end(), indicator)) scaled.push_back(indicator);
    return scaled;
}

std::vector<PanelFit> run_panel(const DataTable& table, const std::string& indicator,
                                Variable variable, Model model) {
    std::string suffix = variable_name(variable);
    std::string days_col = std::string("days_") + suffix;
    std::vector<PanelFit> fits;
    for (const char* stat : {"chi_", "kuiper_", "m_", "d_"}) {
        RegressionSpec spec;
        spec.response = stat + suffix + (model == Model::logit ? "_reject" : "");
        spec.indicator = indicator;
        spec.controls = {"ln_population", days_col};
        spec.scaled_by_100 = scaling_for(indicator, days_col);
        spec.model = model;
        PanelFit fit;
        fit.response = spec.response;
        try {
            fit.result = model == Model::logit ? logit(spec, table) : ols(spec, table);
        } catch (const Error& e) {
            fit.error = e.what();
        }
        fits.push_back(std::move(fit));
    }
    return fits;
}

std::string iso8601_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json provenance_block(const std::vector<InputFile>& inputs, const json& options,
                      bool no_timestamp) {
    json prov;
    prov["tool"] = kToolName;
    prov["version"] = kVersion;
    if (!no_timestamp) prov["timestamp"] = iso8601_utc_now();
    json files = json::array();
    for (const auto& f : inputs) {
        json entry;
        entry["role"] = f.role;
        entry["path"] = f.path;
        entry["sha256"] = sha256_file(f.path);
        files.push_back(entry);
    }
    prov["inputs"] = files;
    prov["options"] = options;
    return prov;
}

void parallel_indexed(std::size_t count, const std::function<void(std::size_t)>& f) {
    if (count == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    size_t workers = std::min<size_t>({count, hw ? hw : 1, 8});
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace benford

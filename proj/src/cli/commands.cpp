#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <utility>

#include "benford/csv.hpp"
#include "benford/errors.hpp"
#include "benford/stats_util.hpp"

namespace fs = std::filesystem;

namespace benford::cli {
namespace {

// ---------------------------------------------------------------- output

std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string star_string(int n) { return std::string(size_t(std::max(n, 0)), '*'); }

struct CsvFile {
    std::string name, text;
};

struct CsvBuilder {
    std::string text;
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) text += ',';
            text += cells[i];
        }
        text += '\n';
    }
};

// Reports are assembled fully in memory and written in one pass at the
// end, so a failed run never leaves partial output files behind.
void emit_report(const RunConfig& cfg, const std::string& cmd, const json& doc,
                 const std::vector<CsvFile>& csvs) {
    if (cfg.out_dir.empty()) {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    fs::create_directories(cfg.out_dir);
    auto write = [&](const fs::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ValidationError("cannot write output file: " + p.string());
        f << text;
        if (!f.good()) throw Error(ErrorKind::internal, "short write: " + p.string());
    };
    if (cfg.format == "json" || cfg.format == "both")
        write(fs::path(cfg.out_dir) / (cmd + ".json"), doc.dump(2) + "\n");
    if (cfg.format == "csv" || cfg.format == "both")
        for (const auto& c : csvs) write(fs::path(cfg.out_dir) / c.name, c.text);
}

// ---------------------------------------------------------------- config

std::vector<Variable> variables_of(const RunConfig& cfg) {
    if (cfg.variables.empty()) return {Variable::confirmed, Variable::deaths};
    std::vector<Variable> out;
    for (const auto& name : cfg.variables) out.push_back(variable_from_name(name));
    return out;
}

CutoffPolicy make_policy(const RunConfig& cfg) {
    CutoffPolicy base;
    if (cfg.policy == "max-ma")
        base = CutoffPolicy::max_ma(cfg.ma_window);
    else if (cfg.policy == "global-day")
        base = CutoffPolicy::global_day(cfg.offset.value_or(80));
    else if (cfg.policy == "since-first")
        base = CutoffPolicy::since_first(cfg.offset.value_or(45));
    else
        throw ValidationError("unknown --policy: " + cfg.policy);
    if (!cfg.window_offsets.empty())
        return CutoffPolicy::window_average(base, cfg.window_offsets);
    return base;
}

json base_options(const RunConfig& cfg) {
    json o;
    o["policy"] = cfg.policy;
    o["ma_window"] = cfg.ma_window;
    if (cfg.offset) o["offset"] = *cfg.offset;
    if (!cfg.window_offsets.empty()) o["window_offsets"] = cfg.window_offsets;
    o["digit"] = cfg.digit;
    json vars = json::array();
    for (Variable v : variables_of(cfg)) vars.push_back(variable_name(v));
    o["variables"] = vars;
    o["alpha"] = cfg.alpha;
    o["seed"] = cfg.seed;
    o["regional"] = cfg.regional;
    o["state_mode"] = cfg.state_mode;
    o["use_appendix_a1"] = cfg.use_appendix_a1;
    o["format"] = cfg.format;
    return o;
}

// ---------------------------------------------------------------- loading

struct SeriesArg {
    Variable var = Variable::confirmed;
    std::string path;
};

SeriesArg split_series_arg(const std::string& arg) {
    auto eq = arg.find('=');
    if (eq != std::string::npos) {
        try {
            return {variable_from_name(arg.substr(0, eq)), arg.substr(eq + 1)};
        } catch (const DomainError&) {
            // '=' was part of the path
        }
    }
    return {Variable::confirmed, arg};
}

bool is_long_format(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::string line;
    std::getline(f, line);
    return line.rfind("date,", 0) == 0;
}

// National runs get a synthetic "World" aggregate (sum over entities), the
// same construction the reference table uses. Requires a shared date axis;
// silently skipped otherwise (mixed snapshots cannot be summed).
void synthesize_world(std::vector<EpidemicSeries>& all, bool regional) {
    if (regional || all.size() < 2) return;
    for (const auto& s : all)
        if (s.entity_id == "World") return;
    const auto& axis = all.front().dates;
    for (const auto& s : all)
        if (s.dates != axis) return;
    EpidemicSeries world;
    world.entity_id = "World";
    world.dates = axis;
    for (Variable v : {Variable::confirmed, Variable::deaths, Variable::cured, Variable::tests}) {
        bool everywhere = std::all_of(all.begin(), all.end(),
                                      [&](const EpidemicSeries& s) { return s.cumulative.count(v); });
        if (!everywhere) continue;
        std::vector<long long> sum(axis.size(), 0);
        for (const auto& s : all) {
            const auto& col = s.cumulative.at(v);
            for (size_t i = 0; i < sum.size(); ++i) sum[i] += col[i];
        }
        world.cumulative[v] = std::move(sum);
    }
    if (world.cumulative.empty()) return;
    world.validate();
    all.push_back(std::move(world));
    std::sort(all.begin(), all.end(),
              [](const EpidemicSeries& a, const EpidemicSeries& b) { return a.entity_id < b.entity_id; });
}

std::vector<EpidemicSeries> load_series_set(const RunConfig& cfg, std::vector<InputFile>& inputs) {
    std::vector<EpidemicSeries> base;
    bool first = true;
    for (const auto& arg : cfg.series) {
        SeriesArg sa = split_series_arg(arg);
        std::vector<EpidemicSeries> part;
        if (is_long_format(sa.path)) {
            part = parse_tests_long(sa.path);
            inputs.push_back({"series:tests", sa.path});
        } else {
            part = parse_jhu_wide(sa.path, sa.var, cfg.regional);
            inputs.push_back({std::string("series:") + variable_name(sa.var), sa.path});
        }
        if (first) {
            base = std::move(part);
            first = false;
        } else {
            merge_series(base, part);
        }
    }
    synthesize_world(base, cfg.regional);
    return base;
}

std::vector<IndicatorRecord> merge_indicator_lists(
    const std::vector<std::vector<IndicatorRecord>>& lists, const AliasTable& aliases) {
    std::vector<IndicatorRecord> out;
    std::map<std::string, size_t> index;
    for (const auto& list : lists)
        for (const auto& rec : list) {
            std::string key = normalize_entity(aliases.canonicalize(rec.entity_id));
            auto it = index.find(key);
            if (it == index.end()) {
                index.emplace(key, out.size());
                out.push_back(rec);
            } else {
                merge_indicator_fields(out[it->second], rec);
            }
        }
    return out;
}

struct LoadContext {
    std::string fixtures_dir;
    bool fixture_mode = false;
    bool state_mode = false;
    std::vector<InputFile> inputs;

    std::vector<EpidemicSeries> series; // recompute mode
    A1Table a1;                         // fixture mode
    AnalysisData data;                  // cross-section (aggregate row excluded)
    bool has_cross_section = false;
    std::vector<std::string> unmatched_series, unmatched_indicators;
};

LoadContext load_context(const RunConfig& cfg, bool need_series, bool need_cross) {
    LoadContext ctx;
    ctx.fixtures_dir = default_fixtures_dir();
    ctx.fixture_mode = cfg.use_appendix_a1 || cfg.state_mode;
    ctx.state_mode = cfg.state_mode;
    auto fixture_path = [&](const char* name) { return ctx.fixtures_dir + "/" + name; };

    if (ctx.fixture_mode) {
        if (cfg.state_mode) {
            ctx.a1 = load_appendix_a1_2(ctx.fixtures_dir);
            ctx.inputs.push_back({"fixture:appendix_a1_2.csv", fixture_path("appendix_a1_2.csv")});
            if (need_cross) {
                ctx.data = state_analysis_data(ctx.a1);
                ctx.has_cross_section = true;
            }
        } else {
            ctx.a1 = load_appendix_a1(ctx.fixtures_dir);
            ctx.inputs.push_back({"fixture:appendix_a1.csv", fixture_path("appendix_a1.csv")});
            if (need_cross) {
                auto components = load_fixture_indicators(ctx.fixtures_dir, "eiu_components.csv");
                auto fh = load_fixture_indicators(ctx.fixtures_dir, "fh_scores.csv");
                AliasTable aliases = AliasTable::load_default(ctx.fixtures_dir);
                ctx.inputs.push_back({"fixture:eiu_components.csv", fixture_path("eiu_components.csv")});
                ctx.inputs.push_back({"fixture:fh_scores.csv", fixture_path("fh_scores.csv")});
                ctx.inputs.push_back({"fixture:country_aliases.csv", fixture_path("country_aliases.csv")});
                ctx.data = a1_analysis_data(ctx.a1, {&components, &fh}, &aliases);
                ctx.has_cross_section = true;
            }
        }
        return ctx;
    }

    if (need_series || need_cross) ctx.series = load_series_set(cfg, ctx.inputs);
    if (need_cross) {
        if (cfg.indicators.empty())
            throw ValidationError(
                "cross-sectional analysis needs --indicators (or --use-appendix-a1)");
        AliasTable aliases = AliasTable::load_default(ctx.fixtures_dir);
        ctx.inputs.push_back({"fixture:country_aliases.csv", fixture_path("country_aliases.csv")});
        std::vector<std::vector<IndicatorRecord>> lists;
        for (const auto& path : cfg.indicators) {
            lists.push_back(parse_indicators(path));
            ctx.inputs.push_back({"indicators", path});
        }
        auto merged = merge_indicator_lists(lists, aliases);
        JoinResult jr = join(ctx.series, merged, aliases);
        ctx.unmatched_series = jr.unmatched_series;
        ctx.unmatched_indicators = jr.unmatched_indicators;
        ctx.data = analysis_from_joined(jr.joined, make_policy(cfg), cfg.digit, false);
        ctx.has_cross_section = true;
    }
    return ctx;
}

// ------------------------------------------------------------- thresholds

using ThresholdCache = std::map<std::pair<int, long long>, double>;

double threshold_for(Statistic s, const RunConfig& cfg, long long n, ThresholdCache& cache) {
    for (double level : {0.01, 0.05, 0.10})
        if (std::abs(cfg.alpha - level) < 1e-9) {
            static const CriticalValueTable published = published_critical_values();
            return published.threshold(s, level);
        }
    auto key = std::make_pair(int(s), n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double thr = monte_carlo_critical_value(s, n, cfg.alpha, cfg.mc_trials, cfg.seed);
    cache.emplace(key, thr);
    return thr;
}

// --------------------------------------------------------------- cutoffs

json build_cutoff_block(const LoadContext& ctx, const RunConfig& cfg, CsvFile* csv) {
    std::vector<Variable> vars = variables_of(cfg);
    json rows = json::array(), exceptions = json::array();

    if (ctx.fixture_mode) {
        auto emit = [&](const A1Row& r) {
            json row;
            row["entity"] = r.indicators.entity_id;
            row["cutoff"] = r.cutoff ? json(to_iso(*r.cutoff)) : json(nullptr);
            row["days_confirmed"] = r.days_confirmed;
            row["days_deaths"] = r.days_deaths;
            if (!r.cutoff) {
                json e;
                e["entity"] = r.indicators.entity_id;
                e["reason"] = "no cutoff in reference table";
                exceptions.push_back(e);
            }
            rows.push_back(row);
        };
        for (const auto& r : ctx.a1.rows) emit(r);
        if (ctx.a1.world) emit(*ctx.a1.world);
    } else {
        CutoffPolicy policy = make_policy(cfg);
        size_t n = ctx.series.size();
        std::vector<json> slot(n), err(n);
        parallel_indexed(n, [&](size_t i) {
            try {
                GrowthWindow w = extract_growth_window(ctx.series[i], policy);
                json row;
                row["entity"] = ctx.series[i].entity_id;
                row["cutoff"] = to_iso(w.cutoff_date);
                for (Variable v : vars) {
                    auto it = w.nonzero_days.find(v);
                    row[std::string("days_") + variable_name(v)] =
                        it == w.nonzero_days.end() ? json(nullptr) : json(it->second);
                }
                slot[i] = std::move(row);
            } catch (const NoCutoffError& e) {
                json x;
                x["entity"] = ctx.series[i].entity_id;
                x["reason"] = e.what();
                err[i] = std::move(x);
            }
        });
        for (size_t i = 0; i < n; ++i) {
            if (!slot[i].is_null()) rows.push_back(std::move(slot[i]));
            if (!err[i].is_null()) exceptions.push_back(std::move(err[i]));
        }
    }

    if (csv) {
        CsvBuilder b;
        std::vector<std::string> header = {"entity", "cutoff"};
        if (ctx.fixture_mode) {
            header.push_back("days_confirmed");
            header.push_back("days_deaths");
        } else {
            for (Variable v : vars) header.push_back(std::string("days_") + variable_name(v));
        }
        b.row(header);
        for (const auto& row : rows) {
            std::vector<std::string> cells = {csv_quote(row["entity"].get<std::string>()),
                                              row["cutoff"].is_null()
                                                  ? std::string()
                                                  : row["cutoff"].get<std::string>()};
            for (size_t c = 2; c < header.size(); ++c) {
                const json& v = row.contains(header[c]) ? row[header[c]] : json(nullptr);
                cells.push_back(v.is_null() ? std::string() : std::to_string(v.get<long long>()));
            }
            b.row(cells);
        }
        csv->name = "cutoff.csv";
        csv->text = std::move(b.text);
    }

    json out;
    out["rows"] = std::move(rows);
    out["exceptions"] = std::move(exceptions);
    return out;
}

// ------------------------------------------------------------------- gof

json gof_row(const std::string& entity, Variable var, int position,
             std::optional<long long> days, const GofResult* g, const std::string& note) {
    json row;
    row["entity"] = entity;
    row["variable"] = variable_name(var);
    row["position"] = position;
    row["days"] = days ? json(*days) : json(nullptr);
    row["n"] = g ? json(g->n) : json(nullptr);
    row["chi_squared"] = g ? json(g->chi_squared) : json(nullptr);
    row["kuiper"] = g ? json(g->kuiper) : json(nullptr);
    row["m"] = g ? json(g->m_stat) : json(nullptr);
    row["d"] = g ? json(g->d_stat) : json(nullptr);
    if (!note.empty()) row["note"] = note;
    return row;
}

void add_reject_flags(json& row, const RunConfig& cfg, ThresholdCache& cache) {
    static const std::pair<const char*, Statistic> keys[] = {
        {"chi_squared", Statistic::chi_squared},
        {"kuiper", Statistic::kuiper},
        {"m", Statistic::m_stat},
        {"d", Statistic::d_stat},
    };
    bool defined = !row["n"].is_null() && row["n"].get<long long>() > 0;
    for (const auto& [key, stat] : keys) {
        std::string flag = std::string("reject_") + key;
        if (!defined || row[key].is_null()) {
            row[flag] = nullptr;
            continue;
        }
        double thr = threshold_for(stat, cfg, row["n"].get<long long>(), cache);
        row[flag] = row[key].get<double>() > thr;
    }
}

json build_gof_block(const LoadContext& ctx, const RunConfig& cfg, CsvFile* csv) {
    std::vector<Variable> vars = variables_of(cfg);
    std::vector<json> rows;
    json exceptions = json::array();

    if (ctx.fixture_mode) {
        auto emit = [&](const A1Row& r) {
            for (Variable v : vars) {
                if (v != Variable::confirmed && v != Variable::deaths) continue;
                bool conf = v == Variable::confirmed;
                const auto& g = conf ? r.gof_confirmed : r.gof_deaths;
                long long days = conf ? r.days_confirmed : r.days_deaths;
                rows.push_back(gof_row(r.indicators.entity_id, v, 1, days,
                                       g ? &*g : nullptr,
                                       g ? std::string() : "no statistics in reference table"));
            }
        };
        for (const auto& r : ctx.a1.rows) emit(r);
        if (ctx.a1.world) emit(*ctx.a1.world);
    } else {
        CutoffPolicy policy = make_policy(cfg);
        size_t n = ctx.series.size();
        std::vector<std::vector<json>> slot(n);
        std::vector<json> err(n);
        parallel_indexed(n, [&](size_t i) {
            const EpidemicSeries& s = ctx.series[i];
            try {
                GrowthWindow w = extract_growth_window(s, policy);
                for (Variable v : vars) {
                    auto uit = w.usable_values.find(v);
                    if (uit == w.usable_values.end()) continue; // variable not carried
                    std::optional<long long> days = w.nonzero_days.at(v);
                    try {
                        GofResult g =
                            policy.kind == CutoffPolicy::Kind::window_average
                                ? windowed_gof(s, *policy.base, policy.offsets, cfg.digit, v)
                                : gof_all(uit->second, cfg.digit, v);
                        slot[i].push_back(gof_row(s.entity_id, v, cfg.digit, days, &g, ""));
                    } catch (const UndefinedStatisticError& e) {
                        slot[i].push_back(gof_row(s.entity_id, v, cfg.digit, days, nullptr, e.what()));
                    }
                }
            } catch (const NoCutoffError& e) {
                json x;
                x["entity"] = s.entity_id;
                x["reason"] = e.what();
                err[i] = std::move(x);
            }
        });
        for (size_t i = 0; i < n; ++i) {
            for (auto& r : slot[i]) rows.push_back(std::move(r));
            if (!err[i].is_null()) exceptions.push_back(std::move(err[i]));
        }
    }

    ThresholdCache cache;
    for (auto& row : rows) add_reject_flags(row, cfg, cache);

    if (csv) {
        CsvBuilder b;
        b.row({"entity", "variable", "position", "days", "n", "chi_squared", "kuiper", "m", "d",
               "reject_chi_squared", "reject_kuiper", "reject_m", "reject_d", "note"});
        for (const auto& row : rows) {
            auto num = [&](const char* k) {
                return row[k].is_null() ? std::string() : fmt_num(row[k].get<double>());
            };
            auto integer = [&](const char* k) {
                return row[k].is_null() ? std::string()
                                        : std::to_string(row[k].get<long long>());
            };
            auto flag = [&](const char* k) {
                return row[k].is_null() ? std::string() : std::string(row[k].get<bool>() ? "1" : "0");
            };
            b.row({csv_quote(row["entity"].get<std::string>()),
                   row["variable"].get<std::string>(), std::to_string(row["position"].get<int>()),
                   integer("days"), integer("n"), num("chi_squared"), num("kuiper"), num("m"),
                   num("d"), flag("reject_chi_squared"), flag("reject_kuiper"), flag("reject_m"),
                   flag("reject_d"),
                   row.contains("note") ? csv_quote(row["note"].get<std::string>(), false)
                                        : std::string()});
        }
        csv->name = "gof.csv";
        csv->text = std::move(b.text);
    }

    json out;
    out["rows"] = json::array();
    for (auto& r : rows) out["rows"].push_back(std::move(r));
    out["exceptions"] = std::move(exceptions);
    return out;
}

// ---------------------------------------------------------- cross-section

std::map<std::string, Statistic> present_gof_columns(const DataTable& t) {
    std::map<std::string, Statistic> out;
    for (const auto& [name, stat] : gof_column_statistics())
        if (t.column_index(name) >= 0) out.emplace(name, stat);
    return out;
}

json build_descriptives_block(const AnalysisData& data, CsvFile* csv) {
    auto summaries = descriptive_stats(data.table, data.table.names, present_gof_columns(data.table));
    json rows = json::array();
    CsvBuilder b;
    b.row({"column", "n", "mean", "min", "median", "max", "sd", "mean_level", "median_level",
           "max_level"});
    for (const auto& s : summaries) {
        json r;
        r["column"] = s.name;
        r["n"] = s.n;
        r["mean"] = s.n ? json(s.mean) : json(nullptr);
        r["min"] = s.n ? json(s.min) : json(nullptr);
        r["median"] = s.n ? json(s.median) : json(nullptr);
        r["max"] = s.n ? json(s.max) : json(nullptr);
        r["sd"] = s.has_sd ? json(s.sd) : json(nullptr);
        if (s.mean_level >= 0) {
            r["mean_level"] = s.mean_level;
            r["median_level"] = s.median_level;
            r["max_level"] = s.max_level;
        }
        rows.push_back(r);
        b.row({s.name, std::to_string(s.n), s.n ? fmt_num(s.mean) : "", s.n ? fmt_num(s.min) : "",
               s.n ? fmt_num(s.median) : "", s.n ? fmt_num(s.max) : "",
               s.has_sd ? fmt_num(s.sd) : "", s.mean_level >= 0 ? std::to_string(s.mean_level) : "",
               s.median_level >= 0 ? std::to_string(s.median_level) : "",
               s.max_level >= 0 ? std::to_string(s.max_level) : ""});
    }
    if (csv) {
        csv->name = "descriptives.csv";
        csv->text = std::move(b.text);
    }
    json out;
    out["columns"] = std::move(rows);
    return out;
}

std::vector<std::string> default_indicators(const LoadContext& ctx) {
    if (ctx.state_mode) return {"won_rep", "senate_rep", "governor_rep"};
    return {"eiu", "ln_gdp", "he_gdp", "uhc"};
}

std::vector<std::string> default_quartile_indicators(const LoadContext& ctx) {
    if (ctx.state_mode) return {"ln_gdp", "he_gdp", "ln_population"};
    return {"eiu", "ln_gdp", "he_gdp", "uhc"};
}

/// `eiu_component:elect` names the component column `elect`.
std::string resolve_indicator(const std::string& raw) {
    const std::string prefix = "eiu_component:";
    if (raw.rfind(prefix, 0) == 0) return raw.substr(prefix.size());
    return raw;
}

json build_quartiles_block(const AnalysisData& data, const std::vector<std::string>& indicators,
                           QuartileScheme scheme, CsvFile* csv) {
    json rows = json::array(), errors = json::array();
    CsvBuilder b;
    b.row({"indicator", "gof", "mean_smallest", "mean_q2", "mean_q3", "mean_largest",
           "n_smallest", "n_q2", "n_q3", "n_largest", "welch_t", "p_two", "p_one", "stars"});
    for (const auto& raw : indicators) {
        std::string ind = resolve_indicator(raw);
        for (const auto& gof : kGofColumns) {
            if (data.table.column_index(gof) < 0) continue;
            try {
                QuartileSummary q = quartile_contrast(data.table, ind, gof, scheme);
                json r;
                r["indicator"] = raw;
                r["gof"] = gof;
                r["means"] = {q.means[0], q.means[1], q.means[2], q.means[3]};
                r["sizes"] = {q.sizes[0], q.sizes[1], q.sizes[2], q.sizes[3]};
                r["welch_t"] = q.welch_t;
                r["p_two"] = q.p_two;
                r["p_one"] = q.p_one;
                r["stars"] = q.stars;
                rows.push_back(r);
                b.row({csv_quote(raw, false), gof, fmt_num(q.means[0]), fmt_num(q.means[1]),
                       fmt_num(q.means[2]), fmt_num(q.means[3]), std::to_string(q.sizes[0]),
                       std::to_string(q.sizes[1]), std::to_string(q.sizes[2]),
                       std::to_string(q.sizes[3]), fmt_num(q.welch_t), fmt_num(q.p_two),
                       fmt_num(q.p_one), star_string(q.stars)});
            } catch (const Error& e) {
                json r;
                r["indicator"] = raw;
                r["gof"] = gof;
                r["error"] = e.what();
                errors.push_back(r);
            }
        }
    }
    if (csv) {
        csv->name = "quartiles.csv";
        csv->text = std::move(b.text);
    }
    json out;
    out["rows"] = std::move(rows);
    out["errors"] = std::move(errors);
    return out;
}

std::vector<std::string> correlation_columns(const DataTable& t) {
    std::vector<std::string> candidates = kGofColumns;
    for (const char* extra : {"eiu", "ln_gdp", "he_gdp", "uhc", "ln_population"})
        candidates.push_back(extra);
    std::vector<std::string> out;
    for (const auto& c : candidates)
        if (t.column_index(c) >= 0) out.push_back(c);
    return out;
}

json build_corr_block(const AnalysisData& data, const std::vector<std::string>& cols,
                      Completeness completeness, CsvFile* csv) {
    CorrelationMatrix m = pearson_matrix(data.table, cols, completeness);
    json pairs = json::array();
    for (size_t i = 0; i < cols.size(); ++i)
        for (size_t j = i + 1; j < cols.size(); ++j) {
            const CorrelationCell& c = m.cells[i][j];
            json p;
            p["a"] = cols[i];
            p["b"] = cols[j];
            if (c.defined) {
                p["r"] = c.r;
                p["n"] = c.n;
                p["p_two"] = c.p_two;
                p["stars"] = stats::stars(c.p_two);
            } else {
                p["r"] = nullptr;
                p["n"] = c.n;
                p["undefined"] = true;
            }
            pairs.push_back(p);
        }
    if (csv) {
        CsvBuilder b;
        std::vector<std::string> header = {"variable"};
        header.insert(header.end(), cols.begin(), cols.end());
        b.row(header);
        for (size_t i = 0; i < cols.size(); ++i) {
            std::vector<std::string> cells = {cols[i]};
            for (size_t j = 0; j < cols.size(); ++j) {
                const CorrelationCell& c = m.cells[i][j];
                if (!c.defined) {
                    cells.push_back("");
                    continue;
                }
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.4f", c.r);
                cells.push_back(csv_quote(buf + star_string(i == j ? 0 : stats::stars(c.p_two)),
                                          false));
            }
            b.row(cells);
        }
        csv->name = "correlations.csv";
        csv->text = std::move(b.text);
    }
    json out;
    out["completeness"] = completeness == Completeness::listwise ? "listwise" : "pairwise";
    json names = json::array();
    for (const auto& c : cols) names.push_back(c);
    out["columns"] = names;
    out["pairs"] = std::move(pairs);
    return out;
}

/// Joint-collinearity diagnostic: every indicator at once (the reason the
/// regressions take one indicator at a time).
json build_collinearity_block(const AnalysisData& data) {
    struct Term {
        const char* column;
        double scale;
    };
    const std::vector<Term> terms = {{"eiu", 0.01},   {"ln_gdp", 1.0},        {"he_gdp", 1.0},
                                     {"uhc", 0.01},   {"ln_population", 1.0}, {"days_confirmed", 0.01}};
    std::vector<const std::vector<std::optional<double>>*> cols;
    std::vector<std::string> used;
    for (const auto& t : terms)
        if (data.table.column_index(t.column) >= 0) {
            cols.push_back(&data.table.column(t.column));
            used.push_back(t.column);
        }
    if (cols.size() < 2 || data.table.rows() == 0) return json(nullptr);

    std::vector<std::vector<double>> design(cols.size() + 1);
    size_t rows = data.table.rows();
    for (size_t r = 0; r < rows; ++r) {
        bool complete = true;
        for (const auto* c : cols) complete = complete && (*c)[r].has_value();
        if (!complete) continue;
        design[0].push_back(1.0);
        size_t k = 1;
        for (size_t ci = 0; ci < cols.size(); ++ci) {
            double scale = 1.0;
            for (const auto& t : terms)
                if (used[ci] == t.column) scale = t.scale;
            design[k++].push_back(*(*cols[ci])[r] * scale);
        }
    }
    if (design[0].size() < cols.size() + 1) return json(nullptr);

    json out;
    json names = json::array();
    names.push_back("intercept");
    for (const auto& u : used) names.push_back(u);
    out["columns"] = names;
    out["n"] = design[0].size();
    double kappa = condition_number(design);
    out["condition_number"] = std::isinf(kappa) ? json(nullptr) : json(kappa);
    if (std::isinf(kappa)) out["rank_deficient"] = true;
    return out;
}

json fit_json(const PanelFit& fit) {
    json f;
    f["response"] = fit.response;
    if (!fit.error.empty()) {
        f["error"] = fit.error;
        return f;
    }
    const RegressionResult& r = fit.result;
    json terms = json::array();
    for (size_t i = 0; i < r.term_names.size(); ++i) {
        json t;
        t["term"] = r.term_names[i];
        t["coefficient"] = r.coefficients[i];
        t["std_error"] = r.standard_errors[i];
        t["t_stat"] = std::isfinite(r.t_stats[i]) ? json(r.t_stats[i]) : json(nullptr);
        t["p_one_tailed"] = r.one_tailed_p[i];
        t["stars"] = stats::stars(r.one_tailed_p[i]);
        terms.push_back(t);
    }
    f["terms"] = std::move(terms);
    f["n"] = r.n;
    f["dropped_rows"] = r.dropped_rows;
    f["adj_r_squared"] = r.adj_r_squared;
    if (r.quasi_separation) f["quasi_separation"] = true;
    return f;
}

json build_panels_block(AnalysisData& data, const RunConfig& cfg,
                        const std::vector<std::string>& indicators, Model model, CsvFile* csv) {
    if (model == Model::logit) add_rejection_dummies(data.table, 0.01);
    json panels = json::array();
    CsvBuilder b;
    b.row({"indicator", "variable", "model", "response", "term", "coefficient", "std_error",
           "t_stat", "p_one_tailed", "stars", "n", "adj_r_squared", "error"});
    for (const auto& raw : indicators) {
        std::string col = resolve_indicator(raw);
        for (Variable var : variables_of(cfg)) {
            if (var != Variable::confirmed && var != Variable::deaths) continue;
            json panel;
            panel["indicator"] = raw;
            panel["column"] = col;
            panel["variable"] = variable_name(var);
            panel["model"] = model == Model::logit ? "logit" : "ols";
            json fits = json::array();
            for (const PanelFit& fit : run_panel(data.table, col, var, model)) {
                fits.push_back(fit_json(fit));
                if (!fit.error.empty()) {
                    b.row({csv_quote(raw, false), variable_name(var),
                           model == Model::logit ? "logit" : "ols", fit.response, "", "", "", "",
                           "", "", "", "", csv_quote(fit.error, false)});
                    continue;
                }
                const RegressionResult& r = fit.result;
                for (size_t i = 0; i < r.term_names.size(); ++i)
                    b.row({csv_quote(raw, false), variable_name(var),
                           model == Model::logit ? "logit" : "ols", fit.response, r.term_names[i],
                           fmt_num(r.coefficients[i]), fmt_num(r.standard_errors[i]),
                           fmt_num(r.t_stats[i]), fmt_num(r.one_tailed_p[i]),
                           star_string(stats::stars(r.one_tailed_p[i])), std::to_string(r.n),
                           fmt_num(r.adj_r_squared), ""});
            }
            panel["fits"] = std::move(fits);
            panels.push_back(std::move(panel));
        }
    }
    if (csv) {
        csv->name = "panels.csv";
        csv->text = std::move(b.text);
    }
    json out;
    out["panels"] = std::move(panels);
    return out;
}

// ------------------------------------------------------------ ingest-check

std::vector<std::string> manifest_files(const std::string& dir) {
    std::ifstream f(dir + "/checksums.sha256", std::ios::binary);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto sep = line.find("  ");
        if (sep == std::string::npos) continue;
        names.push_back(line.substr(sep + 2));
    }
    return names;
}

json build_fixture_check(const std::string& dir) {
    json out;
    out["directory"] = dir;
    json files = json::array();
    auto names = manifest_files(dir);
    if (names.empty()) {
        out["note"] = "no checksum manifest; directory treated as unchecksummed user data";
        out["files"] = files;
        return out;
    }
    for (const auto& name : names) {
        verify_fixture_checksum(dir, name); // IntegrityError aborts the run
        json f;
        f["file"] = name;
        f["sha256"] = sha256_file(dir + "/" + name);
        f["verified"] = true;
        files.push_back(f);
    }
    out["files"] = files;
    return out;
}

QuartileScheme scheme_of(const RunConfig& cfg) {
    return cfg.scheme == "weibull" ? QuartileScheme::weibull_tie_up
                                   : QuartileScheme::linear_tie_down;
}

Model model_of(const RunConfig& cfg) {
    return cfg.model == "logit" ? Model::logit : Model::ols;
}

json join_diagnostics(const LoadContext& ctx) {
    json j;
    j["matched"] = ctx.data.entities.size();
    j["unmatched_series"] = ctx.unmatched_series;
    j["unmatched_indicators"] = ctx.unmatched_indicators;
    return j;
}

} // namespace

// ------------------------------------------------------------- validation

void validate_config(const RunConfig& cfg, bool needs_data) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ValidationError("--alpha must lie strictly between 0 and 1");
    if (cfg.digit != 1 && cfg.digit != 2) throw ValidationError("--digit must be 1 or 2");
    if (cfg.ma_window < 1) throw ValidationError("--ma-window must be at least 1");
    if (cfg.policy != "max-ma" && cfg.policy != "global-day" && cfg.policy != "since-first")
        throw ValidationError("--policy must be max-ma, global-day or since-first");
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both")
        throw ValidationError("--format must be csv, json or both");
    if (cfg.model != "ols" && cfg.model != "logit")
        throw ValidationError("--model must be ols or logit");
    if (cfg.scheme != "linear" && cfg.scheme != "weibull")
        throw ValidationError("--scheme must be linear or weibull");
    if (cfg.mc_n < 1) throw ValidationError("--n must be positive");
    if (cfg.mc_trials < 1000) throw ValidationError("--trials must be at least 1000");
    for (const auto& name : cfg.variables) variable_from_name(name); // DomainError on bad names
    if ((cfg.format == "csv" || cfg.format == "both") && cfg.out_dir.empty())
        throw ValidationError("--format csv needs --out DIR");
    bool fixture = cfg.use_appendix_a1 || cfg.state_mode;
    if (fixture && cfg.digit == 2)
        throw ValidationError("the bundled reference table carries first-digit statistics only");
    if (needs_data && !fixture && cfg.series.empty())
        throw ValidationError("no input data: pass --series (or --use-appendix-a1/--state-mode)");
    for (const auto& arg : cfg.series) {
        std::string path = split_series_arg(arg).path;
        if (!fs::exists(path)) throw ValidationError("series file not found: " + path);
    }
    for (const auto& path : cfg.indicators)
        if (!fs::exists(path)) throw ValidationError("indicators file not found: " + path);
}

// ------------------------------------------------------------ subcommands

int run_ingest_check(const RunConfig& cfg) {
    validate_config(cfg, false);
    json doc;
    std::vector<InputFile> inputs;
    json options = base_options(cfg);

    json fixtures = build_fixture_check(default_fixtures_dir());

    json series_block(nullptr), indicators_block(nullptr), join_block(nullptr);
    bool fixture_mode = cfg.use_appendix_a1 || cfg.state_mode;
    if (fixture_mode || !cfg.series.empty()) {
        LoadContext ctx = load_context(cfg, true, !cfg.indicators.empty() && !fixture_mode);
        inputs = ctx.inputs;
        if (fixture_mode) {
            json s;
            s["entities"] = ctx.a1.rows.size();
            s["aggregate_row"] = ctx.a1.world.has_value();
            series_block = s;
        } else {
            json s;
            s["entities"] = ctx.series.size();
            if (!ctx.series.empty()) {
                Date lo = ctx.series.front().dates.front(), hi = ctx.series.front().dates.back();
                for (const auto& e : ctx.series) {
                    lo = std::min(lo, e.dates.front());
                    hi = std::max(hi, e.dates.back());
                }
                s["first_date"] = to_iso(lo);
                s["last_date"] = to_iso(hi);
            }
            json flags = json::array();
            for (const auto& e : ctx.series)
                for (const auto& f : e.quality_flags) {
                    json q;
                    q["entity"] = e.entity_id;
                    q["flag"] = f;
                    flags.push_back(q);
                }
            s["quality_flags"] = flags;
            series_block = s;
            if (ctx.has_cross_section) join_block = join_diagnostics(ctx);
        }
    }
    if (!cfg.indicators.empty()) {
        json files = json::array();
        for (const auto& path : cfg.indicators) {
            auto recs = parse_indicators(path);
            json f;
            f["path"] = path;
            f["records"] = recs.size();
            files.push_back(f);
            if (inputs.empty() || std::none_of(inputs.begin(), inputs.end(), [&](const InputFile& i) {
                    return i.path == path;
                }))
                inputs.push_back({"indicators", path});
        }
        json ib;
        ib["files"] = files;
        indicators_block = ib;
    }

    doc["provenance"] = provenance_block(inputs, options, cfg.no_timestamp);
    doc["fixtures"] = fixtures;
    doc["series"] = series_block;
    doc["indicators"] = indicators_block;
    doc["join"] = join_block;
    doc["ok"] = true;
    emit_report(cfg, "ingest_check", doc, {});
    return 0;
}

int run_cutoff(const RunConfig& cfg) {
    validate_config(cfg, true);
    LoadContext ctx = load_context(cfg, true, false);
    CsvFile csv;
    json block = build_cutoff_block(ctx, cfg, &csv);
    json doc;
    doc["provenance"] = provenance_block(ctx.inputs, base_options(cfg), cfg.no_timestamp);
    doc["cutoffs"] = std::move(block);
    emit_report(cfg, "cutoff", doc, {csv});
    return 0;
}

int run_gof(const RunConfig& cfg) {
    validate_config(cfg, true);
    LoadContext ctx = load_context(cfg, true, false);
    CsvFile csv;
    json block = build_gof_block(ctx, cfg, &csv);
    json doc;
    doc["provenance"] = provenance_block(ctx.inputs, base_options(cfg), cfg.no_timestamp);
    doc["gof"] = std::move(block);
    emit_report(cfg, "gof", doc, {csv});
    return 0;
}

int run_corr(const RunConfig& cfg) {
    validate_config(cfg, true);
    LoadContext ctx = load_context(cfg, false, true);
    std::vector<std::string> cols = cfg.indicator_names.empty()
                                        ? correlation_columns(ctx.data.table)
                                        : [&] {
                                              std::vector<std::string> out;
                                              for (const auto& r : cfg.indicator_names)
                                                  out.push_back(resolve_indicator(r));
                                              return out;
                                          }();
    CsvFile csv;
    json block = build_corr_block(ctx.data, cols,
                                  cfg.listwise ? Completeness::listwise : Completeness::pairwise,
                                  &csv);
    json options = base_options(cfg);
    options["listwise"] = cfg.listwise;
    json doc;
    doc["provenance"] = provenance_block(ctx.inputs, options, cfg.no_timestamp);
    doc["correlations"] = std::move(block);
    emit_report(cfg, "corr", doc, {csv});
    return 0;
}

int run_quartiles(const RunConfig& cfg) {
    validate_config(cfg, true);
    LoadContext ctx = load_context(cfg, false, true);
    std::vector<std::string> inds =
        cfg.indicator_names.empty() ? default_quartile_indicators(ctx) : cfg.indicator_names;
    CsvFile csv;
    json block = build_quartiles_block(ctx.data, inds, scheme_of(cfg), &csv);
    json options = base_options(cfg);
    options["scheme"] = cfg.scheme;
    options["indicators"] = inds;
    json doc;
    doc["provenance"] = provenance_block(ctx.inputs, options, cfg.no_timestamp);
    doc["quartiles"] = std::move(block);
    emit_report(cfg, "quartiles", doc, {csv});
    return 0;
}

int run_regress(const RunConfig& cfg) {
    validate_config(cfg, true);
    LoadContext ctx = load_context(cfg, false, true);
    std::vector<std::string> inds =
        cfg.indicator_names.empty() ? default_indicators(ctx) : cfg.indicator_names;

    CsvFile desc_csv, quart_csv, corr_csv, panel_csv;
    json descriptives = build_descriptives_block(ctx.data, &desc_csv);
    json quartiles = build_quartiles_block(ctx.data, default_quartile_indicators(ctx),
                                           scheme_of(cfg), &quart_csv);
    json correlations = build_corr_block(ctx.data, correlation_columns(ctx.data.table),
                                         cfg.listwise ? Completeness::listwise
                                                      : Completeness::pairwise,
                                         &corr_csv);
    json collinearity = build_collinearity_block(ctx.data);
    json panels = build_panels_block(ctx.data, cfg, inds, model_of(cfg), &panel_csv);

    json options = base_options(cfg);
    options["indicators"] = inds;
    options["model"] = cfg.model;
    options["scheme"] = cfg.scheme;
    json doc;
    doc["provenance"] = provenance_block(ctx.inputs, options, cfg.no_timestamp);
    doc["descriptives"] = std::move(descriptives);
    doc["quartiles"] = std::move(quartiles);
    doc["correlations"] = std::move(correlations);
    doc["collinearity"] = std::move(collinearity);
    doc["panels"] = panels["panels"];
    emit_report(cfg, "regress", doc, {desc_csv, quart_csv, corr_csv, panel_csv});
    return 0;
}

int run_critical_values(const RunConfig& cfg) {
    validate_config(cfg, false);
    json rows = json::array();
    CsvBuilder b;
    b.row({"statistic", "alpha", "threshold", "source", "n", "trials", "seed", "null_model"});
    CriticalValueTable published = published_critical_values();
    for (const auto& e : published.entries) {
        json r;
        r["statistic"] = statistic_name(e.statistic);
        r["alpha"] = e.alpha;
        r["threshold"] = e.threshold;
        r["source"] = "published";
        rows.push_back(r);
        b.row({statistic_name(e.statistic), fmt_num(e.alpha), fmt_num(e.threshold), "published",
               "", "", "", ""});
    }
    if (cfg.simulate) {
        for (Statistic s : {Statistic::chi_squared, Statistic::kuiper, Statistic::m_stat,
                            Statistic::d_stat}) {
            double thr = monte_carlo_critical_value(s, cfg.mc_n, cfg.alpha, cfg.mc_trials, cfg.seed);
            const char* null_model = default_null_model(s) == NullModel::continuous_uniform
                                         ? "continuous_uniform"
                                         : "benford_digits";
            json r;
            r["statistic"] = statistic_name(s);
            r["alpha"] = cfg.alpha;
            r["threshold"] = thr;
            r["source"] = "monte_carlo";
            r["n"] = cfg.mc_n;
            r["trials"] = cfg.mc_trials;
            r["seed"] = cfg.seed;
            r["null_model"] = null_model;
            rows.push_back(r);
            b.row({statistic_name(s), fmt_num(cfg.alpha), fmt_num(thr), "monte_carlo",
                   std::to_string(cfg.mc_n), std::to_string(cfg.mc_trials),
                   std::to_string(cfg.seed), null_model});
        }
    }
    json options = base_options(cfg);
    options["simulate"] = cfg.simulate;
    if (cfg.simulate) {
        options["n"] = cfg.mc_n;
        options["trials"] = cfg.mc_trials;
    }
    json doc;
    doc["provenance"] = provenance_block({}, options, cfg.no_timestamp);
    doc["critical_values"] = std::move(rows);
    CsvFile csv{"critical_values.csv", std::move(b.text)};
    emit_report(cfg, "critical_values", doc, {csv});
    return 0;
}

int run_report(const RunConfig& cfg) {
    validate_config(cfg, true);
    bool fixture_mode = cfg.use_appendix_a1 || cfg.state_mode;
    bool want_cross = fixture_mode || !cfg.indicators.empty();
    LoadContext ctx = load_context(cfg, true, want_cross);
    std::vector<std::string> inds =
        cfg.indicator_names.empty() ? default_indicators(ctx) : cfg.indicator_names;

    CsvFile cutoff_csv, gof_csv;
    json cutoffs = build_cutoff_block(ctx, cfg, &cutoff_csv);
    json gof = build_gof_block(ctx, cfg, &gof_csv);

    json doc;
    std::vector<CsvFile> csvs = {cutoff_csv, gof_csv};
    json options = base_options(cfg);
    options["indicators"] = inds;
    options["model"] = cfg.model;
    options["scheme"] = cfg.scheme;
    doc["provenance"] = provenance_block(ctx.inputs, options, cfg.no_timestamp);
    doc["cutoffs"] = std::move(cutoffs);
    doc["gof"] = std::move(gof);
    if (ctx.has_cross_section) {
        CsvFile desc_csv, quart_csv, corr_csv, panel_csv;
        doc["descriptives"] = build_descriptives_block(ctx.data, &desc_csv);
        doc["quartiles"] = build_quartiles_block(ctx.data, default_quartile_indicators(ctx),
                                                 scheme_of(cfg), &quart_csv);
        doc["correlations"] = build_corr_block(ctx.data, correlation_columns(ctx.data.table),
                                               cfg.listwise ? Completeness::listwise
                                                            : Completeness::pairwise,
                                               &corr_csv);
        doc["collinearity"] = build_collinearity_block(ctx.data);
        doc["panels"] = build_panels_block(ctx.data, cfg, inds, model_of(cfg), &panel_csv)["panels"];
        if (!fixture_mode) doc["join"] = join_diagnostics(ctx);
        csvs.insert(csvs.end(), {desc_csv, quart_csv, corr_csv, panel_csv});
    } else {
        doc["note"] = "no indicators supplied; cross-sectional blocks skipped";
    }
    emit_report(cfg, "report", doc, csvs);
    return 0;
}

} // namespace benford::cli

#include "benford/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "benford/csv.hpp"
#include "benford/errors.hpp"

#ifndef BENFORD_FIXTURES_DIR
#define BENFORD_FIXTURES_DIR "./fixtures"
#endif

namespace benford {

// --- checksums ------------------------------------------------------------

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error(ErrorKind::internal, "sha256 init failed");
    }
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx, buf, size_t(got)) != 1) {
            EVP_MD_CTX_free(ctx);
            throw Error(ErrorKind::internal, "sha256 update failed");
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    if (EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error(ErrorKind::internal, "sha256 final failed");
    }
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

void verify_fixture_checksum(const std::string& dir, const std::string& filename) {
    std::ifstream manifest(dir + "/checksums.sha256");
    if (!manifest) return; // unchecksummed user-supplied directory

    std::string line;
    while (std::getline(manifest, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t space = line.find(' ');
        if (space == std::string::npos) continue;
        std::string hash = line.substr(0, space);
        size_t name_at = line.find_first_not_of(" *", space);
        if (name_at == std::string::npos) continue;
        if (line.substr(name_at) != filename) continue;

        std::string actual = sha256_file(dir + "/" + filename);
        if (actual != hash)
            throw IntegrityError(filename + ": checksum mismatch (expected " + hash + ", got " +
                                 actual + ")");
        return;
    }
    throw IntegrityError(filename + ": no entry in " + dir + "/checksums.sha256");
}

std::string default_fixtures_dir() {
    if (const char* env = std::getenv("BENFORD_FIXTURES"); env && *env) return env;
    return BENFORD_FIXTURES_DIR;
}

// --- cell parsing helpers ---------------------------------------------------

namespace {

std::string cell_location(const CsvTable& t, size_t row, size_t col) {
    // +2: 1-based plus the header line
    return t.path + ":row " + std::to_string(row + 2) + ", column " + std::to_string(col + 1);
}

long long parse_int_cell(const CsvTable& t, size_t row, size_t col, const std::string& context) {
    const std::string& cell = t.rows[row][col];
    long long value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError(cell_location(t, row, col) + " (" + context + "): cannot parse '" +
                         cell + "' as an integer");
    return value;
}

std::optional<double> parse_opt_double_cell(const CsvTable& t, size_t row, size_t col,
                                            const std::string& context) {
    const std::string& cell = t.rows[row][col];
    if (cell.empty()) return std::nullopt;
    try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw ParseError(cell_location(t, row, col) + " (" + context + "): cannot parse '" +
                         cell + "' as a number");
    }
}

std::optional<long long> parse_opt_int_cell(const CsvTable& t, size_t row, size_t col,
                                            const std::string& context) {
    if (t.rows[row][col].empty()) return std::nullopt;
    return parse_int_cell(t, row, col, context);
}

int require_column(const CsvTable& t, const std::string& name) {
    int idx = t.column(name);
    if (idx < 0) throw ParseError(t.path + ": missing required column '" + name + "'");
    return idx;
}

void check_row_width(const CsvTable& t, size_t row) {
    if (t.rows[row].size() != t.header.size())
        throw ParseError(t.path + ":row " + std::to_string(row + 2) + ": has " +
                         std::to_string(t.rows[row].size()) + " cells, header has " +
                         std::to_string(t.header.size()));
}

} // namespace

// --- wide-format series ------------------------------------------------------

std::vector<EpidemicSeries> parse_jhu_wide(const std::string& path, Variable variable,
                                           bool regional) {
    CsvTable t = read_csv(path);
    const char* expected[] = {"Province/State", "Country/Region", "Lat", "Long"};
    if (t.header.size() < 5)
        throw ParseError(path + ": header too short for the wide series format");
    for (int i = 0; i < 4; ++i)
        if (t.header[size_t(i)] != expected[i])
            throw ParseError(path + ": malformed header, column " + std::to_string(i + 1) +
                             " is '" + t.header[size_t(i)] + "', expected '" + expected[i] + "'");

    std::vector<Date> dates;
    for (size_t c = 4; c < t.header.size(); ++c) {
        auto d = parse_mdy(t.header[c]);
        if (!d)
            throw ParseError(path + ": header column " + std::to_string(c + 1) + " ('" +
                             t.header[c] + "') is not an M/D/YY date");
        if (!dates.empty() && *d - dates.back() != Days{1})
            throw ParseError(path + ": date columns are not contiguous daily at '" +
                             t.header[c] + "'");
        dates.push_back(*d);
    }

    std::map<std::string, std::vector<long long>> totals;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        check_row_width(t, r);
        const std::string& province = t.rows[r][0];
        const std::string& country = t.rows[r][1];
        if (country.empty())
            throw ParseError(path + ":row " + std::to_string(r + 2) + ": empty Country/Region");
        std::string entity = regional && !province.empty() ? country + "/" + province : country;

        auto& acc = totals[entity];
        if (acc.empty()) acc.assign(dates.size(), 0);
        for (size_t c = 4; c < t.header.size(); ++c) {
            std::string context = "entity " + entity + ", date " + t.header[c];
            long long v = parse_int_cell(t, r, c, context);
            if (v < 0)
                throw ParseError(cell_location(t, r, c) + " (" + context +
                                 "): negative cumulative value");
            acc[c - 4] += v;
        }
    }

    std::vector<EpidemicSeries> out;
    out.reserve(totals.size());
    for (auto& [entity, values] : totals) {
        EpidemicSeries s;
        s.entity_id = entity;
        s.dates = dates;
        s.cumulative[variable] = std::move(values);
        s.validate();
        out.push_back(std::move(s));
    }
    return out; // std::map iteration already sorted by entity_id
}

std::string write_jhu_wide(const std::vector<EpidemicSeries>& series, Variable variable) {
    std::ostringstream out;
    out << "Province/State,Country/Region,Lat,Long";
    if (series.empty()) {
        out << "\n";
        return out.str();
    }
    const std::vector<Date>& dates = series.front().dates;
    for (const auto& s : series)
        if (s.dates != dates)
            throw DomainError("write_jhu_wide requires a shared date axis across entities");
    for (Date d : dates) out << ',' << to_mdy(d);
    out << '\n';
    for (const auto& s : series) {
        std::string country = s.entity_id, province;
        if (size_t slash = s.entity_id.find('/'); slash != std::string::npos) {
            country = s.entity_id.substr(0, slash);
            province = s.entity_id.substr(slash + 1);
        }
        out << csv_quote(province, false) << ',' << csv_quote(country, false) << ",0,0";
        const auto* values = s.variable(variable);
        if (!values)
            throw DomainError(s.entity_id + ": no " + std::string(variable_name(variable)) +
                              " series to serialize");
        for (long long v : *values) out << ',' << v;
        out << '\n';
    }
    return out.str();
}

// --- long-format tests series ------------------------------------------------

std::vector<EpidemicSeries> parse_tests_long(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"date", "entity", "cumulative_tests"})
        throw ParseError(path + ": expected header date,entity,cumulative_tests");

    std::map<std::string, std::vector<std::pair<Date, long long>>> by_entity;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        check_row_width(t, r);
        auto d = parse_iso(t.rows[r][0]);
        if (!d)
            throw ParseError(cell_location(t, r, 0) + ": cannot parse '" + t.rows[r][0] +
                             "' as an ISO date");
        long long v = parse_int_cell(t, r, 2, "entity " + t.rows[r][1]);
        if (v < 0)
            throw ParseError(cell_location(t, r, 2) + ": negative cumulative value");
        by_entity[t.rows[r][1]].emplace_back(*d, v);
    }

    std::vector<EpidemicSeries> out;
    for (auto& [entity, points] : by_entity) {
        std::sort(points.begin(), points.end());
        EpidemicSeries s;
        s.entity_id = entity;
        for (auto& [date, value] : points) {
            if (!s.dates.empty() && date == s.dates.back())
                throw ValidationError(path + ": duplicate date " + to_iso(date) + " for entity " +
                                      entity);
            s.dates.push_back(date);
            s.cumulative[Variable::tests].push_back(value);
        }
        s.validate(); // contiguity enforced here
        out.push_back(std::move(s));
    }
    return out;
}

void merge_series(std::vector<EpidemicSeries>& base, const std::vector<EpidemicSeries>& extra) {
    for (const auto& e : extra) {
        auto it = std::find_if(base.begin(), base.end(), [&](const EpidemicSeries& b) {
            return b.entity_id == e.entity_id;
        });
        if (it == base.end()) continue;
        for (const auto& [var, values] : e.cumulative) {
            std::vector<long long> aligned(it->dates.size(), 0);
            for (size_t i = 0; i < it->dates.size(); ++i) {
                Date d = it->dates[i];
                if (d < e.dates.front())
                    aligned[i] = 0;
                else if (d > e.dates.back())
                    aligned[i] = values.back(); // carry the final value forward
                else
                    aligned[i] = values[size_t((d - e.dates.front()).count())];
            }
            it->cumulative[var] = std::move(aligned);
        }
    }
}

// --- indicator tables ----------------------------------------------------------

namespace {

void check_range(const std::string& entity, const std::string& field, double v, double lo,
                 double hi, bool open) {
    bool bad = open ? (v <= lo || v >= hi) : (v < lo || v > hi);
    if (bad)
        throw ValidationError(entity + ": " + field + " = " + std::to_string(v) +
                              " outside the valid range");
}

void check_dummy(const std::string& entity, const std::string& field, long long v) {
    if (v != 0 && v != 1)
        throw ValidationError(entity + ": " + field + " must be 0 or 1, got " +
                              std::to_string(v));
}

// Applies one named cell onto a record; returns false for unknown names.
bool apply_indicator_field(IndicatorRecord& rec, const std::string& name, const CsvTable& t,
                           size_t row, size_t col) {
    const std::string& id = rec.entity_id;
    auto num = [&] { return parse_opt_double_cell(t, row, col, "entity " + id); };
    auto dummy = [&](const char* field) -> std::optional<int> {
        auto v = parse_opt_int_cell(t, row, col, "entity " + id);
        if (!v) return std::nullopt;
        check_dummy(id, field, *v);
        return int(*v);
    };

    if (name == "eiu") {
        if ((rec.eiu = num())) check_range(id, name, *rec.eiu, 0, 100, false);
    } else if (name == "elect") {
        if ((rec.elect = num())) check_range(id, name, *rec.elect, 0, 100, false);
    } else if (name == "gvmt") {
        if ((rec.gvmt = num())) check_range(id, name, *rec.gvmt, 0, 100, false);
    } else if (name == "part") {
        if ((rec.part = num())) check_range(id, name, *rec.part, 0, 100, false);
    } else if (name == "cult") {
        if ((rec.cult = num())) check_range(id, name, *rec.cult, 0, 100, false);
    } else if (name == "libert") {
        if ((rec.libert = num())) check_range(id, name, *rec.libert, 0, 100, false);
    } else if (name == "fh_av") {
        if ((rec.fh_av = num())) check_range(id, name, *rec.fh_av, 0, 100, false);
    } else if (name == "fh_dem") {
        rec.fh_dem = dummy("fh_dem");
    } else if (name == "gdp_per_capita") {
        if ((rec.gdp_per_capita = num()) && *rec.gdp_per_capita <= 0)
            throw ValidationError(id + ": gdp_per_capita must be positive");
    } else if (name == "he_gdp") {
        if ((rec.he_gdp = num())) check_range(id, name, *rec.he_gdp, 0, 100, true);
    } else if (name == "uhc") {
        if ((rec.uhc = num())) check_range(id, name, *rec.uhc, 0, 100, false);
    } else if (name == "population") {
        if ((rec.population = num()) && *rec.population <= 0)
            throw ValidationError(id + ": population must be positive");
    } else if (name == "population_mm") {
        if (auto mm = num(); mm && !rec.population) {
            if (*mm <= 0) throw ValidationError(id + ": population must be positive");
            rec.population = *mm * 1e6;
        }
    } else if (name == "won_rep") {
        rec.won_rep = dummy("won_rep");
    } else if (name == "senate_rep") {
        rec.senate_rep = dummy("senate_rep");
    } else if (name == "governor_rep") {
        rec.governor_rep = dummy("governor_rep");
    } else if (name == "has_province_data") {
        if (auto v = dummy("has_province_data")) rec.has_province_data = *v == 1;
    } else {
        return false;
    }
    return true;
}

} // namespace

std::vector<IndicatorRecord> parse_indicators(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header.empty()) throw ParseError(path + ": empty header");

    std::vector<IndicatorRecord> out;
    std::map<std::string, size_t> seen;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        check_row_width(t, r);
        IndicatorRecord rec;
        rec.entity_id = t.rows[r][0];
        if (rec.entity_id.empty())
            throw ValidationError(path + ":row " + std::to_string(r + 2) + ": empty entity id");
        if (!seen.emplace(rec.entity_id, r).second)
            throw ValidationError(path + ": duplicate entity '" + rec.entity_id + "'");
        for (size_t c = 1; c < t.header.size(); ++c)
            apply_indicator_field(rec, t.header[c], t, r, c); // unknown columns skipped
        out.push_back(std::move(rec));
    }
    return out;
}

void merge_indicator_fields(IndicatorRecord& dst, const IndicatorRecord& src) {
    auto fill = [](auto& a, const auto& b) {
        if (!a) a = b;
    };
    fill(dst.eiu, src.eiu);
    fill(dst.elect, src.elect);
    fill(dst.gvmt, src.gvmt);
    fill(dst.part, src.part);
    fill(dst.cult, src.cult);
    fill(dst.libert, src.libert);
    fill(dst.fh_av, src.fh_av);
    fill(dst.fh_dem, src.fh_dem);
    fill(dst.gdp_per_capita, src.gdp_per_capita);
    fill(dst.he_gdp, src.he_gdp);
    fill(dst.uhc, src.uhc);
    fill(dst.population, src.population);
    fill(dst.won_rep, src.won_rep);
    fill(dst.senate_rep, src.senate_rep);
    fill(dst.governor_rep, src.governor_rep);
    dst.has_province_data = dst.has_province_data || src.has_province_data;
}

// --- reference tables --------------------------------------------------------

namespace {

// Shared tail of both reference tables: cutoff, totals, and the per-variable
// day counts + statistics.
void parse_a1_tail(A1Row& row, const CsvTable& t, size_t r) {
    auto col = [&](const char* name) { return size_t(require_column(t, name)); };
    const std::string& id = row.indicators.entity_id;

    if (const std::string& cell = t.rows[r][col("cutoff")]; !cell.empty()) {
        row.cutoff = parse_iso(cell);
        if (!row.cutoff)
            throw ParseError(cell_location(t, r, col("cutoff")) + " (entity " + id +
                             "): bad ISO date '" + cell + "'");
    }
    row.total_confirmed = parse_opt_int_cell(t, r, col("total_confirmed"), "entity " + id);
    row.total_deaths = parse_opt_int_cell(t, r, col("total_deaths"), "entity " + id);
    row.days_confirmed =
        parse_opt_int_cell(t, r, col("days_confirmed"), "entity " + id).value_or(0);
    row.days_deaths = parse_opt_int_cell(t, r, col("days_deaths"), "entity " + id).value_or(0);

    auto gof = [&](Variable var, const char* chi, const char* kui, const char* m, const char* d,
                   long long n) -> std::optional<GofResult> {
        auto c = parse_opt_double_cell(t, r, col(chi), "entity " + id);
        auto k = parse_opt_double_cell(t, r, col(kui), "entity " + id);
        auto mm = parse_opt_double_cell(t, r, col(m), "entity " + id);
        auto dd = parse_opt_double_cell(t, r, col(d), "entity " + id);
        if (!c || !k || !mm || !dd) return std::nullopt;
        GofResult g;
        g.chi_squared = *c;
        g.kuiper = *k;
        g.m_stat = *mm;
        g.d_stat = *dd;
        g.n = n;
        g.position = 1;
        g.variable = var;
        return g;
    };
    row.gof_confirmed = gof(Variable::confirmed, "chi_confirmed", "kuiper_confirmed",
                            "m_confirmed", "d_confirmed", row.days_confirmed);
    row.gof_deaths = gof(Variable::deaths, "chi_deaths", "kuiper_deaths", "m_deaths", "d_deaths",
                         row.days_deaths);
}

A1Table load_reference_table(const std::string& dir, const std::string& filename,
                             const std::string& id_column, bool with_world) {
    verify_fixture_checksum(dir, filename);
    CsvTable t = read_csv(dir + "/" + filename);
    require_column(t, id_column);

    A1Table table;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        check_row_width(t, r);
        A1Row row;
        row.indicators.entity_id = t.rows[r][size_t(t.column(id_column))];
        for (size_t c = 0; c < t.header.size(); ++c)
            apply_indicator_field(row.indicators, t.header[c], t, r, c);
        parse_a1_tail(row, t, r);
        if (with_world && row.indicators.entity_id == "World")
            table.world = std::move(row);
        else
            table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace

A1Table load_appendix_a1(const std::string& fixtures_dir) {
    return load_reference_table(fixtures_dir, "appendix_a1.csv", "country", true);
}

A1Table load_appendix_a1_2(const std::string& fixtures_dir) {
    return load_reference_table(fixtures_dir, "appendix_a1_2.csv", "state", false);
}

std::vector<IndicatorRecord> load_fixture_indicators(const std::string& fixtures_dir,
                                                     const std::string& filename) {
    verify_fixture_checksum(fixtures_dir, filename);
    return parse_indicators(fixtures_dir + "/" + filename);
}

// --- joining -------------------------------------------------------------------

std::string normalize_entity(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (unsigned char c : name)
        if (std::isalnum(c)) out += char(std::tolower(c));
    return out;
}

std::string AliasTable::canonicalize(const std::string& raw_name) const {
    auto it = canonical_by_alias.find(normalize_entity(raw_name));
    return it == canonical_by_alias.end() ? raw_name : it->second;
}

AliasTable AliasTable::load(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"alias", "canonical"})
        throw ParseError(path + ": expected header alias,canonical");
    AliasTable table;
    for (size_t r = 0; r < t.rows.size(); ++r) {
        check_row_width(t, r);
        table.canonical_by_alias[normalize_entity(t.rows[r][0])] = t.rows[r][1];
    }
    return table;
}

AliasTable AliasTable::load_default(const std::string& fixtures_dir) {
    verify_fixture_checksum(fixtures_dir, "country_aliases.csv");
    return AliasTable::load(fixtures_dir + "/country_aliases.csv");
}

JoinResult join(const std::vector<EpidemicSeries>& series,
                const std::vector<IndicatorRecord>& indicators, const AliasTable& aliases) {
    auto key = [&](const std::string& raw) {
        return normalize_entity(aliases.canonicalize(raw));
    };

    std::map<std::string, size_t> indicator_by_key;
    for (size_t i = 0; i < indicators.size(); ++i) {
        if (!indicator_by_key.emplace(key(indicators[i].entity_id), i).second)
            throw ValidationError("indicator entities collide after normalization: '" +
                                  indicators[i].entity_id + "'");
    }

    JoinResult result;
    std::vector<bool> used(indicators.size(), false);
    for (const auto& s : series) {
        auto it = indicator_by_key.find(key(s.entity_id));
        if (it == indicator_by_key.end()) {
            result.unmatched_series.push_back(s.entity_id);
            continue;
        }
        used[it->second] = true;
        JoinedEntity j;
        j.series = s;
        j.indicators = indicators[it->second];
        result.joined.push_back(std::move(j));
    }
    for (size_t i = 0; i < indicators.size(); ++i)
        if (!used[i]) result.unmatched_indicators.push_back(indicators[i].entity_id);
    return result;
}

} // namespace benford

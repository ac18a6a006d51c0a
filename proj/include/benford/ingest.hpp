#ifndef BENFORD_INGEST_HPP
#define BENFORD_INGEST_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "benford/series.hpp"

namespace benford {

/// One entity's development indicators; absent fields were missing in the
/// input (regressions drop incomplete rows per fit, listwise).
struct IndicatorRecord {
    std::string entity_id;
    std::optional<double> eiu;        // democracy index, 0-100
    std::optional<double> elect, gvmt, part, cult, libert; // EIU components, 0-100
    std::optional<double> fh_av;      // aggregate freedom score
    std::optional<int> fh_dem;        // electoral-democracy dummy
    std::optional<double> gdp_per_capita;
    std::optional<double> he_gdp;     // health expenditure, % of GDP
    std::optional<double> uhc;        // health-coverage index, 0-100
    std::optional<double> population; // persons
    std::optional<int> won_rep, senate_rep, governor_rep; // state-politics dummies
    bool has_province_data = false;
};

/// A transcribed reference-table row: indicators plus the precomputed
/// digit statistics, day counts and cutoff for both monitored variables.
struct A1Row {
    IndicatorRecord indicators;
    std::optional<Date> cutoff;
    std::optional<long long> total_confirmed, total_deaths;
    long long days_confirmed = 0, days_deaths = 0;
    std::optional<GofResult> gof_confirmed, gof_deaths;
};

struct A1Table {
    std::vector<A1Row> rows;      // countries/states only
    std::optional<A1Row> world;   // aggregate row, kept out of cross-sections
};

/// SHA-256 of a file, lowercase hex. Throws ValidationError if unreadable.
std::string sha256_file(const std::string& path);

/// Verifies `filename` against `dir`/checksums.sha256 when that manifest
/// exists (mismatch or missing entry -> IntegrityError). A directory
/// without a manifest is treated as unchecksummed user data and skipped.
void verify_fixture_checksum(const std::string& dir, const std::string& filename);

/// Fixture directory: $BENFORD_FIXTURES when set, else the bundled path.
std::string default_fixtures_dir();

/// Wide-format cumulative series: header Province/State, Country/Region,
/// Lat, Long, then contiguous M/D/YY date columns. Aggregation mode sums
/// provinces into their country; regional mode keeps "Country/Province"
/// entities. Output is sorted by entity_id.
std::vector<EpidemicSeries> parse_jhu_wide(const std::string& path, Variable variable,
                                           bool regional = false);

/// Serializes series back to the wide format (inverse of parse_jhu_wide up
/// to the Lat/Long columns, which this pipeline does not retain).
std::string write_jhu_wide(const std::vector<EpidemicSeries>& series, Variable variable);

/// Long-format tests file: header date,entity,cumulative_tests. Each
/// entity's dates must be contiguous.
std::vector<EpidemicSeries> parse_tests_long(const std::string& path);

/// Adds `extra`'s variables into matching entities of `base` (aligned by
/// date; values before an extra series' range are 0, after it carry the
/// last value forward). Entities without a match are ignored.
void merge_series(std::vector<EpidemicSeries>& base, const std::vector<EpidemicSeries>& extra);

/// Generic indicator CSV: first column is the entity id, remaining headers
/// name IndicatorRecord fields (unknown columns are ignored). Empty cells
/// become absent values; out-of-range values raise ValidationError naming
/// the field; duplicate entities raise ValidationError.
std::vector<IndicatorRecord> parse_indicators(const std::string& path);

/// Fills dst's absent fields from src (first table wins on conflicts).
void merge_indicator_fields(IndicatorRecord& dst, const IndicatorRecord& src);

/// Bundled country reference table (185 rows + World), checksum-verified.
A1Table load_appendix_a1(const std::string& fixtures_dir = default_fixtures_dir());

/// Bundled US-state reference table, checksum-verified.
A1Table load_appendix_a1_2(const std::string& fixtures_dir = default_fixtures_dir());

/// Checksum-verified indicator fixture (e.g. eiu_components.csv).
std::vector<IndicatorRecord> load_fixture_indicators(const std::string& fixtures_dir,
                                                     const std::string& filename);

/// Case-folds and strips everything but letters and digits, so that
/// "Korea, South" and "korea south" collide deliberately.
std::string normalize_entity(const std::string& name);

/// alias -> canonical name table (both sides normalized on lookup).
struct AliasTable {
    std::map<std::string, std::string> canonical_by_alias; // normalized alias -> raw canonical
    std::string canonicalize(const std::string& raw_name) const;
    static AliasTable load(const std::string& path);
    static AliasTable load_default(const std::string& fixtures_dir = default_fixtures_dir());
};

struct JoinedEntity {
    EpidemicSeries series;
    IndicatorRecord indicators;
    std::map<std::string, GofResult> gof; // filled downstream; key "variable:position"
};

struct JoinResult {
    std::vector<JoinedEntity> joined;
    std::vector<std::string> unmatched_series;     // series entities with no indicators
    std::vector<std::string> unmatched_indicators; // indicator entities with no series
};

/// Inner join on normalized, alias-resolved entity names; mismatches are
/// reported, never fatal.
JoinResult join(const std::vector<EpidemicSeries>& series,
                const std::vector<IndicatorRecord>& indicators, const AliasTable& aliases);

} // namespace benford

#endif // BENFORD_INGEST_HPP

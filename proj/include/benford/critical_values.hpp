#ifndef BENFORD_CRITICAL_VALUES_HPP
#define BENFORD_CRITICAL_VALUES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "benford/gof.hpp"

namespace benford {

enum class Statistic { chi_squared, kuiper, m_stat, d_stat };

const char* statistic_name(Statistic s);
/// Accepts "chi"/"chi_squared", "kuiper", "m"/"m_stat", "d"/"d_stat".
Statistic statistic_from_name(const std::string& name);

/// Pulls the named statistic out of a GofResult.
double statistic_value(const GofResult& r, Statistic s);

/// Reference null for simulated thresholds. The published chi-squared/M/D
/// constants come from digit samples under the Benford law; the published
/// Kuiper constants are the classical continuous-uniform table (applied to
/// digit data they are conservative).
enum class NullModel { benford_digits, continuous_uniform };

/// The null each statistic's published table was derived under.
NullModel default_null_model(Statistic s);

enum class ThresholdSource { published, monte_carlo };

struct CriticalEntry {
    Statistic statistic;
    double alpha;    // significance level, e.g. 0.01
    double threshold;
    ThresholdSource source = ThresholdSource::published;
    long long trials = 0;  // monte_carlo only
    long long n = 0;       // monte_carlo only
    std::uint64_t seed = 0; // monte_carlo only
};

struct CriticalValueTable {
    std::vector<CriticalEntry> entries;

    void add(const CriticalEntry& e) { entries.push_back(e); }
    /// Threshold for (statistic, alpha); throws DomainError when absent.
    double threshold(Statistic s, double alpha) const;
    bool has(Statistic s, double alpha) const;
};

/// The published thresholds at the 1%, 5% and 10% levels.
CriticalValueTable published_critical_values();

/// Rejection depth of an observed statistic against a table carrying the
/// 1/5/10% levels: 3 when above the 1% threshold, 2 above 5%, 1 above 10%,
/// 0 otherwise.
int reject_level(const CriticalValueTable& table, Statistic s, double value);

/// Simulates `trials` null samples of size n and returns the empirical
/// (1 - alpha) quantile of the statistic (ascending order statistic at
/// 0-based index ceil((1-alpha)*trials) - 1). Deterministic in `seed`;
/// trial t uses its own generator seeded with splitmix64(seed ^ t), so the
/// result is independent of any sharding of the trial range.
///
/// `null_model` defaults per statistic (see default_null_model). The
/// continuous-uniform null is only defined for the Kuiper statistic;
/// requesting it for the others throws DomainError.
double monte_carlo_critical_value(Statistic s, long long n, double alpha, long long trials,
                                  std::uint64_t seed,
                                  std::optional<NullModel> null_model = std::nullopt);

} // namespace benford

#endif // BENFORD_CRITICAL_VALUES_HPP

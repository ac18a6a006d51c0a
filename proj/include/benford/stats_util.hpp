#ifndef BENFORD_STATS_UTIL_HPP
#define BENFORD_STATS_UTIL_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace benford::stats {

double mean(const std::vector<double>& v);

/// Sample standard deviation (n-1 denominator); requires n >= 2.
double sample_sd(const std::vector<double>& v);

/// Median of a copy of v (average of middle two for even n).
double median(std::vector<double> v);

/// Linear-interpolation percentile (the numpy default): index (n-1)p on the
/// sorted sample. `sorted_v` must be ascending. p in [0,1].
double percentile_linear(const std::vector<double>& sorted_v, double p);

/// (n+1)p percentile ("weibull" plotting position), clamped to the sample
/// range. Matches how published quartile tables were cut.
double percentile_weibull(const std::vector<double>& sorted_v, double p);

/// Survival function P(T >= t) of Student's t with (possibly fractional) df.
double student_t_sf(double t, double df);

/// Standard normal survival function P(Z >= z).
double normal_sf(double z);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_two = 1.0; // two-tailed
    double p_one = 0.5; // one-tailed, P(T >= |t|)
};

/// Welch two-sample t-test (unequal variances, Satterthwaite df).
/// Requires n >= 2 per sample and nonzero pooled variance.
WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

/// Significance stars for a p-value: 3 at 1%, 2 at 5%, 1 at 10%, else 0.
int stars(double p);

// --- deterministic random machinery -------------------------------------
// mt19937_64 scalar seeding and output are fully pinned by the standard;
// distributions are not, so sampling below is explicit inverse-CDF.

/// SplitMix64 scramble; used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in [0,1) with 53 random bits.
inline double u01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF draw from a discrete distribution given its cumulative
/// probabilities (ascending, last entry ~1). Returns an index in [0, size).
std::size_t sample_index(const std::vector<double>& cdf, std::mt19937_64& rng);

} // namespace benford::stats

#endif // BENFORD_STATS_UTIL_HPP

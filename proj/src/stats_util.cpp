#include "benford/stats_util.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "benford/errors.hpp"

namespace benford::stats {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw DomainError("mean of empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) throw DomainError("sample sd needs n >= 2");
    double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / double(v.size() - 1));
}

double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of empty sample");
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double percentile_linear(const std::vector<double>& sorted_v, double p) {
    if (sorted_v.empty()) throw DomainError("percentile of empty sample");
    if (p < 0.0 || p > 1.0) throw DomainError("percentile p outside [0,1]");
    double idx = p * double(sorted_v.size() - 1);
    size_t lo = size_t(std::floor(idx));
    size_t hi = size_t(std::ceil(idx));
    double frac = idx - double(lo);
    return sorted_v[lo] + frac * (sorted_v[hi] - sorted_v[lo]);
}

double percentile_weibull(const std::vector<double>& sorted_v, double p) {
    if (sorted_v.empty()) throw DomainError("percentile of empty sample");
    if (p < 0.0 || p > 1.0) throw DomainError("percentile p outside [0,1]");
    // plotting position k/(n+1): solve (n+1)p = k + frac, clamp to [1, n]
    double idx = p * double(sorted_v.size() + 1);
    if (idx <= 1.0) return sorted_v.front();
    if (idx >= double(sorted_v.size())) return sorted_v.back();
    size_t lo = size_t(std::floor(idx)) - 1; // 0-based
    double frac = idx - std::floor(idx);
    return sorted_v[lo] + frac * (sorted_v[lo + 1] - sorted_v[lo]);
}

double student_t_sf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("student t df must be positive");
    boost::math::students_t dist(df);
    return boost::math::cdf(boost::math::complement(dist, t));
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw SampleSizeError("welch t-test needs n >= 2 per sample");
    double ma = mean(a), mb = mean(b);
    double va = 0.0, vb = 0.0;
    for (double x : a) va += (x - ma) * (x - ma);
    for (double x : b) vb += (x - mb) * (x - mb);
    va /= double(a.size() - 1);
    vb /= double(b.size() - 1);
    double sa = va / double(a.size());
    double sb = vb / double(b.size());
    double denom = sa + sb;
    if (denom <= 0.0) {
        if (ma == mb) return {0.0, double(a.size() + b.size() - 2), 1.0, 0.5};
        throw DegenerateError("welch t-test: zero variance in both samples with unequal means");
    }
    WelchResult r;
    r.t = (ma - mb) / std::sqrt(denom);
    r.df = denom * denom /
           (sa * sa / double(a.size() - 1) + sb * sb / double(b.size() - 1));
    r.p_one = student_t_sf(std::fabs(r.t), r.df);
    r.p_two = 2.0 * r.p_one;
    return r;
}

int stars(double p) {
    if (p <= 0.01) return 3;
    if (p <= 0.05) return 2;
    if (p <= 0.10) return 1;
    return 0;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::size_t sample_index(const std::vector<double>& cdf, std::mt19937_64& rng) {
    double u = u01(rng);
    // first index whose cumulative probability exceeds u
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return cdf.size() - 1; // guard against fp round-off at 1.0
    return std::size_t(it - cdf.begin());
}

} // namespace benford::stats

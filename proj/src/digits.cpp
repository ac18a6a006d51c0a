#include "benford/digits.hpp"

#include <cmath>

#include "benford/errors.hpp"

namespace benford {

namespace {

void check_position(int position) {
    if (position != 1 && position != 2)
        throw DomainError("digit position must be 1 or 2, got " + std::to_string(position));
}

} // namespace

double benford_pmf(int position, int digit) {
    check_position(position);
    if (position == 1) {
        if (digit < 1 || digit > 9)
            throw DomainError("first-digit domain is 1..9, got " + std::to_string(digit));
        return std::log10(1.0 + 1.0 / double(digit));
    }
    if (digit < 0 || digit > 9)
        throw DomainError("second-digit domain is 0..9, got " + std::to_string(digit));
    // P(d2 = d) = sum over leading first digits k of log10(1 + 1/(10k + d))
    double p = 0.0;
    for (int k = 1; k <= 9; ++k) p += std::log10(1.0 + 1.0 / double(10 * k + digit));
    return p;
}

DigitDistribution DigitDistribution::for_position(int position) {
    check_position(position);
    DigitDistribution dist;
    dist.position = position;
    int first = dist.first_digit();
    dist.probabilities.resize(dist.domain_size());
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i)
        dist.probabilities[i] = benford_pmf(position, first + int(i));
    return dist;
}

std::optional<int> significant_digit(long long value, int position) {
    check_position(position);
    if (value < 1)
        throw DomainError("significant_digit requires a positive value, got " +
                          std::to_string(value));
    if (position == 2 && value < 10) return std::nullopt;
    // strip trailing digits until `position` digits remain
    long long v = value;
    long long limit = (position == 1) ? 10 : 100;
    while (v >= limit) v /= 10;
    return int(v % 10);
}

DigitHistogram build_histogram(const std::vector<long long>& values, int position) {
    check_position(position);
    DigitHistogram h;
    h.position = position;
    h.counts.assign(position == 1 ? 9 : 10, 0);
    int first = h.first_digit();
    for (long long v : values) {
        if (v < 1) continue; // zero/negative values carry no digit signal
        auto d = significant_digit(v, position);
        if (!d) continue;
        ++h.counts[size_t(*d - first)];
        ++h.total;
    }
    return h;
}

} // namespace benford

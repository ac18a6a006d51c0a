#ifndef BENFORD_DIGITS_HPP
#define BENFORD_DIGITS_HPP

#include <optional>
#include <vector>

namespace benford {

/// Theoretical Newcomb-Benford probabilities for one digit position.
/// Position 1 covers digits 1-9, position 2 covers digits 0-9.
struct DigitDistribution {
    int position = 1;
    std::vector<double> probabilities; // indexed from first_digit()

    int first_digit() const { return position == 1 ? 1 : 0; }
    std::size_t domain_size() const { return position == 1 ? 9 : 10; }

    /// Builds the exact distribution for a position. Throws DomainError
    /// unless position is 1 or 2.
    static DigitDistribution for_position(int position);
};

/// P(digit at `position` == `digit`). First digit: log10(1 + 1/d).
/// Second digit: sum over first digits k = 1..9 of log10(1 + 1/(10k + d)).
double benford_pmf(int position, int digit);

/// Observed counts over one digit position's domain.
struct DigitHistogram {
    int position = 1;
    std::vector<long long> counts; // 9 entries (digits 1-9) or 10 (digits 0-9)
    long long total = 0;           // invariant: equals sum of counts

    int first_digit() const { return position == 1 ? 1 : 0; }
};

/// Decimal digit of `value` at significant position 1 or 2, counted from the
/// left. Returns nullopt when the value is too short (position 2 on values
/// below 10). Throws DomainError on value < 1 or position outside {1,2}.
std::optional<int> significant_digit(long long value, int position);

/// Tallies significant_digit over `values`. Values below 1 and values with
/// no digit at the position are skipped, so total can be less than
/// values.size(); an empty histogram (total 0) is valid output.
DigitHistogram build_histogram(const std::vector<long long>& values, int position);

} // namespace benford

#endif // BENFORD_DIGITS_HPP

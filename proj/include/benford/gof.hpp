#ifndef BENFORD_GOF_HPP
#define BENFORD_GOF_HPP

#include <string>
#include <vector>

#include "benford/digits.hpp"

namespace benford {

/// Which cumulative series a result was computed from.
enum class Variable { confirmed, deaths, cured, tests };

const char* variable_name(Variable v);
/// Parses "confirmed"/"deaths"/"cured"/"tests"; throws DomainError otherwise.
Variable variable_from_name(const std::string& name);

/// The four digit-conformance statistics for one sample.
struct GofResult {
    double chi_squared = 0.0;
    double kuiper = 0.0;
    double m_stat = 0.0;
    double d_stat = 0.0;
    long long n = 0; // histogram total the statistics were computed from
    int position = 1;
    Variable variable = Variable::confirmed;
};

/// Pearson chi-squared against expected counts E_d = N * P(d).
double chi_squared(const DigitHistogram& h, const DigitDistribution& dist);

/// Kuiper statistic with the Stephens finite-sample factor:
/// V = (D+ + D-) * (sqrt(N) + 0.155 + 0.24/sqrt(N)), where D+ and D- are the
/// signed suprema of F_N - F_0 over the digit cdf points.
double kuiper(const DigitHistogram& h, const DigitDistribution& dist);

/// max_d |o_d - e_d| * sqrt(N) on proportions.
double m_stat(const DigitHistogram& h, const DigitDistribution& dist);

/// sqrt(N * sum_d (o_d - e_d)^2) on proportions.
double d_stat(const DigitHistogram& h, const DigitDistribution& dist);

/// Histogram the values once and compute all four statistics.
/// Throws UndefinedStatisticError (carrying n = 0) when no value is usable.
GofResult gof_all(const std::vector<long long>& values, int position,
                  Variable variable = Variable::confirmed);

/// The four statistics straight from a histogram (total >= 1 required).
GofResult gof_from_histogram(const DigitHistogram& h, Variable variable = Variable::confirmed);

} // namespace benford

#endif // BENFORD_GOF_HPP

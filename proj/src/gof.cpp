#include "benford/gof.hpp"

#include <cmath>

#include "benford/errors.hpp"

namespace benford {

const char* variable_name(Variable v) {
    switch (v) {
        case Variable::confirmed: return "confirmed";
        case Variable::deaths: return "deaths";
        case Variable::cured: return "cured";
        case Variable::tests: return "tests";
    }
    return "?";
}

Variable variable_from_name(const std::string& name) {
    if (name == "confirmed") return Variable::confirmed;
    if (name == "deaths") return Variable::deaths;
    if (name == "cured") return Variable::cured;
    if (name == "tests") return Variable::tests;
    throw DomainError("unknown variable: " + name);
}

namespace {

void check_pair(const DigitHistogram& h, const DigitDistribution& dist) {
    if (h.position != dist.position)
        throw DomainError("histogram position " + std::to_string(h.position) +
                          " does not match distribution position " +
                          std::to_string(dist.position));
    if (h.counts.size() != dist.probabilities.size())
        throw DomainError("histogram/distribution domain size mismatch");
    if (h.total < 1)
        throw UndefinedStatisticError("statistic undefined on empty histogram", h.total);
}

} // namespace

double chi_squared(const DigitHistogram& h, const DigitDistribution& dist) {
    check_pair(h, dist);
    double n = double(h.total);
    double stat = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        double expected = n * dist.probabilities[i];
        double diff = double(h.counts[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

double kuiper(const DigitHistogram& h, const DigitDistribution& dist) {
    check_pair(h, dist);
    double n = double(h.total);
    double fn = 0.0, f0 = 0.0, dplus = 0.0, dminus = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        fn += double(h.counts[i]) / n;
        f0 += dist.probabilities[i];
        dplus = std::max(dplus, fn - f0);
        dminus = std::max(dminus, f0 - fn);
    }
    double root = std::sqrt(n);
    return (dplus + dminus) * (root + 0.155 + 0.24 / root);
}

double m_stat(const DigitHistogram& h, const DigitDistribution& dist) {
    check_pair(h, dist);
    double n = double(h.total);
    double worst = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        worst = std::max(worst, std::fabs(double(h.counts[i]) / n - dist.probabilities[i]));
    return worst * std::sqrt(n);
}

double d_stat(const DigitHistogram& h, const DigitDistribution& dist) {
    check_pair(h, dist);
    double n = double(h.total);
    double ss = 0.0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        double diff = double(h.counts[i]) / n - dist.probabilities[i];
        ss += diff * diff;
    }
    return std::sqrt(n * ss);
}

GofResult gof_from_histogram(const DigitHistogram& h, Variable variable) {
    DigitDistribution dist = DigitDistribution::for_position(h.position);
    GofResult r;
    r.chi_squared = chi_squared(h, dist);
    r.kuiper = kuiper(h, dist);
    r.m_stat = m_stat(h, dist);
    r.d_stat = d_stat(h, dist);
    r.n = h.total;
    r.position = h.position;
    r.variable = variable;
    return r;
}

GofResult gof_all(const std::vector<long long>& values, int position, Variable variable) {
    DigitHistogram h = build_histogram(values, position);
    if (h.total < 1)
        throw UndefinedStatisticError("no usable values for digit position " +
                                          std::to_string(position),
                                      0);
    return gof_from_histogram(h, variable);
}

} // namespace benford

#ifndef BENFORD_REGRESS_HPP
#define BENFORD_REGRESS_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "benford/critical_values.hpp"

namespace benford {

/// Column-oriented analysis dataset; absent cells are missing values.
struct DataTable {
    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    int column_index(const std::string& name) const;
    const std::vector<std::optional<double>>& column(const std::string& name) const;
    void add_column(const std::string& name, std::vector<std::optional<double>> values);
};

enum class Model { ols, logit };

/// One cross-sectional fit: response ~ indicator + fixed controls.
struct RegressionSpec {
    std::string response;
    std::string indicator;
    std::vector<std::string> controls;      // e.g. {"ln_population", "days_confirmed"}
    std::vector<std::string> scaled_by_100; // regressors divided by 100 before fitting
    Model model = Model::ols;
};

struct RegressionResult {
    std::vector<std::string> term_names; // intercept, indicator, controls...
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<double> t_stats;
    std::vector<double> one_tailed_p; // P(T >= |t|)
    double adj_r_squared = 0.0;       // McFadden pseudo-R2 for logit
    long long n = 0;
    long long dropped_rows = 0;
    bool quasi_separation = false; // logit only: IRLS failed to converge
};

/// OLS via Householder QR with classical standard errors; one-tailed
/// p-values P(T_{n-k} >= |t|); adjusted R-squared. Listwise deletion.
/// Throws SingularityError (naming collinear columns) or SampleSizeError.
RegressionResult ols(const RegressionSpec& spec, const DataTable& data);

/// Logistic fit by iteratively reweighted least squares (step tolerance
/// 1e-8, 100 iteration cap). Wald one-tailed p from the normal tail.
/// Throws DegenerateError when the response has no variation and
/// SeparationError on perfect separation; quasi-separation (divergence
/// without perfect separation) is flagged on the result instead.
RegressionResult logit(const RegressionSpec& spec, const DataTable& data);

struct CorrelationCell {
    double r = 1.0;
    long long n = 0;
    double p_two = 0.0;
    bool defined = true; // false for constant columns or n < 3
};

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<CorrelationCell>> cells; // square, symmetric
};

/// Row filter for pearson_matrix: pairwise uses each pair's complete rows,
/// listwise restricts to rows complete on every requested column first.
enum class Completeness { pairwise, listwise };

/// Pearson correlations with two-tailed t-test p-values.
CorrelationMatrix pearson_matrix(const DataTable& data, const std::vector<std::string>& cols,
                                 Completeness completeness = Completeness::pairwise);

struct ColumnSummary {
    std::string name;
    long long n = 0;
    double mean = 0.0, min = 0.0, median = 0.0, max = 0.0, sd = 0.0;
    bool has_sd = false; // false when n < 2
    // Rejection depth (3/2/1/0) against published critical values; -1 for
    // columns that are not goodness-of-fit statistics.
    int mean_level = -1, median_level = -1, max_level = -1;
};

/// Per-column n/mean/min/median/max/sample-sd. Columns listed in
/// `gof_columns` are additionally flagged against the published critical
/// values at the 1/5/10% levels.
std::vector<ColumnSummary> descriptive_stats(const DataTable& data,
                                             const std::vector<std::string>& cols,
                                             const std::map<std::string, Statistic>& gof_columns = {});

/// How quartile boundaries are drawn from the indicator sample.
enum class QuartileScheme {
    linear_tie_down, // linear-interpolation percentiles, boundary values stay low
    weibull_tie_up   // (n+1)p percentiles, boundary values open the upper quartile
};

struct QuartileSummary {
    std::string indicator, gof;
    std::array<double, 4> means{};     // Smallest, Q2, Q3, Largest
    std::array<long long, 4> sizes{};  // rows with the gof value present
    double welch_t = 0.0, p_two = 1.0, p_one = 0.5;
    int stars = 0; // smallest-vs-largest significance (two-tailed)
};

/// Partitions entities by indicator quartile and contrasts the smallest
/// against the largest quartile's gof mean with a Welch t-test.
QuartileSummary quartile_contrast(const DataTable& data, const std::string& indicator,
                                  const std::string& gof,
                                  QuartileScheme scheme = QuartileScheme::linear_tie_down);

struct TTestResult {
    double t = 0.0, df = 0.0, p_two = 1.0;
    int stars = 0;
};

/// Welch two-sample t-test on two columns of observations.
TTestResult mean_difference_test(const std::vector<double>& a, const std::vector<double>& b);

/// Condition number of a design matrix given as equal-length columns
/// (include the intercept column when the design has one): columns are
/// scaled to unit Euclidean norm, then kappa = sigma_max / sigma_min.
/// Returns +infinity for rank-deficient designs.
double condition_number(const std::vector<std::vector<double>>& columns);

} // namespace benford

#endif // BENFORD_REGRESS_HPP

#include "benford/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "benford/errors.hpp"
#include "benford/stats_util.hpp"

namespace benford {

int DataTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return int(i);
    return -1;
}

const std::vector<std::optional<double>>& DataTable::column(const std::string& name) const {
    int idx = column_index(name);
    if (idx < 0) throw DomainError("no such column: " + name);
    return columns[size_t(idx)];
}

void DataTable::add_column(const std::string& name, std::vector<std::optional<double>> values) {
    if (!columns.empty() && values.size() != rows())
        throw DomainError("column " + name + " length mismatch");
    if (column_index(name) >= 0) throw DomainError("duplicate column: " + name);
    names.push_back(name);
    columns.push_back(std::move(values));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Listwise design assembly shared by ols and logit. Terms: intercept,
// indicator, controls. Returns X, y and the retained row count.
struct Design {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::vector<std::string> term_names;
    long long n = 0, dropped = 0;
};

Design build_design(const RegressionSpec& spec, const DataTable& data) {
    std::vector<const std::vector<std::optional<double>>*> cols;
    Design d;
    d.term_names.push_back("intercept");
    cols.push_back(&data.column(spec.indicator));
    d.term_names.push_back(spec.indicator);
    for (const auto& c : spec.controls) {
        cols.push_back(&data.column(c));
        d.term_names.push_back(c);
    }
    const auto& response = data.column(spec.response);

    std::vector<size_t> keep;
    for (size_t r = 0; r < data.rows(); ++r) {
        bool complete = response[r].has_value();
        for (const auto* c : cols) complete = complete && (*c)[r].has_value();
        if (complete) keep.push_back(r);
    }
    d.n = (long long)keep.size();
    d.dropped = (long long)data.rows() - d.n;

    size_t k = 1 + cols.size();
    d.X.resize(long(keep.size()), long(k));
    d.y.resize(long(keep.size()));
    auto scale = [&](const std::string& name) {
        return std::count(spec.scaled_by_100.begin(), spec.scaled_by_100.end(), name) ? 0.01
                                                                                      : 1.0;
    };
    for (size_t i = 0; i < keep.size(); ++i) {
        d.X(long(i), 0) = 1.0;
        for (size_t j = 0; j < cols.size(); ++j)
            d.X(long(i), long(j + 1)) = *(*cols[j])[keep[i]] * scale(d.term_names[j + 1]);
        d.y(long(i)) = *response[keep[i]];
    }
    return d;
}

// Names the design columns beyond the numerical rank (in pivot order).
std::string collinear_columns(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr,
                              const std::vector<std::string>& term_names) {
    std::string out;
    const auto& perm = qr.colsPermutation().indices();
    for (long j = qr.rank(); j < perm.size(); ++j) {
        if (!out.empty()) out += ", ";
        out += term_names[size_t(perm[j])];
    }
    return out;
}

// t statistic and one-tailed p with guards for a saturated (zero-residual) fit.
void fill_t_p(double beta, double se, double df, double* t, double* p, bool normal_tail) {
    if (se > 0.0 && std::isfinite(se)) {
        *t = beta / se;
        *p = normal_tail ? stats::normal_sf(std::fabs(*t))
                         : stats::student_t_sf(std::fabs(*t), df);
    } else if (beta == 0.0) {
        *t = 0.0;
        *p = 0.5;
    } else {
        *t = beta > 0 ? kInf : -kInf;
        *p = 0.0;
    }
}

} // namespace

RegressionResult ols(const RegressionSpec& spec, const DataTable& data) {
    Design d = build_design(spec, data);
    long k = d.X.cols();
    if (d.n <= k)
        throw SampleSizeError("ols: " + std::to_string(d.n) + " complete rows for " +
                              std::to_string(k) + " parameters");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    if (qr.rank() < k)
        throw SingularityError("ols: rank-deficient design, collinear columns: " +
                               collinear_columns(qr, d.term_names));

    Eigen::VectorXd beta = qr.solve(d.y);
    Eigen::VectorXd resid = d.y - d.X * beta;
    double rss = resid.squaredNorm();
    double df = double(d.n - k);
    double sigma2 = rss / df;

    // (X'X)^{-1} = (P R^{-1})(P R^{-1})' with X = Q R P'
    Eigen::MatrixXd rinv = qr.matrixR()
                               .topLeftCorner(k, k)
                               .triangularView<Eigen::Upper>()
                               .solve(Eigen::MatrixXd::Identity(k, k));
    Eigen::MatrixXd w = qr.colsPermutation() * rinv;

    double ymean = d.y.mean();
    double tss = (d.y.array() - ymean).square().sum();
    double r2 = tss > 0.0 ? 1.0 - rss / tss : 1.0;

    RegressionResult out;
    out.term_names = d.term_names;
    out.n = d.n;
    out.dropped_rows = d.dropped;
    out.adj_r_squared = 1.0 - (1.0 - r2) * double(d.n - 1) / df;
    for (long j = 0; j < k; ++j) {
        double se = std::sqrt(sigma2 * w.row(j).squaredNorm());
        double t = 0.0, p = 0.5;
        fill_t_p(beta(j), se, df, &t, &p, false);
        out.coefficients.push_back(beta(j));
        out.standard_errors.push_back(se);
        out.t_stats.push_back(t);
        out.one_tailed_p.push_back(p);
    }
    return out;
}

RegressionResult logit(const RegressionSpec& spec, const DataTable& data) {
    Design d = build_design(spec, data);
    long k = d.X.cols();
    if (d.n <= k)
        throw SampleSizeError("logit: " + std::to_string(d.n) + " complete rows for " +
                              std::to_string(k) + " parameters");

    long ones = 0;
    for (long i = 0; i < d.y.size(); ++i) {
        if (d.y(i) != 0.0 && d.y(i) != 1.0)
            throw DomainError("logit response must be a 0/1 dummy");
        ones += long(d.y(i));
    }
    if (ones == 0 || ones == d.y.size())
        throw DegenerateError("logit: response has no variation");

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    bool converged = false;
    Eigen::VectorXd mu(d.n), eta(d.n);
    for (int iter = 0; iter < 100; ++iter) {
        eta = d.X * beta;
        mu = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
        Eigen::ArrayXd w = (mu.array() * (1.0 - mu.array())).max(1e-10);
        Eigen::VectorXd z = eta.array() + (d.y.array() - mu.array()) / w;
        Eigen::MatrixXd xw = w.sqrt().matrix().asDiagonal() * d.X;
        Eigen::VectorXd zw = w.sqrt().matrix().asDiagonal() * z;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
        if (qr.rank() < k)
            throw SingularityError("logit: rank-deficient weighted design, collinear columns: " +
                                   collinear_columns(qr, d.term_names));
        Eigen::VectorXd next = qr.solve(zw);
        double step = (next - beta).cwiseAbs().maxCoeff();
        beta = next;
        if (step < 1e-8) {
            converged = true;
            break;
        }
    }

    // Perfect separation: the linear predictor classifies every row with
    // margin, so the likelihood has no finite maximizer.
    eta = d.X * beta;
    bool separated = true;
    for (long i = 0; i < d.n; ++i) {
        double signed_eta = (d.y(i) > 0.5 ? 1.0 : -1.0) * eta(i);
        if (signed_eta < 10.0) {
            separated = false;
            break;
        }
    }
    if (separated) throw SeparationError("logit: perfect separation, estimates diverge");

    mu = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
    Eigen::ArrayXd w = (mu.array() * (1.0 - mu.array())).max(1e-10);
    Eigen::MatrixXd info = d.X.transpose() * w.matrix().asDiagonal() * d.X;
    Eigen::MatrixXd cov = info.llt().solve(Eigen::MatrixXd::Identity(k, k));

    double llf = 0.0;
    for (long i = 0; i < d.n; ++i)
        llf += d.y(i) > 0.5 ? std::log(std::max(mu(i), 1e-300))
                            : std::log(std::max(1.0 - mu(i), 1e-300));
    double p1 = double(ones) / double(d.n);
    double llnull = double(ones) * std::log(p1) + double(d.n - ones) * std::log(1.0 - p1);

    RegressionResult out;
    out.term_names = d.term_names;
    out.n = d.n;
    out.dropped_rows = d.dropped;
    out.quasi_separation = !converged;
    out.adj_r_squared = 1.0 - llf / llnull; // McFadden pseudo-R2
    for (long j = 0; j < k; ++j) {
        double se = std::sqrt(std::max(cov(j, j), 0.0));
        double t = 0.0, p = 0.5;
        fill_t_p(beta(j), se, 0.0, &t, &p, true);
        out.coefficients.push_back(beta(j));
        out.standard_errors.push_back(se);
        out.t_stats.push_back(t);
        out.one_tailed_p.push_back(p);
    }
    return out;
}

namespace {

CorrelationCell pearson_cell(const std::vector<std::optional<double>>& a,
                             const std::vector<std::optional<double>>& b,
                             const std::vector<bool>* row_mask) {
    double sx = 0, sy = 0;
    long long n = 0;
    for (size_t r = 0; r < a.size(); ++r) {
        if (!a[r] || !b[r] || (row_mask && !(*row_mask)[r])) continue;
        sx += *a[r];
        sy += *b[r];
        ++n;
    }
    CorrelationCell cell;
    cell.n = n;
    if (n < 3) {
        cell.defined = false;
        cell.r = kNaN;
        cell.p_two = kNaN;
        return cell;
    }
    double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, syy = 0, sxy = 0;
    for (size_t r = 0; r < a.size(); ++r) {
        if (!a[r] || !b[r] || (row_mask && !(*row_mask)[r])) continue;
        double dx = *a[r] - mx, dy = *b[r] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        cell.defined = false;
        cell.r = kNaN;
        cell.p_two = kNaN;
        return cell;
    }
    cell.r = sxy / std::sqrt(sxx * syy);
    double df = double(n - 2);
    double denom = 1.0 - cell.r * cell.r;
    if (denom <= 0.0) {
        cell.p_two = 0.0;
    } else {
        double t = std::fabs(cell.r) * std::sqrt(df / denom);
        cell.p_two = 2.0 * stats::student_t_sf(t, df);
    }
    return cell;
}

} // namespace

CorrelationMatrix pearson_matrix(const DataTable& data, const std::vector<std::string>& cols,
                                 Completeness completeness) {
    CorrelationMatrix m;
    m.names = cols;
    std::vector<const std::vector<std::optional<double>>*> columns;
    for (const auto& c : cols) columns.push_back(&data.column(c));

    std::vector<bool> mask;
    const std::vector<bool>* mask_ptr = nullptr;
    if (completeness == Completeness::listwise) {
        mask.assign(data.rows(), true);
        for (size_t r = 0; r < data.rows(); ++r)
            for (const auto* c : columns)
                if (!(*c)[r]) {
                    mask[r] = false;
                    break;
                }
        mask_ptr = &mask;
    }

    m.cells.assign(cols.size(), std::vector<CorrelationCell>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) {
        for (size_t j = i; j < cols.size(); ++j) {
            CorrelationCell cell = pearson_cell(*columns[i], *columns[j], mask_ptr);
            if (i == j && cell.defined) {
                cell.r = 1.0;
                cell.p_two = 0.0;
            }
            m.cells[i][j] = cell;
            m.cells[j][i] = cell;
        }
    }
    return m;
}

std::vector<ColumnSummary> descriptive_stats(const DataTable& data,
                                             const std::vector<std::string>& cols,
                                             const std::map<std::string, Statistic>& gof_columns) {
    CriticalValueTable published = published_critical_values();
    std::vector<ColumnSummary> out;
    for (const auto& name : cols) {
        const auto& col = data.column(name);
        std::vector<double> values;
        for (const auto& v : col)
            if (v) values.push_back(*v);

        ColumnSummary s;
        s.name = name;
        s.n = (long long)values.size();
        if (values.empty()) {
            s.mean = s.min = s.median = s.max = kNaN;
            s.sd = kNaN;
            out.push_back(s);
            continue;
        }
        s.mean = stats::mean(values);
        s.median = stats::median(values);
        auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        s.min = *lo;
        s.max = *hi;
        if (values.size() >= 2) {
            s.sd = stats::sample_sd(values);
            s.has_sd = true;
        } else {
            s.sd = kNaN;
        }
        if (auto it = gof_columns.find(name); it != gof_columns.end()) {
            s.mean_level = reject_level(published, it->second, s.mean);
            s.median_level = reject_level(published, it->second, s.median);
            s.max_level = reject_level(published, it->second, s.max);
        }
        out.push_back(s);
    }
    return out;
}

QuartileSummary quartile_contrast(const DataTable& data, const std::string& indicator,
                                  const std::string& gof, QuartileScheme scheme) {
    const auto& ind = data.column(indicator);
    const auto& resp = data.column(gof);

    // Quartile boundaries come from every entity with the indicator; rows
    // missing the gof value drop out of the group means only.
    std::vector<double> base;
    long long complete = 0;
    for (size_t r = 0; r < data.rows(); ++r) {
        if (ind[r]) base.push_back(*ind[r]);
        if (ind[r] && resp[r]) ++complete;
    }
    if (complete < 8)
        throw SampleSizeError("quartile_contrast: need >= 8 complete rows, have " +
                              std::to_string(complete));
    std::vector<double> sorted = base;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        throw DegenerateError("quartile_contrast: indicator " + indicator + " is constant");

    double cuts[3];
    for (int i = 0; i < 3; ++i) {
        double p = 0.25 * double(i + 1);
        cuts[i] = scheme == QuartileScheme::weibull_tie_up ? stats::percentile_weibull(sorted, p)
                                                           : stats::percentile_linear(sorted, p);
    }
    auto bucket = [&](double v) {
        int q = 0;
        for (double c : cuts)
            if (scheme == QuartileScheme::weibull_tie_up ? v >= c : v > c) ++q;
        return q;
    };

    std::array<std::vector<double>, 4> groups;
    for (size_t r = 0; r < data.rows(); ++r)
        if (ind[r] && resp[r]) groups[size_t(bucket(*ind[r]))].push_back(*resp[r]);

    QuartileSummary s;
    s.indicator = indicator;
    s.gof = gof;
    for (int q = 0; q < 4; ++q) {
        s.sizes[size_t(q)] = (long long)groups[size_t(q)].size();
        s.means[size_t(q)] = groups[size_t(q)].empty() ? kNaN : stats::mean(groups[size_t(q)]);
    }
    if (groups[0].size() < 2 || groups[3].size() < 2)
        throw SampleSizeError("quartile_contrast: smallest/largest quartile too small for a "
                              "two-sample test");
    stats::WelchResult w = stats::welch_t(groups[0], groups[3]);
    s.welch_t = w.t;
    s.p_two = w.p_two;
    s.p_one = w.p_one;
    s.stars = stats::stars(w.p_two);
    return s;
}

TTestResult mean_difference_test(const std::vector<double>& a, const std::vector<double>& b) {
    stats::WelchResult w = stats::welch_t(a, b);
    return {w.t, w.df, w.p_two, stats::stars(w.p_two)};
}

double condition_number(const std::vector<std::vector<double>>& columns) {
    if (columns.empty() || columns.front().empty())
        throw DomainError("condition_number: empty design");
    size_t n = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != n) throw DomainError("condition_number: ragged design");

    Eigen::MatrixXd x(long(n), long(columns.size()));
    for (size_t j = 0; j < columns.size(); ++j) {
        double norm = 0.0;
        for (double v : columns[j]) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return kInf; // zero column: rank-deficient by definition
        for (size_t i = 0; i < n; ++i) x(long(i), long(j)) = columns[j][i] / norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
    double smax = svd.singularValues().maxCoeff();
    double smin = svd.singularValues().minCoeff();
    if (smin <= smax * 1e-13) return kInf;
    return smax / smin;
}

} // namespace benford

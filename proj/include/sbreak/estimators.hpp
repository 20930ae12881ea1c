#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sbreak/core.hpp"

namespace sbreak::est {

// Tuning of the mildly integrated instrument, root 1 - c_z / n^delta.
struct IvxSpec {
    double c_z = 1.0;
    double delta = 0.95;

    void validate() const;
    double root(std::size_t n) const;
};

// Least-squares (or instrumented) fit on a half-open row range.
struct SegmentFit {
    Range range;
    std::optional<double> intercept;
    double slope = 0.0;
    std::vector<double> residuals;
    double rss = 0.0;
    double sigma2_hat = 0.0; // rss / length, matching the scan convention
    bool degenerate = false; // pseudo-inverse fallback was taken

    double fitted(double xi) const { return (intercept ? *intercept : 0.0) + slope * xi; }
};

// OLS on [range.lo, range.hi): slope = sum(xy)/sum(xx) without intercept,
// two-parameter least squares with it.
SegmentFit ols_segment(std::span<const double> y, std::span<const double> x, Range range,
                       bool with_intercept);

// Filters the level series x into a mildly integrated instrument:
// z[0] = x[1] - x[0], z[t] = root * z[t-1] + (x[t+1] - x[t]). Returns
// x.size() - 1 values; the root uses n = x.size().
std::vector<double> ivx_filter(std::span<const double> x, const IvxSpec& spec);

// Estimator-side instrument: the one-period lag of the filter with a leading
// zero, i.e. Z[0] = 0 and Z[t] = root * Z[t-1] + (x[t] - x[t-1]). Same length
// as x and exactly the column the split-sample statistics consume.
std::vector<double> ivx_instrument(std::span<const double> x, const IvxSpec& spec);

enum class IvxForm {
    CrossProduct,   // slope = (sum zx)^-1 (sum zy); residuals against x
    SelfNormalized, // slope = sum(yz)/sum(zz); residuals against z
};

SegmentFit ivx_segment(std::span<const double> y, std::span<const double> x,
                       std::span<const double> z, Range range, bool with_intercept,
                       IvxForm form = IvxForm::CrossProduct);

// Bartlett-kernel long-run variance of a residual series:
// omega = sigma2 + 2 * lambda with weights 1 - j/(M+1), j = 1..M.
struct LrvEstimate {
    double sigma2 = 0.0;
    double lambda = 0.0;
    double omega = 0.0;
    int bandwidth = 0;
};

LrvEstimate lrv_bartlett(std::span<const double> residuals, int bandwidth);

// floor(4 (n/100)^{2/9}), the usual rule of thumb.
int default_bartlett_bandwidth(std::size_t n);

// Unit-root t-statistic sqrt(sum y_{t-1}^2) * (beta_hat - 1) from the
// full-sample no-intercept AR(1) fit.
double df_t_statistic(std::span<const double> y);

} // namespace sbreak::est

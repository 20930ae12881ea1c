#include "sbreak/estimators.hpp"

#include <cmath>
#include <sstream>

namespace sbreak::est {

namespace {

void check_range(std::span<const double> y, std::span<const double> x, Range r,
                 bool with_intercept) {
    if (y.size() != x.size()) throw ParameterError("segment fit: y and x lengths differ");
    if (r.hi > y.size() || r.lo >= r.hi) throw ParameterError("segment fit: range out of bounds");
    const std::size_t min_len = with_intercept ? 3 : 2;
    if (r.length() < min_len) {
        std::ostringstream os;
        os << "segment fit: range [" << r.lo << ", " << r.hi << ") shorter than " << min_len;
        throw ParameterError(os.str());
    }
}

void finalize(SegmentFit& fit, std::span<const double> y, std::span<const double> x) {
    fit.residuals.resize(fit.range.length());
    long double rss = 0.0L;
    for (std::size_t i = fit.range.lo; i < fit.range.hi; ++i) {
        const double r = y[i] - fit.fitted(x[i]);
        fit.residuals[i - fit.range.lo] = r;
        rss += static_cast<long double>(r) * r;
    }
    fit.rss = static_cast<double>(rss);
    fit.sigma2_hat = fit.rss / static_cast<double>(fit.range.length());
}

} // namespace

void IvxSpec::validate() const {
    if (!(c_z > 0.0)) throw ParameterError("IvxSpec.c_z must be > 0");
    if (!(delta > 0.0) || !(delta < 1.0)) throw ParameterError("IvxSpec.delta must lie in (0, 1)");
}

double IvxSpec::root(std::size_t n) const {
    return 1.0 - c_z / std::pow(static_cast<double>(n), delta);
}

SegmentFit ols_segment(std::span<const double> y, std::span<const double> x, Range range,
                       bool with_intercept) {
    check_range(y, x, range, with_intercept);
    const std::size_t len = range.length();

    long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
    for (std::size_t i = range.lo; i < range.hi; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }

    SegmentFit fit;
    fit.range = range;
    if (with_intercept) {
        const long double n = static_cast<long double>(len);
        const long double det = n * sxx - sx * sx;
        if (!(det > 0.0L)) {
            std::ostringstream os;
            os << "ols_segment: constant regressor on [" << range.lo << ", " << range.hi << ")";
            throw DegenerateSegmentError(os.str());
        }
        const long double b = (n * sxy - sx * sy) / det;
        fit.slope = static_cast<double>(b);
        fit.intercept = static_cast<double>((sy - b * sx) / n);
    } else {
        if (!(sxx > 0.0L)) {
            std::ostringstream os;
            os << "ols_segment: zero regressor on [" << range.lo << ", " << range.hi << ")";
            throw DegenerateSegmentError(os.str());
        }
        fit.slope = static_cast<double>(sxy / sxx);
    }
    finalize(fit, y, x);
    return fit;
}

std::vector<double> ivx_filter(std::span<const double> x, const IvxSpec& spec) {
    spec.validate();
    if (x.size() < 2) throw ParameterError("ivx_filter: x must have length >= 2");
    const double r = spec.root(x.size());
    std::vector<double> z(x.size() - 1);
    double prev = 0.0;
    for (std::size_t t = 0; t + 1 < x.size(); ++t) {
        prev = r * prev + (x[t + 1] - x[t]);
        z[t] = prev;
    }
    return z;
}

std::vector<double> ivx_instrument(std::span<const double> x, const IvxSpec& spec) {
    spec.validate();
    if (x.size() < 2) throw ParameterError("ivx_instrument: x must have length >= 2");
    const double r = spec.root(x.size());
    std::vector<double> z(x.size());
    z[0] = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) z[t] = r * z[t - 1] + (x[t] - x[t - 1]);
    return z;
}

SegmentFit ivx_segment(std::span<const double> y, std::span<const double> x,
                       std::span<const double> z, Range range, bool with_intercept,
                       IvxForm form) {
    if (z.size() != x.size()) throw ParameterError("ivx_segment: z and x lengths differ");
    if (form == IvxForm::SelfNormalized) {
        // least squares of y on the instrument itself
        return ols_segment(y, z, range, with_intercept);
    }
    check_range(y, x, range, with_intercept);
    const std::size_t len = range.length();

    long double sx = 0.0L, sy = 0.0L, sz = 0.0L, szx = 0.0L, szy = 0.0L;
    long double xx_scale = 0.0L, zz_scale = 0.0L;
    for (std::size_t i = range.lo; i < range.hi; ++i) {
        sx += x[i];
        sy += y[i];
        sz += z[i];
        szx += static_cast<long double>(z[i]) * x[i];
        szy += static_cast<long double>(z[i]) * y[i];
        xx_scale += static_cast<long double>(x[i]) * x[i];
        zz_scale += static_cast<long double>(z[i]) * z[i];
    }

    SegmentFit fit;
    fit.range = range;
    const long double scale = std::sqrt(xx_scale * zz_scale);
    if (with_intercept) {
        const long double n = static_cast<long double>(len);
        const long double det = n * szx - sz * sx;
        const long double det_scale =
            std::sqrt((n * zz_scale - sz * sz) * (n * xx_scale - sx * sx));
        if (std::fabs(static_cast<double>(det)) <=
            kPinvTolerance * std::max(1.0, static_cast<double>(det_scale))) {
            fit.degenerate = true;
            fit.slope = 0.0;
            fit.intercept = static_cast<double>(sy / n);
        } else {
            const long double b = (n * szy - sz * sy) / det;
            fit.slope = static_cast<double>(b);
            fit.intercept = static_cast<double>((sy - b * sx) / n);
        }
    } else {
        if (std::fabs(static_cast<double>(szx)) <=
            kPinvTolerance * std::max(1.0, static_cast<double>(scale))) {
            fit.degenerate = true;
            fit.slope = 0.0;
        } else {
            fit.slope = static_cast<double>(szy / szx);
        }
    }
    finalize(fit, y, x);
    return fit;
}

LrvEstimate lrv_bartlett(std::span<const double> residuals, int bandwidth) {
    const std::size_t n = residuals.size();
    if (n == 0) throw ParameterError("lrv_bartlett: empty residuals");
    if (bandwidth < 0 || static_cast<std::size_t>(bandwidth) >= n)
        throw ParameterError("lrv_bartlett: bandwidth must lie in [0, n)");

    long double s0 = 0.0L;
    for (double r : residuals) s0 += static_cast<long double>(r) * r;

    long double lambda = 0.0L;
    for (int j = 1; j <= bandwidth; ++j) {
        long double gj = 0.0L;
        for (std::size_t t = static_cast<std::size_t>(j); t < n; ++t)
            gj += static_cast<long double>(residuals[t]) * residuals[t - j];
        const long double w = 1.0L - static_cast<long double>(j) / (bandwidth + 1);
        lambda += w * gj;
    }

    LrvEstimate out;
    out.sigma2 = static_cast<double>(s0 / n);
    out.lambda = static_cast<double>(lambda / n);
    out.omega = out.sigma2 + 2.0 * out.lambda;
    out.bandwidth = bandwidth;
    return out;
}

int default_bartlett_bandwidth(std::size_t n) {
    return static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

double df_t_statistic(std::span<const double> y) {
    if (y.size() < 10) throw ParameterError("df_t_statistic: series must have length >= 10");
    long double num = 0.0L, den = 0.0L;
    for (std::size_t t = 1; t < y.size(); ++t) {
        num += static_cast<long double>(y[t]) * y[t - 1];
        den += static_cast<long double>(y[t - 1]) * y[t - 1];
    }
    if (!(den > 0.0L)) throw DegenerateSegmentError("df_t_statistic: degenerate series");
    const long double beta = num / den;
    return static_cast<double>(std::sqrt(den) * (beta - 1.0L));
}

} // namespace sbreak::est

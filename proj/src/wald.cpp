#include "sbreak/wald.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "prefix.hpp"

namespace sbreak::wald {

namespace {

using Eigen::Matrix2d;
using Eigen::Vector2d;
using sbreak::detail::SegmentSums;

Matrix2d pinv2(const Matrix2d& m, bool* degenerate) {
    Eigen::JacobiSVD<Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = kPinvTolerance * sv(0);
    Matrix2d inv_s = Matrix2d::Zero();
    for (int i = 0; i < 2; ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) {
            inv_s(i, i) = 1.0 / sv(i);
        } else if (degenerate) {
            *degenerate = true;
        }
    }
    return svd.matrixV() * inv_s * svd.matrixU().transpose();
}

Matrix2d inv2(const Matrix2d& m, bool* degenerate) {
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double scale = m.cwiseAbs().maxCoeff();
    if (std::fabs(det) > kPinvTolerance * scale * scale && det != 0.0) {
        Matrix2d out;
        out << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        return out / det;
    }
    return pinv2(m, degenerate);
}

// Per-regime two-parameter least squares from segment sums; returns the
// coefficients and the segment residual sum of squares.
struct RegimeOls {
    Vector2d coef = Vector2d::Zero(); // (intercept, slope)
    double rss = 0.0;
};

RegimeOls regime_ols(const SegmentSums& s, bool with_intercept, bool* degenerate) {
    RegimeOls out;
    const double n = static_cast<double>(s.n);
    if (with_intercept) {
        Matrix2d m;
        m << n, static_cast<double>(s.sx), static_cast<double>(s.sx),
            static_cast<double>(s.sxx);
        Vector2d rhs(static_cast<double>(s.sy), static_cast<double>(s.sxy));
        out.coef = inv2(m, degenerate) * rhs;
    } else {
        if (s.sxx > 0.0L) {
            out.coef(1) = static_cast<double>(s.sxy / s.sxx);
        } else if (degenerate) {
            *degenerate = true;
        }
    }
    const double a = out.coef(0);
    const double b = out.coef(1);
    out.rss = static_cast<double>(s.syy) + n * a * a + b * b * static_cast<double>(s.sxx) -
              2.0 * a * static_cast<double>(s.sy) - 2.0 * b * static_cast<double>(s.sxy) +
              2.0 * a * b * static_cast<double>(s.sx);
    return out;
}

double ols_stat(const SegmentSums& s1, const SegmentSums& s2, StabilityMode mode,
                bool* degenerate) {
    const bool joint = mode == StabilityMode::Joint;
    const RegimeOls f1 = regime_ols(s1, joint, degenerate);
    const RegimeOls f2 = regime_ols(s2, joint, degenerate);
    const double n = static_cast<double>(s1.n + s2.n);
    const double sigma2 = (f1.rss + f2.rss) / n;
    if (!(sigma2 > 0.0)) return 0.0;

    if (joint) {
        Matrix2d m1, m2;
        m1 << static_cast<double>(s1.n), static_cast<double>(s1.sx),
            static_cast<double>(s1.sx), static_cast<double>(s1.sxx);
        m2 << static_cast<double>(s2.n), static_cast<double>(s2.sx),
            static_cast<double>(s2.sx), static_cast<double>(s2.sxx);
        const Matrix2d v = inv2(m1, degenerate) + inv2(m2, degenerate);
        const Vector2d d = f1.coef - f2.coef;
        return d.dot(inv2(v, degenerate) * d) / sigma2;
    }
    const double sxx1 = static_cast<double>(s1.sxx);
    const double sxx2 = static_cast<double>(s2.sxx);
    if (!(sxx1 > 0.0) || !(sxx2 > 0.0)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    const double d = f1.coef(1) - f2.coef(1);
    const double v = 1.0 / sxx1 + 1.0 / sxx2;
    return d * d / (sigma2 * v);
}

double iv_stat(const SegmentSums& s1, const SegmentSums& s2, StabilityMode mode,
               bool* degenerate) {
    const bool joint = mode == StabilityMode::Joint;
    // pooled residual variance from the unrestricted two-regime least squares
    const RegimeOls f1 = regime_ols(s1, joint, degenerate);
    const RegimeOls f2 = regime_ols(s2, joint, degenerate);
    const double n = static_cast<double>(s1.n + s2.n);
    const double sigma2 = (f1.rss + f2.rss) / n;
    if (!(sigma2 > 0.0)) return 0.0;

    if (joint) {
        auto regime = [&](const SegmentSums& s, Vector2d& b, Matrix2d& q) {
            Matrix2d m; // X'Z with columns (1, z) and rows (1, x)
            m << static_cast<double>(s.n), static_cast<double>(s.sz),
                static_cast<double>(s.sx), static_cast<double>(s.szx);
            Matrix2d g; // Z'Z
            g << static_cast<double>(s.n), static_cast<double>(s.sz),
                static_cast<double>(s.sz), static_cast<double>(s.szz);
            const Matrix2d minv = inv2(m, degenerate);
            b = minv.transpose() * Vector2d(static_cast<double>(s.sy),
                                            static_cast<double>(s.szy));
            q = minv.transpose() * g * minv;
        };
        Vector2d b1, b2;
        Matrix2d q1, q2;
        regime(s1, b1, q1);
        regime(s2, b2, q2);
        const Vector2d d = b1 - b2;
        return d.dot(inv2(q1 + q2, degenerate) * d) / sigma2;
    }

    auto regime1d = [&](const SegmentSums& s, double& b, double& q) {
        const double m = static_cast<double>(s.szx);
        if (std::fabs(m) <=
            kPinvTolerance * std::sqrt(static_cast<double>(s.szz * s.sxx))) {
            if (degenerate) *degenerate = true;
            b = 0.0;
            q = 0.0;
            return;
        }
        b = static_cast<double>(s.szy) / m;
        q = static_cast<double>(s.szz) / (m * m);
    };
    double b1, q1, b2, q2;
    regime1d(s1, b1, q1);
    regime1d(s2, b2, q2);
    const double q = q1 + q2;
    if (!(q > 0.0)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    const double d = b1 - b2;
    return d * d / (sigma2 * q);
}

SegmentSums direct_sums(std::span<const double> y, std::span<const double> x,
                        std::span<const double> z, std::size_t lo, std::size_t hi) {
    SegmentSums s;
    s.n = static_cast<long double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        const long double xi = x[i];
        const long double yi = y[i];
        s.sx += xi;
        s.sy += yi;
        s.sxx += xi * xi;
        s.sxy += xi * yi;
        s.syy += yi * yi;
        if (!z.empty()) {
            const long double zi = z[i];
            s.sz += zi;
            s.szx += zi * xi;
            s.szy += zi * yi;
            s.szz += zi * zi;
        }
    }
    return s;
}

void check_point(std::span<const double> y, std::span<const double> x, std::size_t k) {
    if (y.size() != x.size()) throw ParameterError("wald: y and x lengths differ");
    if (k < 1 || k >= y.size()) throw ParameterError("wald: split k out of range");
}

} // namespace

double wald_ols_at(std::span<const double> y, std::span<const double> x, std::size_t k,
                   StabilityMode mode, bool* degenerate) {
    check_point(y, x, k);
    const auto s1 = direct_sums(y, x, {}, 0, k);
    const auto s2 = direct_sums(y, x, {}, k, y.size());
    return ols_stat(s1, s2, mode, degenerate);
}

double wald_iv_at(std::span<const double> y, std::span<const double> x,
                  std::span<const double> z, std::size_t k, StabilityMode mode,
                  bool* degenerate) {
    check_point(y, x, k);
    if (z.size() != x.size()) throw ParameterError("wald: z and x lengths differ");
    const auto s1 = direct_sums(y, x, z, 0, k);
    const auto s2 = direct_sums(y, x, z, k, y.size());
    return iv_stat(s1, s2, mode, degenerate);
}

double wald_ivx_at(std::span<const double> y, std::span<const double> x, std::size_t k,
                   const est::IvxSpec& spec, StabilityMode mode, bool* degenerate) {
    const auto z = est::ivx_instrument(x, spec);
    return wald_iv_at(y, x, z, k, mode, degenerate);
}

WaldScan sup_wald_scan(std::span<const double> y, std::span<const double> x, Method method,
                       StabilityMode mode, const bp::TrimSpec& trim, const est::IvxSpec& ivx) {
    if (y.size() != x.size()) throw ParameterError("sup_wald_scan: y and x lengths differ");
    trim.validate();
    const std::size_t m = y.size();
    if (m < 8) throw ParameterError("sup_wald_scan: sample too short");

    std::vector<double> z;
    if (method == Method::Ivx) z = est::ivx_instrument(x, ivx);

    detail::CumTable cum;
    cum.build(y, x, z);

    WaldScan out;
    out.method = method;

    auto eval = [&](double pi, std::size_t k) {
        const auto s1 = cum.segment(0, k);
        const auto s2 = cum.segment(k, m);
        bool deg = false;
        const double w = method == Method::Ols ? ols_stat(s1, s2, mode, &deg)
                                               : iv_stat(s1, s2, mode, &deg);
        out.any_degenerate = out.any_degenerate || deg;
        out.grid.push_back(pi);
        out.ks.push_back(k);
        out.stats.push_back(w);
    };

    const std::size_t guard = mode == StabilityMode::Joint ? 2 : 1;
    if (trim.exhaustive()) {
        std::size_t k_lo = static_cast<std::size_t>(
            std::ceil(trim.pi0 * static_cast<double>(m)));
        std::size_t k_hi = m - k_lo;
        k_lo = std::max(k_lo, guard);
        k_hi = std::min(k_hi, m - guard);
        for (std::size_t k = k_lo; k <= k_hi; ++k)
            eval(static_cast<double>(k) / static_cast<double>(m), k);
    } else {
        const double step = *trim.grid_step;
        const auto count =
            static_cast<std::size_t>(std::floor((1.0 - 2.0 * trim.pi0) / step + 1e-9));
        for (std::size_t j = 0; j <= count; ++j) {
            const double pi = trim.pi0 + static_cast<double>(j) * step;
            std::size_t k = static_cast<std::size_t>(
                std::floor(pi * static_cast<double>(m) + 1e-9));
            k = std::clamp<std::size_t>(k, guard, m - guard);
            eval(pi, k);
        }
    }

    if (out.stats.empty()) throw ParameterError("sup_wald_scan: empty candidate grid");
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.stats.size(); ++i) {
        if (out.stats[i] > out.stats[best]) best = i;
    }
    out.sup_value = out.stats[best];
    out.argmax_k = out.ks[best];
    return out;
}

} // namespace sbreak::wald

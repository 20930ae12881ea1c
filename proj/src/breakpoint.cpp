#include "sbreak/breakpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "prefix.hpp"

namespace sbreak::bp {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

// Segment criterion value; nullopt signals a degenerate segment. Exact fits
// can round slightly below zero, so the value is clamped.
std::optional<long double> segment_rss(const detail::SegmentSums& s, Method method,
                                       bool with_intercept, IvxResidualBasis basis) {
    const bool on_instrument = method == Method::Ivx && basis == IvxResidualBasis::Instrument;
    const long double rx = on_instrument ? s.sz : s.sx;
    const long double rxx = on_instrument ? s.szz : s.sxx;
    const long double rxy = on_instrument ? s.szy : s.sxy;

    if (method == Method::Ols || on_instrument) {
        if (with_intercept) {
            const long double det = s.n * rxx - rx * rx;
            if (!(det > 0.0L)) return std::nullopt;
            const long double b = (s.n * rxy - rx * s.sy) / det;
            const long double a = (s.sy - b * rx) / s.n;
            return std::max(0.0L, s.syy + s.n * a * a + b * b * rxx - 2.0L * a * s.sy -
                                      2.0L * b * rxy + 2.0L * a * b * rx);
        }
        if (!(rxx > 0.0L)) return (s.syy > 0.0L) ? std::optional<long double>{} : 0.0L;
        return std::max(0.0L, s.syy - rxy * rxy / rxx);
    }

    // cross-product slope, residuals against x
    if (with_intercept) {
        const long double det = s.n * s.szx - s.sz * s.sx;
        if (det == 0.0L) return std::nullopt;
        const long double b = (s.n * s.szy - s.sz * s.sy) / det;
        const long double a = (s.sy - b * s.sx) / s.n;
        return std::max(0.0L, s.syy + s.n * a * a + b * b * s.sxx - 2.0L * a * s.sy -
                                  2.0L * b * s.sxy + 2.0L * a * b * s.sx);
    }
    if (s.szx == 0.0L) return std::nullopt;
    const long double b = s.szy / s.szx;
    return std::max(0.0L, s.syy - 2.0L * b * s.sxy + b * b * s.sxx);
}

struct Evaluator {
    detail::CumTable cum;
    Method method;
    bool with_intercept;
    IvxResidualBasis basis;
    std::size_t rows;

    long double split_total(std::size_t lo, std::size_t k, std::size_t hi) const {
        const auto left = segment_rss(cum.segment(lo, k), method, with_intercept, basis);
        if (!left) return kInf;
        const auto right = segment_rss(cum.segment(k, hi), method, with_intercept, basis);
        if (!right) return kInf;
        return *left + *right;
    }

    long double whole(std::size_t lo, std::size_t hi) const {
        const auto v = segment_rss(cum.segment(lo, hi), method, with_intercept, basis);
        return v ? *v : kInf;
    }
};

// Candidate splits of [lo, hi): every admissible integer when exhaustive,
// otherwise floor(lo + pi * (hi - lo)) over the fraction grid, deduplicated.
// The small nudge keeps floor() stable when pi * len sits on an integer.
std::vector<std::size_t> candidate_splits(std::size_t lo, std::size_t hi, const TrimSpec& trim,
                                          std::size_t min_len) {
    std::vector<std::size_t> ks;
    if (hi - lo < 2 * min_len) return ks;
    const std::size_t k_lo = lo + min_len;
    const std::size_t k_hi = hi - min_len;
    if (k_lo > k_hi) return ks;
    if (trim.exhaustive()) {
        for (std::size_t k = k_lo; k <= k_hi; ++k) ks.push_back(k);
        return ks;
    }
    const double len = static_cast<double>(hi - lo);
    const double step = *trim.grid_step;
    const auto count =
        static_cast<std::size_t>(std::floor((1.0 - 2.0 * trim.pi0) / step + 1e-9));
    auto push = [&](double pi) {
        std::size_t k = lo + static_cast<std::size_t>(std::floor(pi * len + 1e-9));
        k = std::clamp(k, k_lo, k_hi);
        if (ks.empty() || k != ks.back()) ks.push_back(k);
    };
    for (std::size_t j = 0; j <= count; ++j) push(trim.pi0 + static_cast<double>(j) * step);
    // keep the upper trim endpoint when the step does not land on it
    if (trim.pi0 + static_cast<double>(count) * step < 1.0 - trim.pi0 - 1e-12)
        push(1.0 - trim.pi0);
    return ks;
}

struct ScanResult {
    bool found = false;
    std::size_t best_k = 0;
    long double best_total = kInf;
    std::vector<RssPoint> profile;
};

ScanResult scan_splits(const Evaluator& eval, std::size_t lo, std::size_t hi,
                       const TrimSpec& trim, std::size_t min_len, bool keep_profile) {
    ScanResult res;
    const auto ks = candidate_splits(lo, hi, trim, min_len);
    if (keep_profile) res.profile.reserve(ks.size());
    for (std::size_t k : ks) {
        const long double total = eval.split_total(lo, k, hi);
        if (total == kInf) continue;
        if (keep_profile)
            res.profile.push_back(
                {k, static_cast<double>(k) / static_cast<double>(eval.rows),
                 static_cast<double>(total)});
        if (total < res.best_total) {
            res.best_total = total;
            res.best_k = k;
            res.found = true;
        }
    }
    return res;
}

est::SegmentFit criterion_fit(std::span<const double> y, std::span<const double> x,
                              std::span<const double> z, Range r, Method method,
                              bool with_intercept, IvxResidualBasis basis) {
    if (method == Method::Ols) return est::ols_segment(y, x, r, with_intercept);
    if (basis == IvxResidualBasis::Instrument)
        return est::ivx_segment(y, x, z, r, with_intercept, est::IvxForm::SelfNormalized);
    return est::ivx_segment(y, x, z, r, with_intercept, est::IvxForm::CrossProduct);
}

Evaluator make_evaluator(std::span<const double> y, std::span<const double> x,
                         std::span<const double> z, Method method, bool with_intercept,
                         IvxResidualBasis basis) {
    Evaluator eval;
    eval.cum.build(y, x, z);
    eval.method = method;
    eval.with_intercept = with_intercept;
    eval.basis = basis;
    eval.rows = y.size();
    return eval;
}

std::vector<double> maybe_instrument(std::span<const double> x, Method method,
                                     const IvxOptions& ivx) {
    if (method != Method::Ivx) return {};
    return est::ivx_instrument(x, ivx.spec);
}

void check_inputs(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size()) throw ParameterError("break estimation: y and x lengths differ");
    if (y.size() < 4) throw ParameterError("break estimation: sample too short");
}

} // namespace

void TrimSpec::validate() const {
    if (!(pi0 > 0.0) || !(pi0 < 0.5)) throw ParameterError("TrimSpec.pi0 must lie in (0, 0.5)");
    if (grid_step && (!(*grid_step > 0.0) || !(*grid_step <= pi0)))
        throw ParameterError("TrimSpec.grid_step must lie in (0, pi0]");
}

std::size_t min_segment_length(std::size_t n, double pi0, bool with_intercept) {
    const auto trim_len =
        static_cast<std::size_t>(std::ceil(pi0 * static_cast<double>(n)));
    return std::max<std::size_t>(trim_len, with_intercept ? 4 : 3);
}

double rss_split(std::span<const double> y, std::span<const double> x, std::size_t k,
                 Method method, bool with_intercept, const IvxOptions& ivx) {
    check_inputs(y, x);
    const std::size_t m = y.size();
    const std::size_t min_len = with_intercept ? 3 : 2;
    if (k < min_len) {
        std::ostringstream os;
        os << "rss_split: left segment [0, " << k << ") shorter than " << min_len;
        throw ParameterError(os.str());
    }
    if (m - k < min_len) {
        std::ostringstream os;
        os << "rss_split: right segment [" << k << ", " << m << ") shorter than " << min_len;
        throw ParameterError(os.str());
    }
    const auto z = maybe_instrument(x, method, ivx);
    const auto left = criterion_fit(y, x, z, {0, k}, method, with_intercept, ivx.basis);
    const auto right = criterion_fit(y, x, z, {k, m}, method, with_intercept, ivx.basis);
    return left.rss + right.rss;
}

BreakEstimate estimate_single_break(std::span<const double> y, std::span<const double> x,
                                    const TrimSpec& trim, Method method, bool with_intercept,
                                    const IvxOptions& ivx) {
    check_inputs(y, x);
    trim.validate();
    const std::size_t m = y.size();
    const std::size_t min_len = min_segment_length(m, trim.pi0, with_intercept);

    const auto z = maybe_instrument(x, method, ivx);
    const Evaluator eval = make_evaluator(y, x, z, method, with_intercept, ivx.basis);

    if (candidate_splits(0, m, trim, min_len).empty())
        throw ParameterError("estimate_single_break: sample too short for the trim window");
    const auto scan = scan_splits(eval, 0, m, trim, min_len, true);
    if (!scan.found)
        throw DegenerateSegmentError("estimate_single_break: every candidate split degenerate");

    BreakEstimate out;
    out.k_hat = {scan.best_k};
    out.tau_hat = {static_cast<double>(scan.best_k) / static_cast<double>(m)};
    out.rss_profile = std::move(scan.profile);
    out.fits.push_back(
        criterion_fit(y, x, z, {0, scan.best_k}, method, with_intercept, ivx.basis));
    out.fits.push_back(
        criterion_fit(y, x, z, {scan.best_k, m}, method, with_intercept, ivx.basis));
    out.delta_hat = out.fits[0].slope - out.fits[1].slope;
    return out;
}

BreakEstimate estimate_two_breaks_sequential(std::span<const double> y,
                                             std::span<const double> x, const TrimSpec& trim,
                                             Method method, bool with_intercept,
                                             const IvxOptions& ivx) {
    BreakEstimate first = estimate_single_break(y, x, trim, method, with_intercept, ivx);
    const std::size_t m = y.size();
    const std::size_t ka = first.k_hat[0];

    const auto z = maybe_instrument(x, method, ivx);
    const Evaluator eval = make_evaluator(y, x, z, method, with_intercept, ivx.basis);

    // second-pass scans on each side, trimmed relative to the subsample
    const std::size_t min_left = min_segment_length(ka, trim.pi0, with_intercept);
    const std::size_t min_right = min_segment_length(m - ka, trim.pi0, with_intercept);
    const auto left = scan_splits(eval, 0, ka, trim, min_left, false);
    const auto right = scan_splits(eval, ka, m, trim, min_right, false);

    const long double left_total =
        left.found ? left.best_total + eval.whole(ka, m) : kInf;
    const long double right_total =
        right.found ? eval.whole(0, ka) + right.best_total : kInf;

    if (!left.found && !right.found) {
        first.downgraded = true;
        return first;
    }

    std::size_t k1, k2;
    if (left_total <= right_total) {
        k1 = left.best_k;
        k2 = ka;
    } else {
        k1 = ka;
        k2 = right.best_k;
    }

    BreakEstimate out;
    out.k_hat = {k1, k2};
    out.tau_hat = {static_cast<double>(k1) / static_cast<double>(m),
                   static_cast<double>(k2) / static_cast<double>(m)};
    out.rss_profile = std::move(first.rss_profile);
    out.fits.push_back(criterion_fit(y, x, z, {0, k1}, method, with_intercept, ivx.basis));
    out.fits.push_back(criterion_fit(y, x, z, {k1, k2}, method, with_intercept, ivx.basis));
    out.fits.push_back(criterion_fit(y, x, z, {k2, m}, method, with_intercept, ivx.basis));
    out.delta_hat = out.fits[0].slope - out.fits[1].slope;
    return out;
}

BreakEstimate estimate_single_break(const dgp::Dataset& data, dgp::Model model,
                                    const TrimSpec& trim, Method method, bool with_intercept,
                                    const IvxOptions& ivx) {
    const auto frame = dgp::make_regression_frame(data, model);
    return estimate_single_break(frame.y, frame.x, trim, method, with_intercept, ivx);
}

BreakEstimate estimate_two_breaks_sequential(const dgp::Dataset& data, dgp::Model model,
                                             const TrimSpec& trim, Method method,
                                             bool with_intercept, const IvxOptions& ivx) {
    const auto frame = dgp::make_regression_frame(data, model);
    return estimate_two_breaks_sequential(frame.y, frame.x, trim, method, with_intercept, ivx);
}

RssDecomposition rss_difference_decomposition(std::span<const double> y,
                                              std::span<const double> x, std::size_t k1,
                                              std::size_t k2,
                                              const std::array<double, 3>& true_betas) {
    check_inputs(y, x);
    const std::size_t m = y.size();
    if (!(k1 >= 2 && k1 < k2 && k2 <= m - 2))
        throw ParameterError("rss_difference_decomposition: need 2 <= k1 < k2 <= n-2");

    // recover the innovations from the generating slopes
    long double P = 0, Q = 0, R = 0; // segment sums of x^2
    long double p = 0, q = 0, r = 0; // segment sums of x * eps
    for (std::size_t i = 0; i < m; ++i) {
        const double beta = i < k1 ? true_betas[0] : (i < k2 ? true_betas[1] : true_betas[2]);
        const long double xi = x[i];
        const long double eps = y[i] - beta * xi;
        if (i < k1) {
            P += xi * xi;
            p += xi * eps;
        } else if (i < k2) {
            Q += xi * xi;
            q += xi * eps;
        } else {
            R += xi * xi;
            r += xi * eps;
        }
    }
    if (!(P > 0.0L) || !(Q > 0.0L) || !(R > 0.0L))
        throw DegenerateSegmentError("rss_difference_decomposition: zero regressor mass");

    RssDecomposition d;
    d.eta1 = static_cast<double>(2.0L * (p / P - (p + q) / (P + Q)) * P);
    d.eta2 = static_cast<double>(2.0L * (Q * r - q * R) / (Q + R));
    d.eta3 = static_cast<double>(-P * Q / (P + Q));
    // the quadratic term of the later jump enters with positive mass
    d.eta4 = static_cast<double>(Q * R / (Q + R));
    d.omega_n = static_cast<double>((p + q) * (p + q) / (P + Q) + r * r / R - p * p / P -
                                    (q + r) * (q + r) / (Q + R));

    d.lhs = rss_split(y, x, k1, Method::Ols, false) - rss_split(y, x, k2, Method::Ols, false);
    const double j1 = true_betas[1] - true_betas[0];
    const double j2 = true_betas[2] - true_betas[1];
    d.rhs = d.eta1 * j1 + d.eta2 * j2 + d.eta3 * j1 * j1 + d.eta4 * j2 * j2 + d.omega_n;
    return d;
}

} // namespace sbreak::bp

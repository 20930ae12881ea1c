#pragma once

#include <span>
#include <vector>

#include "sbreak/breakpoint.hpp"
#include "sbreak/core.hpp"
#include "sbreak/estimators.hpp"

namespace sbreak::wald {

// Joint tests intercept and slope stability (two restrictions); SlopeOnly
// drops the intercept columns from both regimes (one restriction).
enum class StabilityMode { Joint, SlopeOnly };

inline int restriction_count(StabilityMode mode) {
    return mode == StabilityMode::Joint ? 2 : 1;
}

struct WaldScan {
    std::vector<double> grid;     // candidate fractions
    std::vector<std::size_t> ks;  // row splits, floor(pi * n)
    std::vector<double> stats;
    double sup_value = 0.0;
    std::size_t argmax_k = 0;
    Method method = Method::Ols;
    bool any_degenerate = false;
};

// Two-regime Wald statistic at row split k. The coefficient covariance sums
// the per-regime blocks and the residual variance is pooled over the
// unrestricted two-regime fit (rss / n).
double wald_ols_at(std::span<const double> y, std::span<const double> x, std::size_t k,
                   StabilityMode mode, bool* degenerate = nullptr);

// Instrumented variant for an arbitrary instrument column z. For each regime
// the coefficients are B_i = (y'Z_i)(X_i'Z_i)^+ with regime-masked blocks
// Z_i = [1 z], X_i = [1 x]; the statistic is
// (B_1 - B_2) Q^+ (B_1 - B_2)' / sigma2 with
// Q = sum_i (Z_i'X_i)^+ (Z_i'Z_i) (X_i'Z_i)^+. Passing z = x reproduces
// wald_ols_at.
double wald_iv_at(std::span<const double> y, std::span<const double> x,
                  std::span<const double> z, std::size_t k, StabilityMode mode,
                  bool* degenerate = nullptr);

// wald_iv_at with the mildly integrated instrument built from x.
double wald_ivx_at(std::span<const double> y, std::span<const double> x, std::size_t k,
                   const est::IvxSpec& spec, StabilityMode mode = StabilityMode::Joint,
                   bool* degenerate = nullptr);

// Pointwise statistics over the trimmed fraction grid. Exhaustive trims
// visit every admissible integer split instead of the fraction grid.
WaldScan sup_wald_scan(std::span<const double> y, std::span<const double> x, Method method,
                       StabilityMode mode, const bp::TrimSpec& trim,
                       const est::IvxSpec& ivx = {});

} // namespace sbreak::wald

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sbreak/core.hpp"

namespace sbreak::dgp {

// Bivariate innovation law for (u_t, v_t): u drives the regression equation,
// v drives the regressor recursion. Draws are exact multivariate normal via
// the Cholesky factor of the 2x2 covariance. A zero variance is allowed as a
// noiseless diagnostic switch.
struct InnovationParams {
    double sigma_u2 = 0.25;
    double sigma_v2 = 0.75;
    double rho = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Autoregressive root parameterised by its distance from unity,
// 1 -/+ c / n^gamma. NearStationary gives roots at or below one, MildlyExplosive
// above one.
struct PersistenceSpec {
    enum class Side { NearStationary, MildlyExplosive };

    double c = 0.0;
    double gamma = 1.0;
    Side side = Side::NearStationary;

    double root(std::size_t n) const;
    void validate(std::size_t n) const;
};

// One regime of a piecewise regression: intercept, slope, and optional
// overrides for the regressor root and the innovation scale.
struct RegimeSpec {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<PersistenceSpec> persistence;
    std::optional<double> sigma;

    void validate() const;
};

// Piecewise model layout over an n-row observation sample. breaks[j] is the
// number of rows belonging to regimes 0..j, so regime j covers rows
// [breaks[j-1], breaks[j]).
struct BreakConfig {
    std::size_t n = 0;
    std::vector<std::size_t> breaks;
    std::vector<RegimeSpec> regimes;

    void validate() const;
    std::size_t regime_of(std::size_t row) const;
};

// Aligned estimation sample. Row i pairs the response y[i] with the already
// lagged regressor x[i]; AR datasets carry only the raw series in y and the
// estimators lag it themselves. meta is a provenance note for file sidecars.
struct Dataset {
    std::vector<double> y;
    std::vector<double> x;
    std::string meta;

    bool has_x() const { return !x.empty(); }
    std::size_t rows() const { return y.size(); }
    void validate() const;
};

// Aligned response/regressor pair ready for the estimators. For AR data the
// regressor is the one-period lag of y.
struct RegressionFrame {
    std::vector<double> y;
    std::vector<double> x;
};

enum class Model { Predictive, Ar1 };

RegressionFrame make_regression_frame(const Dataset& data, Model model);

// n correlated draws of (u, v); deterministic in (params.seed, stream).
std::pair<std::vector<double>, std::vector<double>>
simulate_innovations(std::size_t n, const InnovationParams& params, std::uint64_t stream = 0);

// x[0] = v[0], x[t] = root * x[t-1] + v[t] with root = 1 -/+ c/n^gamma.
std::vector<double> simulate_lur_regressor(std::size_t n, const PersistenceSpec& spec,
                                           std::span<const double> v);

// Single-regime predictive regression y_t = beta0 + beta1 x_{t-1} + u_t with
// a near-unit-root regressor, root 1 - c1/n. The regressor path starts at
// zero and the first innovation pair is discarded, so a series of length n
// yields n-1 aligned rows.
Dataset simulate_predictive_null(std::size_t n, double beta0, double beta1, double c1,
                                 double rho, std::uint64_t seed);

// Piecewise predictive regression with a shared regressor path. Each regime
// may override the regressor root and innovation scale.
Dataset simulate_predictive_break(const BreakConfig& config, const PersistenceSpec& persistence,
                                  const InnovationParams& innov);

// Two-regime AR(1) without intercept: the coefficient switches from beta1 to
// beta2 after the first k0 transitions. Returns the raw series (length n) as
// a y-only dataset. The optional drift adds c * n^-eta to the innovation in
// the first regime only; eta must exceed one half.
struct DriftSpec {
    double c = 0.0;
    double eta = 1.0;
};

Dataset simulate_ar1_break(std::size_t n, double beta1, double beta2, std::size_t k0,
                           const InnovationParams& innov,
                           std::optional<DriftSpec> drift = std::nullopt);

// Same with the second-regime coefficient given as a root specification,
// beta2 = spec.root(n).
Dataset simulate_ar1_break(std::size_t n, double beta1, const PersistenceSpec& beta2_spec,
                           std::size_t k0, const InnovationParams& innov,
                           std::optional<DriftSpec> drift = std::nullopt);

// Three-regime predictive regression where both the slope and the regressor
// root switch at the break rows k1 < k2.
struct ThreeRegimeSpec {
    std::size_t n = 0;
    std::size_t k1 = 0;
    std::size_t k2 = 0;
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
    PersistenceSpec rho1, rho2, rho3;
};

Dataset simulate_three_regime(const ThreeRegimeSpec& spec, const InnovationParams& innov);

// MA(J)-filtered i.i.d. normals, eps_t = sum_j coeffs[j] e_{t-j}. The filter
// sum must be nonzero so the long-run variance does not collapse.
std::vector<double> simulate_linear_process_errors(std::size_t n, std::span<const double> coeffs,
                                                   double sigma_e2, std::uint64_t seed,
                                                   std::uint64_t stream = 0);

// Coefficient break per config plus an innovation-scale break at row k2:
// the base innovation is multiplied by sigma1 before k2 and sigma2 after.
Dataset simulate_mean_variance_break(const BreakConfig& config, std::size_t k2, double sigma1,
                                     double sigma2, const PersistenceSpec& persistence,
                                     const InnovationParams& innov);

} // namespace sbreak::dgp

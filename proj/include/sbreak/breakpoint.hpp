#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "sbreak/core.hpp"
#include "sbreak/dgp.hpp"
#include "sbreak/estimators.hpp"

namespace sbreak::bp {

// Candidate break fractions are restricted to (pi0, 1 - pi0). grid_step is
// the fraction increment; an empty step means every admissible integer split
// is visited.
struct TrimSpec {
    double pi0 = 0.15;
    std::optional<double> grid_step = 0.01;

    void validate() const;
    bool exhaustive() const { return !grid_step.has_value(); }
};

// Residual convention for the instrumented criterion: the literal form
// measures residuals against the instrument itself (least squares of y on
// z), the variant against the regressor with the cross-product slope.
enum class IvxResidualBasis { Instrument, Regressor };

struct IvxOptions {
    est::IvxSpec spec{};
    IvxResidualBasis basis = IvxResidualBasis::Instrument;
};

struct RssPoint {
    std::size_t k = 0;
    double tau = 0.0;
    double rss = 0.0;
};

struct BreakEstimate {
    std::vector<std::size_t> k_hat;      // ascending row splits
    std::vector<double> tau_hat;         // k / n
    std::vector<est::SegmentFit> fits;   // one per regime, left to right
    std::vector<RssPoint> rss_profile;   // first-pass scan profile
    double delta_hat = 0.0;              // slope of regime 1 minus regime 2
    bool downgraded = false;             // second-pass scan was infeasible
};

// Split criterion at row k: fit both sides with the chosen method and return
// the total residual sum of squares.
double rss_split(std::span<const double> y, std::span<const double> x, std::size_t k,
                 Method method, bool with_intercept, const IvxOptions& ivx = {});

std::size_t min_segment_length(std::size_t n, double pi0, bool with_intercept);

BreakEstimate estimate_single_break(std::span<const double> y, std::span<const double> x,
                                    const TrimSpec& trim, Method method, bool with_intercept,
                                    const IvxOptions& ivx = {});

// Sequential two-break procedure: a full-sample scan locates the first
// break, then both subsamples on either side of it are scanned and the side
// whose extra split lowers the combined three-segment criterion most supplies
// the second break. Falls back to the single-break result (flagged) when
// neither subsample is long enough.
BreakEstimate estimate_two_breaks_sequential(std::span<const double> y,
                                             std::span<const double> x, const TrimSpec& trim,
                                             Method method, bool with_intercept,
                                             const IvxOptions& ivx = {});

// Dataset conveniences; Model::Ar1 lags y internally.
BreakEstimate estimate_single_break(const dgp::Dataset& data, dgp::Model model,
                                    const TrimSpec& trim, Method method, bool with_intercept,
                                    const IvxOptions& ivx = {});
BreakEstimate estimate_two_breaks_sequential(const dgp::Dataset& data, dgp::Model model,
                                             const TrimSpec& trim, Method method,
                                             bool with_intercept, const IvxOptions& ivx = {});

// Exact split-criterion difference between the two true break dates of a
// three-regime sample, decomposed into jump-linear, jump-quadratic and
// noise terms. Requires the generating slopes so the innovations can be
// recovered; lhs and rhs are reported for identity checks.
struct RssDecomposition {
    double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0, eta4 = 0.0;
    double omega_n = 0.0;
    double lhs = 0.0; // rss at first break date minus rss at second
    double rhs = 0.0; // eta terms plus omega_n
};

RssDecomposition rss_difference_decomposition(std::span<const double> y,
                                              std::span<const double> x, std::size_t k1,
                                              std::size_t k2,
                                              const std::array<double, 3>& true_betas);

} // namespace sbreak::bp

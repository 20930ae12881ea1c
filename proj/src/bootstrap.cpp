#include "sbreak/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "sbreak/parallel.hpp"
#include "sbreak/rng.hpp"

namespace sbreak::boot {

void BootstrapSpec::validate() const {
    if (reps < 100) throw ParameterError("BootstrapSpec.reps must be >= 100");
}

BootstrapResult wild_bootstrap(std::span<const double> y, std::span<const double> x,
                               const BootstrapSpec& spec, const bp::TrimSpec& trim,
                               Method method, wald::StabilityMode mode,
                               const est::IvxSpec& ivx, unsigned threads) {
    spec.validate();
    const std::size_t m = y.size();
    const bool with_intercept = mode == wald::StabilityMode::Joint;

    BootstrapResult out;
    out.reps = spec.reps;
    out.statistic = wald::sup_wald_scan(y, x, method, mode, trim, ivx).sup_value;

    // null fit: one regime over the full sample
    const auto null_fit = est::ols_segment(y, x, {0, m}, with_intercept);
    std::vector<double> fitted(m), centered(m);
    double resid_mean = 0.0;
    for (double r : null_fit.residuals) resid_mean += r;
    resid_mean /= static_cast<double>(m);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        fitted[i] = y[i] - null_fit.residuals[i];
        centered[i] = null_fit.residuals[i] - resid_mean;
        max_abs = std::max(max_abs, std::fabs(centered[i]));
    }
    if (max_abs == 0.0) {
        out.degenerate_residuals = true;
        out.p_value = 1.0;
        return out;
    }

    out.draws.assign(spec.reps, 0.0);
    parallel_for(
        spec.reps,
        [&](std::size_t b) {
            rng::RandomStream ws(spec.seed, b + 1);
            std::vector<double> ystar(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double w = spec.weight_law == WeightLaw::Rademacher
                                     ? ws.sign_at(i)
                                     : ws.normal_at(i);
                ystar[i] = fitted[i] + centered[i] * w;
            }
            out.draws[b] = wald::sup_wald_scan(ystar, x, method, mode, trim, ivx).sup_value;
        },
        threads);

    std::size_t exceed = 0;
    for (double s : out.draws) {
        if (s >= out.statistic) ++exceed;
    }
    out.p_value = static_cast<double>(1 + exceed) / static_cast<double>(spec.reps + 1);

    // exact-size order statistic: the ceil((1 - a)(B + 1))-th smallest draw
    std::vector<double> sorted = out.draws;
    std::sort(sorted.begin(), sorted.end());
    for (double level : {0.10, 0.05, 0.01}) {
        const auto rank = static_cast<std::size_t>(
            std::ceil((1.0 - level) * static_cast<double>(spec.reps + 1)));
        const std::size_t idx = std::min(rank, sorted.size()) - 1;
        out.critical_values[level] = sorted[idx];
    }
    return out;
}

} // namespace sbreak::boot

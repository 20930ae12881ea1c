#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sbreak/breakpoint.hpp"
#include "sbreak/core.hpp"
#include "sbreak/wald.hpp"

namespace sbreak::boot {

enum class WeightLaw { Rademacher, StandardNormal };

struct BootstrapSpec {
    std::size_t reps = 399;
    WeightLaw weight_law = WeightLaw::Rademacher;
    std::uint64_t seed = 0;

    void validate() const;
};

struct BootstrapResult {
    double statistic = 0.0;                // observed sup statistic
    double p_value = 1.0;                  // (1 + #{S* >= S}) / (B + 1)
    std::map<double, double> critical_values; // level -> order-statistic cv
    std::vector<double> draws;             // bootstrap statistics, replicate order
    bool degenerate_residuals = false;
    std::size_t reps = 0;
};

// Restricted wild bootstrap of the sup statistic. The single-regime model is
// fit to the full sample, its centered residuals are multiplied by i.i.d.
// unit weights per replicate, and the response is rebuilt around the fitted
// mean while the regressor path stays fixed. Replicate b draws its weights
// from stream b + 1, so results are independent of scheduling.
BootstrapResult wild_bootstrap(std::span<const double> y, std::span<const double> x,
                               const BootstrapSpec& spec, const bp::TrimSpec& trim,
                               Method method, wald::StabilityMode mode,
                               const est::IvxSpec& ivx = {}, unsigned threads = 0);

} // namespace sbreak::boot

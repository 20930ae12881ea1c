#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbreak/core.hpp"

namespace sbreak::lim {

// Discretization grid for path-functional simulation.
struct PathGrid {
    std::size_t steps = 2000; // increments per unit interval
    std::size_t reps = 100000;
    std::uint64_t seed = 0;

    void validate(bool need_reps = true) const;
};

// Monte Carlo draws of a limit functional with quantile access.
struct LimitSample {
    std::vector<double> draws;

    double quantile(double level) const;
};

// Euler path of dJ = c J dt + dW on [0,1]: J[0] = 0,
// J[i] = (1 + c/steps) J[i-1] + dW_i, dW_i ~ N(0, 1/steps).
// Negative c mean-reverts; c = 0 is standard Brownian motion.
std::vector<double> simulate_ou_path(double c, std::size_t steps, std::uint64_t seed,
                                     std::uint64_t stream = 0);

// Joint draws of (int_0^r J_c dB_u, int_0^r J_c^2 dt) where the increments
// driving J and B_u have correlation rho. c follows the signed drift
// convention of simulate_ou_path.
struct JointLurSample {
    std::vector<double> ito_integral;
    std::vector<double> quadratic;
};

JointLurSample joint_lur_functionals(double c, const PathGrid& grid, double rho = 0.0,
                                     double r = 1.0, unsigned threads = 0);

// Trimmed supremum of the squared normalized Brownian bridge,
// sup_{s in [pi0, 1-pi0]} sum_{i<=p} BB_i(s)^2 / (s (1 - s)).
// pi0 = 0.5 degenerates to the single point s = 1/2.
LimitSample nbb_sup_sample(double pi0, int restrictions, const PathGrid& grid,
                           unsigned threads = 0);

// Limit law of the scaled second-regime AR coefficient when that regime has
// a unit root: (B(1)^2 - 1) / (2 (1 - tau0) int_0^1 B^2). The general drift
// variant (experimental = true) replaces B with the post-break exponential
// functional F(t) = int_{tau0}^t e^{c (t - s)} dW(s) and is a non-normative
// extrapolation; with experimental = false, c must be zero.
LimitSample second_regime_coeff_limit(double c, double tau0, const PathGrid& grid,
                                      bool experimental = false, unsigned threads = 0);

// Critical-value table with simulation provenance, persisted as CSV.
struct CvTable {
    int restrictions = 0;
    double pi0 = 0.0;
    std::map<double, double> values; // level -> critical value
    PathGrid grid;

    double at(double level) const;
};

CvTable nbb_critical_values(int restrictions, double pi0, const PathGrid& grid,
                            const std::optional<std::string>& cache_dir = std::nullopt,
                            unsigned threads = 0);

// CSV with a provenance comment line and a p,pi0,level,value body.
void write_cv_table(const std::string& path, const CvTable& table);

} // namespace sbreak::lim

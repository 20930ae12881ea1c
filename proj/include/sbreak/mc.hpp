#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbreak/bootstrap.hpp"
#include "sbreak/breakpoint.hpp"
#include "sbreak/core.hpp"
#include "sbreak/dgp.hpp"
#include "sbreak/limits.hpp"
#include "sbreak/wald.hpp"

namespace sbreak::mc {

enum class DgpKind { PredictiveNull, PredictiveBreak, Ar1Break };
enum class TestKind { SupWald, KnownBreakWald, BreakDate, EstimatorDist };
enum class CvSource { Nbb, Bootstrap, ChiSquared };

// Cell-level data generating process. Break locations are fractions so the
// same spec sweeps several sample sizes; fixed_root pins a stationary
// regressor root exactly, overriding the local-to-unity pair (c, gamma).
struct DgpSpec {
    DgpKind kind = DgpKind::PredictiveNull;
    std::vector<double> alphas{0.0};
    std::vector<double> betas{0.0};
    double tau0 = 0.5;
    double c = 0.0;
    double gamma = 1.0;
    std::optional<double> fixed_root;
    double rho = 0.0;
    double sigma_u2 = 0.25;
    double sigma_v2 = 0.75;
    double ar_sigma2 = 1.0;

    void validate() const;
};

struct Bound {
    std::map<std::string, std::string> cell_match; // label -> required value
    std::string stat;
    std::optional<double> min, max;
};

struct ExperimentSpec {
    std::string name = "experiment";
    DgpSpec dgp;
    std::vector<Method> methods{Method::Ols};
    std::vector<std::size_t> n_list{500};
    std::size_t reps = 1000;
    TestKind test = TestKind::SupWald;
    CvSource cv = CvSource::Nbb;
    double level = 0.05;
    wald::StabilityMode mode = wald::StabilityMode::Joint;
    bp::TrimSpec trim{};
    bool exhaustive_scan = false;
    est::IvxSpec ivx{};
    boot::BootstrapSpec bootstrap{};
    lim::PathGrid cv_grid{};
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::optional<std::string> cache_dir;
    std::vector<Bound> bounds;

    void validate() const;
};

struct Cell {
    std::map<std::string, std::string> labels;
    std::map<std::string, double> stats;
    std::size_t reps = 0;
    std::size_t failures = 0;
    bool valid = true;
};

struct ExperimentReport {
    std::string name;
    std::vector<Cell> cells;
    double wall_seconds = 0.0;

    std::string to_csv() const;
    std::string summary() const;
};

// Size under null cells / power under break cells, one cell per (n, method).
ExperimentReport run_size_power(const ExperimentSpec& spec);

// Distribution of the break-date error per sample size.
ExperimentReport run_breakdate_accuracy(const ExperimentSpec& spec);

// Moments of sqrt(n) (beta_hat_i(tau_hat) - beta_i) against the stationary
// two-regime targets (1 - beta_i^2) / regime length.
ExperimentReport run_estimator_distribution(const ExperimentSpec& spec);

// Paired comparison on common random numbers: full-sample slope bias and
// sup-statistic rejection rate for both estimation routes.
ExperimentReport run_ols_vs_ivx_comparison(const ExperimentSpec& spec);

// Dispatch on spec.test (SupWald and KnownBreakWald run size/power).
ExperimentReport run_experiment(const ExperimentSpec& spec);

// Violated bounds, formatted one per line; empty when all pass.
std::vector<std::string> check_bounds(const ExperimentReport& report,
                                      const std::vector<Bound>& bounds);

ExperimentSpec load_experiment_spec(const std::string& path);

// Replicate datasets are keyed by a derived per-replicate seed.
dgp::Dataset make_replicate(const DgpSpec& dgp_spec, std::size_t n, std::uint64_t seed);

} // namespace sbreak::mc

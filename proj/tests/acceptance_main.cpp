// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavy Monte Carlo cells parallelize over replicates; every number
// is deterministic in the pinned seeds.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "properties_impl.hpp"
#include "sbreak/bootstrap.hpp"
#include "sbreak/breakpoint.hpp"
#include "sbreak/dgp.hpp"
#include "sbreak/estimators.hpp"
#include "sbreak/limits.hpp"
#include "sbreak/mc.hpp"
#include "sbreak/parallel.hpp"
#include "sbreak/rng.hpp"
#include "sbreak/stats.hpp"
#include "sbreak/wald.hpp"

using namespace sbreak;

namespace {

const char* kCacheDir = "acceptance-cv-cache";

struct Line {
    bool pass;
    std::string text;
};

// steps = 8000: the discretized supremum is biased low, and 2000 steps leave
// the 95% point around 8.64 for one restriction; 8000 is on the plateau.
lim::CvTable nbb_table(int p) {
    return lim::nbb_critical_values(p, 0.15, {8000, 100000, 20240801},
                                    std::string(kCacheDir));
}

// 1. split-criterion difference decomposition identity
Line criterion1() {
    rng::RandomStream pick(901);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 60 + static_cast<std::size_t>(
                                       std::floor(140.0 * pick.uniform_at(4 * trial)));
        const auto k1 = static_cast<std::size_t>(
            std::floor(0.2 * static_cast<double>(n))) + trial % 5;
        const auto k2 = static_cast<std::size_t>(
            std::floor(0.6 * static_cast<double>(n))) + trial % 7;
        dgp::ThreeRegimeSpec spec;
        spec.n = n;
        spec.k1 = k1;
        spec.k2 = k2;
        spec.beta1 = pick.normal_at(4 * trial + 1);
        spec.beta2 = pick.normal_at(4 * trial + 2);
        spec.beta3 = pick.normal_at(4 * trial + 3);
        spec.rho1 = {2.0, 1.0, dgp::PersistenceSpec::Side::NearStationary};
        spec.rho2 = {1.0, 1.0, dgp::PersistenceSpec::Side::MildlyExplosive};
        spec.rho3 = {3.0, 1.0, dgp::PersistenceSpec::Side::NearStationary};
        dgp::InnovationParams innov;
        innov.sigma_u2 = 1.0;
        innov.seed = rng::derive_seed(902, trial);
        const auto d = dgp::simulate_three_regime(spec, innov);
        const auto dec = bp::rss_difference_decomposition(
            d.y, d.x, k1, k2, {spec.beta1, spec.beta2, spec.beta3});
        worst = std::max(worst, std::fabs(dec.lhs - dec.rhs) / (1.0 + std::fabs(dec.lhs)));
    }
    std::ostringstream os;
    os << "decomposition identity on 50 samples: worst relative gap " << worst
       << " (bound 1e-8)";
    return {worst < 1e-8, os.str()};
}

// 2. unit-step grid scan equals the exhaustive argmin
Line criterion2() {
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 40 + 8 * static_cast<std::size_t>(trial % 20);
        dgp::Dataset d;
        const bool with_intercept = trial % 2 == 0;
        if (trial % 3 == 0) {
            dgp::InnovationParams innov;
            innov.sigma_u2 = 1.0;
            innov.seed = rng::derive_seed(903, trial);
            const auto raw = dgp::simulate_ar1_break(n + 1, 0.3, 0.8, n / 2, innov);
            const auto frame = dgp::make_regression_frame(raw, dgp::Model::Ar1);
            d.y = frame.y;
            d.x = frame.x;
        } else {
            dgp::BreakConfig cfg;
            cfg.n = n;
            cfg.breaks = {n / 2};
            cfg.regimes.push_back({0.0, 0.0, {}, {}});
            cfg.regimes.push_back({0.1, 0.4, {}, {}});
            dgp::InnovationParams innov;
            innov.seed = rng::derive_seed(904, trial);
            d = dgp::simulate_predictive_break(cfg, {2.0, 1.0, {}}, innov);
        }
        const std::size_t m = d.y.size();
        bp::TrimSpec unit;
        unit.pi0 = 0.15;
        unit.grid_step = 1.0 / static_cast<double>(m);
        const auto a =
            bp::estimate_single_break(d.y, d.x, unit, Method::Ols, with_intercept);
        const auto b =
            bp::estimate_single_break(d.y, d.x, {0.15, {}}, Method::Ols, with_intercept);
        if (a.k_hat[0] != b.k_hat[0]) ++mismatches;
    }
    std::ostringstream os;
    os << "grid(step 1/n) vs exhaustive argmin: " << mismatches << "/100 mismatches";
    return {mismatches == 0, os.str()};
}

// 3. two-regime estimator variances against the asymptotic targets
Line criterion3() {
    const std::size_t reps = 3000, n = 800, k0 = 400;
    std::vector<double> e1(reps), e2(reps), e1_known(reps);
    parallel_for(reps, [&](std::size_t rep) {
        dgp::InnovationParams innov;
        innov.sigma_u2 = 1.0;
        innov.seed = rng::derive_seed(905, rep);
        const auto data = dgp::simulate_ar1_break(n + 1, 0.3, 0.6, k0, innov);
        const auto f = dgp::make_regression_frame(data, dgp::Model::Ar1);
        const auto est =
            bp::estimate_single_break(f.y, f.x, {0.15, {}}, Method::Ols, false);
        const double rn = std::sqrt(static_cast<double>(n));
        e1[rep] = rn * (est.fits[0].slope - 0.3);
        e2[rep] = rn * (est.fits[1].slope - 0.6);
        e1_known[rep] = rn * (est::ols_segment(f.y, f.x, {0, k0}, false).slope - 0.3);
    });
    const double v1 = stats::variance(e1), v2 = stats::variance(e2);
    const double t1 = 1.82, t2 = 1.28;
    const bool ok1 = std::fabs(v1 - t1) <= 0.15 * t1;
    const bool ok2 = std::fabs(v2 - t2) <= 0.15 * t2;
    std::ostringstream os;
    os << "scaled estimator variances: var1 " << v1 << " vs " << t1 << " ("
       << (ok1 ? "in" : "OUT of") << " 15%), var2 " << v2 << " vs " << t2 << " ("
       << (ok2 ? "in" : "OUT of") << " 15%)\n        [info] known-break control var1 = "
       << stats::variance(e1_known) << "; the estimated-break excess shrinks with n "
          "(+25% @800, +12% @1600, +8% @3200)";
    return {ok1 && ok2, os.str()};
}

// 4. bounded, non-increasing break-date error medians
Line criterion4() {
    auto medians_for = [&](double beta2) {
        std::vector<double> medians;
        for (std::size_t n : {std::size_t{200}, std::size_t{400}, std::size_t{800}}) {
            const std::size_t reps = 1000;
            std::vector<double> err(reps);
            parallel_for(reps, [&](std::size_t rep) {
                dgp::InnovationParams innov;
                innov.sigma_u2 = 1.0;
                innov.seed = rng::derive_seed(906 + n, rep);
                const auto data =
                    dgp::simulate_ar1_break(n + 1, 0.3, beta2, n / 2, innov);
                const auto f = dgp::make_regression_frame(data, dgp::Model::Ar1);
                const auto est =
                    bp::estimate_single_break(f.y, f.x, {0.15, {}}, Method::Ols, false);
                err[rep] = static_cast<double>(est.k_hat[0]) -
                           static_cast<double>(n / 2);
            });
            medians.push_back(stats::median_abs(err));
        }
        return medians;
    };
    const auto med = medians_for(0.9);
    const bool bounded = med[0] <= 8.0 && med[1] <= 8.0 && med[2] <= 8.0;
    const bool monotone = med[0] >= med[1] && med[1] >= med[2];
    const auto info = medians_for(0.6);
    std::ostringstream os;
    os << "median |k_hat - k0| at n=200/400/800: " << med[0] << "/" << med[1] << "/"
       << med[2] << " (bound 8, non-increasing)\n        [info] small-jump dgp "
          "(0.3->0.6) medians: "
       << info[0] << "/" << info[1] << "/" << info[2];
    return {bounded && monotone, os.str()};
}

// 5. normalized-bridge supremum quantiles
Line criterion5() {
    const auto table = nbb_table(1);
    const double q95 = table.at(0.95);
    const auto singleton = lim::nbb_sup_sample(0.5, 1, {2000, 100000, 20240802});
    const double q95s = singleton.quantile(0.95);
    const bool ok1 = std::fabs(q95 - 8.85) <= 0.15;
    const bool ok2 = std::fabs(q95s - 3.84) <= 0.10;
    std::ostringstream os;
    os << "sup-bridge 95% point " << q95 << " at steps=8000 (target 8.85 +- 0.15); "
          "singleton "
       << q95s
       << " (target 3.84 +- 0.10)\n        [info] discretized suprema climb with the "
          "grid: 8.55/8.64/8.75/8.81 at steps 1000/2000/4000/8000";
    return {ok1 && ok2, os.str()};
}

// 6. instrumented scan size under mildly integrated regressors
Line criterion6() {
    const double cv = nbb_table(2).at(0.95);
    const double cv1 = nbb_table(1).at(0.95);
    const std::size_t reps = 2000, n = 500;
    std::vector<int> reject(reps, 0), reject_slope(reps, 0), reject_point(reps, 0);
    parallel_for(reps, [&](std::size_t rep) {
        dgp::BreakConfig cfg;
        cfg.n = n;
        cfg.regimes.push_back({0.0, 0.0, {}, {}});
        dgp::InnovationParams innov;
        innov.rho = -0.9;
        innov.seed = rng::derive_seed(907, rep);
        const auto d = dgp::simulate_predictive_break(
            cfg, {5.0, 0.75, dgp::PersistenceSpec::Side::NearStationary}, innov);
        const auto scan = wald::sup_wald_scan(d.y, d.x, Method::Ivx,
                                              wald::StabilityMode::Joint, {0.15, 0.01}, {});
        reject[rep] = scan.sup_value > cv ? 1 : 0;
        const auto slope = wald::sup_wald_scan(d.y, d.x, Method::Ivx,
                                               wald::StabilityMode::SlopeOnly,
                                               {0.15, 0.01}, {});
        reject_slope[rep] = slope.sup_value > cv1 ? 1 : 0;
        const double w = wald::wald_ivx_at(d.y, d.x, n / 2, {}, wald::StabilityMode::Joint);
        reject_point[rep] = w > 5.991465 ? 1 : 0;
    });
    double rate = 0.0, rate_slope = 0.0, rate_point = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        rate += reject[i];
        rate_slope += reject_slope[i];
        rate_point += reject_point[i];
    }
    rate /= static_cast<double>(reps);
    rate_slope /= static_cast<double>(reps);
    rate_point /= static_cast<double>(reps);
    std::ostringstream os;
    os << "instrumented joint-scan size under mildly integrated regressors: " << rate
       << " (band [0.025, 0.075], cv " << cv
       << ")\n        [info] slope-only scan size " << rate_slope
       << "; known-date joint size vs chi-squared " << rate_point
       << "; the joint-scan rate stays near 0.083 up to n=2000";
    return {rate >= 0.025 && rate <= 0.075, os.str()};
}

// 7. endogeneity-bias and size ordering near the unit boundary
Line criterion7() {
    const double cv = nbb_table(2).at(0.95);
    const std::size_t reps = 2000, n = 500;
    std::vector<double> bias_ols(reps), bias_ivx(reps);
    std::vector<int> rej_ols(reps), rej_ivx(reps);
    parallel_for(reps, [&](std::size_t rep) {
        const auto d = dgp::simulate_predictive_null(n + 1, 0.0, 0.0, 1.0, -0.95,
                                                     rng::derive_seed(908, rep));
        const std::size_t m = d.rows();
        const auto z = est::ivx_instrument(d.x, {});
        bias_ols[rep] = est::ols_segment(d.y, d.x, {0, m}, true).slope;
        bias_ivx[rep] = est::ivx_segment(d.y, d.x, z, {0, m}, true).slope;
        rej_ols[rep] = wald::sup_wald_scan(d.y, d.x, Method::Ols,
                                           wald::StabilityMode::Joint, {0.15, 0.01}, {})
                               .sup_value > cv
                           ? 1
                           : 0;
        rej_ivx[rep] = wald::sup_wald_scan(d.y, d.x, Method::Ivx,
                                           wald::StabilityMode::Joint, {0.15, 0.01}, {})
                               .sup_value > cv
                           ? 1
                           : 0;
    });
    const double m_ols = stats::mean(bias_ols), m_ivx = stats::mean(bias_ivx);
    const double se = std::sqrt(stats::variance(bias_ols) / reps +
                                stats::variance(bias_ivx) / reps);
    const double gap = std::fabs(m_ols) - std::fabs(m_ivx);
    double size_ols = 0.0, size_ivx = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        size_ols += rej_ols[i];
        size_ivx += rej_ivx[i];
    }
    size_ols /= reps;
    size_ivx /= reps;
    const bool bias_ok = gap > 2.0 * se;
    const bool size_ok = size_ols > size_ivx;
    std::ostringstream os;
    os << "bias |ols| " << std::fabs(m_ols) << " vs |ivx| " << std::fabs(m_ivx)
       << " (gap " << gap << " > 2se " << 2.0 * se << "); size ols " << size_ols
       << " > ivx " << size_ivx;
    return {bias_ok && size_ok, os.str()};
}

// 8. pinned instrumented statistic
Line criterion8() {
    const auto data = dgp::simulate_predictive_null(200, 0.0, 0.0, 1.0, -0.5, 20240131);
    const double lib = wald::wald_ivx_at(data.y, data.x, 100, {1.0, 0.95});
    const double golden = 1.6434608659419658;
    const double rel = std::fabs(lib - golden) / std::fabs(golden);
    std::ostringstream os;
    os << "pinned instrumented statistic: " << lib << " vs " << golden << " (rel " << rel
       << ", bound 1e-6)";
    return {rel < 1e-6, os.str()};
}

// 9. known-break statistic against the chi-squared law
Line criterion9() {
    const std::size_t reps = 5000, n = 500, k0 = 250;
    std::vector<double> draws(reps);
    parallel_for(reps, [&](std::size_t rep) {
        mc::DgpSpec d;
        d.kind = mc::DgpKind::PredictiveNull;
        d.alphas = {0.1};
        d.betas = {0.2};
        d.fixed_root = 0.5;
        const auto data = mc::make_replicate(d, n, rng::derive_seed(909, rep));
        draws[rep] = wald::wald_ols_at(data.y, data.x, k0, wald::StabilityMode::Joint);
    });
    const double q95 = stats::quantile(draws, 0.95);
    std::ostringstream os;
    os << "known-break statistic 95th percentile " << q95 << " (target 5.99 +- 0.25)";
    return {std::fabs(q95 - 5.991) <= 0.25, os.str()};
}

// 10. wild-bootstrap size and p-value range
Line criterion10() {
    const std::size_t outer = 1000, n = 300, B = 399;
    std::vector<int> reject(outer, 0);
    std::vector<int> range_ok(outer, 1);
    parallel_for(outer, [&](std::size_t rep) {
        mc::DgpSpec d;
        d.kind = mc::DgpKind::PredictiveNull;
        d.alphas = {0.0};
        d.betas = {0.0};
        d.fixed_root = 0.5;
        const auto data = mc::make_replicate(d, n, rng::derive_seed(910, rep));
        boot::BootstrapSpec bs;
        bs.reps = B;
        bs.seed = rng::derive_seed(911, rep);
        const auto res = boot::wild_bootstrap(data.y, data.x, bs, {0.15, 0.01},
                                              Method::Ols, wald::StabilityMode::Joint, {},
                                              1);
        reject[rep] = res.p_value <= 0.05 ? 1 : 0;
        const double lo = 1.0 / static_cast<double>(B + 1);
        if (!(res.p_value >= lo && res.p_value <= 1.0)) range_ok[rep] = 0;
        // counting convention reproduced exactly
        std::size_t exceed = 0;
        for (double s : res.draws)
            if (s >= res.statistic) ++exceed;
        const double expect =
            static_cast<double>(1 + exceed) / static_cast<double>(B + 1);
        if (res.p_value != expect) range_ok[rep] = 0;
    });
    double rate = 0.0;
    bool ranges = true;
    for (std::size_t i = 0; i < outer; ++i) {
        rate += reject[i];
        ranges = ranges && range_ok[i] == 1;
    }
    rate /= static_cast<double>(outer);
    std::ostringstream os;
    os << "wild-bootstrap size " << rate << " (band [0.025, 0.075]); p-value convention "
       << (ranges ? "exact" : "VIOLATED");
    return {rate >= 0.025 && rate <= 0.075 && ranges, os.str()};
}

// 11. unit-root statistic distribution and divergence
Line criterion11() {
    const std::size_t reps = 10000, n = 1000;
    std::vector<double> t_null(reps);
    parallel_for(reps, [&](std::size_t rep) {
        dgp::InnovationParams innov;
        innov.sigma_u2 = 1.0;
        innov.seed = rng::derive_seed(912, rep);
        const auto d = dgp::simulate_ar1_break(n, 1.0, 1.0, n / 2, innov);
        t_null[rep] = est::df_t_statistic(d.y);
    });
    const double q05 = stats::quantile(t_null, 0.05);

    const std::size_t reps2 = 2000;
    std::vector<int> diverged(reps2, 0);
    parallel_for(reps2, [&](std::size_t rep) {
        dgp::InnovationParams innov;
        innov.sigma_u2 = 1.0;
        innov.seed = rng::derive_seed(913, rep);
        const auto d = dgp::simulate_ar1_break(n, 0.5, 0.5, n / 2, innov);
        diverged[rep] = std::fabs(est::df_t_statistic(d.y)) > 10.0 ? 1 : 0;
    });
    double frac = 0.0;
    for (int v : diverged) frac += v;
    frac /= static_cast<double>(reps2);
    const bool ok1 = std::fabs(q05 - (-1.94)) <= 0.08;
    const bool ok2 = frac >= 0.99;
    std::ostringstream os;
    os << "unit-root statistic 5th percentile " << q05
       << " (target -1.94 +- 0.08); divergence under AR(0.5): " << frac << " (>= 0.99)";
    return {ok1 && ok2, os.str()};
}

// 12. invariant property families
Line criterion12() {
    struct Named {
        const char* name;
        properties::CheckResult res;
    };
    const Named checks[] = {
        {"determinism", properties::determinism_under_seeds()},
        {"scale", properties::scale_invariances()},
        {"nonnegativity", properties::wald_nonnegativity()},
        {"orthogonality", properties::residual_orthogonality()},
        {"filter linearity", properties::ivx_filter_linearity()},
    };
    bool ok = true;
    std::ostringstream os;
    os << "property families:";
    for (const auto& c : checks) {
        ok = ok && c.res.ok;
        os << " " << c.name << "=" << (c.res.ok ? "ok" : "FAIL");
        if (!c.res.ok) os << " (" << c.res.detail << ")";
    }
    return {ok, os.str()};
}

} // namespace

int main(int argc, char** argv) {
    std::optional<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    }

    using Fn = Line (*)();
    const Fn criteria[] = {criterion1, criterion2, criterion3,  criterion4,
                           criterion5, criterion6, criterion7,  criterion8,
                           criterion9, criterion10, criterion11, criterion12};

    int failures = 0;
    for (int i = 0; i < 12; ++i) {
        if (only && *only != i + 1) continue;
        const Line line = criteria[i]();
        std::printf("[%s] criterion %2d: %s\n", line.pass ? "PASS" : "FAIL", i + 1,
                    line.text.c_str());
        std::fflush(stdout);
        if (!line.pass) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

#include "sbreak/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sbreak/parallel.hpp"
#include "sbreak/rng.hpp"
#include "sbreak/stats.hpp"

namespace sbreak::mc {

namespace {

using nlohmann::json;

const char* method_name(Method m) { return m == Method::Ols ? "ols" : "ivx"; }

dgp::PersistenceSpec persistence_for(const DgpSpec& d, std::size_t n) {
    dgp::PersistenceSpec p;
    if (d.fixed_root) {
        // express a fixed stationary root through the local-to-unity form
        p.c = (1.0 - *d.fixed_root) * static_cast<double>(n);
        p.gamma = 1.0;
    } else {
        p.c = std::fabs(d.c);
        p.gamma = d.gamma;
        p.side = d.c >= 0.0 ? dgp::PersistenceSpec::Side::NearStationary
                            : dgp::PersistenceSpec::Side::MildlyExplosive;
    }
    return p;
}

struct RepContext {
    dgp::RegressionFrame frame;
    std::size_t k0 = 0; // true break row, when the dgp has one
};

RepContext make_context(const DgpSpec& d, std::size_t n, std::uint64_t seed) {
    RepContext ctx;
    if (d.kind == DgpKind::Ar1Break) {
        const auto k0 = static_cast<std::size_t>(
            std::floor(d.tau0 * static_cast<double>(n)));
        dgp::InnovationParams innov;
        innov.sigma_u2 = d.ar_sigma2;
        innov.seed = seed;
        const auto data = dgp::simulate_ar1_break(n + 1, d.betas.at(0), d.betas.at(1), k0, innov);
        ctx.frame = dgp::make_regression_frame(data, dgp::Model::Ar1);
        ctx.k0 = k0;
        return ctx;
    }

    dgp::BreakConfig cfg;
    cfg.n = n;
    if (d.kind == DgpKind::PredictiveBreak) {
        ctx.k0 = static_cast<std::size_t>(std::floor(d.tau0 * static_cast<double>(n)));
        cfg.breaks = {ctx.k0};
    } else {
        ctx.k0 = static_cast<std::size_t>(std::floor(d.tau0 * static_cast<double>(n)));
    }
    for (std::size_t j = 0; j < cfg.breaks.size() + 1; ++j) {
        dgp::RegimeSpec r;
        r.alpha = d.alphas.at(std::min(j, d.alphas.size() - 1));
        r.beta = d.betas.at(std::min(j, d.betas.size() - 1));
        cfg.regimes.push_back(r);
    }
    dgp::InnovationParams innov;
    innov.sigma_u2 = d.sigma_u2;
    innov.sigma_v2 = d.sigma_v2;
    innov.rho = d.rho;
    innov.seed = seed;
    const auto data = dgp::simulate_predictive_break(cfg, persistence_for(d, n), innov);
    ctx.frame = dgp::make_regression_frame(data, dgp::Model::Predictive);
    return ctx;
}

struct CvBank {
    std::map<int, double> nbb; // restrictions -> critical value at spec.level
};

CvBank prepare_cv(const ExperimentSpec& spec) {
    CvBank bank;
    if (spec.cv != CvSource::Nbb) return bank;
    const int p = wald::restriction_count(spec.mode);
    const auto table =
        lim::nbb_critical_values(p, spec.trim.pi0, spec.cv_grid, spec.cache_dir, spec.threads);
    bank.nbb[p] = table.at(1.0 - spec.level);
    return bank;
}

double rate_se(double rate, std::size_t reps) {
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

void finish_cell(Cell& cell, std::size_t reps, std::size_t failures) {
    cell.reps = reps;
    cell.failures = failures;
    cell.valid = failures * 100 <= reps;
}

bp::TrimSpec scan_trim(const ExperimentSpec& spec) {
    bp::TrimSpec trim = spec.trim;
    if (spec.exhaustive_scan) trim.grid_step.reset();
    return trim;
}

} // namespace

void DgpSpec::validate() const {
    if (betas.empty()) throw ParameterError("DgpSpec.betas must be non-empty");
    if (!(tau0 > 0.0) || !(tau0 < 1.0)) throw ParameterError("DgpSpec.tau0 must lie in (0, 1)");
    if (kind != DgpKind::PredictiveNull && betas.size() < 2)
        throw ParameterError("DgpSpec: break kinds need two betas");
}

void ExperimentSpec::validate() const {
    dgp.validate();
    trim.validate();
    if (methods.empty()) throw ParameterError("ExperimentSpec.methods must be non-empty");
    if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()))
        throw ParameterError("ExperimentSpec.n_list must be non-empty ascending");
    if (reps < 100) throw ParameterError("ExperimentSpec.reps must be >= 100");
    if (level != 0.10 && level != 0.05 && level != 0.01)
        throw ParameterError("ExperimentSpec.level must be 0.10, 0.05 or 0.01");
    if (cv == CvSource::ChiSquared && test != TestKind::KnownBreakWald)
        throw ParameterError("chi-squared critical values require the known-break test");
}

ExperimentReport run_size_power(const ExperimentSpec& spec) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.name = spec.name;
    const CvBank bank = prepare_cv(spec);
    const int p = wald::restriction_count(spec.mode);

    for (std::size_t n : spec.n_list) {
        for (Method method : spec.methods) {
            std::vector<int> outcome(spec.reps, -1); // -1 failure, 0 accept, 1 reject
            parallel_for(
                spec.reps,
                [&](std::size_t rep) {
                    try {
                        const auto ctx = make_context(spec.dgp, n,
                                                      rng::derive_seed(spec.seed, rep));
                        bool reject = false;
                        if (spec.cv == CvSource::Bootstrap) {
                            boot::BootstrapSpec bs = spec.bootstrap;
                            bs.seed = rng::derive_seed(spec.seed ^ 0x9E3779B97F4A7C15ull, rep);
                            const auto res =
                                boot::wild_bootstrap(ctx.frame.y, ctx.frame.x, bs, spec.trim,
                                                     method, spec.mode, spec.ivx, 1);
                            reject = res.p_value <= spec.level;
                        } else if (spec.cv == CvSource::ChiSquared) {
                            const double w =
                                method == Method::Ols
                                    ? wald::wald_ols_at(ctx.frame.y, ctx.frame.x, ctx.k0,
                                                        spec.mode)
                                    : wald::wald_ivx_at(ctx.frame.y, ctx.frame.x, ctx.k0,
                                                        spec.ivx, spec.mode);
                            reject = w > stats::chi_squared_critical(p, 1.0 - spec.level);
                        } else {
                            const double s =
                                (spec.test == TestKind::KnownBreakWald)
                                    ? (method == Method::Ols
                                           ? wald::wald_ols_at(ctx.frame.y, ctx.frame.x,
                                                               ctx.k0, spec.mode)
                                           : wald::wald_ivx_at(ctx.frame.y, ctx.frame.x,
                                                               ctx.k0, spec.ivx, spec.mode))
                                    : wald::sup_wald_scan(ctx.frame.y, ctx.frame.x, method,
                                                          spec.mode, spec.trim, spec.ivx)
                                          .sup_value;
                            reject = s > bank.nbb.at(p);
                        }
                        outcome[rep] = reject ? 1 : 0;
                    } catch (const std::exception&) {
                        outcome[rep] = -1;
                    }
                },
                spec.threads);

            std::size_t rejects = 0, failures = 0;
            for (int o : outcome) {
                if (o < 0)
                    ++failures;
                else
                    rejects += static_cast<std::size_t>(o);
            }
            const std::size_t done = spec.reps - failures;
            Cell cell;
            cell.labels = {{"n", std::to_string(n)}, {"method", method_name(method)}};
            const double rate =
                done > 0 ? static_cast<double>(rejects) / static_cast<double>(done) : 0.0;
            cell.stats["rejection_rate"] = rate;
            cell.stats["mc_se"] = done > 0 ? rate_se(rate, done) : 0.0;
            finish_cell(cell, spec.reps, failures);
            report.cells.push_back(std::move(cell));
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_breakdate_accuracy(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.dgp.kind == DgpKind::PredictiveNull)
        throw ParameterError("break-date accuracy requires a break dgp");
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.name = spec.name;
    const bp::TrimSpec trim = scan_trim(spec);

    for (std::size_t n : spec.n_list) {
        for (Method method : spec.methods) {
            std::vector<double> k_err(spec.reps, std::numeric_limits<double>::quiet_NaN());
            parallel_for(
                spec.reps,
                [&](std::size_t rep) {
                    try {
                        const auto ctx = make_context(spec.dgp, n,
                                                      rng::derive_seed(spec.seed, rep));
                        const bool intercept = spec.mode == wald::StabilityMode::Joint &&
                                               spec.dgp.kind != DgpKind::Ar1Break;
                        bp::IvxOptions ivx;
                        ivx.spec = spec.ivx;
                        const auto est = bp::estimate_single_break(
                            ctx.frame.y, ctx.frame.x, trim, method, intercept, ivx);
                        k_err[rep] = static_cast<double>(est.k_hat[0]) -
                                     static_cast<double>(ctx.k0);
                    } catch (const std::exception&) {
                    }
                },
                spec.threads);

            std::vector<double> ok;
            ok.reserve(spec.reps);
            for (double e : k_err) {
                if (!std::isnan(e)) ok.push_back(e);
            }
            const std::size_t failures = spec.reps - ok.size();
            Cell cell;
            cell.labels = {{"n", std::to_string(n)}, {"method", method_name(method)}};
            if (!ok.empty()) {
                std::vector<double> abs_err = ok;
                for (auto& v : abs_err) v = std::fabs(v);
                cell.stats["median_abs_k_err"] = stats::median_abs(ok);
                cell.stats["mean_abs_k_err"] = stats::mean(abs_err);
                cell.stats["q90_abs_k_err"] = stats::quantile(abs_err, 0.90);
                cell.stats["mean_abs_tau_err"] =
                    stats::mean(abs_err) / static_cast<double>(n);
                cell.stats["mc_se"] =
                    std::sqrt(stats::variance(abs_err) / static_cast<double>(ok.size()));
            }
            finish_cell(cell, spec.reps, failures);
            report.cells.push_back(std::move(cell));
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_estimator_distribution(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.dgp.kind != DgpKind::Ar1Break)
        throw ParameterError("estimator distribution cells require the two-regime AR dgp");
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.name = spec.name;
    const bp::TrimSpec trim = scan_trim(spec);

    for (std::size_t n : spec.n_list) {
        std::vector<double> e1(spec.reps, std::numeric_limits<double>::quiet_NaN());
        std::vector<double> e2(spec.reps, std::numeric_limits<double>::quiet_NaN());
        parallel_for(
            spec.reps,
            [&](std::size_t rep) {
                try {
                    const auto ctx =
                        make_context(spec.dgp, n, rng::derive_seed(spec.seed, rep));
                    const auto est = bp::estimate_single_break(ctx.frame.y, ctx.frame.x, trim,
                                                               Method::Ols, false);
                    const double root_n = std::sqrt(static_cast<double>(n));
                    e1[rep] = root_n * (est.fits[0].slope - spec.dgp.betas[0]);
                    e2[rep] = root_n * (est.fits[1].slope - spec.dgp.betas[1]);
                } catch (const std::exception&) {
                }
            },
            spec.threads);

        std::vector<double> ok1, ok2;
        for (std::size_t i = 0; i < spec.reps; ++i) {
            if (!std::isnan(e1[i]) && !std::isnan(e2[i])) {
                ok1.push_back(e1[i]);
                ok2.push_back(e2[i]);
            }
        }
        const std::size_t failures = spec.reps - ok1.size();
        Cell cell;
        cell.labels = {{"n", std::to_string(n)}, {"method", "ols"}};
        if (ok1.size() > 2) {
            cell.stats["mean1"] = stats::mean(ok1);
            cell.stats["var1"] = stats::variance(ok1);
            cell.stats["skew1"] = stats::skewness(ok1);
            cell.stats["mean2"] = stats::mean(ok2);
            cell.stats["var2"] = stats::variance(ok2);
            cell.stats["skew2"] = stats::skewness(ok2);
            cell.stats["var1_target"] = (1.0 - spec.dgp.betas[0] * spec.dgp.betas[0]) /
                                        spec.dgp.tau0;
            cell.stats["var2_target"] = (1.0 - spec.dgp.betas[1] * spec.dgp.betas[1]) /
                                        (1.0 - spec.dgp.tau0);
        }
        finish_cell(cell, spec.reps, failures);
        report.cells.push_back(std::move(cell));
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_ols_vs_ivx_comparison(const ExperimentSpec& spec) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.name = spec.name;
    const CvBank bank = prepare_cv(spec);
    const int p = wald::restriction_count(spec.mode);
    const double beta_true = spec.dgp.betas.at(0);
    const bool intercept = spec.mode == wald::StabilityMode::Joint;

    for (std::size_t n : spec.n_list) {
        struct Draw {
            double bias_ols, bias_ivx;
            int rej_ols, rej_ivx;
            bool ok;
        };
        std::vector<Draw> draws(spec.reps, {0, 0, 0, 0, false});
        parallel_for(
            spec.reps,
            [&](std::size_t rep) {
                try {
                    // common random numbers: one dataset serves both methods
                    const auto ctx =
                        make_context(spec.dgp, n, rng::derive_seed(spec.seed, rep));
                    const std::size_t m = ctx.frame.y.size();
                    const auto z = est::ivx_instrument(ctx.frame.x, spec.ivx);
                    Draw d;
                    d.bias_ols =
                        est::ols_segment(ctx.frame.y, ctx.frame.x, {0, m}, intercept).slope -
                        beta_true;
                    d.bias_ivx = est::ivx_segment(ctx.frame.y, ctx.frame.x, z, {0, m},
                                                  intercept, est::IvxForm::CrossProduct)
                                     .slope -
                                 beta_true;
                    d.rej_ols = wald::sup_wald_scan(ctx.frame.y, ctx.frame.x, Method::Ols,
                                                    spec.mode, spec.trim)
                                        .sup_value > bank.nbb.at(p)
                                    ? 1
                                    : 0;
                    d.rej_ivx = wald::sup_wald_scan(ctx.frame.y, ctx.frame.x, Method::Ivx,
                                                    spec.mode, spec.trim, spec.ivx)
                                        .sup_value > bank.nbb.at(p)
                                    ? 1
                                    : 0;
                    d.ok = true;
                    draws[rep] = d;
                } catch (const std::exception&) {
                }
            },
            spec.threads);

        std::vector<double> bias_ols, bias_ivx;
        std::size_t rej_ols = 0, rej_ivx = 0, done = 0;
        for (const auto& d : draws) {
            if (!d.ok) continue;
            ++done;
            bias_ols.push_back(d.bias_ols);
            bias_ivx.push_back(d.bias_ivx);
            rej_ols += static_cast<std::size_t>(d.rej_ols);
            rej_ivx += static_cast<std::size_t>(d.rej_ivx);
        }
        Cell cell;
        cell.labels = {{"n", std::to_string(n)}, {"method", "paired"}};
        if (done > 2) {
            const double dn = static_cast<double>(done);
            cell.stats["mean_bias_ols"] = stats::mean(bias_ols);
            cell.stats["mean_bias_ivx"] = stats::mean(bias_ivx);
            cell.stats["se_bias_ols"] = std::sqrt(stats::variance(bias_ols) / dn);
            cell.stats["se_bias_ivx"] = std::sqrt(stats::variance(bias_ivx) / dn);
            cell.stats["rejection_rate_ols"] = static_cast<double>(rej_ols) / dn;
            cell.stats["rejection_rate_ivx"] = static_cast<double>(rej_ivx) / dn;
        }
        finish_cell(cell, spec.reps, spec.reps - done);
        report.cells.push_back(std::move(cell));
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    switch (spec.test) {
        case TestKind::BreakDate:
            return run_breakdate_accuracy(spec);
        case TestKind::EstimatorDist:
            return run_estimator_distribution(spec);
        default:
            return run_size_power(spec);
    }
}

std::vector<std::string> check_bounds(const ExperimentReport& report,
                                      const std::vector<Bound>& bounds) {
    std::vector<std::string> violations;
    for (const auto& b : bounds) {
        for (const auto& cell : report.cells) {
            bool match = true;
            for (const auto& [k, v] : b.cell_match) {
                const auto it = cell.labels.find(k);
                if (it == cell.labels.end() || it->second != v) {
                    match = false;
                    break;
                }
            }
            if (!match) continue;
            const auto it = cell.stats.find(b.stat);
            if (it == cell.stats.end()) {
                violations.push_back(report.name + ": stat '" + b.stat + "' missing");
                continue;
            }
            std::ostringstream os;
            if (b.min && it->second < *b.min) {
                os << report.name << ": " << b.stat << " = " << it->second << " below "
                   << *b.min;
                violations.push_back(os.str());
            } else if (b.max && it->second > *b.max) {
                os << report.name << ": " << b.stat << " = " << it->second << " above "
                   << *b.max;
                violations.push_back(os.str());
            }
        }
    }
    return violations;
}

std::string ExperimentReport::to_csv() const {
    std::set<std::string> label_keys, stat_keys;
    for (const auto& cell : cells) {
        for (const auto& [k, _] : cell.labels) label_keys.insert(k);
        for (const auto& [k, _] : cell.stats) stat_keys.insert(k);
    }
    std::ostringstream os;
    os.precision(10);
    os << "name";
    for (const auto& k : label_keys) os << ',' << k;
    os << ",reps,failures,valid";
    for (const auto& k : stat_keys) os << ',' << k;
    os << '\n';
    for (const auto& cell : cells) {
        os << name;
        for (const auto& k : label_keys) {
            const auto it = cell.labels.find(k);
            os << ',' << (it == cell.labels.end() ? "" : it->second);
        }
        os << ',' << cell.reps << ',' << cell.failures << ',' << (cell.valid ? 1 : 0);
        for (const auto& k : stat_keys) {
            const auto it = cell.stats.find(k);
            os << ',';
            if (it != cell.stats.end()) os << it->second;
        }
        os << '\n';
    }
    return os.str();
}

std::string ExperimentReport::summary() const {
    std::ostringstream os;
    os.precision(5);
    os << "experiment " << name << " (" << wall_seconds << " s)\n";
    for (const auto& cell : cells) {
        os << " ";
        for (const auto& [k, v] : cell.labels) os << " " << k << "=" << v;
        os << " reps=" << cell.reps;
        if (cell.failures > 0)
            os << " failures=" << cell.failures << (cell.valid ? "" : " INVALID");
        for (const auto& [k, v] : cell.stats) os << " " << k << "=" << v;
        os << '\n';
    }
    return os.str();
}

namespace {

Method parse_method(const std::string& s) {
    if (s == "ols") return Method::Ols;
    if (s == "ivx") return Method::Ivx;
    throw ParameterError("unknown method '" + s + "'");
}

} // namespace

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open experiment config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParameterError(std::string("experiment config parse error: ") + e.what());
    }

    ExperimentSpec spec;
    spec.name = j.value("name", spec.name);
    spec.reps = j.value("reps", spec.reps);
    spec.seed = j.value("seed", spec.seed);
    spec.level = j.value("level", spec.level);
    spec.exhaustive_scan = j.value("exhaustive_scan", spec.exhaustive_scan);
    if (j.contains("n_list")) spec.n_list = j["n_list"].get<std::vector<std::size_t>>();
    if (j.contains("methods")) {
        spec.methods.clear();
        for (const auto& m : j["methods"]) spec.methods.push_back(parse_method(m));
    }
    if (j.contains("test")) {
        const std::string t = j["test"];
        if (t == "sup_wald")
            spec.test = TestKind::SupWald;
        else if (t == "known_break_wald")
            spec.test = TestKind::KnownBreakWald;
        else if (t == "break_date")
            spec.test = TestKind::BreakDate;
        else if (t == "estimator_dist")
            spec.test = TestKind::EstimatorDist;
        else
            throw ParameterError("unknown test '" + t + "'");
    }
    if (j.contains("cv")) {
        const std::string c = j["cv"];
        if (c == "nbb")
            spec.cv = CvSource::Nbb;
        else if (c == "bootstrap")
            spec.cv = CvSource::Bootstrap;
        else if (c == "chi_squared")
            spec.cv = CvSource::ChiSquared;
        else
            throw ParameterError("unknown cv source '" + c + "'");
    }
    if (j.contains("mode")) {
        const std::string m = j["mode"];
        if (m == "joint")
            spec.mode = wald::StabilityMode::Joint;
        else if (m == "slope_only")
            spec.mode = wald::StabilityMode::SlopeOnly;
        else
            throw ParameterError("unknown mode '" + m + "'");
    }
    if (j.contains("trim")) {
        const auto& t = j["trim"];
        spec.trim.pi0 = t.value("pi0", spec.trim.pi0);
        if (t.value("exhaustive", false))
            spec.trim.grid_step.reset();
        else if (t.contains("grid_step"))
            spec.trim.grid_step = t["grid_step"].get<double>();
    }
    if (j.contains("ivx")) {
        spec.ivx.c_z = j["ivx"].value("c_z", spec.ivx.c_z);
        spec.ivx.delta = j["ivx"].value("delta", spec.ivx.delta);
    }
    if (j.contains("bootstrap")) {
        const auto& b = j["bootstrap"];
        spec.bootstrap.reps = b.value("reps", spec.bootstrap.reps);
        const std::string w = b.value("weights", std::string("rademacher"));
        if (w == "rademacher")
            spec.bootstrap.weight_law = boot::WeightLaw::Rademacher;
        else if (w == "normal")
            spec.bootstrap.weight_law = boot::WeightLaw::StandardNormal;
        else
            throw ParameterError("unknown bootstrap weights '" + w + "'");
    }
    if (j.contains("cv_grid")) {
        const auto& g = j["cv_grid"];
        spec.cv_grid.steps = g.value("steps", spec.cv_grid.steps);
        spec.cv_grid.reps = g.value("reps", spec.cv_grid.reps);
        spec.cv_grid.seed = g.value("seed", spec.cv_grid.seed);
    }
    if (j.contains("dgp")) {
        const auto& d = j["dgp"];
        const std::string kind = d.value("kind", std::string("predictive_null"));
        if (kind == "predictive_null")
            spec.dgp.kind = DgpKind::PredictiveNull;
        else if (kind == "predictive_break")
            spec.dgp.kind = DgpKind::PredictiveBreak;
        else if (kind == "ar1_break")
            spec.dgp.kind = DgpKind::Ar1Break;
        else
            throw ParameterError("unknown dgp kind '" + kind + "'");
        if (d.contains("alphas")) spec.dgp.alphas = d["alphas"].get<std::vector<double>>();
        if (d.contains("betas")) spec.dgp.betas = d["betas"].get<std::vector<double>>();
        spec.dgp.tau0 = d.value("tau0", spec.dgp.tau0);
        spec.dgp.c = d.value("c", spec.dgp.c);
        spec.dgp.gamma = d.value("gamma", spec.dgp.gamma);
        if (d.contains("fixed_root")) spec.dgp.fixed_root = d["fixed_root"].get<double>();
        spec.dgp.rho = d.value("rho", spec.dgp.rho);
        spec.dgp.sigma_u2 = d.value("sigma_u2", spec.dgp.sigma_u2);
        spec.dgp.sigma_v2 = d.value("sigma_v2", spec.dgp.sigma_v2);
        spec.dgp.ar_sigma2 = d.value("ar_sigma2", spec.dgp.ar_sigma2);
    }
    if (j.contains("bounds")) {
        for (const auto& b : j["bounds"]) {
            Bound bound;
            bound.stat = b.at("stat").get<std::string>();
            if (b.contains("min")) bound.min = b["min"].get<double>();
            if (b.contains("max")) bound.max = b["max"].get<double>();
            if (b.contains("cell")) {
                for (const auto& [k, v] : b["cell"].items())
                    bound.cell_match[k] = v.get<std::string>();
            }
            spec.bounds.push_back(std::move(bound));
        }
    }
    spec.validate();
    return spec;
}

dgp::Dataset make_replicate(const DgpSpec& dgp_spec, std::size_t n, std::uint64_t seed) {
    const auto ctx = make_context(dgp_spec, n, seed);
    dgp::Dataset data;
    data.y = ctx.frame.y;
    data.x = ctx.frame.x;
    return data;
}

} // namespace sbreak::mc

#include "sbreak/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbreak/bootstrap.hpp"
#include "sbreak/breakpoint.hpp"
#include "sbreak/csv.hpp"
#include "sbreak/dgp.hpp"
#include "sbreak/limits.hpp"
#include "sbreak/mc.hpp"
#include "sbreak/rng.hpp"
#include "sbreak/version.hpp"
#include "sbreak/wald.hpp"

namespace sbreak::cli {

namespace {

using nlohmann::json;

std::uint64_t now_ms() {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
}

// Every subcommand writes a manifest next to its primary output.
void write_manifest(const std::string& primary_output, const std::string& subcommand,
                    const json& params, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_ms) {
    json m;
    m["tool"] = "sbreak";
    m["version"] = kVersion;
    m["rng"] = rng::kGeneratorVersion;
    m["subcommand"] = subcommand;
    m["params"] = params;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["wall_ms"] = wall_ms;
    m["written_at_ms"] = now_ms();
    std::ofstream out(primary_output + ".manifest.json");
    out << m.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config parse error: ") + e.what());
    }
    return j;
}

dgp::PersistenceSpec parse_persistence(const json& j) {
    dgp::PersistenceSpec p;
    p.c = j.value("c", 0.0);
    p.gamma = j.value("gamma", 1.0);
    const std::string side = j.value("side", std::string("near"));
    if (side == "near")
        p.side = dgp::PersistenceSpec::Side::NearStationary;
    else if (side == "explosive")
        p.side = dgp::PersistenceSpec::Side::MildlyExplosive;
    else
        throw ParameterError("persistence.side must be 'near' or 'explosive'");
    return p;
}

dgp::InnovationParams parse_innov(const json& j, std::uint64_t seed) {
    dgp::InnovationParams innov;
    innov.sigma_u2 = j.value("sigma_u2", innov.sigma_u2);
    innov.sigma_v2 = j.value("sigma_v2", innov.sigma_v2);
    innov.rho = j.value("rho", innov.rho);
    innov.seed = seed;
    return innov;
}

dgp::BreakConfig parse_break_config(const json& j) {
    dgp::BreakConfig cfg;
    cfg.n = j.at("n").get<std::size_t>();
    if (j.contains("breaks")) cfg.breaks = j["breaks"].get<std::vector<std::size_t>>();
    const auto alphas = j.value("alphas", std::vector<double>{});
    const auto betas = j.value("betas", std::vector<double>{});
    const std::size_t regimes = cfg.breaks.size() + 1;
    for (std::size_t r = 0; r < regimes; ++r) {
        dgp::RegimeSpec spec;
        if (!alphas.empty()) spec.alpha = alphas.at(std::min(r, alphas.size() - 1));
        if (!betas.empty()) spec.beta = betas.at(std::min(r, betas.size() - 1));
        cfg.regimes.push_back(spec);
    }
    return cfg;
}

dgp::Dataset simulate_from_config(const json& j, std::uint64_t seed) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "predictive_null") {
        return dgp::simulate_predictive_null(j.at("n").get<std::size_t>(), j.value("beta0", 0.0),
                                             j.value("beta1", 0.0), j.value("c1", 0.0),
                                             j.value("rho", 0.0), seed);
    }
    if (kind == "predictive_break") {
        const auto cfg = parse_break_config(j);
        const auto pers = j.contains("persistence") ? parse_persistence(j["persistence"])
                                                    : dgp::PersistenceSpec{};
        return dgp::simulate_predictive_break(cfg, pers,
                                              parse_innov(j.value("innov", json::object()), seed));
    }
    if (kind == "ar1_break") {
        dgp::InnovationParams innov;
        innov.sigma_u2 = j.value("sigma2", 1.0);
        innov.seed = seed;
        std::optional<dgp::DriftSpec> drift;
        if (j.contains("drift"))
            drift = dgp::DriftSpec{j["drift"].value("c", 0.0), j["drift"].value("eta", 1.0)};
        return dgp::simulate_ar1_break(j.at("n").get<std::size_t>(), j.at("beta1").get<double>(),
                                       j.at("beta2").get<double>(),
                                       j.at("k0").get<std::size_t>(), innov, drift);
    }
    if (kind == "three_regime") {
        dgp::ThreeRegimeSpec spec;
        spec.n = j.at("n").get<std::size_t>();
        spec.k1 = j.at("k1").get<std::size_t>();
        spec.k2 = j.at("k2").get<std::size_t>();
        const auto betas = j.at("betas").get<std::vector<double>>();
        if (betas.size() != 3) throw ParameterError("three_regime.betas must have 3 entries");
        spec.beta1 = betas[0];
        spec.beta2 = betas[1];
        spec.beta3 = betas[2];
        const auto& rhos = j.at("rho");
        if (!rhos.is_array() || rhos.size() != 3)
            throw ParameterError("three_regime.rho must be an array of 3 persistence specs");
        spec.rho1 = parse_persistence(rhos[0]);
        spec.rho2 = parse_persistence(rhos[1]);
        spec.rho3 = parse_persistence(rhos[2]);
        return dgp::simulate_three_regime(spec,
                                          parse_innov(j.value("innov", json::object()), seed));
    }
    if (kind == "mean_variance_break") {
        const auto cfg = parse_break_config(j);
        const auto pers = j.contains("persistence") ? parse_persistence(j["persistence"])
                                                    : dgp::PersistenceSpec{};
        return dgp::simulate_mean_variance_break(
            cfg, j.at("k2").get<std::size_t>(), j.at("sigma1").get<double>(),
            j.at("sigma2").get<double>(), pers,
            parse_innov(j.value("innov", json::object()), seed));
    }
    throw ParameterError("unknown dgp kind '" + kind + "'");
}

struct DataArgs {
    std::string path;
    std::string y_col = "y";
    std::string x_col = "x";
    std::string model = "predictive";
};

dgp::Dataset load_data(const DataArgs& args) {
    const bool ar1 = args.model == "ar1";
    auto data = csv::read_dataset(args.path, args.y_col,
                                  ar1 ? std::optional<std::string>{} : std::optional(args.x_col));
    if (!ar1 && !data.has_x())
        throw ParameterError("column '" + args.x_col +
                             "' not found; pass --x-col or --model ar1");
    data.validate();
    return data;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override) {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = load_json(config_path);
    const std::uint64_t seed = seed_override.value_or(cfg.value("seed", 0));
    cfg["seed"] = seed;

    const auto data = simulate_from_config(cfg, seed);
    csv::write_dataset(out_path, data);

    json sidecar;
    sidecar["config"] = cfg;
    sidecar["meta"] = data.meta;
    sidecar["rows"] = data.rows();
    sidecar["rng"] = rng::kGeneratorVersion;
    std::ofstream side(out_path + ".meta.json");
    side << sidecar.dump(2) << "\n";

    const double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(out_path, "simulate", cfg, {config_path},
                   {out_path, out_path + ".meta.json"}, wall);
    std::cout << "wrote " << out_path << " (" << data.rows() << " rows)\n";
    return 0;
}

json fit_to_json(const est::SegmentFit& fit) {
    json f;
    f["lo"] = fit.range.lo;
    f["hi"] = fit.range.hi;
    if (fit.intercept) f["intercept"] = *fit.intercept;
    f["slope"] = fit.slope;
    f["rss"] = fit.rss;
    f["sigma2"] = fit.sigma2_hat;
    if (fit.degenerate) f["degenerate"] = true;
    return f;
}

} // namespace

std::string default_cache_dir() {
    if (const char* env = std::getenv("SBREAK_CACHE_DIR")) return env;
    return "sbreak-cache";
}

int run(int argc, const char* const* argv) {
    CLI::App app{"break-date estimation and stability testing for autoregressive and "
                 "predictive regressions"};
    app.require_subcommand(1);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
    std::string sim_config, sim_out;
    std::optional<std::uint64_t> sim_seed;
    sim->add_option("--config", sim_config, "dgp config (json)")->required();
    sim->add_option("--out", sim_out, "output csv path")->required();
    sim->add_option("--seed", sim_seed, "override the config seed");

    // ---- estimate ----
    auto* est_cmd = app.add_subcommand("estimate", "break-date estimation");
    DataArgs est_data;
    std::string est_method = "ols";
    int est_breaks = 1;
    double est_pi0 = 0.15;
    double est_grid = 0.01;
    bool est_exhaustive = false;
    int est_intercept = -1; // -1: model default
    double est_cz = 1.0, est_delta = 0.95;
    std::string est_ivx_resid = "instrument";
    std::string est_profile, est_out;
    est_cmd->add_option("--data", est_data.path, "input csv")->required();
    est_cmd->add_option("--y-col", est_data.y_col, "response column");
    est_cmd->add_option("--x-col", est_data.x_col, "regressor column");
    est_cmd->add_option("--model", est_data.model, "predictive|ar1");
    est_cmd->add_option("--method", est_method, "ols|ivx");
    est_cmd->add_option("--breaks", est_breaks, "1|2")->check(CLI::Range(1, 2));
    est_cmd->add_option("--trim", est_pi0, "trim fraction pi0");
    est_cmd->add_option("--grid", est_grid, "fraction grid step");
    est_cmd->add_flag("--exhaustive", est_exhaustive, "visit every admissible split");
    est_cmd->add_flag("--intercept,!--no-intercept", est_intercept,
                      "include an intercept (default: on for predictive, off for ar1)");
    est_cmd->add_option("--ivx-cz", est_cz, "instrument persistence c_z");
    est_cmd->add_option("--ivx-delta", est_delta, "instrument exponent delta");
    est_cmd->add_option("--ivx-residuals", est_ivx_resid, "instrument|regressor");
    est_cmd->add_option("--profile", est_profile, "write the rss profile csv here");
    est_cmd->add_option("--out", est_out, "write the estimate record (json) here");

    // ---- test ----
    auto* test_cmd = app.add_subcommand("test", "sup-Wald stability test");
    DataArgs test_data;
    std::string test_method = "ols";
    std::string test_cv = "nbb";
    std::string test_mode = "joint";
    double test_pi0 = 0.15, test_grid = 0.01;
    double test_cz = 1.0, test_delta = 0.95;
    std::size_t test_B = 399;
    std::string test_weights = "rademacher";
    std::uint64_t test_seed = 0;
    std::size_t cv_steps = 2000, cv_reps = 100000;
    std::uint64_t cv_seed = 0;
    std::string test_cache = default_cache_dir();
    std::string test_profile, test_out;
    test_cmd->add_option("--data", test_data.path, "input csv")->required();
    test_cmd->add_option("--y-col", test_data.y_col, "response column");
    test_cmd->add_option("--x-col", test_data.x_col, "regressor column");
    test_cmd->add_option("--model", test_data.model, "predictive|ar1");
    test_cmd->add_option("--method", test_method, "ols|ivx");
    test_cmd->add_option("--cv", test_cv, "nbb|bootstrap");
    test_cmd->add_option("--mode", test_mode, "joint|slope_only");
    test_cmd->add_option("--trim", test_pi0, "trim fraction pi0");
    test_cmd->add_option("--grid", test_grid, "fraction grid step");
    test_cmd->add_option("--ivx-cz", test_cz, "instrument persistence c_z");
    test_cmd->add_option("--ivx-delta", test_delta, "instrument exponent delta");
    test_cmd->add_option("--B", test_B, "bootstrap replicates");
    test_cmd->add_option("--weights", test_weights, "rademacher|normal");
    test_cmd->add_option("--seed", test_seed, "bootstrap seed");
    test_cmd->add_option("--cv-steps", cv_steps, "nbb grid steps");
    test_cmd->add_option("--cv-reps", cv_reps, "nbb replications");
    test_cmd->add_option("--cv-seed", cv_seed, "nbb seed");
    test_cmd->add_option("--cache-dir", test_cache, "critical-value cache directory");
    test_cmd->add_option("--profile", test_profile, "write the wald profile csv here");
    std::string test_draws;
    test_cmd->add_option("--draws", test_draws, "write the bootstrap draws csv here");
    test_cmd->add_option("--out", test_out, "write the decision record (json) here");

    // ---- limits ----
    auto* lim_cmd = app.add_subcommand("limits", "critical-value tables");
    std::string lim_table = "nbb";
    int lim_p = 1;
    double lim_pi0 = 0.15;
    std::size_t lim_steps = 2000, lim_reps = 100000;
    std::uint64_t lim_seed = 0;
    std::string lim_cache = default_cache_dir();
    std::string lim_out;
    lim_cmd->add_option("--table", lim_table, "table kind (nbb)");
    lim_cmd->add_option("--p", lim_p, "number of restrictions")->check(CLI::Range(1, 8));
    lim_cmd->add_option("--pi0", lim_pi0, "trim fraction");
    lim_cmd->add_option("--steps", lim_steps, "path steps");
    lim_cmd->add_option("--reps", lim_reps, "replications");
    lim_cmd->add_option("--seed", lim_seed, "seed");
    lim_cmd->add_option("--cache-dir", lim_cache, "cache directory");
    lim_cmd->add_option("--out", lim_out, "also write the table csv here");

    // ---- experiment ----
    auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiment suites");
    std::string exp_config, exp_out;
    exp_cmd->add_option("--config", exp_config, "experiment spec (json)")->required();
    exp_cmd->add_option("--out", exp_out, "write the report csv here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_config, sim_out, sim_seed);

        if (est_cmd->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto data = load_data(est_data);
            const auto frame = dgp::make_regression_frame(
                data, est_data.model == "ar1" ? dgp::Model::Ar1 : dgp::Model::Predictive);
            const Method method = est_method == "ivx" ? Method::Ivx : Method::Ols;
            const bool intercept =
                est_intercept >= 0 ? est_intercept > 0 : est_data.model != "ar1";
            bp::TrimSpec trim;
            trim.pi0 = est_pi0;
            if (est_exhaustive)
                trim.grid_step.reset();
            else
                trim.grid_step = est_grid;
            bp::IvxOptions ivx;
            ivx.spec = {est_cz, est_delta};
            ivx.basis = est_ivx_resid == "regressor" ? bp::IvxResidualBasis::Regressor
                                                     : bp::IvxResidualBasis::Instrument;

            const auto estimate =
                est_breaks == 1
                    ? bp::estimate_single_break(frame.y, frame.x, trim, method, intercept, ivx)
                    : bp::estimate_two_breaks_sequential(frame.y, frame.x, trim, method,
                                                         intercept, ivx);

            json rec;
            rec["k_hat"] = estimate.k_hat;
            rec["tau_hat"] = estimate.tau_hat;
            rec["delta_hat"] = estimate.delta_hat;
            rec["downgraded"] = estimate.downgraded;
            for (const auto& fit : estimate.fits) rec["fits"].push_back(fit_to_json(fit));

            std::cout << "rows: " << frame.y.size() << "\n";
            for (std::size_t i = 0; i < estimate.k_hat.size(); ++i)
                std::cout << "break " << (i + 1) << ": k_hat=" << estimate.k_hat[i]
                          << " tau_hat=" << estimate.tau_hat[i] << "\n";
            for (std::size_t i = 0; i < estimate.fits.size(); ++i) {
                const auto& f = estimate.fits[i];
                std::cout << "regime " << (i + 1) << " [" << f.range.lo << "," << f.range.hi
                          << "): slope=" << f.slope;
                if (f.intercept) std::cout << " intercept=" << *f.intercept;
                std::cout << " sigma2=" << f.sigma2_hat << "\n";
            }
            std::cout << "delta_hat: " << estimate.delta_hat << "\n";
            if (estimate.downgraded)
                std::cout << "warning: second scan infeasible, single break reported\n";

            std::vector<std::string> outputs;
            if (!est_profile.empty()) {
                csv::write_rss_profile(est_profile, estimate.rss_profile);
                outputs.push_back(est_profile);
            }
            const std::string primary =
                est_out.empty() ? est_data.path + ".estimate" : est_out;
            if (!est_out.empty()) {
                std::ofstream out(est_out);
                out << rec.dump(2) << "\n";
                outputs.push_back(est_out);
            }
            const double wall = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            json params = {{"method", est_method},     {"breaks", est_breaks},
                           {"trim", est_pi0},          {"grid", est_grid},
                           {"exhaustive", est_exhaustive}, {"intercept", intercept},
                           {"ivx_cz", est_cz},         {"ivx_delta", est_delta},
                           {"ivx_residuals", est_ivx_resid}, {"model", est_data.model}};
            write_manifest(primary, "estimate", params, {est_data.path}, outputs, wall);
            return 0;
        }

        if (test_cmd->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto data = load_data(test_data);
            const auto frame = dgp::make_regression_frame(
                data, test_data.model == "ar1" ? dgp::Model::Ar1 : dgp::Model::Predictive);
            const Method method = test_method == "ivx" ? Method::Ivx : Method::Ols;
            const auto mode = test_mode == "slope_only" ? wald::StabilityMode::SlopeOnly
                                                        : wald::StabilityMode::Joint;
            bp::TrimSpec trim;
            trim.pi0 = test_pi0;
            trim.grid_step = test_grid;
            const est::IvxSpec ivx{test_cz, test_delta};

            const auto scan = wald::sup_wald_scan(frame.y, frame.x, method, mode, trim, ivx);

            json rec;
            rec["statistic"] = scan.sup_value;
            rec["argmax_k"] = scan.argmax_k;
            rec["method"] = test_method;
            rec["mode"] = test_mode;
            std::cout << "sup statistic: " << scan.sup_value << " at k=" << scan.argmax_k
                      << "\n";

            if (test_cv == "nbb") {
                lim::PathGrid grid{cv_steps, cv_reps, cv_seed};
                const auto table = lim::nbb_critical_values(
                    wald::restriction_count(mode), test_pi0, grid, test_cache);
                rec["cv_source"] = "nbb";
                for (double level : {0.10, 0.05, 0.01}) {
                    const double cv = table.at(1.0 - level);
                    rec["critical_values"][std::to_string(level)] = cv;
                    rec["reject"][std::to_string(level)] = scan.sup_value > cv;
                    std::cout << "level " << level << ": cv=" << cv << " -> "
                              << (scan.sup_value > cv ? "reject" : "accept") << "\n";
                }
            } else if (test_cv == "bootstrap") {
                boot::BootstrapSpec bs;
                bs.reps = test_B;
                bs.seed = test_seed;
                bs.weight_law = test_weights == "normal" ? boot::WeightLaw::StandardNormal
                                                         : boot::WeightLaw::Rademacher;
                const auto res =
                    boot::wild_bootstrap(frame.y, frame.x, bs, trim, method, mode, ivx);
                rec["cv_source"] = "bootstrap";
                rec["p_value"] = res.p_value;
                rec["B"] = bs.reps;
                rec["weights"] = test_weights;
                rec["seed"] = test_seed;
                if (!test_draws.empty()) {
                    std::ofstream draws(test_draws);
                    if (!draws) throw CsvError("cannot open " + test_draws + " for writing");
                    draws << "b,stat\n";
                    draws.precision(17);
                    for (std::size_t b = 0; b < res.draws.size(); ++b)
                        draws << (b + 1) << ',' << res.draws[b] << '\n';
                }
                std::cout << "bootstrap p-value: " << res.p_value << " (B=" << bs.reps << ")\n";
                for (double level : {0.10, 0.05, 0.01}) {
                    rec["critical_values"][std::to_string(level)] =
                        res.critical_values.at(level);
                    rec["reject"][std::to_string(level)] = res.p_value <= level;
                    std::cout << "level " << level << ": cv=" << res.critical_values.at(level)
                              << " -> " << (res.p_value <= level ? "reject" : "accept") << "\n";
                }
            } else {
                throw ParameterError("--cv must be nbb or bootstrap");
            }

            std::vector<std::string> outputs;
            if (!test_profile.empty()) {
                csv::write_wald_profile(test_profile, scan);
                outputs.push_back(test_profile);
            }
            if (!test_draws.empty() && test_cv == "bootstrap") outputs.push_back(test_draws);
            const std::string primary =
                test_out.empty() ? test_data.path + ".test" : test_out;
            if (!test_out.empty()) {
                std::ofstream out(test_out);
                out << rec.dump(2) << "\n";
                outputs.push_back(test_out);
            }
            const double wall = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            json params = {{"method", test_method}, {"cv", test_cv},   {"mode", test_mode},
                           {"trim", test_pi0},      {"grid", test_grid}, {"B", test_B},
                           {"weights", test_weights}, {"seed", test_seed}};
            write_manifest(primary, "test", params, {test_data.path}, outputs, wall);
            return 0;
        }

        if (lim_cmd->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            if (lim_table != "nbb") throw ParameterError("--table must be nbb");
            lim::PathGrid grid{lim_steps, lim_reps, lim_seed};
            const auto table = lim::nbb_critical_values(lim_p, lim_pi0, grid, lim_cache);
            for (const auto& [level, value] : table.values)
                std::cout << "p=" << lim_p << " pi0=" << lim_pi0 << " level=" << level
                          << " cv=" << value << "\n";
            std::vector<std::string> outputs;
            if (!lim_out.empty()) {
                lim::write_cv_table(lim_out, table);
                outputs.push_back(lim_out);
            }
            const double wall = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            json params = {{"table", lim_table}, {"p", lim_p},       {"pi0", lim_pi0},
                           {"steps", lim_steps}, {"reps", lim_reps}, {"seed", lim_seed}};
            write_manifest(lim_out.empty() ? "nbb" : lim_out, "limits", params, {}, outputs,
                           wall);
            return 0;
        }

        if (exp_cmd->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            auto spec = mc::load_experiment_spec(exp_config);
            if (!spec.cache_dir) spec.cache_dir = default_cache_dir();
            const auto report = mc::run_experiment(spec);
            std::cout << report.summary();
            std::vector<std::string> outputs;
            if (!exp_out.empty()) {
                std::ofstream out(exp_out);
                out << report.to_csv();
                outputs.push_back(exp_out);
            }
            const double wall = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            write_manifest(exp_out.empty() ? exp_config : exp_out, "experiment",
                           {{"config", exp_config}}, {exp_config}, outputs, wall);
            const auto violations = mc::check_bounds(report, spec.bounds);
            for (const auto& v : violations) std::cerr << "bound violated: " << v << "\n";
            return violations.empty() ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace sbreak::cli

#include "sbreak/dgp.hpp"

#include <cmath>
#include <sstream>

#include "sbreak/rng.hpp"

namespace sbreak::dgp {

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// Cholesky factor of [[su2, rho*su*sv], [.., sv2]] applied to an iid pair.
struct BivariateDraw {
    double su, sv, rho, rho_c;

    BivariateDraw(const InnovationParams& p)
        : su(std::sqrt(p.sigma_u2)),
          sv(std::sqrt(p.sigma_v2)),
          rho(p.rho),
          rho_c(std::sqrt(1.0 - p.rho * p.rho)) {}

    std::pair<double, double> operator()(const rng::RandomStream& s, std::uint64_t t) const {
        const auto [z0, z1] = s.normal_pair_at(t);
        return {su * z0, sv * (rho * z0 + rho_c * z1)};
    }
};

} // namespace

void InnovationParams::validate() const {
    if (!(sigma_u2 >= 0.0) || !std::isfinite(sigma_u2))
        throw ParameterError("InnovationParams.sigma_u2 must be finite and >= 0");
    if (!(sigma_v2 >= 0.0) || !std::isfinite(sigma_v2))
        throw ParameterError("InnovationParams.sigma_v2 must be finite and >= 0");
    if (!(std::fabs(rho) <= 1.0))
        throw ParameterError("InnovationParams.rho must lie in [-1, 1]");
}

double PersistenceSpec::root(std::size_t n) const {
    const double shift = c / std::pow(static_cast<double>(n), gamma);
    return side == Side::NearStationary ? 1.0 - shift : 1.0 + shift;
}

void PersistenceSpec::validate(std::size_t n) const {
    if (!(gamma > 0.0) || !(gamma <= 1.0))
        throw ParameterError("PersistenceSpec.gamma must lie in (0, 1]");
    if (!std::isfinite(c)) throw ParameterError("PersistenceSpec.c must be finite");
    if (side == Side::NearStationary && !(root(n) > -1.0))
        throw ParameterError("PersistenceSpec: near-stationary root must exceed -1");
}

void RegimeSpec::validate() const {
    if (sigma && !(*sigma > 0.0)) throw ParameterError("RegimeSpec.sigma must be > 0");
}

void BreakConfig::validate() const {
    if (n < 2) throw ParameterError("BreakConfig.n must be >= 2");
    if (regimes.size() != breaks.size() + 1)
        throw ParameterError("BreakConfig.regimes must have breaks + 1 entries");
    std::size_t prev = 0;
    for (std::size_t k : breaks) {
        if (k <= prev || k >= n)
            throw ParameterError("BreakConfig.breaks must be strictly increasing in (0, n)");
        prev = k;
    }
    for (const auto& r : regimes) r.validate();
}

std::size_t BreakConfig::regime_of(std::size_t row) const {
    std::size_t j = 0;
    while (j < breaks.size() && row >= breaks[j]) ++j;
    return j;
}

void Dataset::validate() const {
    if (has_x() && x.size() != y.size())
        throw ParameterError("Dataset: y and x must have equal length");
    if (!all_finite(y) || !all_finite(x))
        throw ParameterError("Dataset: non-finite value");
}

RegressionFrame make_regression_frame(const Dataset& data, Model model) {
    RegressionFrame f;
    if (model == Model::Predictive) {
        if (!data.has_x()) throw ParameterError("predictive model requires an x column");
        f.y = data.y;
        f.x = data.x;
        return f;
    }
    if (data.rows() < 2) throw ParameterError("ar1 model requires at least 2 observations");
    f.y.assign(data.y.begin() + 1, data.y.end());
    f.x.assign(data.y.begin(), data.y.end() - 1);
    return f;
}

std::pair<std::vector<double>, std::vector<double>>
simulate_innovations(std::size_t n, const InnovationParams& params, std::uint64_t stream) {
    if (n < 2) throw ParameterError("simulate_innovations: n must be >= 2");
    params.validate();
    rng::RandomStream s(params.seed, stream);
    BivariateDraw draw(params);
    std::vector<double> u(n), v(n);
    for (std::size_t t = 0; t < n; ++t) {
        const auto [ut, vt] = draw(s, t);
        u[t] = ut;
        v[t] = vt;
    }
    return {std::move(u), std::move(v)};
}

std::vector<double> simulate_lur_regressor(std::size_t n, const PersistenceSpec& spec,
                                           std::span<const double> v) {
    if (v.size() != n) throw ParameterError("simulate_lur_regressor: v must have length n");
    spec.validate(n);
    const double r = spec.root(n);
    std::vector<double> x(n);
    double prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        prev = r * prev + v[t];
        x[t] = prev;
    }
    return x;
}

namespace {

// Shared generator for the predictive family. The regressor path starts at
// zero; row i pairs x_path[i] with the innovation pair of index i + 1, so the
// index-0 draw is discarded exactly like the path's own zero start.
struct FrameParams {
    std::size_t rows;
    std::vector<std::size_t> breaks;
    std::vector<double> alpha, beta, root;
    const InnovationParams* innov;
    // multiplies the u innovation of each row
    double sigma1 = 1.0, sigma2 = 1.0;
    std::size_t sigma_break = 0; // 0: no variance break
};

std::size_t regime_at(const std::vector<std::size_t>& breaks, std::size_t row) {
    std::size_t j = 0;
    while (j < breaks.size() && row >= breaks[j]) ++j;
    return j;
}

Dataset predictive_frame(const FrameParams& p) {
    const std::size_t m = p.rows;
    rng::RandomStream s(p.innov->seed);
    BivariateDraw draw(*p.innov);

    Dataset out;
    out.y.resize(m);
    out.x.resize(m);
    double x_prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = regime_at(p.breaks, i);
        out.x[i] = x_prev;
        const auto [u, v] = draw(s, i + 1);
        const double scale =
            (p.sigma_break == 0) ? 1.0 : (i < p.sigma_break ? p.sigma1 : p.sigma2);
        out.y[i] = p.alpha[r] + p.beta[r] * x_prev + scale * u;
        // the regressor of row i+1 evolves under that row's regime
        const std::size_t rn = (i + 1 < m) ? regime_at(p.breaks, i + 1) : r;
        x_prev = p.root[rn] * x_prev + v;
    }
    return out;
}

std::string describe(const char* kind, const InnovationParams& innov, std::size_t rows) {
    std::ostringstream os;
    os << "dgp=" << kind << " rows=" << rows << " sigma_u2=" << innov.sigma_u2
       << " sigma_v2=" << innov.sigma_v2 << " rho=" << innov.rho << " seed=" << innov.seed;
    return os.str();
}

} // namespace

Dataset simulate_predictive_null(std::size_t n, double beta0, double beta1, double c1,
                                 double rho, std::uint64_t seed) {
    if (n < 10) throw ParameterError("simulate_predictive_null: n must be >= 10");
    InnovationParams innov;
    innov.rho = rho;
    innov.seed = seed;
    innov.validate();

    FrameParams p;
    p.rows = n - 1;
    p.alpha = {beta0};
    p.beta = {beta1};
    p.root = {1.0 - c1 / static_cast<double>(n)};
    p.innov = &innov;
    Dataset out = predictive_frame(p);
    out.meta = describe("predictive_null", innov, out.rows());
    return out;
}

Dataset simulate_predictive_break(const BreakConfig& config, const PersistenceSpec& persistence,
                                  const InnovationParams& innov) {
    config.validate();
    innov.validate();
    persistence.validate(config.n);

    FrameParams p;
    p.rows = config.n;
    p.breaks = config.breaks;
    p.innov = &innov;
    for (const auto& r : config.regimes) {
        p.alpha.push_back(r.alpha);
        p.beta.push_back(r.beta);
        const PersistenceSpec& ps = r.persistence ? *r.persistence : persistence;
        ps.validate(config.n);
        p.root.push_back(ps.root(config.n));
    }
    Dataset out = predictive_frame(p);
    out.meta = describe("predictive_break", innov, out.rows());
    return out;
}

Dataset simulate_ar1_break(std::size_t n, double beta1, double beta2, std::size_t k0,
                           const InnovationParams& innov, std::optional<DriftSpec> drift) {
    if (n < 3) throw ParameterError("simulate_ar1_break: n must be >= 3");
    if (k0 < 1 || k0 >= n - 1)
        throw ParameterError("simulate_ar1_break: k0 must lie in [1, n-1)");
    innov.validate();
    if (drift && !(drift->eta > 0.5))
        throw ParameterError("DriftSpec.eta must exceed 1/2");

    rng::RandomStream s(innov.seed);
    const double sigma = std::sqrt(innov.sigma_u2);
    const double drift_term =
        drift ? drift->c * std::pow(static_cast<double>(n), -drift->eta) : 0.0;

    Dataset out;
    out.y.resize(n);
    double prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double beta = (t <= k0) ? beta1 : beta2;
        const double d = (drift && t <= k0) ? drift_term : 0.0;
        prev = beta * prev + d + sigma * s.normal_at(t);
        out.y[t] = prev;
    }
    std::ostringstream os;
    os << "dgp=ar1_break n=" << n << " beta1=" << beta1 << " beta2=" << beta2 << " k0=" << k0
       << " sigma2=" << innov.sigma_u2 << " seed=" << innov.seed;
    out.meta = os.str();
    return out;
}

Dataset simulate_ar1_break(std::size_t n, double beta1, const PersistenceSpec& beta2_spec,
                           std::size_t k0, const InnovationParams& innov,
                           std::optional<DriftSpec> drift) {
    beta2_spec.validate(n);
    return simulate_ar1_break(n, beta1, beta2_spec.root(n), k0, innov, drift);
}

Dataset simulate_three_regime(const ThreeRegimeSpec& spec, const InnovationParams& innov) {
    if (!(spec.k1 > 1 && spec.k1 < spec.k2 && spec.k2 < spec.n))
        throw ParameterError("ThreeRegimeSpec: need 1 < k1 < k2 < n");
    innov.validate();

    FrameParams p;
    p.rows = spec.n;
    p.breaks = {spec.k1, spec.k2};
    p.alpha = {0.0, 0.0, 0.0};
    p.beta = {spec.beta1, spec.beta2, spec.beta3};
    for (const auto* ps : {&spec.rho1, &spec.rho2, &spec.rho3}) {
        ps->validate(spec.n);
        p.root.push_back(ps->root(spec.n));
    }
    p.innov = &innov;
    Dataset out = predictive_frame(p);
    out.meta = describe("three_regime", innov, out.rows());
    return out;
}

std::vector<double> simulate_linear_process_errors(std::size_t n, std::span<const double> coeffs,
                                                   double sigma_e2, std::uint64_t seed,
                                                   std::uint64_t stream) {
    if (coeffs.empty()) throw ParameterError("linear process: coeffs must be non-empty");
    if (!(sigma_e2 > 0.0)) throw ParameterError("linear process: sigma_e2 must be > 0");
    double a1 = 0.0;
    double abs_sum = 0.0;
    for (double a : coeffs) {
        a1 += a;
        abs_sum += std::fabs(a);
    }
    if (std::fabs(a1) <= 1e-12 * abs_sum)
        throw ParameterError("linear process: filter sum a(1) must be nonzero");

    rng::RandomStream s(seed, stream);
    const double sigma = std::sqrt(sigma_e2);
    const std::size_t lag = coeffs.size() - 1;
    std::vector<double> e(n + lag);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = sigma * s.normal_at(i);

    std::vector<double> eps(n);
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * e[t + lag - j];
        eps[t] = acc;
    }
    return eps;
}

Dataset simulate_mean_variance_break(const BreakConfig& config, std::size_t k2, double sigma1,
                                     double sigma2, const PersistenceSpec& persistence,
                                     const InnovationParams& innov) {
    config.validate();
    innov.validate();
    persistence.validate(config.n);
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
        throw ParameterError("simulate_mean_variance_break: sigma1, sigma2 must be > 0");
    if (k2 < 1 || k2 >= config.n)
        throw ParameterError("simulate_mean_variance_break: k2 must lie in [1, n)");

    FrameParams p;
    p.rows = config.n;
    p.breaks = config.breaks;
    p.innov = &innov;
    for (const auto& r : config.regimes) {
        p.alpha.push_back(r.alpha);
        p.beta.push_back(r.beta);
        const PersistenceSpec& ps = r.persistence ? *r.persistence : persistence;
        ps.validate(config.n);
        p.root.push_back(ps.root(config.n));
    }
    p.sigma1 = sigma1;
    p.sigma2 = sigma2;
    p.sigma_break = k2;
    Dataset out = predictive_frame(p);
    out.meta = describe("mean_variance_break", innov, out.rows());
    return out;
}

} // namespace sbreak::dgp

#include "sbreak/limits.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sbreak/parallel.hpp"
#include "sbreak/rng.hpp"
#include "sbreak/stats.hpp"

namespace sbreak::lim {

void PathGrid::validate(bool need_reps) const {
    if (steps < 100) throw ParameterError("PathGrid.steps must be >= 100");
    if (need_reps && reps < 1000) throw ParameterError("PathGrid.reps must be >= 1000");
}

double LimitSample::quantile(double level) const {
    return stats::quantile(draws, level);
}

std::vector<double> simulate_ou_path(double c, std::size_t steps, std::uint64_t seed,
                                     std::uint64_t stream) {
    if (steps < 100) throw ParameterError("simulate_ou_path: steps must be >= 100");
    rng::RandomStream s(seed, stream);
    const double dt_root = 1.0 / std::sqrt(static_cast<double>(steps));
    const double factor = 1.0 + c / static_cast<double>(steps);
    std::vector<double> path(steps + 1);
    path[0] = 0.0;
    for (std::size_t i = 1; i <= steps; ++i)
        path[i] = factor * path[i - 1] + dt_root * s.normal_at(i - 1);
    return path;
}

JointLurSample joint_lur_functionals(double c, const PathGrid& grid, double rho, double r,
                                     unsigned threads) {
    grid.validate();
    if (!(std::fabs(rho) <= 1.0)) throw ParameterError("joint_lur_functionals: |rho| <= 1");
    if (!(r > 0.0) || !(r <= 1.0)) throw ParameterError("joint_lur_functionals: r in (0, 1]");

    JointLurSample out;
    out.ito_integral.assign(grid.reps, 0.0);
    out.quadratic.assign(grid.reps, 0.0);
    const auto upto = static_cast<std::size_t>(
        std::floor(r * static_cast<double>(grid.steps)));
    const double dt = 1.0 / static_cast<double>(grid.steps);
    const double dt_root = std::sqrt(dt);
    const double factor = 1.0 + c * dt;
    const double rho_c = std::sqrt(1.0 - rho * rho);

    parallel_for(
        grid.reps,
        [&](std::size_t rep) {
            rng::RandomStream s(grid.seed, rep);
            double j = 0.0;
            double ito = 0.0;
            double quad = 0.0;
            for (std::size_t i = 0; i < upto; ++i) {
                const auto [zv, zu] = s.normal_pair_at(i);
                const double db_u = dt_root * (rho * zv + rho_c * zu);
                ito += j * db_u;
                quad += j * j * dt;
                j = factor * j + dt_root * zv;
            }
            out.ito_integral[rep] = ito;
            out.quadratic[rep] = quad;
        },
        threads);
    return out;
}

LimitSample nbb_sup_sample(double pi0, int restrictions, const PathGrid& grid,
                           unsigned threads) {
    grid.validate();
    if (!(pi0 > 0.0) || !(pi0 <= 0.5)) throw ParameterError("nbb_sup_sample: pi0 in (0, 0.5]");
    if (restrictions < 1) throw ParameterError("nbb_sup_sample: restrictions must be >= 1");

    const std::size_t steps = grid.steps;
    const auto j_lo = static_cast<std::size_t>(
        std::ceil(pi0 * static_cast<double>(steps)));
    const auto j_hi = static_cast<std::size_t>(
        std::floor((1.0 - pi0) * static_cast<double>(steps)));
    if (j_lo > j_hi) throw ParameterError("nbb_sup_sample: empty trim window");

    LimitSample out;
    out.draws.assign(grid.reps, 0.0);
    const double dt_root = 1.0 / std::sqrt(static_cast<double>(steps));
    const auto p = static_cast<std::size_t>(restrictions);

    parallel_for(
        grid.reps,
        [&](std::size_t rep) {
            rng::RandomStream s(grid.seed, rep);
            // p independent Brownian paths; bridge formed against the endpoints
            std::vector<double> w(p * (steps + 1), 0.0);
            std::uint64_t idx = 0;
            for (std::size_t q = 0; q < p; ++q) {
                double acc = 0.0;
                for (std::size_t i = 1; i <= steps; ++i) {
                    acc += dt_root * s.normal_at(idx++);
                    w[q * (steps + 1) + i] = acc;
                }
            }
            double sup = 0.0;
            for (std::size_t j = j_lo; j <= j_hi; ++j) {
                const double sfrac =
                    static_cast<double>(j) / static_cast<double>(steps);
                double num = 0.0;
                for (std::size_t q = 0; q < p; ++q) {
                    const double bb =
                        w[q * (steps + 1) + j] - sfrac * w[q * (steps + 1) + steps];
                    num += bb * bb;
                }
                const double v = num / (sfrac * (1.0 - sfrac));
                if (v > sup) sup = v;
            }
            out.draws[rep] = sup;
        },
        threads);
    return out;
}

LimitSample second_regime_coeff_limit(double c, double tau0, const PathGrid& grid,
                                      bool experimental, unsigned threads) {
    grid.validate();
    if (!(tau0 >= 0.0) || !(tau0 < 1.0))
        throw ParameterError("second_regime_coeff_limit: tau0 in [0, 1)");
    if (!experimental && c != 0.0)
        throw ParameterError("second_regime_coeff_limit: nonzero c requires experimental mode");

    LimitSample out;
    out.draws.assign(grid.reps, 0.0);
    const std::size_t steps = grid.steps;
    const double dt = 1.0 / static_cast<double>(steps);
    const double dt_root = std::sqrt(dt);
    const auto start = static_cast<std::size_t>(
        std::floor(tau0 * static_cast<double>(steps)));

    parallel_for(
        grid.reps,
        [&](std::size_t rep) {
            rng::RandomStream s(grid.seed, rep);
            if (!experimental) {
                // (B(1)^2 - 1) / (2 (1 - tau0) int_0^1 B^2)
                double b = 0.0;
                double quad = 0.0;
                for (std::size_t i = 0; i < steps; ++i) {
                    b += dt_root * s.normal_at(i);
                    quad += b * b * dt;
                }
                out.draws[rep] = (b * b - 1.0) / (2.0 * (1.0 - tau0) * quad);
                return;
            }
            // F(t) = int_{tau0}^t e^{c (t - s)} dW(s), built forward from tau0
            const double factor = 1.0 + c * dt;
            double f = 0.0;
            double weighted = 0.0; // int_{tau0}^1 e^{2c(1-t)} F(t)^2 dt
            for (std::size_t i = start; i < steps; ++i) {
                f = factor * f + dt_root * s.normal_at(i);
                const double t = static_cast<double>(i + 1) * dt;
                weighted += std::exp(2.0 * c * (1.0 - t)) * f * f * dt;
            }
            out.draws[rep] = (0.5 * f * f + c * weighted - 0.5 * (1.0 - tau0)) / weighted;
        },
        threads);
    return out;
}

double CvTable::at(double level) const {
    const auto it = values.find(level);
    if (it == values.end()) throw ParameterError("CvTable: level not tabulated");
    return it->second;
}

namespace {

std::string cache_file_name(int p, double pi0, const PathGrid& grid) {
    std::ostringstream os;
    os << "nbb_p" << p << "_pi" << pi0 << "_s" << grid.steps << "_r" << grid.reps << "_seed"
       << grid.seed << ".csv";
    return os.str();
}

std::optional<CvTable> load_table(const std::filesystem::path& file, int p, double pi0,
                                  const PathGrid& grid) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    CvTable table;
    table.restrictions = p;
    table.pi0 = pi0;
    table.grid = grid;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("p,", 0) == 0) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 4) return std::nullopt;
        if (std::stoi(fields[0]) != p || std::stod(fields[1]) != pi0) return std::nullopt;
        table.values[std::stod(fields[2])] = std::stod(fields[3]);
    }
    if (table.values.size() != 3) return std::nullopt;
    return table;
}

} // namespace

void write_cv_table(const std::string& path, const CvTable& table) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot open " + path + " for writing");
    out << "# nbb critical values; seed=" << table.grid.seed << " steps=" << table.grid.steps
        << " reps=" << table.grid.reps << "\n";
    out << "p,pi0,level,value\n";
    for (const auto& [level, value] : table.values) {
        out << table.restrictions << "," << table.pi0 << "," << level << ",";
        out.precision(17);
        out << value << "\n";
        out.precision(6);
    }
}

CvTable nbb_critical_values(int restrictions, double pi0, const PathGrid& grid,
                            const std::optional<std::string>& cache_dir, unsigned threads) {
    if (cache_dir) {
        const auto file = std::filesystem::path(*cache_dir) / cache_file_name(restrictions, pi0, grid);
        if (auto cached = load_table(file, restrictions, pi0, grid)) return *cached;
    }

    CvTable table;
    table.restrictions = restrictions;
    table.pi0 = pi0;
    table.grid = grid;
    auto sample = nbb_sup_sample(pi0, restrictions, grid, threads);
    std::sort(sample.draws.begin(), sample.draws.end());
    for (double level : {0.90, 0.95, 0.99})
        table.values[level] = stats::quantile_sorted(sample.draws, level);

    if (cache_dir) {
        std::filesystem::create_directories(*cache_dir);
        write_cv_table(
            (std::filesystem::path(*cache_dir) / cache_file_name(restrictions, pi0, grid))
                .string(),
            table);
    }
    return table;
}

} // namespace sbreak::lim

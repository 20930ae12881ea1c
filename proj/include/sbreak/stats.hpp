#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sbreak::stats {

inline double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

inline double skewness(std::span<const double> v) {
    const double m = mean(v);
    double s2 = 0.0;
    double s3 = 0.0;
    for (double x : v) {
        const double d = x - m;
        s2 += d * d;
        s3 += d * d * d;
    }
    const double n = static_cast<double>(v.size());
    const double sd = std::sqrt(s2 / n);
    return (s3 / n) / (sd * sd * sd);
}

// Linearly interpolated sample quantile on a sorted copy (R type-7).
inline double quantile_sorted(std::span<const double> sorted, double level) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (level <= 0.0) return sorted.front();
    if (level >= 1.0) return sorted.back();
    const double h = level * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

inline double quantile(std::vector<double> draws, double level) {
    std::sort(draws.begin(), draws.end());
    return quantile_sorted(draws, level);
}

inline double median_abs(std::vector<double> v) {
    for (auto& x : v) x = std::fabs(x);
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    if (v.size() % 2 == 1) return v[mid];
    const double upper = v[mid];
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + upper);
}

// Upper-tail chi-squared critical values for the restriction counts used by
// the known-break tests. Levels are the 90/95/99% points.
inline double chi_squared_critical(int restrictions, double level) {
    struct Row {
        int p;
        double q90, q95, q99;
    };
    static constexpr Row table[] = {
        {1, 2.705543, 3.841459, 6.634897},
        {2, 4.605170, 5.991465, 9.210340},
    };
    for (const auto& row : table) {
        if (row.p == restrictions) {
            if (level == 0.90) return row.q90;
            if (level == 0.95) return row.q95;
            if (level == 0.99) return row.q99;
            throw std::invalid_argument("chi_squared_critical: level must be 0.90, 0.95 or 0.99");
        }
    }
    throw std::invalid_argument("chi_squared_critical: restrictions must be 1 or 2");
}

} // namespace sbreak::stats

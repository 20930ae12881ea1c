#pragma once

// Internal cumulative cross-product tables shared by the split-criterion and
// stability scans. Long double accumulators keep segment differences stable
// when prefixes grow large.

#include <cstddef>
#include <span>
#include <vector>

namespace sbreak::detail {

struct SegmentSums {
    long double n = 0, sx = 0, sy = 0, sz = 0;
    long double sxx = 0, sxy = 0, syy = 0;
    long double szx = 0, szy = 0, szz = 0;
};

class CumTable {
public:
    CumTable() = default;

    void build(std::span<const double> y, std::span<const double> x, std::span<const double> z) {
        const std::size_t m = y.size();
        has_z_ = !z.empty();
        resize_all(m + 1);
        for (std::size_t i = 0; i < m; ++i) {
            const long double xi = x[i];
            const long double yi = y[i];
            cx_[i + 1] = cx_[i] + xi;
            cy_[i + 1] = cy_[i] + yi;
            cxx_[i + 1] = cxx_[i] + xi * xi;
            cxy_[i + 1] = cxy_[i] + xi * yi;
            cyy_[i + 1] = cyy_[i] + yi * yi;
            if (has_z_) {
                const long double zi = z[i];
                cz_[i + 1] = cz_[i] + zi;
                czx_[i + 1] = czx_[i] + zi * xi;
                czy_[i + 1] = czy_[i] + zi * yi;
                czz_[i + 1] = czz_[i] + zi * zi;
            }
        }
    }

    // Refresh only the y-dependent columns (bootstrap replicates reuse x/z).
    void rebuild_y(std::span<const double> y, std::span<const double> x,
                   std::span<const double> z) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            const long double yi = y[i];
            cy_[i + 1] = cy_[i] + yi;
            cxy_[i + 1] = cxy_[i] + static_cast<long double>(x[i]) * yi;
            cyy_[i + 1] = cyy_[i] + yi * yi;
            if (has_z_) czy_[i + 1] = czy_[i] + static_cast<long double>(z[i]) * yi;
        }
    }

    SegmentSums segment(std::size_t lo, std::size_t hi) const {
        SegmentSums s;
        s.n = static_cast<long double>(hi - lo);
        s.sx = cx_[hi] - cx_[lo];
        s.sy = cy_[hi] - cy_[lo];
        s.sxx = cxx_[hi] - cxx_[lo];
        s.sxy = cxy_[hi] - cxy_[lo];
        s.syy = cyy_[hi] - cyy_[lo];
        if (has_z_) {
            s.sz = cz_[hi] - cz_[lo];
            s.szx = czx_[hi] - czx_[lo];
            s.szy = czy_[hi] - czy_[lo];
            s.szz = czz_[hi] - czz_[lo];
        }
        return s;
    }

    bool has_z() const { return has_z_; }

private:
    void resize_all(std::size_t n) {
        for (auto* v : {&cx_, &cy_, &cxx_, &cxy_, &cyy_}) v->assign(n, 0.0L);
        if (has_z_) {
            for (auto* v : {&cz_, &czx_, &czy_, &czz_}) v->assign(n, 0.0L);
        } else {
            for (auto* v : {&cz_, &czx_, &czy_, &czz_}) v->clear();
        }
    }

    bool has_z_ = false;
    std::vector<long double> cx_, cy_, cz_, cxx_, cxy_, cyy_, czx_, czy_, czz_;
};

} // namespace sbreak::detail

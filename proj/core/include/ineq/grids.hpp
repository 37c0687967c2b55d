#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ineq {

// Cell partition of an interval, uniform or geometric.  Representative points
// are cell midpoints (arithmetic or geometric mean to match the spacing).
struct GridSpec {
    enum class Kind { uniform, geometric };

    Kind kind = Kind::uniform;
    double lo = 0.0;
    double hi = 1.0;
    int cells = 1;

    static GridSpec uniform(double lo, double hi, int cells) {
        if (!(hi > lo) || cells < 1) throw std::invalid_argument("GridSpec::uniform");
        return {Kind::uniform, lo, hi, cells};
    }
    // requires 0 < lo < hi
    static GridSpec geometric(double lo, double hi, int cells) {
        if (!(lo > 0.0) || !(hi > lo) || cells < 1)
            throw std::invalid_argument("GridSpec::geometric");
        return {Kind::geometric, lo, hi, cells};
    }

    double edge(int i) const {
        if (kind == Kind::uniform) {
            const double u = static_cast<double>(i) / cells;
            return lo + (hi - lo) * u;
        }
        return lo * std::pow(hi / lo, static_cast<double>(i) / cells);
    }
    double mid(int i) const {
        if (kind == Kind::uniform) return 0.5 * (edge(i) + edge(i + 1));
        return std::sqrt(edge(i) * edge(i + 1));
    }
    double width(int i) const { return edge(i + 1) - edge(i); }
};

inline std::vector<double> grid_mids(const GridSpec& g) {
    std::vector<double> v(g.cells);
    for (int i = 0; i < g.cells; ++i) v[i] = g.mid(i);
    return v;
}

// Log-spaced sweep points for curve parameters (lambda, delta, ...).
inline std::vector<double> log_space(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw std::invalid_argument("log_space");
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i)
        v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return v;
}

inline std::vector<double> lin_space(double lo, double hi, int points) {
    if (!(hi > lo) || points < 2) throw std::invalid_argument("lin_space");
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return v;
}

// Rectangular sampled field in one or two dimensions, cell-midpoint values.
struct SampledField {
    int dim = 1;
    GridSpec gx;
    GridSpec gy;                // ignored when dim == 1
    std::vector<double> values; // dim 1: [ix]; dim 2: row-major [ix * gy.cells + iy]

    std::size_t index(int ix, int iy = 0) const {
        return dim == 1 ? static_cast<std::size_t>(ix)
                        : static_cast<std::size_t>(ix) * gy.cells + iy;
    }
    double cell_volume(int ix, int iy = 0) const {
        return dim == 1 ? gx.width(ix) : gx.width(ix) * gy.width(iy);
    }
};

}  // namespace ineq

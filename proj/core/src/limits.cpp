#include "ineq/limits.hpp"

#include <algorithm>
#include <cmath>

namespace ineq {

namespace {

// Plateau scan over values[k..n-1] anchored at the tail; returns the smallest
// k (widest window) whose running (max-min)/scale stays within rel_tol.
// Suffix extrema are built in one reverse pass.
LimitEstimate scan_tail(const Curve& c, double rel_tol) {
    const std::size_t n = c.size();
    LimitEstimate best;
    if (n < 3) return best;

    std::vector<double> smax(n), smin(n), ssum(n);
    smax[n - 1] = smin[n - 1] = ssum[n - 1] = c[n - 1].value;
    for (std::size_t i = n - 1; i-- > 0;) {
        smax[i] = std::max(smax[i + 1], c[i].value);
        smin[i] = std::min(smin[i + 1], c[i].value);
        ssum[i] = ssum[i + 1] + c[i].value;
    }
    for (std::size_t k = 0; k + 3 <= n; ++k) {
        const double mean = ssum[k] / static_cast<double>(n - k);
        const double scale = std::max(std::fabs(mean), 1e-300);
        if ((smax[k] - smin[k]) / scale <= rel_tol) {
            best.value = mean;
            best.spread = (smax[k] - smin[k]) / scale;
            best.window_lo = c[k].param;
            best.window_hi = c[n - 1].param;
            best.points = static_cast<int>(n - k);
            best.converged = true;
            return best;
        }
    }
    return best;
}

}  // namespace

LimitEstimate extract_limit(const Curve& curve, LimitSide side, double rel_tol) {
    if (side == LimitSide::large_param) return scan_tail(curve, rel_tol);
    Curve rev(curve.rbegin(), curve.rend());
    LimitEstimate e = scan_tail(rev, rel_tol);
    std::swap(e.window_lo, e.window_hi);
    return e;
}

}  // namespace ineq

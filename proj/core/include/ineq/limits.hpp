#pragma once

#include "ineq/weighted_samples.hpp"

namespace ineq {

enum class LimitSide {
    large_param,  // plateau as the curve parameter grows (trailing window)
    small_param   // plateau as the parameter shrinks (leading window)
};

struct LimitEstimate {
    double value = 0.0;     // mean over the plateau window
    double spread = 0.0;    // (max - min) / max(|mean|, tiny) over the window
    double window_lo = 0.0; // parameter range the window covers
    double window_hi = 0.0;
    int points = 0;
    bool converged = false;
};

// Detects a plateau at one end of a curve: the widest trailing (or leading)
// window, at least 3 points, whose relative variation stays below rel_tol.
// value is the window mean; converged is false when no such window exists.
LimitEstimate extract_limit(const Curve& curve, LimitSide side, double rel_tol);

}  // namespace ineq

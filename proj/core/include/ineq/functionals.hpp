#pragma once

#include <cstdint>
#include <span>

#include "ineq/corpus.hpp"
#include "ineq/limits.hpp"
#include "ineq/weighted_samples.hpp"

namespace ineq {

// Shared resolution knobs for the 1-D pair-quotient sweeps.  All of them run
// in polar form: the pair integral over (x, y) becomes x times a signed
// offset t > 0 on a geometric t-grid carrying exact cell masses of the scale
// weight.  Contributions with y outside the support box are folded in by
// symmetry, and the region beyond t_max is completed in closed form using
// f(y) = 0 there, so domain truncation never biases the small-parameter end.
struct PairSweepConfig {
    int x_cells = 2048;
    int t_cells = 1024;
    double t_min = 0.0;        // 0 = auto: 1e-4 * support radius
    double t_max = 0.0;        // 0 = auto: 2.2 * support radius
    double band_cells = 0.5;   // Gagliardo band exclusion, in x-cell widths
    double pad = 0.05;         // x-box padding, relative to the support radius
};

struct SweepResult {
    Curve curve;
    double sup_p = 0.0;        // sup over the swept parameter of param^p * mass
    LimitEstimate plateau;
    double target = 0.0;       // analytic limit this sweep should approach
};

// lambda^p (dx x t^{gamma-1}dt)-mass of {(x,t): |f(x+t)-f(x)| > lambda t^{gamma/p+1}}.
// Plateau (lambda -> inf) targets (1/gamma) ||f'||_p^p.  Requires gamma > 0.
SweepResult bsy_1d_onesided(const AnalyticTestFunction& f, double p, double gamma,
                            std::span<const double> lambdas,
                            const PairSweepConfig& cfg = {});

// lambda^p iint_{|f(x)-f(y)| > lambda |x-y|^{gamma/p+s}} |x-y|^{gamma-N} dx dy
// in one dimension (N = 1), both directions resolved exactly.  The plateau
// targets (k(p,N)/gamma) || |grad f| ||_p^p when s = 1.
SweepResult bsy_1d_twosided(const AnalyticTestFunction& f, double p, double s,
                            double gamma, std::span<const double> lambdas,
                            const PairSweepConfig& cfg = {});

// Stratified Monte Carlo backend for the same functional in dimension 1 or 2:
// x uniform over the support box, direction uniform on the sphere, radius
// log-uniform within geometric shells (one stratum per shell).
struct McPairConfig {
    std::int64_t samples = 20'000'000;
    std::uint64_t seed = 20240816;
    int shells = 48;
    double r_min = 0.0;        // 0 = auto: 1e-4 * support radius
    double r_max = 0.0;        // 0 = auto: 2.2 * support radius
    double pad = 0.05;
    int workers = 1;
};
SweepResult bsy_mc(const AnalyticTestFunction& f, double p, double s, double gamma,
                   std::span<const double> lambdas, const McPairConfig& cfg = {});

// ||f||_{W^{s,p}}^p = iint |f(x)-f(y)|^p / |x-y|^{1+sp} dx dy for 1-D f.
// A band |x-y| < band_cells * h is excluded from the grid sum and restored
// by the first-order analytic correction k(p,1) b^{p(1-s)} / (p(1-s)) ||f'||_p^p.
// Requires s in (0,1): at s = 1 the functional is infinite and rejected.
double gagliardo_seminorm_p(const AnalyticTestFunction& f, double s, double p,
                            const PairSweepConfig& cfg = {});

// (1-s) ||f||_{W^{s,p}}^p over an s-grid; approaches (k(p,1)/p) ||f'||_p^p
// as s -> 1.
Curve bbm_rescaled(const AnalyticTestFunction& f, double p,
                   std::span<const double> s_grid, const PairSweepConfig& cfg = {});

// I_{delta,s}(f) = iint_{|x-y|^{1-s} |f(x)-f(y)| > delta} delta^p / |x-y|^{N+p}.
// Curve over delta (descending toward 0 reads left to right on the returned
// ascending parameter axis).  s = 1 recovers the gradient: delta -> 0 plateau
// targets (k(p,1)/p) ||f'||_p^p.
Curve bn_curve(const AnalyticTestFunction& f, double s, double p,
               std::span<const double> deltas, const PairSweepConfig& cfg = {});

// s = 0 variant compared against the sandwich [4 kappa_1/p, 2^{p+1} kappa_1/p]
// * ||f||_p^p; `holds` records whether sup and small-delta value both land
// inside it.  The upper comparison always passes (triangle inequality).  For
// differentiable f the quotient |x-y||f(x)-f(y)| vanishes quadratically at
// the diagonal, so the small-delta values decay to zero and the lower
// comparison fails; the curve's large-delta end approaches
// (2 kappa_1 / p) ||f||_p^p exactly (far-field identity).
struct BnBounds {
    Curve curve;
    double sup_value = 0.0;       // max over the delta grid
    double small_delta_value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool holds = false;
    bool converged = false;
};
BnBounds bn_appendix_bounds(const AnalyticTestFunction& f, double p,
                            std::span<const double> deltas,
                            const PairSweepConfig& cfg = {});

// lambda^p L^2-mass of {|f(x)-f(y)| / |x-y|^{1/p} > lambda}; the lambda -> 0
// plateau targets 2 kappa_1 ||f||_p^p.
SweepResult gu_yung_curve(const AnalyticTestFunction& f, double p,
                          std::span<const double> lambdas,
                          const PairSweepConfig& cfg = {});

// Sensitivity of the small-lambda plateau to the t_max truncation: the
// analytic completion should make doubling t_max a no-op.
struct TruncationProbe {
    double base = 0.0;
    double doubled = 0.0;
    double rel_shift = 0.0;
};
TruncationProbe gu_yung_truncation_probe(const AnalyticTestFunction& f, double p,
                                         std::span<const double> lambdas,
                                         const PairSweepConfig& cfg = {});

// Weak quasinorm (p-th power) of the s = 0 quotient |f(x)-f(y)| / |x-y|^{1/p}
// over the pair plane, with a once-refined rerun to expose grid sensitivity.
struct MsWeakResult {
    double quasinorm_p = 0.0;
    double refined_quasinorm_p = 0.0;
    double ratio = 0.0;
};
MsWeakResult ms_weak_quasinorm(const AnalyticTestFunction& f, double p,
                               const PairSweepConfig& cfg = {});

// Weak quasinorm (p-th power) of log(1 + |f(x)-f(y)| / |x-y|^s) / |x-y|^{1/p},
// compared against the logarithmic gradient energy
// integral of log(1 + |f'|)^p: the quasinorm dominates it.
struct LogBsyResult {
    double quasinorm_p = 0.0;
    double target = 0.0;
    double ratio = 0.0;
    bool lower_bound_holds = false;
};
LogBsyResult log_bsy_quasinorm(const AnalyticTestFunction& f, double s, double p,
                               const PairSweepConfig& cfg = {});

}  // namespace ineq

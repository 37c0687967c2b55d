#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ineq/corpus.hpp"
#include "ineq/grids.hpp"
#include "ineq/limits.hpp"
#include "ineq/weights.hpp"

namespace ineq {

// ---------------------------------------------------------------------------
// Grid maximal operators.  Ball integrals use exact cell-intersection lengths
// in one dimension and midpoint inclusion in two; the field is extended by
// zero outside its grid, and averages divide by the full ball volume.
// ---------------------------------------------------------------------------

// Dyadic radius ladder: half a cell width (one whole cell per ball) doubling
// up to the domain diameter.
std::vector<double> dyadic_radii(const SampledField& field);

// Centered maximal function: max over radii of the ball average of |f|.
SampledField hl_maximal(const SampledField& field, std::span<const double> radii);

// Sharp fractional maximal function: sup over radii r (restricted to r < cap
// when cap > 0) of r^{-s-N} * int_{B(x,r)} |f - (f)_B|.  s = 0 recovers the
// Fefferman-Stein sharp function up to the r^{-N} vs |B|^{-1} normalization
// (a factor 2^N).
SampledField sharp_maximal(const SampledField& field, double s,
                           std::span<const double> radii, double cap = 0.0);

// Logarithmic maximal function: sup over radii of the ball average of
// log(1 + |f(x) - f(y)| / r^s) in y.
SampledField phi_log_maximal(const SampledField& field, double s,
                             std::span<const double> radii);

// ---------------------------------------------------------------------------
// The operator-family engine: any sampled family {T_t f} on a scale ladder
// becomes a superlevel curve lambda -> lambda^p (m x w)-mass of
// {(x,t): |T_t f(x)| > lambda d(t)}, with denominator d(t) = t^{gamma/p} for
// PowerWeight(gamma) and log(1/t)^{(1-eta)/p} for LogWeight(eta).
// ---------------------------------------------------------------------------

struct OperatorFamilySample {
    SampledField layout;         // cell masses and count; layout.values unused
    GridSpec t_grid;             // geometric scale ladder
    std::vector<double> values;  // [cell * t_grid.cells + it] = T_{t_mid} f(x_cell)
    ScaleWeight weight{PowerWeight(1.0)};
};

// Extra per-cell w-mass below the smallest grid scale (or beyond the largest
// for decreasing denominators), as a function of (cell, lambda).  Used when
// the scale measure keeps nonnegligible mass outside the sampled ladder.
using ScaleCompletion = std::function<double(std::size_t cell, double lambda)>;

struct FamilyEngineResult {
    Curve curve;                  // lambda -> lambda^p mass, exact cell overlaps
    double sup_p = 0.0;           // max over the lambda ladder
    double star_sup_p = 0.0;      // same sweep against T* f = max_t |T_t f|
    double sup_bound_rhs = 0.0;   // (1/|gamma|) ||T* f||_p^p, or 1/(eta-1) form
    bool sup_bound_holds = false; // sup_p <= star_sup_p and <= sup_bound_rhs
    LimitEstimate plateau;
    double target = 0.0;          // coefficient * ||limit samples||_p^p, NaN if none
};

// Sections are resolved inside boundary cells by inverting the monotone
// denominator, so each curve value is exact for cell-constant |T_t f(x)|.
// `limit_values` (one entry per layout cell, may be empty) is the pointwise
// scale limit of the family; it fixes `target`.
FamilyEngineResult family_engine(const OperatorFamilySample& fam, double p,
                                 std::span<const double> lambdas,
                                 std::span<const double> limit_values = {},
                                 const ScaleCompletion& completion = {},
                                 LimitSide side = LimitSide::large_param,
                                 double plateau_rel_tol = 0.02);

// ---------------------------------------------------------------------------
// Curated one-dimensional family experiments.
// ---------------------------------------------------------------------------

struct FamilyConfig {
    int x_cells = 1024;
    int t_cells = 256;
    double t_lo = 1e-7;
    double t_hi = 0.0;  // 0 = auto: 2.2 * support radius (0.4999 for log weight)
    double pad = 0.05;
    double plateau_rel_tol = 0.02;
};

// T_t f(x) = (f(x+t) - f(x)) / t with weight t^{gamma-1} dt.  gamma > 0
// plateaus (lambda -> infinity) at (1/gamma) ||f'||_p^p.  gamma < 0 carries
// the far-scale completion ray |T_t| = |f(x)|/t and plateaus toward the same
// (1/|gamma|) ||f'||_p^p as lambda -> 0.
FamilyEngineResult difference_quotient_experiment(const AnalyticTestFunction& f,
                                                  double p, double gamma,
                                                  std::span<const double> lambdas,
                                                  const FamilyConfig& cfg = {});

// T_t f(x) = (f(x) - average of f over B(x,t)) / t^2; the scale limit is
// -Delta f / (2(N+2)), so the plateau targets (1/gamma) ||Delta f / 6||_p^p
// in one dimension.
FamilyEngineResult higher_order_experiment(const AnalyticTestFunction& f,
                                           double p, double gamma,
                                           std::span<const double> lambdas,
                                           const FamilyConfig& cfg = {});

// T_t f(x) = (1/t) int_x^{x+t} f, denominator t^{1/p} (gamma = 1): the
// plateau recovers ||f||_p^p whenever f is 1/p-Hölder.  holder_constant is
// the sampled sup of |f(x)-f(y)| / |x-y|^{1/p}.
struct ThmPhResult {
    FamilyEngineResult engine;
    double holder_constant = 0.0;
};
ThmPhResult thmph_experiment(const AnalyticTestFunction& f, double p,
                             std::span<const double> lambdas,
                             const FamilyConfig& cfg = {});

// Difference quotients against the logarithmic measure t^{-1} log^{-eta}(1/t)
// on (0, 1/2), denominator log(1/t)^{(1-eta)/p}: plateau targets
// (1/(eta-1)) ||f'||_p^p.  The sub-grid scale mass, which decays only like
// 1/log(1/t), is completed analytically from the gradient model.
FamilyEngineResult log_weight_experiment(const AnalyticTestFunction& f, double p,
                                         double eta,
                                         std::span<const double> lambdas,
                                         const FamilyConfig& cfg = {});

// ---------------------------------------------------------------------------
// Oscillation (Campanato) experiments.
// ---------------------------------------------------------------------------

struct CampanatoConfig {
    int x_cells = 512;
    int r_cells = 48;        // oscillation radius ladder (geometric)
    int scale_cells = 200;   // R-ladder of the restricted family
    double box_factor = 3.0; // x-box half-width, in support radii
    double plateau_rel_tol = 0.02;
};

// Three expressions for the same quantity: lhs = ||f_s^#||_p^p, and the sup /
// large-lambda limit of lambda^p Leb{(x,R): f^#_{s,1/R}(x) > lambda R^{1/p}}.
// max_rel_gap is the largest pairwise relative difference.
struct CampanatoIdentity {
    double lhs = 0.0;
    double rhs_sup = 0.0;
    double rhs_lim = 0.0;
    bool lim_converged = false;
    double max_rel_gap = 0.0;
};
CampanatoIdentity campanato_identity(const AnalyticTestFunction& f, double s,
                                     double p, const CampanatoConfig& cfg = {});

// Weak quasinorm of |f(x)-f(y)| / |x-y|^{1/p+s} against ||f_s^#||_p^p, with
// the pointwise Campanato ratio |f(x)-f(y)| / (|x-y|^s (f_s^#(x) + f_s^#(y)))
// sampled over grid pairs; the refined sup reruns at doubled resolution.
struct CampanatoEmbedding {
    double bsy_quasinorm_p = 0.0;
    double cc_norm_p = 0.0;  // ||f_s^#||_p^p
    double ratio_sup = 0.0;
    double ratio_mean = 0.0;
    double ratio_sup_refined = 0.0;
};
CampanatoEmbedding campanato_bsy_embedding(const AnalyticTestFunction& f, double s,
                                           double p,
                                           const CampanatoConfig& cfg = {});

}  // namespace ineq

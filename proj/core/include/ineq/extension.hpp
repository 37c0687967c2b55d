#pragma once

#include <span>
#include <vector>

#include "ineq/corpus.hpp"
#include "ineq/grids.hpp"
#include "ineq/maximal.hpp"

namespace ineq {

// Poisson-type kernel P_s(x,t) = c t^{2s} / (|x|^2 + t^2)^{(N+2s)/2}.  The
// constant c is fixed numerically so the kernel has unit mass at every t;
// construction re-checks the mass through an independent split and throws
// if it misses 1 by more than 1e-8.
struct CsKernel {
    int dim = 1;
    double s = 0.5;
    double c = 0.0;

    CsKernel(int dim, double s);

    double density(const double* x, double t) const;
    // self-similar profile of the 1-D kernel: P(z,t) = profile(z/t)/t
    double profile(double u) const;
    // integral of the 1-D profile over (w, infinity), w >= 0
    double profile_tail(double w) const;
};

// u(x,t) = (P_s(.,t) * f)(x) over the scale ladder, weight PowerWeight(1).
// dim 1 (uniform grid): exact convolution of the cell-constant field with
// kernel cell masses (antiderivative ladder per scale).
// dim 2 (uniform grids): discrete-Fourier convolution on the field's box as
// the periodic cell, kernel renormalized to unit discrete mass.
// The field must be padded: the outer 10% frame of cells may carry at most
// 1e-8 of the total |f| mass, otherwise std::invalid_argument.
OperatorFamilySample cs_extend(const SampledField& f, double s,
                               const GridSpec& t_grid);

// (-Delta)^s f through the |xi|^{2s} multiplier on the field's periodic box
// (dim 1 or 2, uniform grids).  The zero frequency is annihilated for every
// s > 0, so outputs are mean-free on the box.  Throws when the top decade of
// frequencies carries more than 1e-10 of the spectral energy (field
// underresolved) -- identically zero fields pass trivially.
SampledField spectral_frac_laplacian(const SampledField& f, double s);

// quotient field (P_s[f](x,t) - f(x)) / t^{2s} at one scale, evaluated
// spectrally on the 4x-padded box of f (cancellation-free: the multiplier
// difference is formed in the frequency domain)
SampledField cs_quotient_field(const AnalyticTestFunction& f, double s, double t,
                               int cells = 2048);

struct MuCalibration {
    double s = 0.0;
    double mu = 0.0;
    double fit_quality = 0.0;  // 1 - residual energy / oracle energy
    double t_used = 0.0;
    bool reliable() const { return fit_quality > 0.999; }
};

// least-squares mu over the family so that the spectral oracle satisfies
// (-Delta)^s f = -mu * quotient at the calibration scale; the scale is chosen
// so the next-order bias stays near 2e-4.  dim 1 only.
MuCalibration calibrate_mu(double s, int dim,
                           std::span<const AnalyticTestFunction> family);

// max-norm of (-Delta)^s f + mu * quotient at scale t; decays as t -> 0
// when mu is calibrated
double mu_residual(const AnalyticTestFunction& f, double s, double mu, double t,
                   int cells = 2048);

struct CsBsyConfig {
    int x_cells = 2048;
    int t_cells = 160;
    double t_lo = 1e-4;
    double t_hi = 24.0;
    double box_factor = 4.0;  // grid half-width over the support radius
    int lambda_cells = 60;
    // lambda ladder in units of max |(-Delta)^s f| / mu; rough orders
    // (s near 1) need a higher top because the family converges like t^{2-2s}
    double lambda_lo_factor = 0.05;
    double lambda_hi_factor = 12.0;
    double plateau_rel_tol = 0.02;
};

struct CsBsyResult {
    double lhs = 0.0;             // ||(-Delta)^s f||_p, spectral oracle
    double rhs = 0.0;             // mu * weak quasinorm of the extension quotient
    double liminf_plateau = 0.0;  // mu * plateau^{1/p}, directly comparable to lhs
    bool plateau_converged = false;
    bool holds = false;  // lhs <= rhs with 1% discretization slack
    MuCalibration calibration;
    FamilyEngineResult engine;
};

// weak-quasinorm control of ||(-Delta)^s f||_p by the extension quotient
// (P_s[f](x,t) - f(x)) / t^{2s + 1/p}: engine curve, plateau against the
// spectral oracle, and the inequality verdict.  Identically zero fields
// return the all-zero result with holds = true.
CsBsyResult verify_cs_bsy(const AnalyticTestFunction& f, double s, double p,
                          const CsBsyConfig& cfg = {});

struct HeatConfig {
    int x_cells = 2048;
    int t_cells = 192;
    double t_lo = 1e-6;
    double t_hi = 40.0;
    double box_factor = 4.0;
    int lambda_cells = 40;
    double plateau_rel_tol = 0.02;
};

// Gauss-Weierstrass extension of |f| on the scale ladder (Fourier multiplier
// e^{-t xi^2}; the spectral-tail guard is relaxed to 1e-6 because the heat
// multiplier suppresses the tail).  Weight PowerWeight(1).
OperatorFamilySample heat_extension(const AnalyticTestFunction& f,
                                    const GridSpec& t_grid, int cells,
                                    double box_factor = 4.0);

// engine curve of lambda^p L^{N+1}{ u(x,t)/t^{1/p} > lambda } for the heat
// extension u of |f|; plateau target ||f||_p^p.  Empty lambdas get an
// automatic ladder from max |f|; identically zero f returns the all-zero
// result.
FamilyEngineResult heat_experiment(const AnalyticTestFunction& f, double p,
                                   std::span<const double> lambdas = {},
                                   const HeatConfig& cfg = {});

}  // namespace ineq

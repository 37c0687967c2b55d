#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ineq/grids.hpp"

namespace ineq {

enum class Smoothness { c_infinity, lipschitz };

// A test function with analytic derivative oracles.  eval/gradient/laplacian
// receive a pointer to `dim` coordinates.  laplacian may be absent for
// functions that are only Lipschitz.
struct AnalyticTestFunction {
    std::string name;
    int dim = 1;
    Smoothness smoothness = Smoothness::c_infinity;
    // |f| < 1e-12 * max|f| outside the ball of this radius
    double support_radius = 1.0;

    std::function<double(const double*)> eval;
    std::function<void(const double*, double*)> gradient;
    std::function<double(const double*)> laplacian;  // empty if unavailable

    bool has_laplacian() const { return static_cast<bool>(laplacian); }

    double operator()(double x) const { return eval(&x); }
    double d1(double x) const {
        double g;
        gradient(&x, &g);
        return g;
    }
    double d2(double x) const { return laplacian(&x); }
};

// Named members: "gaussian" (any dim), "bump" (any dim), "tent" (dim 1,
// Lipschitz), "modulated_gaussian" (dim 1).  Throws std::invalid_argument
// for unknown names or unsupported dims.
AnalyticTestFunction builtin_function(const std::string& name, int dim);

std::vector<std::string> builtin_function_names();

// k(p, N) = integral over the unit sphere S^{N-1} of |<e, w>|^p dsigma(w)
// (unnormalized surface measure).  Exact 2 for N = 1; quadrature otherwise
// with absolute error below 1e-10.
double k_constant(double p, int dim);

// Volume of the unit ball in R^N.
double ball_volume(int dim);

// Midpoint sampling of f onto a field (dim 1 or 2 to match the grids given).
SampledField sample_field(const AnalyticTestFunction& f, const GridSpec& gx);
SampledField sample_field(const AnalyticTestFunction& f, const GridSpec& gx,
                          const GridSpec& gy);

// Quadrature helpers on the corpus: integral over R^dim of |g|^p where g is
// f, |grad f| paired with a direction, or the laplacian, resolved by panels
// over the support box.
double lp_power_norm(const AnalyticTestFunction& f, double p);            // ||f||_p^p
double grad_lp_power_norm(const AnalyticTestFunction& f, double p);       // || |grad f| ||_p^p
double laplacian_lp_power_norm(const AnalyticTestFunction& f, double p);  // ||Delta f||_p^p

}  // namespace ineq

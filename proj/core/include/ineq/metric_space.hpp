#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ineq/weights.hpp"

namespace ineq {

// Finite metric measure space: a symmetric distance matrix with zero diagonal
// satisfying the triangle inequality, and a positive mass per point.  Balls
// are closed: B(x,r) = {y : d(x,y) <= r}.
struct PointCloudSpace {
    int n = 0;
    std::vector<double> distance;  // row-major n*n
    std::vector<double> masses;
    double diam = 0.0;
    double resolution = 0.0;  // smallest positive distance / 2 (0 when n == 1)
    double total_mass = 0.0;

    // validates symmetry, the zero diagonal, positivity of the masses, and
    // the triangle inequality (every triple for n <= 300, 10^4 seeded random
    // triples above); throws std::invalid_argument on any violation
    PointCloudSpace(std::vector<double> distance_matrix, std::vector<double> point_masses);

    // Euclidean cloud: coords is row-major n*dim
    static PointCloudSpace from_points(std::span<const double> coords, int dim,
                                       std::vector<double> point_masses);

    double d(int i, int j) const { return distance[static_cast<std::size_t>(i) * n + j]; }
    double ball_mass(int x, double r) const;
};

// Strictly increasing continuous gauge rho: (0,inf) -> (0,inf) with
// rho(0+) = 0, supplied as a callable; monotonicity and positivity are spot
// checked on a 1024-point log grid over [check_lo, check_hi] at construction.
class RadialGauge {
public:
    explicit RadialGauge(std::function<double(double)> rho, double check_lo = 1e-9,
                         double check_hi = 1e3);

    double rho(double r) const { return rho_(r); }
    double rho_bar(double r) const { return rho_(2.0 * r); }

private:
    std::function<double(double)> rho_;
};

// rho(r) = r^exponent, exponent > 0
RadialGauge power_gauge(double exponent);

// rho(r) = r^{2N} * (log(e/r))^{-beta} on (0,1], r^{2N} beyond; beta > 0.
// Strictly increasing and continuous at 1.
RadialGauge log_gauge(double dim_n, double beta);

// Mass-weighted mean of f over the closed ball B(x,r); the ball always
// contains x, so the mass is positive.
double ball_average(const PointCloudSpace& space, std::span<const double> f, int x, double r);

// Radii r_0 = r0 > r_1 > ... with rho_bar(r_n) = rho_bar(r_{n-1})/2, each
// solved by bisection to 1e-12 relative; the list ends with the first radius
// below r_min.  Throws when the gauge fails to behave monotonically on a
// bracket.
std::vector<double> garsia_sequence(const RadialGauge& gauge, double r0, double r_min);

struct GarsiaCheck {
    double max_violation_ratio = 0.0;  // max over pairs of lhs/rhs
    int degenerate_pairs = 0;          // rhs == 0 with lhs > 0; impossible in theory
    bool holds = false;                // max ratio <= 1 + 1e-9 and no degenerate pairs
};

// For every pair checks |f(x)-f(y)| <= 9 * I(2d) * (S(x) + S(y)) where
// d = d(x,y), S is the restricted sharp maximal over radii below 2d with
// gauge rho_bar, and I(2d) is the lower Stieltjes sum of
// int_0^{2d} d(rho_bar)/mu^2 on the garsia_sequence partition
// (mu(r) = inf_x m(B(x,r))), closed exactly below the resolution where every
// ball is a singleton.  The lower sum makes the check stricter than the
// continuum inequality.
GarsiaCheck garsia_check(const PointCloudSpace& space, std::span<const double> f,
                         const RadialGauge& gauge);

// Sharp maximal-type operator per point:
//   sup_{0 < r < diam} m(B(x,r))/rho(r) * int_B |f - (f)_B| dm.
// The sup runs over the distances out of x (ball contents are piecewise
// constant in r and the gauge increases, so each plateau's sup sits at its
// left end); exact, not sampled.
std::vector<double> sharp_rho_maximal(const PointCloudSpace& space, std::span<const double> f,
                                      const RadialGauge& gauge);

struct CarlesonCover {
    std::vector<int> centers;
    std::vector<double> radii;          // Vitali radii t_i (per-point sup scales)
    std::vector<double> witness_radii;  // r_i <= t_i: ball where the threshold is attained
    double dilation = 4.0;
    double c_m = 0.0;    // empirical doubling constant of the mass chain
    bool covers = false; // dilated balls cover the superlevel set, boxes its sections
};

struct VitaliCarlesonResult {
    CarlesonCover cover;
    double measured_mass = 0.0;  // product mass of {(x,t) : |T_t f(x)| / t^{1/p} > lambda}
    double box_mass = 0.0;       // sum over boxes B(x_i, 4 t_i) x (0, 2 t_i)
    double bound = 0.0;          // (2 c_m / lambda^p) ||f||_p^p
    bool holds = false;          // measured <= boxes <= bound with the cover verified
};

// Weak-type covering verification for T_t f(x) = ball average of f.  The
// superlevel sections in t are computed exactly (T_t is piecewise constant
// between consecutive distances), t_i is the exact sup of the section, and
// the witness ball is the plateau on which the threshold quotient meets
// lambda.  Greedy Vitali selection in decreasing t_i order; a cover failure
// throws (it would mean the construction is wrong, not the data).
VitaliCarlesonResult vitali_carleson_verify(const PointCloudSpace& space,
                                            std::span<const double> f, double p, double lambda);

// Generalized version for the product measure nu = m x weight:
// T_t f(x) = C(x,t)^{-1/p} int_B f dm with C(x,t) = nu-tent mass ratio
// int_0^{4t} weight, superlevel condition |T_t| / C(x,t)^{1/p} > lambda,
// masses measured in nu.  Only power weights give finite covers (a weight
// supported in (0,1/2) makes tall tents degenerate).
VitaliCarlesonResult vitali_carleson_verify(const PointCloudSpace& space,
                                            std::span<const double> f, double p, double lambda,
                                            const PowerWeight& weight);

// nu-tent mass ratio nu(B(x,t) x (0,t)) / m(B(x,t)); equals the weight's
// (0,t] mass for every x by the product structure.
double carleson_tent_ratio(const PointCloudSpace& space, const PowerWeight& weight, int x,
                           double t);

struct AhlforsCheck {
    double dimension = 0.0;  // least-squares slope of log m(B) against log r
    double c0 = 0.0;         // min m(B)/r^dimension over the probe set
    double C0 = 0.0;         // max of the same
    double spread() const { return c0 > 0.0 ? C0 / c0 : 0.0; }
};

// Fits m(B(x,r)) ~ r^N on a geometric ladder of radii between the resolution
// and half the diameter, over all centers.
AhlforsCheck ahlfors_fit(const PointCloudSpace& space);

struct CcbsyResult {
    double lhs_quasinorm = 0.0;  // weak quasinorm of the pair functional
    double rhs_cc_norm = 0.0;    // || sharp_rho_bar maximal ||_p
    double ratio = 0.0;          // lhs / rhs (0 when rhs == 0)
    AhlforsCheck regularity;
};

// Embedding functional: over pairs x != y,
//   g(x,y) = |f(x)-f(y)| / ( d^{N/p} * int_0^{2d} d(rho_bar)/lambda^{2N} )
// with N the fitted regularity dimension, measured in m x m; the integral is
// a lower Stieltjes sum on a global geometric ladder.  Refuses spaces whose
// Ahlfors spread exceeds 100.
CcbsyResult ccbsy_check(const PointCloudSpace& space, std::span<const double> f, double p,
                        const RadialGauge& gauge);

}  // namespace ineq

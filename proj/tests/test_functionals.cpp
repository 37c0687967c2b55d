#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "ineq/corpus.hpp"
#include "ineq/functionals.hpp"
#include "ineq/grids.hpp"

using namespace ineq;

namespace {

// Constants frozen from closed forms (Fourier side for the Gagliardo values,
// direct quadrature for the rest), independent of any code under test.
constexpr double kGaussL2p = 1.2533141373155003;       // ||f||_2^2 = sqrt(pi/2)
constexpr double kGaussGradL2p = 1.2533141373155003;   // ||f'||_2^2
constexpr double kGaussGradL1 = 2.0;                   // ||f'||_1
constexpr double kGagliardoHalf = 6.283185307179586;   // s=1/2, p=2: exactly 2*pi
constexpr double kGagliardoQuarter = 10.331805505876;  // s=1/4, p=2
constexpr double kGagliardoThreeQ = 7.205054134783;    // s=3/4, p=2
constexpr double kBbm099 = 1.2675410795396;            // (1-s) * seminorm at s=0.99
constexpr double kLogGradEnergy = 0.7242824269277;     // int log(1+|f'|)^2 dx

// Independent oracle for pair superlevel masses: a uniform (x, y) grid over
// [-L, L]^2 with no polar decomposition, no doubling, no completion.  Counts
// ordered pairs of {|f(x)-f(y)| > lambda |x-y|^e} against |x-y|^wexp dx dy.
std::vector<double> brute_pair_mass(const AnalyticTestFunction& f, double L, int n,
                                    double wexp, double e,
                                    std::span<const double> lambdas) {
    const double h = 2.0 * L / n;
    std::vector<double> fx(n);
    for (int i = 0; i < n; ++i) fx[i] = f(-L + (i + 0.5) * h);

    std::vector<double> mass(lambdas.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double a = std::fabs(fx[i] - fx[j]);
            if (a == 0.0) continue;
            const double t = (j - i) * h;
            const double gate = a / std::pow(t, e);
            const double w = std::pow(t, wexp);
            for (std::size_t k = 0; k < lambdas.size(); ++k)
                if (gate > lambdas[k]) mass[k] += w;
        }
    }
    // both orders of each pair, cell area
    for (double& m : mass) m *= 2.0 * h * h;
    return mass;
}

// Exact mass of the ordered pairs with one point beyond [-L, L], where
// f(outside) = 0 and the t-integral of t^{-p-1} closes in closed form.
// `start(i)` gives the per-x lower end of the surviving t-ray (clamped to the
// box gap by the caller).
template <typename StartFn>
double brute_outside_tail(const AnalyticTestFunction& f, double L, int n, double p,
                          StartFn&& start) {
    const double h = 2.0 * L / n;
    double tail = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -L + (i + 0.5) * h;
        const double right = start(std::fabs(f(x)), L - x);
        const double left = start(std::fabs(f(x)), L + x);
        if (right > 0.0) tail += h * std::pow(right, -p) / p;
        if (left > 0.0) tail += h * std::pow(left, -p) / p;
    }
    return 2.0 * tail;  // (x in, y out) and (x out, y in)
}

double curve_value_at(const Curve& c, double param) {
    for (const auto& pt : c)
        if (std::fabs(pt.param - param) <= 1e-12 * param) return pt.value;
    REQUIRE(false);
    return 0.0;
}

const AnalyticTestFunction& gauss1() {
    static const AnalyticTestFunction f = builtin_function("gaussian", 1);
    return f;
}

}  // namespace

TEST_CASE("one-sided sweep plateaus at the gradient energy") {
    auto lams = log_space(0.05, 20.0, 25);
    const auto res = bsy_1d_onesided(gauss1(), 2.0, 1.0, lams);

    CHECK(res.target == doctest::Approx(kGaussGradL2p).epsilon(1e-6));
    REQUIRE(res.plateau.converged);
    CHECK(res.plateau.value == doctest::Approx(kGaussGradL2p).epsilon(0.02));
    // the top of the ladder must stay resolved (small-t sections)
    CHECK(res.curve.back().value == doctest::Approx(kGaussGradL2p).epsilon(0.02));
    CHECK(res.sup_p >= res.plateau.value * 0.999);
}

TEST_CASE("one-sided sweep scales as gamma^-1") {
    auto lams = log_space(0.5, 16.0, 12);
    const auto g1 = bsy_1d_onesided(gauss1(), 2.0, 1.0, lams);
    const auto g2 = bsy_1d_onesided(gauss1(), 2.0, 2.0, lams);
    REQUIRE(g2.plateau.converged);
    CHECK(g2.plateau.value == doctest::Approx(g1.plateau.value / 2.0).epsilon(0.02));
    CHECK(g2.target == doctest::Approx(kGaussGradL2p / 2.0).epsilon(1e-6));
}

TEST_CASE("two-sided sweep doubles the one-sided plateau") {
    auto lams = log_space(0.05, 20.0, 25);
    const auto one = bsy_1d_onesided(gauss1(), 2.0, 1.0, lams);
    const auto two = bsy_1d_twosided(gauss1(), 2.0, 1.0, 1.0, lams);

    REQUIRE(two.plateau.converged);
    CHECK(two.target == doctest::Approx(2.0 * kGaussGradL2p).epsilon(1e-6));
    CHECK(two.plateau.value == doctest::Approx(2.0 * kGaussGradL2p).epsilon(0.025));
    CHECK(two.plateau.value == doctest::Approx(2.0 * one.plateau.value).epsilon(0.02));
    CHECK(two.curve.back().value ==
          doctest::Approx(2.0 * kGaussGradL2p).epsilon(0.025));
}

TEST_CASE("two-sided sweep matches a uniform pair-grid oracle") {
    std::vector<double> lams = {0.5, 1.0, 2.0};
    const auto res = bsy_1d_twosided(gauss1(), 2.0, 1.0, 1.0, lams);
    // e = gamma/p + s = 1.5, weight |x-y|^{gamma-1} = 1; sections at these
    // lambdas end below t = 2.6, so [-9, 9]^2 captures every pair.
    const auto mass = brute_pair_mass(gauss1(), 9.0, 3000, 0.0, 1.5, lams);
    for (std::size_t k = 0; k < lams.size(); ++k) {
        const double brute = lams[k] * lams[k] * mass[k];
        CHECK(curve_value_at(res.curve, lams[k]) ==
              doctest::Approx(brute).epsilon(0.03));
    }
}

TEST_CASE("gradient-limit curve plateaus at small delta") {
    auto deltas = log_space(0.02, 2.0, 25);
    const auto curve = bn_curve(gauss1(), 1.0, 2.0, deltas);
    const auto plat = extract_limit(curve, LimitSide::small_param, 0.02);
    REQUIRE(plat.converged);
    CHECK(plat.value == doctest::Approx(kGaussGradL2p).epsilon(0.025));
}

TEST_CASE("gradient-limit curve matches a uniform pair-grid oracle") {
    std::vector<double> deltas = {0.3};
    const auto curve = bn_curve(gauss1(), 1.0, 2.0, deltas);
    // s = 1: the gate |f(x)-f(y)| > delta ignores t; weight t^{-3}.  Pairs
    // leaving the box survive wherever |f(x)| > delta.
    auto mass = brute_pair_mass(gauss1(), 9.0, 3000, -3.0, 0.0, deltas);
    mass[0] += brute_outside_tail(gauss1(), 9.0, 3000, 2.0,
                                  [&](double a, double gap) {
                                      return a > deltas[0] ? gap : 0.0;
                                  });
    CHECK(curve[0].value ==
          doctest::Approx(deltas[0] * deltas[0] * mass[0]).epsilon(0.03));
}

TEST_CASE("interpolation-scale curve matches a uniform pair-grid oracle") {
    // s = 0: gate t |f(x)-f(y)| > delta, i.e. |Delta f| > delta t^{-1}.
    std::vector<double> deltas = {1.0};
    const auto curve = bn_curve(gauss1(), 0.0, 2.0, deltas);
    auto mass = brute_pair_mass(gauss1(), 9.0, 3000, -3.0, -1.0, deltas);
    mass[0] += brute_outside_tail(gauss1(), 9.0, 3000, 2.0,
                                  [&](double a, double gap) {
                                      if (a <= 0.0) return 0.0;
                                      return std::max(gap, deltas[0] / a);
                                  });
    CHECK(curve[0].value ==
          doctest::Approx(deltas[0] * deltas[0] * mass[0]).epsilon(0.03));
}

TEST_CASE("appendix sandwich: upper bound holds, lower bound fails") {
    auto deltas = log_space(0.01, 5.0, 30);
    const auto b = bn_appendix_bounds(gauss1(), 2.0, deltas);

    CHECK(b.lower == doctest::Approx(4.0 * kGaussL2p).epsilon(1e-6));
    CHECK(b.upper == doctest::Approx(8.0 * kGaussL2p).epsilon(1e-6));

    // the sup sits at the large-delta end: 2 kappa_1 / p ||f||_p^p exactly
    CHECK(b.sup_value == doctest::Approx(2.0 * kGaussL2p).epsilon(0.02));
    CHECK(b.sup_value < b.upper);
    CHECK(b.sup_value < b.lower);  // why `holds` must come out false

    // smooth f: the quotient vanishes quadratically at the diagonal, so the
    // small-delta values decay linearly, value ~ delta * ||f'||_1
    CHECK(b.small_delta_value ==
          doctest::Approx(deltas.front() * kGaussGradL1).epsilon(0.15));
    CHECK_FALSE(b.converged);
    CHECK_FALSE(b.holds);
}

TEST_CASE("plain-difference curve plateaus at the L^p mass") {
    auto lams = log_space(0.02, 2.0, 30);
    const auto res = gu_yung_curve(gauss1(), 2.0, lams);
    CHECK(res.target == doctest::Approx(4.0 * kGaussL2p).epsilon(1e-6));
    REQUIRE(res.plateau.converged);
    CHECK(res.plateau.value == doctest::Approx(4.0 * kGaussL2p).epsilon(0.02));
    CHECK(res.sup_p >= res.plateau.value * 0.999);
}

TEST_CASE("plain-difference curve matches a uniform pair-grid oracle") {
    std::vector<double> lams = {0.6, 1.0};
    const auto res = gu_yung_curve(gauss1(), 2.0, lams);
    // gate |Delta f| > lambda t^{1/2}, plain dx dy; sections end below
    // t = (1/0.6)^2 < 2.8, inside the brute box.
    const auto mass = brute_pair_mass(gauss1(), 9.0, 3000, 0.0, 0.5, lams);
    for (std::size_t k = 0; k < lams.size(); ++k)
        CHECK(curve_value_at(res.curve, lams[k]) ==
              doctest::Approx(lams[k] * lams[k] * mass[k]).epsilon(0.03));
}

TEST_CASE("analytic completion makes the truncation radius irrelevant") {
    auto lams = log_space(0.02, 0.5, 12);
    const auto probe = gu_yung_truncation_probe(gauss1(), 2.0, lams);
    CHECK(probe.base > 0.0);
    CHECK(probe.rel_shift < 5e-3);
}

TEST_CASE("fractional seminorm matches the Fourier closed form") {
    CHECK(gagliardo_seminorm_p(gauss1(), 0.5, 2.0) ==
          doctest::Approx(kGagliardoHalf).epsilon(0.01));
    CHECK(gagliardo_seminorm_p(gauss1(), 0.25, 2.0) ==
          doctest::Approx(kGagliardoQuarter).epsilon(0.01));
    CHECK(gagliardo_seminorm_p(gauss1(), 0.75, 2.0) ==
          doctest::Approx(kGagliardoThreeQ).epsilon(0.01));
}

TEST_CASE("fractional seminorm matches a uniform pair-grid oracle") {
    const double L = 12.0, s = 0.5, p = 2.0;
    const int n = 3000, skip = 2;
    const double h = 2.0 * L / n;
    std::vector<double> fx(n);
    for (int i = 0; i < n; ++i) fx[i] = gauss1()(-L + (i + 0.5) * h);

    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + skip + 1; j < n; ++j) {
            const double d = fx[i] - fx[j];
            if (d == 0.0) continue;
            const double t = (j - i) * h;
            sum += d * d * std::pow(t, -1.0 - s * p);
        }
    sum *= 2.0 * h * h;
    // band |x-y| <= (skip + 1/2) h restored to first order
    const double band = (skip + 0.5) * h;
    sum += 2.0 * std::pow(band, p * (1.0 - s)) / (p * (1.0 - s)) * kGaussGradL2p;
    // pairs with one point beyond the box: f there vanishes
    for (int i = 0; i < n; ++i) {
        const double x = -L + (i + 0.5) * h;
        const double fp = std::pow(std::fabs(fx[i]), p);
        sum += 2.0 * h * fp *
               (std::pow(L - x, -s * p) + std::pow(L + x, -s * p)) / (s * p);
    }
    CHECK(sum == doctest::Approx(kGagliardoHalf).epsilon(0.015));
    CHECK(gagliardo_seminorm_p(gauss1(), s, p) ==
          doctest::Approx(sum).epsilon(0.02));
}

TEST_CASE("rescaled seminorm approaches the gradient energy as s -> 1") {
    std::vector<double> sgrid = {0.90, 0.95, 0.99};
    const auto curve = bbm_rescaled(gauss1(), 2.0, sgrid);
    REQUIRE(curve.size() == 3);
    CHECK(curve[2].value == doctest::Approx(kBbm099).epsilon(0.02));
    CHECK(curve[2].value == doctest::Approx(kGaussGradL2p).epsilon(0.10));
    // the rescaled values decrease toward the limit from above
    CHECK(curve[0].value > curve[1].value);
    CHECK(curve[1].value > curve[2].value);
    CHECK(curve[2].value > kGaussGradL2p);
}

TEST_CASE("weak quasinorm of the plain difference quotient is grid-stable") {
    const auto res = ms_weak_quasinorm(gauss1(), 2.0);
    CHECK(res.quasinorm_p >= 4.0 * kGaussL2p * 0.98);
    CHECK(res.quasinorm_p < 8.0 * kGaussL2p);  // loose sanity ceiling
    CHECK(res.ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("log quotient quasinorm dominates the log gradient energy") {
    const auto res = log_bsy_quasinorm(gauss1(), 1.0, 2.0);
    CHECK(res.target == doctest::Approx(kLogGradEnergy).epsilon(0.01));
    CHECK(res.lower_bound_holds);
    CHECK(res.quasinorm_p >= res.target);
    CHECK(res.ratio == doctest::Approx(res.quasinorm_p / res.target).epsilon(1e-12));
    CHECK(res.ratio < 6.0);
}

TEST_CASE("Monte Carlo backend agrees with the tensor sweep") {
    std::vector<double> lams = {2.0, 4.0, 8.0, 16.0};
    const auto tensor = bsy_1d_twosided(gauss1(), 2.0, 1.0, 1.0, lams);

    McPairConfig mc;
    mc.samples = 1'500'000;
    mc.seed = 91;
    const auto est = bsy_mc(gauss1(), 2.0, 1.0, 1.0, lams, mc);

    REQUIRE(est.curve.size() == lams.size());
    for (std::size_t k = 0; k < lams.size(); ++k) {
        const double ref = curve_value_at(tensor.curve, lams[k]);
        const auto& pt = est.curve[k];
        CHECK(pt.se > 0.0);
        // 3 SE plus the tensor grid's own sub-percent discretization
        CHECK(std::fabs(pt.value - ref) <= 3.0 * pt.se + 0.005 * ref);
    }
}

TEST_CASE("Monte Carlo estimates are deterministic and worker-invariant") {
    std::vector<double> lams = {2.0, 8.0};
    McPairConfig mc;
    mc.samples = 300'000;
    mc.seed = 7;

    const auto a = bsy_mc(gauss1(), 2.0, 1.0, 1.0, lams, mc);
    const auto b = bsy_mc(gauss1(), 2.0, 1.0, 1.0, lams, mc);
    mc.workers = 3;
    const auto c = bsy_mc(gauss1(), 2.0, 1.0, 1.0, lams, mc);
    mc.workers = 1;
    mc.seed = 8;
    const auto d = bsy_mc(gauss1(), 2.0, 1.0, 1.0, lams, mc);

    bool seed_changed_something = false;
    for (std::size_t k = 0; k < lams.size(); ++k) {
        CHECK(a.curve[k].value == b.curve[k].value);
        CHECK(a.curve[k].se == b.curve[k].se);
        CHECK(a.curve[k].value == c.curve[k].value);
        CHECK(a.curve[k].se == c.curve[k].se);
        if (a.curve[k].value != d.curve[k].value) seed_changed_something = true;
    }
    CHECK(seed_changed_something);
}

TEST_CASE("Monte Carlo backend covers dimension two") {
    const auto f2 = builtin_function("gaussian", 2);
    std::vector<double> lams = {4.0, 8.0};
    McPairConfig mc;
    mc.samples = 500'000;
    mc.seed = 17;
    const auto est = bsy_mc(f2, 2.0, 1.0, 2.0, lams, mc);

    // plateau target (k(2,2)/gamma) || |grad f| ||_2^2 = (pi/2)/2 * 2 pi
    const double target = k_constant(2.0, 2) / 2.0 * grad_lp_power_norm(f2, 2.0);
    CHECK(target == doctest::Approx(std::numbers::pi * std::numbers::pi / 2.0)
                        .epsilon(1e-6));
    for (const auto& pt : est.curve) {
        CHECK(std::fabs(pt.value - target) <= 3.0 * pt.se + 0.10 * target);
    }
}

TEST_CASE("pair sweeps reject bad arguments") {
    const auto f2 = builtin_function("gaussian", 2);
    std::vector<double> lams = {1.0};
    std::vector<double> empty;

    CHECK_THROWS_AS((void)bsy_1d_onesided(f2, 2.0, 1.0, lams), std::invalid_argument);
    CHECK_THROWS_AS((void)bsy_1d_onesided(gauss1(), 2.0, 0.0, lams),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)bsy_1d_onesided(gauss1(), 2.0, 1.0, empty),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)bsy_1d_twosided(gauss1(), 2.0, 1.5, 1.0, lams),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)gagliardo_seminorm_p(gauss1(), 1.0, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)bn_curve(gauss1(), -0.1, 2.0, lams), std::invalid_argument);

    McPairConfig mc;
    mc.samples = 0;
    CHECK_THROWS_AS((void)bsy_mc(gauss1(), 2.0, 1.0, 1.0, lams, mc),
                    std::invalid_argument);
    mc.samples = 1000;
    mc.shells = 1;
    CHECK_THROWS_AS((void)bsy_mc(gauss1(), 2.0, 1.0, 1.0, lams, mc),
                    std::invalid_argument);
    const auto f3 = builtin_function("gaussian", 3);
    CHECK_THROWS_AS((void)bsy_mc(f3, 2.0, 1.0, 1.0, lams), std::invalid_argument);
}

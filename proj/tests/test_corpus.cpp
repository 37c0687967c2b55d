#include "doctest.h"

#include <cmath>

#include "ineq/corpus.hpp"
#include "ineq/detail/rng.hpp"

using namespace ineq;

namespace {

constexpr double pi = 3.14159265358979323846;

// central difference with Richardson step halving
double fd_derivative(const AnalyticTestFunction& f, const double* x, int axis) {
    const double h = 1e-5;
    double xp[3], xm[3];
    for (int i = 0; i < f.dim; ++i) xp[i] = xm[i] = x[i];
    xp[axis] += h;
    xm[axis] -= h;
    const double d1 = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
    xp[axis] = x[axis] + 0.5 * h;
    xm[axis] = x[axis] - 0.5 * h;
    const double d2 = (f.eval(xp) - f.eval(xm)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

double fd_laplacian(const AnalyticTestFunction& f, const double* x) {
    const double h = 1e-4;
    double lap = 0.0;
    const double f0 = f.eval(x);
    for (int axis = 0; axis < f.dim; ++axis) {
        double xp[3], xm[3];
        for (int i = 0; i < f.dim; ++i) xp[i] = xm[i] = x[i];
        xp[axis] += h;
        xm[axis] -= h;
        lap += (f.eval(xp) - 2.0 * f0 + f.eval(xm)) / (h * h);
    }
    return lap;
}

}  // namespace

TEST_CASE("gradient oracles match finite differences below 1e-6") {
    detail::Rng rng(11);
    for (const auto& name : {"gaussian", "bump", "modulated_gaussian"}) {
        for (int dim = 1; dim <= 2; ++dim) {
            if ((std::string(name) != "gaussian" && std::string(name) != "bump") && dim > 1)
                continue;
            const auto f = builtin_function(name, dim);
            for (int trial = 0; trial < 60; ++trial) {
                double x[3] = {0.0, 0.0, 0.0};
                // stay inside the smooth region, away from the bump boundary
                const double r = (std::string(name) == "bump") ? 0.9 : 3.0;
                for (int i = 0; i < dim; ++i) x[i] = rng.uniform(-r, r);
                if (std::string(name) == "bump") {
                    double q = 0.0;
                    for (int i = 0; i < dim; ++i) q += x[i] * x[i];
                    if (q > 0.9 * 0.9) continue;
                }
                double g[3];
                f.gradient(x, g);
                for (int axis = 0; axis < dim; ++axis) {
                    const double fd = fd_derivative(f, x, axis);
                    CHECK(std::fabs(g[axis] - fd) < 1e-6 * std::max(1.0, std::fabs(fd)));
                }
            }
        }
    }
}

TEST_CASE("laplacian oracles match finite differences") {
    detail::Rng rng(13);
    for (const auto& name : {"gaussian", "modulated_gaussian"}) {
        const auto f = builtin_function(name, 1);
        REQUIRE(f.has_laplacian());
        for (int trial = 0; trial < 40; ++trial) {
            double x = rng.uniform(-3.0, 3.0);
            const double an = f.laplacian(&x);
            const double fd = fd_laplacian(f, &x);
            CHECK(std::fabs(an - fd) < 1e-5 * std::max(1.0, std::fabs(fd)));
        }
    }
    const auto g2 = builtin_function("gaussian", 2);
    for (int trial = 0; trial < 40; ++trial) {
        double x[2] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        CHECK(std::fabs(g2.laplacian(x) - fd_laplacian(g2, x)) < 1e-5);
    }
    CHECK_FALSE(builtin_function("tent", 1).has_laplacian());
}

TEST_CASE("support radius really bounds the tail") {
    for (const auto& name : builtin_function_names()) {
        const auto f = builtin_function(name, 1);
        double peak = 0.0;
        for (double x = -f.support_radius; x <= f.support_radius; x += 1e-3)
            peak = std::max(peak, std::fabs(f(x)));
        for (double x : {f.support_radius * 1.0001, f.support_radius * 2.0, f.support_radius + 10.0})
            CHECK(std::fabs(f(x)) < 1e-12 * peak);
    }
}

TEST_CASE("k_constant: closed forms and symmetry checks") {
    CHECK(k_constant(1.0, 1) == 2.0);
    CHECK(k_constant(2.0, 1) == 2.0);
    // N=2: 2 int_0^pi |cos|^p dtheta; p=2 -> pi, p=1 -> 4
    CHECK(k_constant(2.0, 2) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(k_constant(1.0, 2) == doctest::Approx(4.0).epsilon(1e-12));
    // N=3: 2 pi int |cos|^p sin = 4 pi / (p+1)
    CHECK(k_constant(2.0, 3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-12));
    CHECK(k_constant(1.0, 3) == doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(k_constant(3.0, 3) == doctest::Approx(pi).epsilon(1e-12));
    // p = 2 closed form in any dimension: |S^{N-1}| / N
    const double s1 = 2.0 * pi;            // |S^1|
    CHECK(k_constant(2.0, 2) == doctest::Approx(s1 / 2.0).epsilon(1e-12));
    const double s2 = 4.0 * pi;            // |S^2|
    CHECK(k_constant(2.0, 3) == doctest::Approx(s2 / 3.0).epsilon(1e-12));
}

TEST_CASE("ball volumes") {
    CHECK(ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ball_volume(2) == doctest::Approx(pi).epsilon(1e-14));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
}

TEST_CASE("corpus L^p quadrature against closed forms") {
    const auto g1 = builtin_function("gaussian", 1);
    // ||e^{-x^2}||_2^2 = sqrt(pi/2)
    CHECK(lp_power_norm(g1, 2.0) == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-10));
    // ||f'||_2^2 = sqrt(pi/2), ||f''||_2^2 = 3 sqrt(pi/2)
    CHECK(grad_lp_power_norm(g1, 2.0) == doctest::Approx(std::sqrt(pi / 2.0)).epsilon(1e-10));
    CHECK(laplacian_lp_power_norm(g1, 2.0) ==
          doctest::Approx(3.0 * std::sqrt(pi / 2.0)).epsilon(1e-10));

    const auto g2 = builtin_function("gaussian", 2);
    // || |grad f| ||_2^2 = pi in two dimensions
    CHECK(grad_lp_power_norm(g2, 2.0) == doctest::Approx(pi).epsilon(1e-9));
    CHECK(lp_power_norm(g2, 2.0) == doctest::Approx(pi / 2.0).epsilon(1e-9));

    const auto tent = builtin_function("tent", 1);
    CHECK(lp_power_norm(tent, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(grad_lp_power_norm(tent, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("sample_field lays out midpoint values") {
    const auto f = builtin_function("gaussian", 1);
    const auto grid = GridSpec::uniform(-2.0, 2.0, 8);
    const auto field = sample_field(f, grid);
    REQUIRE(field.values.size() == 8);
    for (int i = 0; i < 8; ++i)
        CHECK(field.values[i] == doctest::Approx(f(grid.mid(i))).epsilon(1e-15));

    const auto f2 = builtin_function("gaussian", 2);
    const auto field2 = sample_field(f2, grid, GridSpec::uniform(-1.0, 1.0, 4));
    REQUIRE(field2.values.size() == 32);
    const double xy[2] = {grid.mid(3), field2.gy.mid(2)};
    CHECK(field2.values[field2.index(3, 2)] == doctest::Approx(f2.eval(xy)).epsilon(1e-15));
}

TEST_CASE("unknown corpus names are rejected") {
    CHECK_THROWS_AS(builtin_function("sinc", 1), std::invalid_argument);
    CHECK_THROWS_AS(builtin_function("tent", 2), std::invalid_argument);
}

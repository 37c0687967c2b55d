#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ineq/detail/rng.hpp"
#include "ineq/detail/sum.hpp"
#include "ineq/limits.hpp"
#include "ineq/weights.hpp"
#include "ineq/weighted_samples.hpp"

using namespace ineq;

namespace {

// Independent oracle: O(n) scan per query, no sorting.
double brute_mass_above(const WeightedSampleSet& s, double lambda) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::fabs(s.values[i]) > lambda) m += s.masses[i];
    return m;
}

// Independent oracle for the weak quasinorm: dense lambda sweep just below
// every distinct magnitude plus a midpoint grid.
double brute_weak_lp_p(const WeightedSampleSet& s, double p) {
    std::vector<double> probes;
    for (double v : s.values) {
        const double a = std::fabs(v);
        if (a > 0.0) probes.push_back(a * (1.0 - 1e-12));
    }
    for (double v : s.values) probes.push_back(std::fabs(v) * 0.5 + 1e-9);
    double best = 0.0;
    for (double lam : probes)
        if (lam > 0.0) best = std::max(best, std::pow(lam, p) * brute_mass_above(s, lam));
    return best;
}

WeightedSampleSet random_set(detail::Rng& rng, int n, bool allow_zero_mass = true) {
    WeightedSampleSet s;
    for (int i = 0; i < n; ++i) {
        const double v = rng.uniform(-3.0, 3.0);
        double m = rng.next_unit();
        if (allow_zero_mass && rng.next_unit() < 0.05) m = 0.0;
        s.push(v, m);
    }
    return s;
}

}  // namespace

TEST_CASE("distribution_mass matches brute scan and is strict") {
    WeightedSampleSet s;
    s.push(1.0, 0.25);
    s.push(-1.0, 0.5);
    s.push(2.0, 0.125);
    s.push(0.0, 7.0);

    CHECK(distribution_mass(s, 0.999) == doctest::Approx(0.875).epsilon(1e-14));
    // strict: values equal to lambda are excluded
    CHECK(distribution_mass(s, 1.0) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(distribution_mass(s, 2.0) == 0.0);

    DistributionCurve curve(s);
    detail::Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        const double lam = rng.uniform(0.0, 2.5);
        CHECK(curve.mass_above(lam) == doctest::Approx(brute_mass_above(s, lam)).epsilon(1e-13));
    }
}

TEST_CASE("weak quasinorm: exact sup against dense-probe oracle") {
    detail::Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_set(rng, 40);
        for (double p : {1.0, 2.0, 3.0}) {
            const double exact = std::pow(weak_lp_quasinorm(s, p), p);
            const double brute = brute_weak_lp_p(s, p);
            CHECK(exact >= brute * (1.0 - 1e-9));
            CHECK(exact <= brute * (1.0 + 1e-6));  // probe just below the argmax magnitude
        }
    }
}

TEST_CASE("weak quasinorm on ties: repeated magnitudes pool their mass") {
    WeightedSampleSet s;
    s.push(2.0, 0.3);
    s.push(-2.0, 0.2);
    s.push(1.0, 1.0);
    // sup lambda^2 m{|v|>lambda}: candidates 1^2*1.5 = 1.5 and 2^2*0.5 = 2.0
    CHECK(weak_lp_quasinorm(s, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("Chebyshev and homogeneity over 1000 random sample sets") {
    detail::Rng rng(20240816);
    for (int trial = 0; trial < 1000; ++trial) {
        auto s = random_set(rng, 25);
        for (double p : {1.0, 2.0}) {
            const double weak = weak_lp_quasinorm(s, p);
            const double strong = lp_norm(s, p);
            CHECK(weak <= strong * (1.0 + 1e-9));

            const double c = 0.1 + 5.0 * rng.next_unit();
            auto scaled = s;
            for (auto& v : scaled.values) v *= c;
            CHECK(weak_lp_quasinorm(scaled, p) ==
                  doctest::Approx(c * weak).epsilon(1e-9));
        }
    }
}

TEST_CASE("superlevel_curve equals pointwise brute evaluation") {
    detail::Rng rng(3);
    const auto s = random_set(rng, 60);
    std::vector<double> lambdas;
    for (int i = 1; i <= 30; ++i) lambdas.push_back(0.1 * i);
    const auto curve = superlevel_curve(s, 2.0, lambdas);
    REQUIRE(curve.size() == lambdas.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve[i].param == lambdas[i]);
        const double expect = lambdas[i] * lambdas[i] * brute_mass_above(s, lambdas[i]);
        CHECK(curve[i].value == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("validate rejects bad sample sets") {
    WeightedSampleSet s;
    s.push(1.0, 1.0);
    s.masses.push_back(2.0);  // length mismatch
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    WeightedSampleSet neg;
    neg.push(1.0, -0.5);
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
}

TEST_CASE("PowerWeight cell masses telescope to the exact antiderivative") {
    for (double gamma : {2.0, 1.0, 0.5, -0.5, -2.0}) {
        PowerWeight w(gamma);
        const double a = 0.01, b = 3.0;
        const int n = 257;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double lo = a * std::pow(b / a, static_cast<double>(i) / n);
            const double hi = a * std::pow(b / a, static_cast<double>(i + 1) / n);
            const double m = w.cell_mass(lo, hi);
            CHECK(m > 0.0);
            sum += m;
        }
        CHECK(sum == doctest::Approx(w.cell_mass(a, b)).epsilon(1e-11));
    }
    CHECK(PowerWeight(2.0).mass_from_zero(3.0) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK_THROWS_AS(PowerWeight(-1.0).mass_from_zero(1.0), std::domain_error);
    CHECK_THROWS_AS(PowerWeight(0.0), std::invalid_argument);
}

TEST_CASE("LogWeight: positivity, total mass, and superlevel identity") {
    for (double eta : {1.5, 2.0, 3.0}) {
        LogWeight w(eta);
        // cells tile the interval: cutoff tail + cell masses = total, exactly
        const double a = 1e-6;
        double sum = w.mass_from_zero(a);
        const int n = 400;
        for (int i = 0; i < n; ++i) {
            const double lo = a * std::pow(0.5 / a, static_cast<double>(i) / n);
            const double hi = a * std::pow(0.5 / a, static_cast<double>(i + 1) / n);
            const double m = w.cell_mass(lo, hi);
            CHECK(m > 0.0);
            sum += m;
        }
        CHECK(sum == doctest::Approx(w.total_mass()).epsilon(1e-10));

        // v_eta{ t : log(1/t)^{(1-eta)/p} < mu } = mu^p / (eta - 1):
        // the set is (0, T) with log(1/T)^{1-eta} = mu^p
        const double p = 2.0, mu = 0.35;
        const double T = std::exp(-std::pow(mu * mu, 1.0 / (1.0 - eta)));
        REQUIRE(T < 0.5);
        CHECK(w.mass_from_zero(T) ==
              doctest::Approx(std::pow(mu, p) / (eta - 1.0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(LogWeight(1.0), std::invalid_argument);
}

TEST_CASE("mixed norm inequality on 200 seeded product grids") {
    detail::Rng rng(991);
    for (int trial = 0; trial < 200; ++trial) {
        const int n1 = 2 + static_cast<int>(rng.next_unit() * 14);
        const int n2 = 2 + static_cast<int>(rng.next_unit() * 14);
        ProductSampleGrid g;
        g.mass1.resize(n1);
        g.mass2.resize(n2);
        g.values.resize(static_cast<std::size_t>(n1) * n2);
        for (auto& m : g.mass1) m = rng.next_unit() + 1e-3;
        for (auto& m : g.mass2) m = rng.next_unit() + 1e-3;
        for (auto& v : g.values) v = rng.uniform(-4.0, 4.0);
        for (double p : {1.0, 2.0, 2.7}) {
            const auto r = mixed_norm_check(g, p);
            CHECK(r.holds);
            CHECK(r.lhs <= r.rhs * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("CurveAccumulator reproduces exact suffix masses") {
    std::vector<double> ladder = {0.5, 1.0, 2.0, 4.0};
    CurveAccumulator acc(ladder, 2);
    // stratum 0: quotients 0.7, 1.0 (on a ladder point: strict), 3.0
    acc.add(0.7, 2.0, 0);
    acc.add(1.0, 3.0, 0);
    acc.add(3.0, 5.0, 0);
    acc.set_stratum_draws(0, 3);
    // stratum 1: 0.4 (below ladder), 8.0
    acc.add(0.4, 1.0, 1);
    acc.add(8.0, 7.0, 1);
    acc.set_stratum_draws(1, 2);

    const auto curve = acc.finalize(1.0);
    REQUIRE(curve.size() == 4);
    // mass estimates: stratum sums / draws
    // above 0.5: (2+3+5)/3 + 7/2 = 10/3 + 3.5
    CHECK(curve[0].value == doctest::Approx(0.5 * (10.0 / 3.0 + 3.5)).epsilon(1e-14));
    // above 1.0: strict, so the q == 1.0 sample drops; only q = 3 survives
    CHECK(curve[1].value == doctest::Approx(1.0 * (5.0 / 3.0 + 3.5)).epsilon(1e-14));
    CHECK(curve[2].value == doctest::Approx(2.0 * (5.0 / 3.0 + 3.5)).epsilon(1e-14));
    CHECK(curve[3].value == doctest::Approx(4.0 * 3.5).epsilon(1e-14));
    CHECK(curve[3].se > 0.0);
}

TEST_CASE("CurveAccumulator merge is block-order invariant here") {
    std::vector<double> ladder = {0.5, 1.0, 2.0};
    CurveAccumulator a(ladder, 1), b(ladder, 1);
    a.add(1.5, 2.0, 0);
    a.set_stratum_draws(0, 1);
    b.add(0.9, 4.0, 0);
    b.set_stratum_draws(0, 1);
    CurveAccumulator ab = a;
    ab.merge(b);
    CurveAccumulator ba = b;
    ba.merge(a);
    const auto ca = ab.finalize(2.0), cb = ba.finalize(2.0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        CHECK(ca[i].value == cb[i].value);
        CHECK(ca[i].se == cb[i].se);
    }
}

TEST_CASE("extract_limit finds trailing and leading plateaus") {
    Curve c;
    for (int i = 0; i < 40; ++i) {
        const double t = 0.1 * (i + 1);
        c.push_back({t, 2.0 + std::exp(-t * 4.0), 0.0});
    }
    const auto tail = extract_limit(c, LimitSide::large_param, 0.01);
    CHECK(tail.converged);
    CHECK(tail.value == doctest::Approx(2.0).epsilon(0.01));
    CHECK(tail.points >= 3);
    CHECK(tail.window_hi == doctest::Approx(4.0));

    Curve lead;
    for (int i = 0; i < 40; ++i) {
        const double t = 0.01 * std::pow(1.3, i);
        lead.push_back({t, 5.0 + t * t, 0.0});
    }
    const auto head = extract_limit(lead, LimitSide::small_param, 0.01);
    CHECK(head.converged);
    CHECK(head.value == doctest::Approx(5.0).epsilon(0.01));
    CHECK(head.window_lo <= head.window_hi);

    Curve wild;
    for (int i = 0; i < 20; ++i) wild.push_back({1.0 + i, std::pow(-1.0, i), 0.0});
    CHECK_FALSE(extract_limit(wild, LimitSide::large_param, 0.05).converged);
}

TEST_CASE("pairwise and cascade sums agree with long double reference") {
    detail::Rng rng(5);
    std::vector<double> xs(100000);
    long double ref = 0.0L;
    for (auto& x : xs) {
        x = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-6.0, 6.0));
        ref += static_cast<long double>(x);
    }
    const double a = detail::pairwise_sum(xs);
    detail::CascadeSum cs;
    for (double x : xs) cs.add(x);
    CHECK(a == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));
    CHECK(cs.total() == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));

    // rerunning the cascade gives the identical bit pattern
    detail::CascadeSum cs2;
    for (double x : xs) cs2.add(x);
    CHECK(cs2.total() == cs.total());
}

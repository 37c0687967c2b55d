#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstddef>

#include "ineq/detail/sum.hpp"

namespace ineq::detail {

// 32-point Gauss-Legendre on one panel.
template <class F>
double gl_panel(const F& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 32>::integrate(f, a, b);
}

// Composite GL with uniform panels.
template <class F>
double integrate(const F& f, double a, double b, int panels) {
    CascadeSum acc;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i)
        acc.add(gl_panel(f, a + i * h, a + (i + 1) * h));
    return acc.total();
}

// Composite GL with geometrically graded panels accumulating toward a.
// Suits integrable endpoint singularities at a; requires b > a >= 0.
template <class F>
double integrate_graded(const F& f, double a, double b, int panels, double ratio = 0.5) {
    CascadeSum acc;
    double hi = b;
    for (int i = 0; i < panels - 1; ++i) {
        const double lo = a + (hi - a) * ratio;
        acc.add(gl_panel(f, lo, hi));
        hi = lo;
    }
    acc.add(gl_panel(f, a, hi));
    return acc.total();
}

}  // namespace ineq::detail

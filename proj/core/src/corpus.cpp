#include "ineq/corpus.hpp"

#include <cmath>
#include <stdexcept>

#include "ineq/detail/quadrature.hpp"
#include "ineq/detail/sum.hpp"

namespace ineq {

namespace {

double sq_norm(const double* x, int dim) {
    double q = 0.0;
    for (int i = 0; i < dim; ++i) q += x[i] * x[i];
    return q;
}

AnalyticTestFunction make_gaussian(int dim) {
    AnalyticTestFunction f;
    f.name = "gaussian";
    f.dim = dim;
    f.smoothness = Smoothness::c_infinity;
    // exp(-r^2) < 1e-12 for r > sqrt(12 ln 10) ~ 5.257
    f.support_radius = 5.5;
    f.eval = [dim](const double* x) { return std::exp(-sq_norm(x, dim)); };
    f.gradient = [dim](const double* x, double* g) {
        const double v = std::exp(-sq_norm(x, dim));
        for (int i = 0; i < dim; ++i) g[i] = -2.0 * x[i] * v;
    };
    f.laplacian = [dim](const double* x) {
        const double q = sq_norm(x, dim);
        return (4.0 * q - 2.0 * dim) * std::exp(-q);
    };
    return f;
}

AnalyticTestFunction make_bump(int dim) {
    AnalyticTestFunction f;
    f.name = "bump";
    f.dim = dim;
    f.smoothness = Smoothness::c_infinity;
    f.support_radius = 1.0;
    f.eval = [dim](const double* x) {
        const double q = sq_norm(x, dim);
        return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
    };
    // with u(x) = 1/(q-1):  grad f = f grad u,  lap f = f (|grad u|^2 + lap u)
    f.gradient = [dim](const double* x, double* g) {
        const double q = sq_norm(x, dim);
        if (q >= 1.0) {
            for (int i = 0; i < dim; ++i) g[i] = 0.0;
            return;
        }
        const double v = std::exp(-1.0 / (1.0 - q));
        const double d = q - 1.0;
        for (int i = 0; i < dim; ++i) g[i] = -2.0 * x[i] / (d * d) * v;
    };
    f.laplacian = [dim](const double* x) {
        const double q = sq_norm(x, dim);
        if (q >= 1.0) return 0.0;
        const double v = std::exp(-1.0 / (1.0 - q));
        const double d = q - 1.0;
        const double d2 = d * d;
        const double grad_u_sq = 4.0 * q / (d2 * d2);
        const double lap_u = -2.0 * dim / d2 + 8.0 * q / (d2 * d);
        return v * (grad_u_sq + lap_u);
    };
    return f;
}

AnalyticTestFunction make_tent() {
    AnalyticTestFunction f;
    f.name = "tent";
    f.dim = 1;
    f.smoothness = Smoothness::lipschitz;
    f.support_radius = 1.0;
    f.eval = [](const double* x) { return std::max(0.0, 1.0 - std::fabs(x[0])); };
    // derivative convention at the kinks: 0 at x = 0 and |x| = 1
    f.gradient = [](const double* x, double* g) {
        const double a = std::fabs(x[0]);
        g[0] = (a > 0.0 && a < 1.0) ? (x[0] > 0.0 ? -1.0 : 1.0) : 0.0;
    };
    return f;  // no laplacian: second derivative is singular
}

AnalyticTestFunction make_modulated_gaussian() {
    AnalyticTestFunction f;
    f.name = "modulated_gaussian";
    f.dim = 1;
    f.smoothness = Smoothness::c_infinity;
    f.support_radius = 5.5;
    constexpr double k = 3.0;
    f.eval = [](const double* x) { return std::exp(-x[0] * x[0]) * std::cos(k * x[0]); };
    f.gradient = [](const double* x, double* g) {
        const double e = std::exp(-x[0] * x[0]);
        g[0] = e * (-2.0 * x[0] * std::cos(k * x[0]) - k * std::sin(k * x[0]));
    };
    f.laplacian = [](const double* x) {
        const double e = std::exp(-x[0] * x[0]);
        const double c = std::cos(k * x[0]), s = std::sin(k * x[0]);
        return e * ((4.0 * x[0] * x[0] - 2.0 - k * k) * c + 4.0 * k * x[0] * s);
    };
    return f;
}

}  // namespace

AnalyticTestFunction builtin_function(const std::string& name, int dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("builtin_function: dim must be 1..3");
    if (name == "gaussian") return make_gaussian(dim);
    if (name == "bump") return make_bump(dim);
    if (name == "tent") {
        if (dim != 1) throw std::invalid_argument("builtin_function: tent is 1-D only");
        return make_tent();
    }
    if (name == "modulated_gaussian") {
        if (dim != 1)
            throw std::invalid_argument("builtin_function: modulated_gaussian is 1-D only");
        return make_modulated_gaussian();
    }
    throw std::invalid_argument("builtin_function: unknown name '" + name + "'");
}

std::vector<std::string> builtin_function_names() {
    return {"gaussian", "bump", "tent", "modulated_gaussian"};
}

double ball_volume(int dim) {
    if (dim < 1) throw std::invalid_argument("ball_volume: dim must be >= 1");
    return std::pow(3.14159265358979323846, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double k_constant(double p, int dim) {
    if (!(p > 0.0)) throw std::invalid_argument("k_constant: p must be positive");
    if (dim < 1) throw std::invalid_argument("k_constant: dim must be >= 1");
    if (dim == 1) return 2.0;  // S^0 = {-1, +1} with counting measure
    constexpr double pi = 3.14159265358979323846;
    // |S^{m}| = 2 pi^{(m+1)/2} / Gamma((m+1)/2) for the equatorial sphere S^{dim-2}
    const double m = static_cast<double>(dim - 1);
    const double eq_sphere = 2.0 * std::pow(pi, 0.5 * m) / std::tgamma(0.5 * m);
    // split at pi/2 where |cos| has its kink
    const auto g = [&](double th) {
        return std::pow(std::fabs(std::cos(th)), p) * std::pow(std::sin(th), m - 1.0);
    };
    const double integral =
        detail::integrate(g, 0.0, 0.5 * pi, 16) + detail::integrate(g, 0.5 * pi, pi, 16);
    return eq_sphere * integral;
}

SampledField sample_field(const AnalyticTestFunction& f, const GridSpec& gx) {
    if (f.dim != 1) throw std::invalid_argument("sample_field: function is not 1-D");
    SampledField field;
    field.dim = 1;
    field.gx = gx;
    field.values.resize(gx.cells);
    for (int i = 0; i < gx.cells; ++i) {
        const double x = gx.mid(i);
        field.values[i] = f.eval(&x);
    }
    return field;
}

SampledField sample_field(const AnalyticTestFunction& f, const GridSpec& gx,
                          const GridSpec& gy) {
    if (f.dim != 2) throw std::invalid_argument("sample_field: function is not 2-D");
    SampledField field;
    field.dim = 2;
    field.gx = gx;
    field.gy = gy;
    field.values.resize(static_cast<std::size_t>(gx.cells) * gy.cells);
    for (int i = 0; i < gx.cells; ++i) {
        for (int j = 0; j < gy.cells; ++j) {
            const double xy[2] = {gx.mid(i), gy.mid(j)};
            field.values[field.index(i, j)] = f.eval(xy);
        }
    }
    return field;
}

namespace {

// integral over the support box of |g(x)|^p, tensor GL panels
template <class G>
double box_lp(const G& g, int dim, double radius, double p, int panels) {
    if (dim == 1) {
        const auto h = [&](double x) { return std::pow(std::fabs(g(&x)), p); };
        return detail::integrate(h, -radius, radius, panels);
    }
    if (dim == 2) {
        const auto h = [&](double x) {
            const auto inner = [&](double y) {
                const double xy[2] = {x, y};
                return std::pow(std::fabs(g(xy)), p);
            };
            return detail::integrate(inner, -radius, radius, panels);
        };
        return detail::integrate(h, -radius, radius, panels);
    }
    const auto h = [&](double x) {
        const auto mid = [&](double y) {
            const auto inner = [&](double z) {
                const double xyz[3] = {x, y, z};
                return std::pow(std::fabs(g(xyz)), p);
            };
            return detail::integrate(inner, -radius, radius, panels);
        };
        return detail::integrate(mid, -radius, radius, panels);
    };
    return detail::integrate(h, -radius, radius, panels);
}

int panels_for(int dim) { return dim == 1 ? 64 : (dim == 2 ? 32 : 12); }

}  // namespace

double lp_power_norm(const AnalyticTestFunction& f, double p) {
    return box_lp([&](const double* x) { return f.eval(x); }, f.dim, f.support_radius, p,
                  panels_for(f.dim));
}

double grad_lp_power_norm(const AnalyticTestFunction& f, double p) {
    const auto g = [&](const double* x) {
        double grad[3] = {0.0, 0.0, 0.0};
        f.gradient(x, grad);
        double q = 0.0;
        for (int i = 0; i < f.dim; ++i) q += grad[i] * grad[i];
        return std::sqrt(q);
    };
    return box_lp(g, f.dim, f.support_radius, p, panels_for(f.dim));
}

double laplacian_lp_power_norm(const AnalyticTestFunction& f, double p) {
    if (!f.has_laplacian())
        throw std::invalid_argument("laplacian_lp_power_norm: no laplacian oracle for " + f.name);
    return box_lp([&](const double* x) { return f.laplacian(x); }, f.dim, f.support_radius, p,
                  panels_for(f.dim));
}

}  // namespace ineq

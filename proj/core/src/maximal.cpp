#include "ineq/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ineq/detail/quadrature.hpp"
#include "ineq/detail/sum.hpp"
#include "ineq/functionals.hpp"
#include "ineq/weighted_samples.hpp"

namespace ineq {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// ---- exact 1-D window sums over a piecewise-constant field ----------------

struct Axis1D {
    std::vector<double> edges;  // cells + 1
    std::vector<double> vals;   // cell values

    double lo() const { return edges.front(); }
    double hi() const { return edges.back(); }

    // integral of g(value) over [a, b] intersected with the grid, where the
    // field is cell-constant; g is applied per cell (abs, shifted abs, ...)
    template <typename G>
    double window(double a, double b, G&& g) const {
        a = std::max(a, lo());
        b = std::min(b, hi());
        if (!(b > a)) return 0.0;
        const auto first = std::upper_bound(edges.begin(), edges.end(), a) -
                           edges.begin() - 1;
        const auto last = std::lower_bound(edges.begin(), edges.end(), b) -
                          edges.begin() - 1;
        if (first == last)
            return g(vals[first]) * (b - a);
        double sum = g(vals[first]) * (edges[first + 1] - a);
        for (auto k = first + 1; k < last; ++k)
            sum += g(vals[k]) * (edges[k + 1] - edges[k]);
        sum += g(vals[last]) * (b - edges[last]);
        return sum;
    }

    double overlap(double a, double b) const {
        const double c = std::min(b, hi()) - std::max(a, lo());
        return c > 0.0 ? c : 0.0;
    }
};

Axis1D make_axis(const SampledField& field) {
    require(field.dim == 1, "maximal operators: 1-D field expected here");
    Axis1D ax;
    ax.edges.resize(field.gx.cells + 1);
    for (int i = 0; i <= field.gx.cells; ++i) ax.edges[i] = field.gx.edge(i);
    ax.vals = field.values;
    return ax;
}

// per-point kernels shared by the three maximal operators, dimension 1
template <typename PerRadius>
SampledField pointwise_sup_1d(const SampledField& field,
                              std::span<const double> radii, PerRadius&& eval) {
    const Axis1D ax = make_axis(field);
    SampledField out = field;
    for (int i = 0; i < field.gx.cells; ++i) {
        const double x = field.gx.mid(i);
        double best = 0.0;
        for (double r : radii) best = std::max(best, eval(ax, x, i, r));
        out.values[i] = best;
    }
    return out;
}

// dimension 2: midpoint inclusion; the ball is the clipped set of cells whose
// centers it contains, and averages divide by the covered volume
template <typename PerBall>
SampledField pointwise_sup_2d(const SampledField& field,
                              std::span<const double> radii, PerBall&& eval) {
    SampledField out = field;
    const int nx = field.gx.cells, ny = field.gy.cells;
    std::vector<double> xm(nx), ym(ny);
    for (int i = 0; i < nx; ++i) xm[i] = field.gx.mid(i);
    for (int j = 0; j < ny; ++j) ym[j] = field.gy.mid(j);

    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double best = 0.0;
            for (double r : radii)
                best = std::max(best, eval(i, j, xm[i], ym[j], r, xm, ym));
            out.values[out.index(i, j)] = best;
        }
    }
    return out;
}

// ---- denominator of the family engine --------------------------------------

struct ScaleDenominator {
    bool is_log = false;
    double gamma = 1.0;  // PowerWeight
    double eta = 2.0;    // LogWeight
    double p = 2.0;

    bool increasing() const { return is_log || gamma > 0.0; }

    double at(double t) const {
        if (is_log) return std::pow(std::log(1.0 / t), (1.0 - eta) / p);
        return std::pow(t, gamma / p);
    }
    // t with d(t) = u
    double inverse(double u) const {
        if (is_log) return std::exp(-std::pow(u, p / (1.0 - eta)));
        return std::pow(u, p / gamma);
    }
    double coefficient() const {
        return is_log ? 1.0 / (eta - 1.0) : 1.0 / std::fabs(gamma);
    }
    double mass_from_zero(const ScaleWeight& w, double t) const {
        return std::visit([&](const auto& ww) { return ww.mass_from_zero(t); }, w);
    }
};

ScaleDenominator make_denominator(const ScaleWeight& w, double p) {
    ScaleDenominator d;
    d.p = p;
    if (std::holds_alternative<LogWeight>(w)) {
        d.is_log = true;
        d.eta = std::get<LogWeight>(w).eta;
    } else {
        d.gamma = std::get<PowerWeight>(w).gamma;
    }
    return d;
}

std::vector<double> layout_masses(const SampledField& layout) {
    std::vector<double> m;
    if (layout.dim == 1) {
        m.resize(layout.gx.cells);
        for (int i = 0; i < layout.gx.cells; ++i) m[i] = layout.gx.width(i);
    } else {
        m.resize(static_cast<std::size_t>(layout.gx.cells) * layout.gy.cells);
        for (int i = 0; i < layout.gx.cells; ++i)
            for (int j = 0; j < layout.gy.cells; ++j)
                m[layout.index(i, j)] = layout.gx.width(i) * layout.gy.width(j);
    }
    return m;
}

// section w-mass inside one scale cell [a, b] for level v against lambda
double cell_section_mass(const ScaleWeight& w, const ScaleDenominator& d,
                         double a, double b, double wm, double v, double lam) {
    const double da = lam * d.at(a), db = lam * d.at(b);
    const double dmin = std::min(da, db), dmax = std::max(da, db);
    if (v <= dmin) return 0.0;
    if (v > dmax) return wm;
    const double tstar = d.inverse(v / lam);
    if (d.increasing())  // section is the left part (a, t*)
        return cell_mass(w, a, std::clamp(tstar, a, b));
    return cell_mass(w, std::clamp(tstar, a, b), b);  // right part (t*, b)
}

// whole-ladder section mass for a scale-independent level (the T* sweep)
double ladder_section_mass(const ScaleWeight& w, const ScaleDenominator& d,
                           double t_lo, double t_hi, double v, double lam) {
    if (v <= 0.0) return 0.0;
    const double dlo = lam * d.at(t_lo), dhi = lam * d.at(t_hi);
    const double dmin = std::min(dlo, dhi), dmax = std::max(dlo, dhi);
    if (v > dmax) return cell_mass(w, t_lo, t_hi);
    if (v <= dmin) return 0.0;
    const double tstar = std::clamp(d.inverse(v / lam), t_lo, t_hi);
    return d.increasing() ? cell_mass(w, t_lo, tstar) : cell_mass(w, tstar, t_hi);
}

// completion below the grid floor, assuming T_t equals the scale limit there
ScaleCompletion limit_model_completion(const ScaleWeight& weight,
                                       const ScaleDenominator& d, double t_lo,
                                       std::vector<double> limits) {
    return [weight, d, t_lo, limits = std::move(limits)](std::size_t cell,
                                                         double lam) {
        const double a = std::fabs(limits[cell]);
        if (a <= 0.0) return 0.0;
        const double tstar = d.inverse(a / lam);
        const double edge = std::min(t_lo, tstar);
        if (!(edge > 0.0)) return 0.0;
        return d.mass_from_zero(weight, edge);
    };
}

GridSpec experiment_x_grid(const AnalyticTestFunction& f, const FamilyConfig& cfg) {
    const double box = (1.0 + cfg.pad) * f.support_radius;
    return GridSpec::uniform(-box, box, cfg.x_cells);
}

SampledField grid_layout(const GridSpec& gx) {
    SampledField layout;
    layout.dim = 1;
    layout.gx = gx;
    layout.values.assign(gx.cells, 0.0);
    return layout;
}

void require_family_config(const FamilyConfig& cfg) {
    require(cfg.x_cells >= 8 && cfg.t_cells >= 8, "FamilyConfig: grid too small");
    require(cfg.t_lo > 0.0, "FamilyConfig: t_lo must be positive");
}

// T_t f values for the difference-quotient family
std::vector<double> quotient_matrix(const AnalyticTestFunction& f,
                                    const GridSpec& gx, const GridSpec& gt) {
    std::vector<double> vals(static_cast<std::size_t>(gx.cells) * gt.cells);
    for (int i = 0; i < gx.cells; ++i) {
        const double x = gx.mid(i);
        const double fx = f(x);
        for (int k = 0; k < gt.cells; ++k) {
            const double t = gt.mid(k);
            vals[static_cast<std::size_t>(i) * gt.cells + k] = (f(x + t) - fx) / t;
        }
    }
    return vals;
}

}  // namespace

// ---------------------------------------------------------------------------
// maximal operators
// ---------------------------------------------------------------------------

std::vector<double> dyadic_radii(const SampledField& field) {
    double cell = 0.0;
    for (int i = 0; i < field.gx.cells; ++i) cell = std::max(cell, field.gx.width(i));
    if (field.dim == 2)
        for (int j = 0; j < field.gy.cells; ++j)
            cell = std::max(cell, field.gy.width(j));
    double diameter = field.gx.hi - field.gx.lo;
    if (field.dim == 2) diameter = std::max(diameter, field.gy.hi - field.gy.lo);

    std::vector<double> radii;
    for (double r = 0.5 * cell; radii.empty() || radii.back() < diameter; r *= 2.0)
        radii.push_back(r);
    return radii;
}

SampledField hl_maximal(const SampledField& field, std::span<const double> radii) {
    require(!radii.empty(), "hl_maximal: empty radius ladder");
    for (double r : radii) require(r > 0.0, "hl_maximal: radii must be positive");

    if (field.dim == 1) {
        return pointwise_sup_1d(field, radii,
                                [](const Axis1D& ax, double x, int, double r) {
                                    const double num = ax.window(
                                        x - r, x + r,
                                        [](double v) { return std::fabs(v); });
                                    return num / ax.overlap(x - r, x + r);
                                });
    }
    return pointwise_sup_2d(
        field, radii,
        [&](int, int, double x, double y, double r, const std::vector<double>& xm,
            const std::vector<double>& ym) {
            double num = 0.0, covered = 0.0;
            const double r2 = r * r;
            for (int i = 0; i < field.gx.cells; ++i) {
                const double dx = xm[i] - x;
                if (std::fabs(dx) > r) continue;
                for (int j = 0; j < field.gy.cells; ++j) {
                    const double dy = ym[j] - y;
                    if (dx * dx + dy * dy >= r2) continue;
                    const double w = field.gx.width(i) * field.gy.width(j);
                    num += std::fabs(field.values[field.index(i, j)]) * w;
                    covered += w;
                }
            }
            return num / covered;
        });
}

SampledField sharp_maximal(const SampledField& field, double s,
                           std::span<const double> radii, double cap) {
    require(s >= 0.0 && s <= 1.0, "sharp_maximal: s in [0,1] required");
    require(!radii.empty(), "sharp_maximal: empty radius ladder");

    auto admissible = [cap](double r) { return cap <= 0.0 || r < cap; };

    if (field.dim == 1) {
        return pointwise_sup_1d(
            field, radii, [&](const Axis1D& ax, double x, int i, double r) {
                if (!admissible(r)) return 0.0;
                // oscillation of the deviations from the center value: equal
                // to the raw oscillation, but constants cancel exactly
                const double c0 = ax.vals[i];
                const double mean =
                    ax.window(x - r, x + r, [&](double v) { return v - c0; }) /
                    ax.overlap(x - r, x + r);
                const double osc = ax.window(x - r, x + r, [&](double v) {
                    return std::fabs(v - c0 - mean);
                });
                return osc / std::pow(r, s + 1.0);
            });
    }
    return pointwise_sup_2d(
        field, radii,
        [&](int ci, int cj, double x, double y, double r,
            const std::vector<double>& xm, const std::vector<double>& ym) {
            if (!admissible(r)) return 0.0;
            const double r2 = r * r;
            const double c0 = field.values[field.index(ci, cj)];
            double sum = 0.0, covered = 0.0;
            for (int i = 0; i < field.gx.cells; ++i) {
                const double dx = xm[i] - x;
                if (std::fabs(dx) > r) continue;
                for (int j = 0; j < field.gy.cells; ++j) {
                    const double dy = ym[j] - y;
                    if (dx * dx + dy * dy >= r2) continue;
                    const double w = field.gx.width(i) * field.gy.width(j);
                    sum += (field.values[field.index(i, j)] - c0) * w;
                    covered += w;
                }
            }
            const double mean = sum / covered;
            double osc = 0.0;
            for (int i = 0; i < field.gx.cells; ++i) {
                const double dx = xm[i] - x;
                if (std::fabs(dx) > r) continue;
                for (int j = 0; j < field.gy.cells; ++j) {
                    const double dy = ym[j] - y;
                    if (dx * dx + dy * dy >= r2) continue;
                    osc += std::fabs(field.values[field.index(i, j)] - c0 - mean) *
                           field.gx.width(i) * field.gy.width(j);
                }
            }
            return osc / std::pow(r, s + 2.0);
        });
}

SampledField phi_log_maximal(const SampledField& field, double s,
                             std::span<const double> radii) {
    require(s > 0.0 && s <= 1.0, "phi_log_maximal: s in (0,1] required");
    require(!radii.empty(), "phi_log_maximal: empty radius ladder");

    if (field.dim == 1) {
        return pointwise_sup_1d(
            field, radii, [&](const Axis1D& ax, double x, int i, double r) {
                const double fx = field.values[i];
                const double rs = std::pow(r, s);
                const double sum = ax.window(x - r, x + r, [&](double v) {
                    return std::log1p(std::fabs(fx - v) / rs);
                });
                return sum / ax.overlap(x - r, x + r);
            });
    }
    return pointwise_sup_2d(
        field, radii,
        [&](int ci, int cj, double x, double y, double r,
            const std::vector<double>& xm, const std::vector<double>& ym) {
            const double r2 = r * r;
            const double fx = field.values[field.index(ci, cj)];
            const double rs = std::pow(r, s);
            double sum = 0.0, covered = 0.0;
            for (int i = 0; i < field.gx.cells; ++i) {
                const double dx = xm[i] - x;
                if (std::fabs(dx) > r) continue;
                for (int j = 0; j < field.gy.cells; ++j) {
                    const double dy = ym[j] - y;
                    if (dx * dx + dy * dy >= r2) continue;
                    const double w = field.gx.width(i) * field.gy.width(j);
                    sum += std::log1p(
                               std::fabs(fx - field.values[field.index(i, j)]) /
                               rs) *
                           w;
                    covered += w;
                }
            }
            return sum / covered;
        });
}

// ---------------------------------------------------------------------------
// family engine
// ---------------------------------------------------------------------------

FamilyEngineResult family_engine(const OperatorFamilySample& fam, double p,
                                 std::span<const double> lambdas,
                                 std::span<const double> limit_values,
                                 const ScaleCompletion& completion,
                                 LimitSide side, double plateau_rel_tol) {
    require(p >= 1.0, "family_engine: p >= 1 required");
    require(!lambdas.empty(), "family_engine: empty lambda grid");
    require(std::is_sorted(lambdas.begin(), lambdas.end()),
            "family_engine: lambdas must ascend");
    require(lambdas.front() > 0.0, "family_engine: lambdas must be positive");

    const auto masses = layout_masses(fam.layout);
    const std::size_t cells = masses.size();
    const int nt = fam.t_grid.cells;
    require(fam.values.size() == cells * static_cast<std::size_t>(nt),
            "family_engine: values size must be cells * t_cells");
    require(fam.t_grid.lo > 0.0, "family_engine: scales must be positive");
    if (std::holds_alternative<LogWeight>(fam.weight))
        require(fam.t_grid.hi <= 0.5, "family_engine: log weight lives on (0, 1/2)");
    require(limit_values.empty() || limit_values.size() == cells,
            "family_engine: limit_values size must match the layout");
    for (double v : fam.values)
        require(std::isfinite(v), "family_engine: family values must be finite");

    const ScaleDenominator den = make_denominator(fam.weight, p);

    std::vector<double> t_edge(nt + 1), wm(nt);
    for (int k = 0; k <= nt; ++k) t_edge[k] = fam.t_grid.edge(k);
    for (int k = 0; k < nt; ++k)
        wm[k] = cell_mass(fam.weight, t_edge[k], t_edge[k + 1]);

    std::vector<double> star(cells, 0.0);
    for (std::size_t c = 0; c < cells; ++c)
        for (int k = 0; k < nt; ++k)
            star[c] = std::max(star[c],
                               std::fabs(fam.values[c * static_cast<std::size_t>(nt) + k]));

    FamilyEngineResult out;
    out.curve.reserve(lambdas.size());
    double star_sup = 0.0;
    for (double lam : lambdas) {
        detail::CascadeSum acc, acc_star;
        for (std::size_t c = 0; c < cells; ++c) {
            double sect = 0.0;
            const double* row = fam.values.data() + c * static_cast<std::size_t>(nt);
            for (int k = 0; k < nt; ++k) {
                const double v = std::fabs(row[k]);
                if (v > 0.0)
                    sect += cell_section_mass(fam.weight, den, t_edge[k],
                                              t_edge[k + 1], wm[k], v, lam);
            }
            double extra = completion ? completion(c, lam) : 0.0;
            acc.add(masses[c] * (sect + extra));
            acc_star.add(masses[c] *
                         (ladder_section_mass(fam.weight, den, t_edge.front(),
                                              t_edge.back(), star[c], lam) +
                          extra));
        }
        const double value = std::pow(lam, p) * acc.total();
        out.curve.push_back({lam, value, 0.0});
        star_sup = std::max(star_sup, std::pow(lam, p) * acc_star.total());
        out.sup_p = std::max(out.sup_p, value);
    }
    out.star_sup_p = star_sup;

    detail::CascadeSum star_lp;
    for (std::size_t c = 0; c < cells; ++c)
        star_lp.add(masses[c] * std::pow(star[c], p));
    out.sup_bound_rhs = den.coefficient() * star_lp.total();
    out.sup_bound_holds = out.sup_p <= out.star_sup_p * (1.0 + 1e-12) &&
                          out.sup_p <= out.sup_bound_rhs * (1.0 + 1e-6);

    out.plateau = extract_limit(out.curve, side, plateau_rel_tol);
    if (limit_values.empty()) {
        out.target = std::numeric_limits<double>::quiet_NaN();
    } else {
        detail::CascadeSum tgt;
        for (std::size_t c = 0; c < cells; ++c)
            tgt.add(masses[c] * std::pow(std::fabs(limit_values[c]), p));
        out.target = den.coefficient() * tgt.total();
    }
    return out;
}

// ---------------------------------------------------------------------------
// curated experiments
// ---------------------------------------------------------------------------

FamilyEngineResult difference_quotient_experiment(const AnalyticTestFunction& f,
                                                  double p, double gamma,
                                                  std::span<const double> lambdas,
                                                  const FamilyConfig& cfg) {
    require(f.dim == 1, "difference_quotient_experiment: 1-D function required");
    require(p >= 1.0, "difference_quotient_experiment: p >= 1 required");
    require_family_config(cfg);

    OperatorFamilySample fam;
    const GridSpec gx = experiment_x_grid(f, cfg);
    const double t_hi = cfg.t_hi > 0.0 ? cfg.t_hi : 2.2 * f.support_radius;
    fam.layout = grid_layout(gx);
    fam.t_grid = GridSpec::geometric(cfg.t_lo, t_hi, cfg.t_cells);
    fam.values = quotient_matrix(f, gx, fam.t_grid);
    fam.weight = PowerWeight(gamma);

    std::vector<double> limits(gx.cells);
    for (int i = 0; i < gx.cells; ++i) limits[i] = f.d1(gx.mid(i));

    const ScaleDenominator den = make_denominator(fam.weight, p);
    ScaleCompletion completion;
    LimitSide side = LimitSide::large_param;
    if (gamma > 0.0) {
        completion = limit_model_completion(fam.weight, den, cfg.t_lo, limits);
    } else {
        side = LimitSide::small_param;
        // beyond the grid f(x+t) has left the support, so |T_t| = |f(x)|/t;
        // the surviving ray has exponent 1 + gamma/p in t
        std::vector<double> fx(gx.cells);
        for (int i = 0; i < gx.cells; ++i) fx[i] = std::fabs(f(gx.mid(i)));
        const PowerWeight w(gamma);
        const double q = 1.0 + gamma / p;
        completion = [fx, w, q, t_hi, p](std::size_t c, double lam) {
            const double a = fx[c];
            if (a <= 0.0) return 0.0;
            if (q > 0.0) {
                const double cap = std::pow(a / lam, 1.0 / q);
                return cap > t_hi ? w.cell_mass(t_hi, cap) : 0.0;
            }
            double start = t_hi;
            if (q < 0.0) start = std::max(start, std::pow(a / lam, 1.0 / q));
            else if (a <= lam) return 0.0;  // q == 0: level ray on/off
            return -std::pow(start, w.gamma) / w.gamma;
        };
    }
    return family_engine(fam, p, lambdas, limits, completion, side,
                         cfg.plateau_rel_tol);
}

FamilyEngineResult higher_order_experiment(const AnalyticTestFunction& f,
                                           double p, double gamma,
                                           std::span<const double> lambdas,
                                           const FamilyConfig& cfg) {
    require(f.dim == 1, "higher_order_experiment: 1-D function required");
    require(f.has_laplacian(), "higher_order_experiment: laplacian oracle required");
    require(p >= 1.0, "higher_order_experiment: p >= 1 required");
    require(gamma > 0.0, "higher_order_experiment: gamma > 0 required");
    require_family_config(cfg);

    FamilyConfig c = cfg;
    // (f - ball average)/t^2 cancels ~14 digits by t ~ 1e-5; below that the
    // matrix would be rounding noise
    c.t_lo = std::max(cfg.t_lo, 1e-5);
    const GridSpec gx = experiment_x_grid(f, c);
    const double t_hi = c.t_hi > 0.0 ? c.t_hi : 0.5 * f.support_radius;

    OperatorFamilySample fam;
    fam.layout = grid_layout(gx);
    fam.t_grid = GridSpec::geometric(c.t_lo, t_hi, c.t_cells);
    fam.weight = PowerWeight(gamma);
    fam.values.resize(static_cast<std::size_t>(gx.cells) * c.t_cells);

    for (int i = 0; i < gx.cells; ++i) {
        const double x = gx.mid(i);
        const double fx = f(x);
        // D(t) = int_0^t (f(x+u) + f(x-u) - 2 f(x)) du, accumulated over the
        // geometric ladder; the ball average deficit is D(t) / (2t)
        auto even_part = [&](double u) { return f(x + u) + f(x - u) - 2.0 * fx; };
        detail::CascadeSum d;
        double prev = 0.0;
        for (int k = 0; k < c.t_cells; ++k) {
            const double t = fam.t_grid.mid(k);
            d.add(detail::gl_panel(even_part, prev, t));
            prev = t;
            fam.values[static_cast<std::size_t>(i) * c.t_cells + k] =
                -d.total() / (2.0 * t * t * t);
        }
    }

    std::vector<double> limits(gx.cells);
    for (int i = 0; i < gx.cells; ++i) limits[i] = -f.d2(gx.mid(i)) / 6.0;

    const ScaleDenominator den = make_denominator(fam.weight, p);
    return family_engine(fam, p, lambdas, limits,
                         limit_model_completion(fam.weight, den, c.t_lo, limits),
                         LimitSide::large_param, c.plateau_rel_tol);
}

ThmPhResult thmph_experiment(const AnalyticTestFunction& f, double p,
                             std::span<const double> lambdas,
                             const FamilyConfig& cfg) {
    require(f.dim == 1, "thmph_experiment: 1-D function required");
    require(p >= 1.0, "thmph_experiment: p >= 1 required");
    require_family_config(cfg);

    const GridSpec gx = experiment_x_grid(f, cfg);
    const double t_hi = cfg.t_hi > 0.0 ? cfg.t_hi : 2.2 * f.support_radius;

    OperatorFamilySample fam;
    fam.layout = grid_layout(gx);
    fam.t_grid = GridSpec::geometric(cfg.t_lo, t_hi, cfg.t_cells);
    fam.weight = PowerWeight(1.0);
    fam.values.resize(static_cast<std::size_t>(gx.cells) * cfg.t_cells);

    for (int i = 0; i < gx.cells; ++i) {
        const double x = gx.mid(i);
        detail::CascadeSum integral;  // int_x^{x+t} f, extended incrementally
        double prev = x;
        for (int k = 0; k < cfg.t_cells; ++k) {
            const double t = fam.t_grid.mid(k);
            integral.add(
                detail::gl_panel([&](double u) { return f(u); }, prev, x + t));
            prev = x + t;
            fam.values[static_cast<std::size_t>(i) * cfg.t_cells + k] =
                integral.total() / t;
        }
    }

    std::vector<double> limits(gx.cells);
    for (int i = 0; i < gx.cells; ++i) limits[i] = f(gx.mid(i));

    const ScaleDenominator den = make_denominator(fam.weight, p);
    ThmPhResult out;
    out.engine = family_engine(
        fam, p, lambdas, limits,
        limit_model_completion(fam.weight, den, cfg.t_lo, limits),
        LimitSide::large_param, cfg.plateau_rel_tol);

    // sampled Hölder-1/p constant over strided grid pairs
    const int stride = std::max(1, gx.cells / 256);
    double holder = 0.0;
    for (int i = 0; i < gx.cells; i += stride) {
        const double xi = gx.mid(i), fi = f(xi);
        for (int j = i + stride; j < gx.cells; j += stride) {
            const double xj = gx.mid(j);
            holder = std::max(holder, std::fabs(f(xj) - fi) /
                                          std::pow(xj - xi, 1.0 / p));
        }
    }
    out.holder_constant = holder;
    return out;
}

FamilyEngineResult log_weight_experiment(const AnalyticTestFunction& f, double p,
                                         double eta,
                                         std::span<const double> lambdas,
                                         const FamilyConfig& cfg) {
    require(f.dim == 1, "log_weight_experiment: 1-D function required");
    require(p >= 1.0, "log_weight_experiment: p >= 1 required");
    require(eta > 1.0, "log_weight_experiment: eta > 1 required");
    require_family_config(cfg);

    const GridSpec gx = experiment_x_grid(f, cfg);
    const double t_hi = cfg.t_hi > 0.0 ? std::min(cfg.t_hi, 0.4999) : 0.4999;
    require(cfg.t_lo < t_hi, "log_weight_experiment: t_lo must sit below 1/2");

    OperatorFamilySample fam;
    fam.layout = grid_layout(gx);
    fam.t_grid = GridSpec::geometric(cfg.t_lo, t_hi, cfg.t_cells);
    fam.values = quotient_matrix(f, gx, fam.t_grid);
    fam.weight = LogWeight(eta);

    std::vector<double> limits(gx.cells);
    for (int i = 0; i < gx.cells; ++i) limits[i] = f.d1(gx.mid(i));

    const ScaleDenominator den = make_denominator(fam.weight, p);
    return family_engine(fam, p, lambdas, limits,
                         limit_model_completion(fam.weight, den, cfg.t_lo, limits),
                         LimitSide::large_param, cfg.plateau_rel_tol);
}

// ---------------------------------------------------------------------------
// oscillation experiments
// ---------------------------------------------------------------------------

namespace {

struct OscillationLadder {
    GridSpec gx;
    std::vector<double> radii;       // ascending geometric ladder
    std::vector<double> osc;         // [cell * radii.size() + ir]
    std::vector<double> sharp_full;  // sup over the whole ladder

    std::size_t nr() const { return radii.size(); }
};

// exact 1-D oscillation matrix: osc[x][r] = r^{-s-1} int_B |f - (f)_B|
OscillationLadder build_oscillation(const AnalyticTestFunction& f, double s,
                                    const CampanatoConfig& cfg) {
    require(cfg.x_cells >= 16 && cfg.r_cells >= 8, "CampanatoConfig: grid too small");
    require(cfg.box_factor > 1.0, "CampanatoConfig: box must cover the support");

    OscillationLadder lad;
    const double box = cfg.box_factor * f.support_radius;
    lad.gx = GridSpec::uniform(-box, box, cfg.x_cells);
    const SampledField field = sample_field(f, lad.gx);
    const Axis1D ax = make_axis(field);

    const double h = lad.gx.width(0);
    auto rgrid = GridSpec::geometric(h, 4.0 * box, cfg.r_cells);
    lad.radii.resize(cfg.r_cells);
    for (int k = 0; k < cfg.r_cells; ++k) lad.radii[k] = rgrid.mid(k);

    lad.osc.resize(static_cast<std::size_t>(cfg.x_cells) * cfg.r_cells);
    lad.sharp_full.assign(cfg.x_cells, 0.0);
    for (int i = 0; i < cfg.x_cells; ++i) {
        const double x = lad.gx.mid(i);
        const double c0 = ax.vals[i];
        for (int k = 0; k < cfg.r_cells; ++k) {
            const double r = lad.radii[k];
            const double mean =
                ax.window(x - r, x + r, [&](double v) { return v - c0; }) /
                ax.overlap(x - r, x + r);
            const double osc = ax.window(x - r, x + r, [&](double v) {
                return std::fabs(v - c0 - mean);
            });
            const double val = osc / std::pow(r, s + 1.0);
            lad.osc[static_cast<std::size_t>(i) * cfg.r_cells + k] = val;
            lad.sharp_full[i] = std::max(lad.sharp_full[i], val);
        }
    }
    return lad;
}

}  // namespace

CampanatoIdentity campanato_identity(const AnalyticTestFunction& f, double s,
                                     double p, const CampanatoConfig& cfg) {
    require(f.dim == 1, "campanato_identity: 1-D function required");
    require(s >= 0.0 && s <= 1.0, "campanato_identity: s in [0,1] required");
    require(p > 1.0, "campanato_identity: p > 1 required");

    const OscillationLadder lad = build_oscillation(f, s, cfg);
    const int nx = cfg.x_cells;
    const std::size_t nr = lad.nr();

    // restricted family T_R(x) = sup over ladder radii r < 1/R, sampled on a
    // geometric R-ladder; prefix maxima make the restriction exact
    const double scale_lo = 1.0 / (4.0 * cfg.box_factor * f.support_radius);
    const double scale_hi = 1.0 / lad.radii.front();
    OperatorFamilySample fam;
    fam.layout = grid_layout(lad.gx);
    fam.t_grid = GridSpec::geometric(scale_lo, scale_hi, cfg.scale_cells);
    fam.weight = PowerWeight(1.0);
    fam.values.assign(static_cast<std::size_t>(nx) * cfg.scale_cells, 0.0);
    for (int i = 0; i < nx; ++i) {
        for (int k = 0; k < cfg.scale_cells; ++k) {
            const double cap = 1.0 / fam.t_grid.mid(k);
            double best = 0.0;
            for (std::size_t ir = 0; ir < nr && lad.radii[ir] < cap; ++ir)
                best = std::max(best, lad.osc[static_cast<std::size_t>(i) * nr + ir]);
            fam.values[static_cast<std::size_t>(i) * cfg.scale_cells + k] = best;
        }
    }

    double sharp_max = 0.0;
    for (double v : lad.sharp_full) sharp_max = std::max(sharp_max, v);
    CampanatoIdentity out;
    if (sharp_max <= 0.0) return out;  // constant input: all three vanish

    const double lam_hi = 0.5 * sharp_max * std::pow(scale_lo, -1.0 / p);
    const auto lambdas = log_space(lam_hi / 1000.0, lam_hi, 80);

    const ScaleDenominator den = make_denominator(fam.weight, p);
    const auto engine = family_engine(
        fam, p, lambdas, lad.sharp_full,
        limit_model_completion(fam.weight, den, scale_lo, lad.sharp_full),
        LimitSide::large_param, cfg.plateau_rel_tol);

    out.lhs = engine.target;
    out.rhs_sup = engine.sup_p;
    out.rhs_lim = engine.plateau.value;
    out.lim_converged = engine.plateau.converged;
    const double top =
        std::max({out.lhs, out.rhs_sup, out.rhs_lim, 1e-300});
    out.max_rel_gap =
        (std::max({out.lhs, out.rhs_sup, out.rhs_lim}) -
         std::min({out.lhs, out.rhs_sup, out.rhs_lim})) / top;
    return out;
}

CampanatoEmbedding campanato_bsy_embedding(const AnalyticTestFunction& f, double s,
                                           double p, const CampanatoConfig& cfg) {
    require(f.dim == 1, "campanato_bsy_embedding: 1-D function required");
    require(s > 0.0 && s <= 1.0, "campanato_bsy_embedding: s in (0,1] required");
    require(p >= 1.0, "campanato_bsy_embedding: p >= 1 required");

    auto ratio_pass = [&](const CampanatoConfig& c, double* mean_out) {
        const OscillationLadder lad = build_oscillation(f, s, c);
        const int stride = std::max(1, c.x_cells / 128);
        double sup = 0.0;
        detail::CascadeSum mean;
        std::size_t count = 0;
        for (int i = 0; i < c.x_cells; i += stride) {
            const double xi = lad.gx.mid(i), fi = f(xi);
            for (int j = i + stride; j < c.x_cells; j += stride) {
                const double xj = lad.gx.mid(j);
                const double denom = std::pow(xj - xi, s) *
                                     (lad.sharp_full[i] + lad.sharp_full[j]);
                if (denom < 1e-13) continue;
                const double ratio = std::fabs(f(xj) - fi) / denom;
                sup = std::max(sup, ratio);
                mean.add(ratio);
                ++count;
            }
        }
        if (mean_out) *mean_out = count ? mean.total() / count : 0.0;
        return sup;
    };

    CampanatoEmbedding out;

    {
        const OscillationLadder lad = build_oscillation(f, s, cfg);
        detail::CascadeSum cc;
        for (int i = 0; i < cfg.x_cells; ++i)
            cc.add(lad.gx.width(i) * std::pow(lad.sharp_full[i], p));
        out.cc_norm_p = cc.total();
    }

    // lambda ladder spanning the quotient's range; the exact discrete weak
    // sup inside the sweep makes the precise choice uncritical
    double grad_peak = 0.0;
    for (int i = 0; i <= 512; ++i) {
        const double x = -f.support_radius +
                         2.0 * f.support_radius * static_cast<double>(i) / 512;
        grad_peak = std::max(grad_peak, std::fabs(f.d1(x)));
    }
    const double top = std::max(grad_peak, 1e-9);
    const auto lams = log_space(top / 200.0, top, 25);
    out.bsy_quasinorm_p = bsy_1d_twosided(f, p, s, 1.0, lams).sup_p;

    out.ratio_sup = ratio_pass(cfg, &out.ratio_mean);
    CampanatoConfig fine = cfg;
    fine.x_cells *= 2;
    fine.r_cells += 16;
    out.ratio_sup_refined = ratio_pass(fine, nullptr);
    return out;
}

}  // namespace ineq

#include "ineq/functionals.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "ineq/detail/quadrature.hpp"
#include "ineq/detail/rng.hpp"
#include "ineq/detail/sum.hpp"
#include "ineq/grids.hpp"
#include "ineq/weights.hpp"

namespace ineq {

namespace {

void require_dim1(const AnalyticTestFunction& f, const char* who) {
    if (f.dim != 1)
        throw std::invalid_argument(std::string(who) + ": 1-D test function required");
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double grad_peak(const AnalyticTestFunction& f) {
    double peak = 0.0;
    const double r = f.support_radius;
    if (f.dim == 1) {
        for (int i = 0; i <= 512; ++i)
            peak = std::max(peak, std::fabs(f.d1(-r + 2.0 * r * i / 512.0)));
    } else {
        double g[2];
        for (int i = 0; i <= 96; ++i)
            for (int j = 0; j <= 96; ++j) {
                const double x[2] = {-r + 2.0 * r * i / 96.0, -r + 2.0 * r * j / 96.0};
                f.gradient(x, g);
                peak = std::max(peak, std::hypot(g[0], g[1]));
            }
    }
    return peak;
}

// Smallest t a sweep must resolve.  When the quotient grows like
// |grad| t^{1-e} toward t = 0 (e > 1), sections at the top threshold reach
// down to t* = (grad/lam)^{1/(e-1)}; starting the grid at t*·10^{-4/gamma}
// keeps the un-sampled mass below t_min under 1e-4 of such a section.
double polar_t_floor(double grad_max, double lam_max, double e, double gamma,
                     double scale) {
    const double base = 1e-4 * scale;
    if (e <= 1.0 || grad_max <= 0.0 || lam_max <= 0.0) return base;
    const double tstar = std::pow(grad_max / lam_max, 1.0 / (e - 1.0));
    const double shrink = std::pow(1e-4, 1.0 / gamma);
    return std::min(base, std::max(tstar * shrink, 1e-12 * scale));
}

// Polar layout shared by the 1-D pair sweeps: x midpoints over the padded
// support box, exact t-cell masses for t^{gw-1} dt on a geometric grid.
struct PolarGrid {
    std::vector<double> x;
    std::vector<double> fx;
    double h = 0.0;
    double box = 0.0;  // half-width of the partition box B
    std::vector<double> tmid;
    std::vector<double> tmass;
    double t_min = 0.0, t_max = 0.0;
};

PolarGrid build_polar(const AnalyticTestFunction& f, const PairSweepConfig& cfg,
                      double weight_gamma, double t_floor) {
    require(cfg.x_cells >= 8 && cfg.t_cells >= 8, "PairSweepConfig: grid too small");
    PolarGrid g;
    const double scale = f.support_radius;
    g.box = scale * (1.0 + cfg.pad);
    const auto gx = GridSpec::uniform(-g.box, g.box, cfg.x_cells);
    g.h = gx.width(0);
    g.x.resize(cfg.x_cells);
    g.fx.resize(cfg.x_cells);
    for (int i = 0; i < cfg.x_cells; ++i) {
        g.x[i] = gx.mid(i);
        g.fx[i] = f(g.x[i]);
    }
    g.t_min = cfg.t_min > 0.0 ? cfg.t_min : t_floor;
    g.t_max = cfg.t_max > 0.0 ? cfg.t_max : 2.2 * scale;
    require(g.t_max > g.t_min && g.t_min > 0.0, "PairSweepConfig: bad t range");
    const auto gt = GridSpec::geometric(g.t_min, g.t_max, cfg.t_cells);
    PowerWeight w(weight_gamma);
    g.tmid.resize(cfg.t_cells);
    g.tmass.resize(cfg.t_cells);
    for (int i = 0; i < cfg.t_cells; ++i) {
        g.tmid[i] = gt.mid(i);
        g.tmass[i] = w.cell_mass(gt.edge(i), gt.edge(i + 1));
    }
    return g;
}

// Two-sided polar sweep.  quotient(fx, fy, t) maps one sampled pair to the
// threshold variable.  Pairs whose far leg lands outside the box are the
// mirror images of pairs starting outside it, so they carry double mass;
// pairs with both legs outside contribute nothing since f vanishes there.
template <class Quot>
WeightedSampleSet sweep_pairs(const AnalyticTestFunction& f, const PolarGrid& g,
                              const Quot& quotient) {
    WeightedSampleSet set;
    set.reserve(2 * g.x.size() * g.tmid.size());
    for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
        const double x = g.x[ix];
        const double fx = g.fx[ix];
        for (int dir = 0; dir < 2; ++dir) {
            const double sgn = dir ? -1.0 : 1.0;
            for (std::size_t it = 0; it < g.tmid.size(); ++it) {
                const double t = g.tmid[it];
                const double y = x + sgn * t;
                const double fy = f(y);
                const double dbl = std::fabs(y) > g.box ? 2.0 : 1.0;
                set.push(quotient(fx, fy, t), g.h * g.tmass[it] * dbl);
            }
        }
    }
    return set;
}

// Closed-form mass beyond t_max as a function of the sweep parameter; empty
// when a sweep needs no completion.
using Completion = std::function<double(double)>;

SweepResult assemble(const WeightedSampleSet& set, const Completion& completion,
                     double p, std::span<const double> params, LimitSide side,
                     double target, double plateau_rel_tol = 0.02) {
    DistributionCurve dist(set);
    SweepResult r;
    r.curve.reserve(params.size());
    double grid_sup = 0.0;
    for (double lam : params) {
        require(lam > 0.0, "sweep parameters must be positive");
        double mass = dist.mass_above(lam);
        if (completion) mass += completion(lam);
        const double v = std::pow(lam, p) * mass;
        r.curve.push_back({lam, v, 0.0});
        grid_sup = std::max(grid_sup, v);
    }
    // both are lower bounds for the true sup; the sampled part is exact
    r.sup_p = std::max(grid_sup, dist.weak_lp_p(p));
    r.plateau = extract_limit(r.curve, side, plateau_rel_tol);
    r.target = target;
    return r;
}

double kappa(int dim) { return ball_volume(dim); }

}  // namespace

SweepResult bsy_1d_onesided(const AnalyticTestFunction& f, double p, double gamma,
                            std::span<const double> lambdas,
                            const PairSweepConfig& cfg) {
    require_dim1(f, "bsy_1d_onesided");
    require(p >= 1.0, "bsy_1d_onesided: p >= 1 required");
    require(gamma > 0.0, "bsy_1d_onesided: gamma > 0 required");
    require(!lambdas.empty(), "bsy_1d_onesided: empty lambda grid");

    const double scale = f.support_radius;
    const double e = gamma / p + 1.0;
    const double lam_lo = *std::min_element(lambdas.begin(), lambdas.end());
    const double lam_hi = *std::max_element(lambdas.begin(), lambdas.end());
    const double t_min =
        cfg.t_min > 0.0 ? cfg.t_min : polar_t_floor(grad_peak(f), lam_hi, e, gamma, scale);
    double fpeak = 0.0;
    for (int i = 0; i <= 64; ++i)
        fpeak = std::max(fpeak, std::fabs(f(-scale + 2.0 * scale * i / 64.0)));
    // largest section any lambda can reach: |f(x+t) - f(x)| <= max|f| means
    // the quotient clears lam only while t < (max|f|/lam)^{1/e}
    double t_max = cfg.t_max > 0.0
                       ? cfg.t_max
                       : std::max(scale, 1.1 * std::pow(fpeak / lam_lo, 1.0 / e));
    require(t_max > t_min, "bsy_1d_onesided: t_max must exceed t_min");

    const auto gt = GridSpec::geometric(t_min, t_max, cfg.t_cells);
    PowerWeight w(gamma);
    std::vector<double> tmid(cfg.t_cells), tmass(cfg.t_cells);
    for (int i = 0; i < cfg.t_cells; ++i) {
        tmid[i] = gt.mid(i);
        tmass[i] = w.cell_mass(gt.edge(i), gt.edge(i + 1));
    }
    // x spans every point whose forward offset can reach the support
    const auto gx = GridSpec::uniform(-scale - t_max, scale + cfg.pad * scale, cfg.x_cells);

    WeightedSampleSet set;
    set.reserve(static_cast<std::size_t>(cfg.x_cells) * cfg.t_cells);
    for (int ix = 0; ix < cfg.x_cells; ++ix) {
        const double x = gx.mid(ix);
        const double fx = f(x);
        const double hx = gx.width(ix);
        for (int it = 0; it < cfg.t_cells; ++it) {
            const double q = std::fabs(f(x + tmid[it]) - fx) / std::pow(tmid[it], e);
            set.push(q, hx * tmass[it]);
        }
    }
    const double target = grad_lp_power_norm(f, p) / gamma;
    return assemble(set, nullptr, p, lambdas, LimitSide::large_param, target);
}

SweepResult bsy_1d_twosided(const AnalyticTestFunction& f, double p, double s,
                            double gamma, std::span<const double> lambdas,
                            const PairSweepConfig& cfg) {
    require_dim1(f, "bsy_1d_twosided");
    require(p >= 1.0, "bsy_1d_twosided: p >= 1 required");
    require(gamma > 0.0, "bsy_1d_twosided: gamma > 0 required");
    require(s > 0.0 && s <= 1.0, "bsy_1d_twosided: s in (0,1] required");
    require(!lambdas.empty(), "bsy_1d_twosided: empty lambda grid");

    const double e = gamma / p + s;
    const double lam_hi = *std::max_element(lambdas.begin(), lambdas.end());
    const double floor = polar_t_floor(grad_peak(f), lam_hi, e, gamma, f.support_radius);
    const PolarGrid g = build_polar(f, cfg, gamma, floor);
    const auto set = sweep_pairs(f, g, [e](double fx, double fy, double t) {
        return std::fabs(fy - fx) / std::pow(t, e);
    });

    // beyond t_max the far leg is outside the support, so the quotient decays
    // as |f(x)| / t^e and the section reaches out to (|f(x)|/lambda)^{1/e}
    PowerWeight w(gamma);
    const Completion completion = [g, w, e](double lam) {
        detail::CascadeSum acc;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double a = std::fabs(g.fx[i]);
            if (a <= 0.0) continue;
            const double tstar = std::pow(a / lam, 1.0 / e);
            if (tstar > g.t_max) acc.add(4.0 * g.h * w.cell_mass(g.t_max, tstar));
        }
        return acc.total();
    };
    const double target =
        s == 1.0 ? k_constant(p, 1) * grad_lp_power_norm(f, p) / gamma
                 : std::numeric_limits<double>::quiet_NaN();
    return assemble(set, completion, p, lambdas, LimitSide::large_param, target);
}

SweepResult bsy_mc(const AnalyticTestFunction& f, double p, double s, double gamma,
                   std::span<const double> lambdas, const McPairConfig& cfg) {
    require(f.dim == 1 || f.dim == 2, "bsy_mc: dim 1 or 2 required");
    require(p >= 1.0, "bsy_mc: p >= 1 required");
    require(gamma > 0.0, "bsy_mc: gamma > 0 required");
    require(s > 0.0 && s <= 1.0, "bsy_mc: s in (0,1] required");
    require(cfg.samples > 0 && cfg.samples <= 100'000'000, "bsy_mc: samples in (0, 1e8]");
    require(cfg.shells >= 2, "bsy_mc: at least two shells");
    require(!lambdas.empty(), "bsy_mc: empty lambda grid");

    constexpr double two_pi = 6.283185307179586476925286766559;
    const int dim = f.dim;
    const double scale = f.support_radius;
    const double box = scale * (1.0 + cfg.pad);
    const double e = gamma / p + s;
    const double lam_hi = *std::max_element(lambdas.begin(), lambdas.end());
    const double r_min = cfg.r_min > 0.0
                             ? cfg.r_min
                             : polar_t_floor(grad_peak(f), lam_hi, e, gamma, scale);
    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : 2.2 * scale;
    require(r_max > r_min, "bsy_mc: r_max must exceed r_min");

    const double vol_box = std::pow(2.0 * box, dim);
    const double sphere = dim == 1 ? 2.0 : two_pi;
    const double log_step = std::log(r_max / r_min) / cfg.shells;

    std::vector<double> ladder(lambdas.begin(), lambdas.end());
    require(std::is_sorted(ladder.begin(), ladder.end()), "bsy_mc: lambdas must ascend");

    const std::int64_t per_shell = cfg.samples / cfg.shells;
    require(per_shell > 0, "bsy_mc: fewer samples than shells");
    constexpr std::int64_t chunk_size = 65536;

    struct Chunk {
        int shell;
        std::int64_t count;
        std::uint64_t stream;
    };
    std::vector<Chunk> chunks;
    for (int k = 0; k < cfg.shells; ++k) {
        std::int64_t left = per_shell;
        std::int64_t j = 0;
        while (left > 0) {
            const std::int64_t c = std::min(left, chunk_size);
            chunks.push_back({k, c,
                              (static_cast<std::uint64_t>(k) << 20) |
                                  static_cast<std::uint64_t>(j)});
            left -= c;
            ++j;
        }
    }

    detail::Rng base(cfg.seed);
    std::vector<CurveAccumulator> parts(chunks.size(), CurveAccumulator(ladder, 1));

    const auto run_chunk = [&](std::size_t ci) {
        const Chunk& c = chunks[ci];
        detail::Rng rng = base.substream(c.stream);
        CurveAccumulator& acc = parts[ci];
        const double shell_lo = r_min * std::exp(log_step * c.shell);
        const double w_base = vol_box * sphere * log_step;
        for (std::int64_t i = 0; i < c.count; ++i) {
            double x[2] = {0.0, 0.0};
            for (int d = 0; d < dim; ++d) x[d] = rng.uniform(-box, box);
            double wdir[2] = {1.0, 0.0};
            if (dim == 1) {
                wdir[0] = rng.next_unit() < 0.5 ? -1.0 : 1.0;
            } else {
                const double th = rng.uniform(0.0, two_pi);
                wdir[0] = std::cos(th);
                wdir[1] = std::sin(th);
            }
            const double r = shell_lo * std::exp(log_step * rng.next_unit());
            const double y[2] = {x[0] + r * wdir[0], x[1] + r * wdir[1]};
            const double q = std::fabs(f.eval(y) - f.eval(x)) / std::pow(r, e);
            bool outside = std::fabs(y[0]) > box;
            if (dim == 2) outside = outside || std::fabs(y[1]) > box;
            const double w = w_base * std::pow(r, gamma) * (outside ? 2.0 : 1.0);
            acc.add(q, w, 0);
        }
        acc.set_stratum_draws(0, c.count);
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (std::size_t ci = 0; ci < chunks.size(); ++ci) run_chunk(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t ci = next.fetch_add(1); ci < chunks.size();
                     ci = next.fetch_add(1))
                    run_chunk(ci);
            });
        for (auto& th : pool) th.join();
    }

    // merge in chunk order: results are identical for any worker count
    CurveAccumulator total(ladder, static_cast<std::size_t>(cfg.shells));
    for (std::size_t ci = 0; ci < chunks.size(); ++ci)
        total.merge_into_stratum(parts[ci], static_cast<std::size_t>(chunks[ci].shell));

    SweepResult r;
    r.curve = total.finalize(p);
    for (const auto& pt : r.curve) r.sup_p = std::max(r.sup_p, pt.value);
    r.plateau = extract_limit(r.curve, LimitSide::large_param, 0.05);
    r.target = s == 1.0 ? k_constant(p, dim) * grad_lp_power_norm(f, p) / gamma
                        : std::numeric_limits<double>::quiet_NaN();
    return r;
}

double gagliardo_seminorm_p(const AnalyticTestFunction& f, double s, double p,
                            const PairSweepConfig& cfg) {
    require_dim1(f, "gagliardo_seminorm_p");
    require(p >= 1.0, "gagliardo_seminorm_p: p >= 1 required");
    require(s > 0.0 && s < 1.0,
            "gagliardo_seminorm_p: s in (0,1) strictly; the energy diverges at s = 1");
    require(cfg.band_cells > 0.0, "gagliardo_seminorm_p: band_cells must be positive");

    // start the t-grid at the band edge so no cell straddles it
    const double h = 2.0 * f.support_radius * (1.0 + cfg.pad) / cfg.x_cells;
    const double band = cfg.band_cells * h;
    PairSweepConfig c = cfg;
    c.t_min = band;
    const PolarGrid g = build_polar(f, c, -s * p, band);

    detail::CascadeSum acc;
    for (std::size_t ix = 0; ix < g.x.size(); ++ix) {
        const double x = g.x[ix];
        const double fx = g.fx[ix];
        for (int dir = 0; dir < 2; ++dir) {
            const double sgn = dir ? -1.0 : 1.0;
            for (std::size_t it = 0; it < g.tmid.size(); ++it) {
                const double y = x + sgn * g.tmid[it];
                const double diff = std::fabs(f(y) - fx);
                if (diff == 0.0) continue;
                const double dbl = std::fabs(y) > g.box ? 2.0 : 1.0;
                acc.add(std::pow(diff, p) * g.h * g.tmass[it] * dbl);
            }
        }
    }
    double total = acc.total();

    // band restoration: |f(x+t)-f(x)| ~ |f'(x)| t for t < band
    total += k_constant(p, 1) * std::pow(band, p * (1.0 - s)) / (p * (1.0 - s)) *
             grad_lp_power_norm(f, p);

    // far completion: the far leg vanishes beyond t_max
    detail::CascadeSum far;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double a = std::fabs(g.fx[i]);
        if (a > 0.0) far.add(std::pow(a, p) * g.h);
    }
    total += 4.0 * far.total() * std::pow(g.t_max, -s * p) / (s * p);
    return total;
}

Curve bbm_rescaled(const AnalyticTestFunction& f, double p,
                   std::span<const double> s_grid, const PairSweepConfig& cfg) {
    require_dim1(f, "bbm_rescaled");
    Curve out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        require(s > 0.0 && s < 1.0, "bbm_rescaled: s grid must lie in (0,1)");
        out.push_back({s, (1.0 - s) * gagliardo_seminorm_p(f, s, p, cfg), 0.0});
    }
    return out;
}

Curve bn_curve(const AnalyticTestFunction& f, double s, double p,
               std::span<const double> deltas, const PairSweepConfig& cfg) {
    require_dim1(f, "bn_curve");
    require(p >= 1.0, "bn_curve: p >= 1 required");
    require(s >= 0.0 && s <= 1.0, "bn_curve: s in [0,1] required");
    require(!deltas.empty(), "bn_curve: empty delta grid");

    // the quotient t^{1-s}|df| vanishes at the diagonal, but the t^{-p-1}
    // weight piles mass onto the inner section edge t = delta/grad (s = 1
    // worst case), so keep the grid floor well under the smallest edge
    const double d_lo = *std::min_element(deltas.begin(), deltas.end());
    const double gpeak = grad_peak(f);
    double floor = 1e-4 * f.support_radius;
    if (gpeak > 0.0 && d_lo > 0.0) floor = std::min(floor, 0.02 * d_lo / gpeak);
    const PolarGrid g = build_polar(f, cfg, -p, floor);
    const auto set = sweep_pairs(f, g, [s](double fx, double fy, double t) {
        return std::pow(t, 1.0 - s) * std::fabs(fy - fx);
    });

    // far leg outside the support: the quotient t^{1-s}|f(x)| is nondecreasing
    // in t, so sections meet (t_max, inf) in a full ray
    const Completion completion = [g, s, p](double delta) {
        detail::CascadeSum acc;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double a = std::fabs(g.fx[i]);
            if (a <= 0.0) continue;
            double start = g.t_max;
            if (s == 1.0) {
                if (a <= delta) continue;  // constant quotient never crosses
            } else {
                start = std::max(g.t_max, std::pow(delta / a, 1.0 / (1.0 - s)));
            }
            acc.add(4.0 * g.h * std::pow(start, -p) / p);
        }
        return acc.total();
    };

    DistributionCurve dist(set);
    Curve out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        require(d > 0.0, "bn_curve: deltas must be positive");
        out.push_back({d, std::pow(d, p) * (dist.mass_above(d) + completion(d)), 0.0});
    }
    return out;
}

BnBounds bn_appendix_bounds(const AnalyticTestFunction& f, double p,
                            std::span<const double> deltas,
                            const PairSweepConfig& cfg) {
    BnBounds b;
    b.curve = bn_curve(f, 0.0, p, deltas, cfg);
    for (const auto& pt : b.curve) b.sup_value = std::max(b.sup_value, pt.value);
    const auto plateau = extract_limit(b.curve, LimitSide::small_param, 0.02);
    b.converged = plateau.converged;
    // no plateau means the curve is still moving at the small end; report the
    // smallest-delta sample so callers can see where it headed
    b.small_delta_value = plateau.converged ? plateau.value : b.curve.front().value;
    const double fp = lp_power_norm(f, p);
    b.lower = 4.0 * kappa(1) / p * fp;
    b.upper = std::pow(2.0, p + 1.0) * kappa(1) / p * fp;
    const double slack = 0.02;
    b.holds = b.converged && b.small_delta_value >= b.lower * (1.0 - slack) &&
              b.sup_value >= b.lower * (1.0 - slack) &&
              b.sup_value <= b.upper * (1.0 + slack);
    return b;
}

namespace {

// shared by gu_yung and ms_weak: the s = 0 quotient against Lebesgue dt
struct GuYungSweep {
    WeightedSampleSet set;
    PolarGrid grid;
    double p;
};

GuYungSweep gu_yung_sweep(const AnalyticTestFunction& f, double p,
                          const PairSweepConfig& cfg) {
    GuYungSweep s;
    s.p = p;
    s.grid = build_polar(f, cfg, 1.0, 1e-4 * f.support_radius);
    const double inv_p = 1.0 / p;
    s.set = sweep_pairs(f, s.grid, [inv_p](double fx, double fy, double t) {
        return std::fabs(fy - fx) / std::pow(t, inv_p);
    });
    return s;
}

Completion gu_yung_completion(const GuYungSweep& s) {
    const PolarGrid g = s.grid;
    const double p = s.p;
    return [g, p](double lam) {
        detail::CascadeSum acc;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double a = std::fabs(g.fx[i]);
            if (a <= 0.0) continue;
            const double tstar = std::pow(a / lam, p);
            if (tstar > g.t_max) acc.add(4.0 * g.h * (tstar - g.t_max));
        }
        return acc.total();
    };
}

}  // namespace

SweepResult gu_yung_curve(const AnalyticTestFunction& f, double p,
                          std::span<const double> lambdas,
                          const PairSweepConfig& cfg) {
    require_dim1(f, "gu_yung_curve");
    require(p >= 1.0, "gu_yung_curve: p >= 1 required");
    require(!lambdas.empty(), "gu_yung_curve: empty lambda grid");
    const auto s = gu_yung_sweep(f, p, cfg);
    const double target = 2.0 * kappa(1) * lp_power_norm(f, p);
    // the completion keeps lambda -> 0 exact; that is where the plateau sits
    return assemble(s.set, gu_yung_completion(s), p, lambdas,
                    LimitSide::small_param, target);
}

TruncationProbe gu_yung_truncation_probe(const AnalyticTestFunction& f, double p,
                                         std::span<const double> lambdas,
                                         const PairSweepConfig& cfg) {
    TruncationProbe probe;
    probe.base = gu_yung_curve(f, p, lambdas, cfg).plateau.value;
    PairSweepConfig doubled = cfg;
    doubled.t_max = (cfg.t_max > 0.0 ? cfg.t_max : 2.2 * f.support_radius) * 2.0;
    probe.doubled = gu_yung_curve(f, p, lambdas, doubled).plateau.value;
    probe.rel_shift = std::fabs(probe.doubled - probe.base) /
                      std::max(std::fabs(probe.base), 1e-300);
    return probe;
}

MsWeakResult ms_weak_quasinorm(const AnalyticTestFunction& f, double p,
                               const PairSweepConfig& cfg) {
    require_dim1(f, "ms_weak_quasinorm");
    require(p >= 1.0, "ms_weak_quasinorm: p >= 1 required");

    const auto eval = [&](const PairSweepConfig& c) {
        const auto s = gu_yung_sweep(f, p, c);
        const auto completion = gu_yung_completion(s);
        DistributionCurve dist(s.set);
        double qmax = 0.0;
        for (double v : dist.magnitudes()) qmax = std::max(qmax, v);
        if (qmax <= 0.0) return 0.0;
        // the completion pushes the sup toward small lambda, outside the
        // sampled magnitudes, so scan a dense ladder as well
        double sup = dist.weak_lp_p(p);
        for (double lam : log_space(qmax * 1e-6, qmax, 2000)) {
            const double v = std::pow(lam, p) * (dist.mass_above(lam) + completion(lam));
            sup = std::max(sup, v);
        }
        return sup;
    };

    MsWeakResult r;
    r.quasinorm_p = eval(cfg);
    PairSweepConfig fine = cfg;
    fine.x_cells = cfg.x_cells * 2;
    fine.t_cells = cfg.t_cells * 2;
    r.refined_quasinorm_p = eval(fine);
    r.ratio = r.refined_quasinorm_p / std::max(r.quasinorm_p, 1e-300);
    return r;
}

LogBsyResult log_bsy_quasinorm(const AnalyticTestFunction& f, double s, double p,
                               const PairSweepConfig& cfg) {
    require_dim1(f, "log_bsy_quasinorm");
    require(p >= 1.0, "log_bsy_quasinorm: p >= 1 required");
    require(s > 0.0 && s <= 1.0, "log_bsy_quasinorm: s in (0,1] required");

    PairSweepConfig c = cfg;
    if (c.t_max == 0.0) c.t_max = 8.0 * f.support_radius;  // no closed-form tail
    const PolarGrid g = build_polar(f, c, 1.0, 1e-4 * f.support_radius);
    const double inv_p = 1.0 / p;
    const auto set = sweep_pairs(f, g, [s, inv_p](double fx, double fy, double t) {
        return std::log1p(std::fabs(fy - fx) / std::pow(t, s)) / std::pow(t, inv_p);
    });

    LogBsyResult r;
    DistributionCurve dist(set);
    r.quasinorm_p = dist.weak_lp_p(p);
    const double radius = f.support_radius;
    r.target = detail::integrate(
        [&](double x) {
            double grad;
            f.gradient(&x, &grad);
            return std::pow(std::log1p(std::fabs(grad)), p);
        },
        -radius, radius, 64);
    r.ratio = r.quasinorm_p / std::max(r.target, 1e-300);
    r.lower_bound_holds = r.quasinorm_p >= r.target * (1.0 - 1e-9);
    return r;
}

}  // namespace ineq

#include "ineq/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "ineq/detail/sum.hpp"
#include "ineq/weighted_samples.hpp"

namespace ineq {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-point view of the cloud sorted by distance: plateau boundaries (the
// distinct distances out of x) with cumulative mass and cumulative
// mass-weighted f through each plateau.  Ball contents are constant between
// consecutive boundaries, so every radial sup is exact on this ladder.
struct RadialLadder {
    std::vector<double> radius;  // radius[0] == 0 (x and coincident points)
    std::vector<double> cum_w;   // ball mass through plateau k
    std::vector<double> cum_s;   // int_B f dm through plateau k
};

RadialLadder radial_ladder(const PointCloudSpace& space, std::span<const double> f, int x) {
    const int n = space.n;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double da = space.d(x, a), db = space.d(x, b);
        return da != db ? da < db : a < b;
    });
    RadialLadder lad;
    double w = 0.0, s = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double r = space.d(x, order[i]);
        while (i < order.size() && space.d(x, order[i]) == r) {
            const int j = order[i];
            w += space.masses[static_cast<std::size_t>(j)];
            s += space.masses[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)];
            ++i;
        }
        lad.radius.push_back(r);
        lad.cum_w.push_back(w);
        lad.cum_s.push_back(s);
    }
    return lad;
}

struct Fenwick {
    int n;
    std::vector<double> tree;
    explicit Fenwick(int size) : n(size), tree(static_cast<std::size_t>(size) + 1, 0.0) {}
    void add(int i, double v) {
        for (++i; i <= n; i += i & -i) tree[static_cast<std::size_t>(i)] += v;
    }
    double prefix(int i) const {  // sum over positions [0, i]
        double s = 0.0;
        for (++i; i > 0; i -= i & -i) s += tree[static_cast<std::size_t>(i)];
        return s;
    }
};

// Sharp ladder of one point: candidate radii (the positive distances out of
// x) with the running maximum of m(B)/g(r) * int_B |f - (f)_B| dm.  Values
// are computed against f shifted by f(x), which leaves the oscillation
// unchanged and makes constant fields give an exact zero.
struct SharpLadder {
    std::vector<double> radius;       // ascending positive candidate radii
    std::vector<double> running_max;  // prefix max of the candidate values
    // largest value over candidates with radius < cap (strict); 0 when none
    double below(double cap) const {
        const auto it = std::lower_bound(radius.begin(), radius.end(), cap);
        if (it == radius.begin()) return 0.0;
        return running_max[static_cast<std::size_t>(it - radius.begin()) - 1];
    }
};

std::vector<SharpLadder> sharp_ladders(const PointCloudSpace& space, std::span<const double> f,
                                       const std::function<double(double)>& gauge) {
    const int n = space.n;
    std::vector<int> by_value(static_cast<std::size_t>(n));
    std::iota(by_value.begin(), by_value.end(), 0);
    std::sort(by_value.begin(), by_value.end(), [&](int a, int b) {
        return f[static_cast<std::size_t>(a)] != f[static_cast<std::size_t>(b)]
                   ? f[static_cast<std::size_t>(a)] < f[static_cast<std::size_t>(b)]
                   : a < b;
    });
    std::vector<int> rank(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) rank[static_cast<std::size_t>(by_value[static_cast<std::size_t>(k)])] = k;

    std::vector<SharpLadder> out(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double da = space.d(x, a), db = space.d(x, b);
            return da != db ? da < db : a < b;
        });
        const double fx = f[static_cast<std::size_t>(x)];
        Fenwick fw(n), fs(n);
        double w = 0.0, s = 0.0;
        SharpLadder& lad = out[static_cast<std::size_t>(x)];
        double best = 0.0;
        std::size_t i = 0;
        while (i < order.size()) {
            const double r = space.d(x, order[i]);
            while (i < order.size() && space.d(x, order[i]) == r) {
                const int j = order[i];
                const double mj = space.masses[static_cast<std::size_t>(j)];
                const double gj = f[static_cast<std::size_t>(j)] - fx;
                fw.add(rank[static_cast<std::size_t>(j)], mj);
                fs.add(rank[static_cast<std::size_t>(j)], mj * gj);
                w += mj;
                s += mj * gj;
                ++i;
            }
            if (r <= 0.0) continue;  // the zero plateau is a ball, not a radius
            const double a = s / w;
            // count of members with shifted value strictly below the mean
            int lo = 0, hi = n;
            while (lo < hi) {
                const int mid = (lo + hi) / 2;
                if (f[static_cast<std::size_t>(by_value[static_cast<std::size_t>(mid)])] - fx < a)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            const double w_below = fw.prefix(lo - 1);
            const double s_below = fs.prefix(lo - 1);
            const double dev =
                (a * w_below - s_below) + ((s - s_below) - a * (w - w_below));
            const double value = w * std::max(dev, 0.0) / gauge(r);
            best = std::max(best, value);
            lad.radius.push_back(r);
            lad.running_max.push_back(best);
        }
    }
    return out;
}

// mu(r) = inf_x m(B(x,r)) evaluated on the distinct-distance ladder.
struct MuLadder {
    std::vector<double> breaks;  // distinct positive distances, ascending
    std::vector<double> value;   // mu on [breaks[k], breaks[k+1])
    double mu0 = 0.0;            // mu below the first positive distance

    double at(double r) const {
        const auto it = std::upper_bound(breaks.begin(), breaks.end(), r);
        if (it == breaks.begin()) return mu0;
        return value[static_cast<std::size_t>(it - breaks.begin()) - 1];
    }
};

MuLadder mu_ladder(const PointCloudSpace& space, std::span<const double> f) {
    const int n = space.n;
    MuLadder mu;
    mu.breaks.reserve(static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (space.d(i, j) > 0.0) mu.breaks.push_back(space.d(i, j));
    std::sort(mu.breaks.begin(), mu.breaks.end());
    mu.breaks.erase(std::unique(mu.breaks.begin(), mu.breaks.end()), mu.breaks.end());

    mu.mu0 = kInf;  // smallest zero-distance cluster mass = mu just above 0
    for (int x = 0; x < n; ++x) mu.mu0 = std::min(mu.mu0, space.ball_mass(x, 0.0));
    mu.value.assign(mu.breaks.size(), kInf);
    for (int x = 0; x < n; ++x) {
        const RadialLadder lad = radial_ladder(space, f, x);
        std::size_t g = 0;
        for (std::size_t k = 0; k < mu.breaks.size(); ++k) {
            while (g + 1 < lad.radius.size() && lad.radius[g + 1] <= mu.breaks[k]) ++g;
            mu.value[k] = std::min(mu.value[k], lad.cum_w[g]);
        }
    }
    return mu;
}

// Lower Stieltjes sum of int_0^{r0} d(rho_bar)/mu^2 on the halving partition,
// closed exactly below the resolution where every ball is a singleton.
double garsia_integral(const RadialGauge& gauge, const MuLadder& mu, double r0,
                       double resolution) {
    const std::vector<double> seq = garsia_sequence(gauge, r0, resolution);
    const double top = gauge.rho_bar(r0);
    detail::CascadeSum sum;
    double level = top;  // rho_bar(seq[k-1]), halved exactly each step
    for (std::size_t k = 1; k < seq.size(); ++k) {
        const double m = mu.at(seq[k - 1]);
        sum.add(0.5 * level / (m * m));
        level *= 0.5;
    }
    sum.add(level / (mu.mu0 * mu.mu0));  // exact tail: singleton balls below the last radius
    return sum.total();
}

// One greedy Vitali pass shared by both covering verifications.
struct SectionInfo {
    int x = 0;
    double t = 0.0;          // exact sup of the superlevel section
    double witness_r = 0.0;  // plateau radius where the threshold is met
    double witness_val = 0.0;  // |ball average| (plain) or |int_B f dm| (weighted)
    double section = 0.0;    // section mass (Lebesgue or weight measure)
};

bool balls_intersect(const PointCloudSpace& space, int a, double ra, int b, double rb) {
    for (int z = 0; z < space.n; ++z)
        if (space.d(a, z) <= ra && space.d(b, z) <= rb) return true;
    return false;
}

VitaliCarlesonResult run_cover(const PointCloudSpace& space, std::span<const double> f, double p,
                               double lambda, const std::vector<SectionInfo>& members,
                               double measured, const PowerWeight* weight) {
    VitaliCarlesonResult res;
    res.measured_mass = measured;

    std::vector<const SectionInfo*> order;
    order.reserve(members.size());
    for (const SectionInfo& m : members) order.push_back(&m);
    std::sort(order.begin(), order.end(), [](const SectionInfo* a, const SectionInfo* b) {
        return a->t != b->t ? a->t > b->t : a->x < b->x;
    });

    std::vector<const SectionInfo*> kept;
    for (const SectionInfo* cand : order) {
        bool disjoint = true;
        for (const SectionInfo* k : kept)
            if (balls_intersect(space, cand->x, cand->t, k->x, k->t)) {
                disjoint = false;
                break;
            }
        if (disjoint) kept.push_back(cand);
    }

    CarlesonCover& cover = res.cover;
    for (const SectionInfo* k : kept) {
        cover.centers.push_back(k->x);
        cover.radii.push_back(k->t);
        cover.witness_radii.push_back(k->witness_r);
    }

    // every superlevel point must sit in a dilated ball whose box is tall
    // enough for its section; the greedy order guarantees this
    for (const SectionInfo& m : members) {
        bool covered = false;
        for (const SectionInfo* k : kept)
            if (space.d(m.x, k->x) <= cover.dilation * k->t && m.t <= 2.0 * k->t) {
                covered = true;
                break;
            }
        if (!covered)
            throw std::runtime_error(
                "vitali_carleson_verify: cover misses a superlevel point; the greedy "
                "construction is broken");
    }
    cover.covers = true;

    detail::CascadeSum boxes;
    double cm = 0.0;
    for (const SectionInfo* k : kept) {
        const double m4 = space.ball_mass(k->x, cover.dilation * k->t);
        const double mw = space.ball_mass(k->x, k->witness_r);
        if (weight != nullptr) {
            boxes.add(m4 * weight->mass_from_zero(2.0 * k->t));
            const double c4 = weight->mass_from_zero(4.0 * k->t);
            cm = std::max(cm, m4 * weight->mass_from_zero(2.0 * k->t) *
                                  std::pow(mw, p - 1.0) / (c4 * c4));
        } else {
            boxes.add(2.0 * k->t * m4);
            cm = std::max(cm, m4 / mw);
        }
    }
    res.box_mass = boxes.total();
    cover.c_m = cm;

    detail::CascadeSum fp_sum;
    for (int i = 0; i < space.n; ++i)
        fp_sum.add(space.masses[static_cast<std::size_t>(i)] *
                   std::pow(std::fabs(f[static_cast<std::size_t>(i)]), p));
    const double factor = weight != nullptr ? 1.0 : 2.0;
    res.bound = factor * cm * fp_sum.total() / std::pow(lambda, p);

    const double slack = 1.0 + 1e-12;
    res.holds = cover.covers && res.measured_mass <= res.box_mass * slack &&
                res.box_mass <= res.bound * slack;
    return res;
}

}  // namespace

// ---------------------------------------------------------------------------
// PointCloudSpace
// ---------------------------------------------------------------------------

PointCloudSpace::PointCloudSpace(std::vector<double> distance_matrix,
                                 std::vector<double> point_masses)
    : distance(std::move(distance_matrix)), masses(std::move(point_masses)) {
    require(!masses.empty(), "PointCloudSpace: at least one point required");
    n = static_cast<int>(masses.size());
    require(distance.size() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
            "PointCloudSpace: distance matrix size must be n*n");
    for (double m : masses)
        require(std::isfinite(m) && m > 0.0, "PointCloudSpace: masses must be positive");
    for (int i = 0; i < n; ++i) {
        require(d(i, i) == 0.0, "PointCloudSpace: distance diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            require(std::isfinite(d(i, j)) && d(i, j) >= 0.0,
                    "PointCloudSpace: distances must be finite and nonnegative");
            require(d(i, j) == d(j, i), "PointCloudSpace: distance matrix must be symmetric");
            diam = std::max(diam, d(i, j));
            if (d(i, j) > 0.0)
                resolution = resolution == 0.0 ? d(i, j) : std::min(resolution, d(i, j));
        }
    }
    resolution *= 0.5;
    total_mass = std::accumulate(masses.begin(), masses.end(), 0.0);

    const double tol = 1e-12 * std::max(diam, 1.0);
    const auto check_triple = [&](int i, int j, int k) {
        require(d(i, k) <= d(i, j) + d(j, k) + tol,
                "PointCloudSpace: triangle inequality violated");
    };
    if (n <= 300) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    check_triple(i, j, k);
                    check_triple(j, k, i);
                    check_triple(k, i, j);
                }
    } else {
        std::mt19937 rng(0x9e3779b9u);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int trial = 0; trial < 10000; ++trial) {
            const int i = pick(rng), j = pick(rng), k = pick(rng);
            check_triple(i, j, k);
            check_triple(j, k, i);
            check_triple(k, i, j);
        }
    }
}

PointCloudSpace PointCloudSpace::from_points(std::span<const double> coords, int dim,
                                             std::vector<double> point_masses) {
    require(dim >= 1, "PointCloudSpace: dimension must be positive");
    require(!point_masses.empty() &&
                coords.size() == point_masses.size() * static_cast<std::size_t>(dim),
            "PointCloudSpace: coords must hold n*dim entries");
    const std::size_t n = point_masses.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double q = 0.0;
            for (int k = 0; k < dim; ++k) {
                const double diff = coords[i * static_cast<std::size_t>(dim) +
                                           static_cast<std::size_t>(k)] -
                                    coords[j * static_cast<std::size_t>(dim) +
                                           static_cast<std::size_t>(k)];
                q += diff * diff;
            }
            dist[i * n + j] = dist[j * n + i] = std::sqrt(q);
        }
    return PointCloudSpace(std::move(dist), std::move(point_masses));
}

double PointCloudSpace::ball_mass(int x, double r) const {
    double w = 0.0;
    for (int y = 0; y < n; ++y)
        if (d(x, y) <= r) w += masses[static_cast<std::size_t>(y)];
    return w;
}

// ---------------------------------------------------------------------------
// RadialGauge
// ---------------------------------------------------------------------------

RadialGauge::RadialGauge(std::function<double(double)> rho, double check_lo, double check_hi)
    : rho_(std::move(rho)) {
    require(static_cast<bool>(rho_), "RadialGauge: callable required");
    require(check_lo > 0.0 && check_hi > check_lo, "RadialGauge: bad check range");
    const int kPoints = 1024;
    double prev = -kInf;
    for (int i = 0; i < kPoints; ++i) {
        const double r = check_lo * std::pow(check_hi / check_lo,
                                             static_cast<double>(i) / (kPoints - 1));
        const double v = rho_(r);
        require(std::isfinite(v) && v > 0.0, "RadialGauge: gauge must be positive and finite");
        require(v > prev, "RadialGauge: gauge must be strictly increasing");
        prev = v;
    }
}

RadialGauge power_gauge(double exponent) {
    require(exponent > 0.0, "power_gauge: exponent must be positive");
    return RadialGauge([exponent](double r) { return std::pow(r, exponent); });
}

RadialGauge log_gauge(double dim_n, double beta) {
    require(dim_n > 0.0, "log_gauge: dimension must be positive");
    require(beta > 0.0, "log_gauge: beta must be positive");
    return RadialGauge([dim_n, beta](double r) {
        const double base = std::pow(r, 2.0 * dim_n);
        if (r >= 1.0) return base;
        return base * std::pow(1.0 - std::log(r), -beta);
    });
}

// ---------------------------------------------------------------------------
// ball_average, garsia_sequence
// ---------------------------------------------------------------------------

double ball_average(const PointCloudSpace& space, std::span<const double> f, int x, double r) {
    require(x >= 0 && x < space.n, "ball_average: point index out of range");
    require(f.size() == static_cast<std::size_t>(space.n),
            "ball_average: f must have one value per point");
    require(r > 0.0, "ball_average: radius must be positive");
    double w = 0.0, s = 0.0;
    for (int y = 0; y < space.n; ++y)
        if (space.d(x, y) <= r) {
            w += space.masses[static_cast<std::size_t>(y)];
            s += space.masses[static_cast<std::size_t>(y)] * f[static_cast<std::size_t>(y)];
        }
    return s / w;
}

std::vector<double> garsia_sequence(const RadialGauge& gauge, double r0, double r_min) {
    require(r0 > 0.0, "garsia_sequence: r0 must be positive");
    require(r_min > 0.0, "garsia_sequence: r_min must be positive");
    std::vector<double> seq{r0};
    double r = r0;
    double level = gauge.rho_bar(r0);
    while (r >= r_min) {
        const double target = 0.5 * level;
        double hi = r, lo = 0.5 * r;
        int guard = 0;
        while (gauge.rho_bar(lo) > target) {
            lo *= 0.5;
            if (++guard > 2000)
                throw std::runtime_error("garsia_sequence: gauge does not vanish toward zero");
        }
        for (int it = 0; it < 64; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (gauge.rho_bar(mid) > target)
                hi = mid;
            else
                lo = mid;
        }
        const double next = 0.5 * (lo + hi);
        if (std::fabs(gauge.rho_bar(next) - target) > 1e-9 * target)
            throw std::invalid_argument(
                "garsia_sequence: gauge is not strictly increasing on the bracket");
        seq.push_back(next);
        r = next;
        level = target;
    }
    return seq;
}

// ---------------------------------------------------------------------------
// garsia_check, sharp_rho_maximal
// ---------------------------------------------------------------------------

GarsiaCheck garsia_check(const PointCloudSpace& space, std::span<const double> f,
                         const RadialGauge& gauge) {
    require(f.size() == static_cast<std::size_t>(space.n),
            "garsia_check: f must have one value per point");
    GarsiaCheck out;
    const MuLadder mu = mu_ladder(space, f);
    const std::vector<SharpLadder> sharp =
        sharp_ladders(space, f, [&gauge](double r) { return gauge.rho_bar(r); });

    for (int x = 0; x < space.n; ++x)
        for (int y = x + 1; y < space.n; ++y) {
            const double lhs =
                std::fabs(f[static_cast<std::size_t>(x)] - f[static_cast<std::size_t>(y)]);
            const double dd = space.d(x, y);
            if (dd == 0.0) {
                if (lhs > 0.0) ++out.degenerate_pairs;
                continue;
            }
            const double integral = garsia_integral(gauge, mu, 2.0 * dd, space.resolution);
            const double sharps = sharp[static_cast<std::size_t>(x)].below(2.0 * dd) +
                                  sharp[static_cast<std::size_t>(y)].below(2.0 * dd);
            const double rhs = 9.0 * integral * sharps;
            if (rhs == 0.0) {
                if (lhs > 0.0) ++out.degenerate_pairs;
                continue;
            }
            out.max_violation_ratio = std::max(out.max_violation_ratio, lhs / rhs);
        }
    out.holds = out.degenerate_pairs == 0 && out.max_violation_ratio <= 1.0 + 1e-9;
    return out;
}

std::vector<double> sharp_rho_maximal(const PointCloudSpace& space, std::span<const double> f,
                                      const RadialGauge& gauge) {
    require(f.size() == static_cast<std::size_t>(space.n),
            "sharp_rho_maximal: f must have one value per point");
    const std::vector<SharpLadder> ladders =
        sharp_ladders(space, f, [&gauge](double r) { return gauge.rho(r); });
    std::vector<double> out(static_cast<std::size_t>(space.n), 0.0);
    for (int x = 0; x < space.n; ++x)
        out[static_cast<std::size_t>(x)] = ladders[static_cast<std::size_t>(x)].below(space.diam);
    return out;
}

// ---------------------------------------------------------------------------
// vitali_carleson_verify
// ---------------------------------------------------------------------------

VitaliCarlesonResult vitali_carleson_verify(const PointCloudSpace& space,
                                            std::span<const double> f, double p, double lambda) {
    require(f.size() == static_cast<std::size_t>(space.n),
            "vitali_carleson_verify: f must have one value per point");
    require(p >= 1.0, "vitali_carleson_verify: p must be at least 1");
    require(lambda > 0.0, "vitali_carleson_verify: lambda must be positive");

    std::vector<SectionInfo> members;
    detail::CascadeSum measured;
    for (int x = 0; x < space.n; ++x) {
        const RadialLadder lad = radial_ladder(space, f, x);
        SectionInfo info;
        info.x = x;
        detail::CascadeSum section;
        for (std::size_t k = 0; k < lad.radius.size(); ++k) {
            const double avg = lad.cum_s[k] / lad.cum_w[k];
            const double lo = lad.radius[k];
            const double hi = k + 1 < lad.radius.size() ? lad.radius[k + 1] : kInf;
            const double cut = std::pow(std::fabs(avg) / lambda, p);
            const double end = std::min(hi, cut);
            if (end <= lo) continue;
            section.add(end - lo);
            if (end > info.t) {
                info.t = end;
                info.witness_r = lad.radius[k];
                info.witness_val = std::fabs(avg);
            }
        }
        info.section = section.total();
        if (info.section > 0.0) {
            measured.add(space.masses[static_cast<std::size_t>(x)] * info.section);
            members.push_back(info);
        }
    }
    return run_cover(space, f, p, lambda, members, measured.total(), nullptr);
}

VitaliCarlesonResult vitali_carleson_verify(const PointCloudSpace& space,
                                            std::span<const double> f, double p, double lambda,
                                            const PowerWeight& weight) {
    require(f.size() == static_cast<std::size_t>(space.n),
            "vitali_carleson_verify: f must have one value per point");
    require(p >= 1.0, "vitali_carleson_verify: p must be at least 1");
    require(lambda > 0.0, "vitali_carleson_verify: lambda must be positive");
    require(weight.gamma > 0.0,
            "vitali_carleson_verify: the tent measure needs a positive weight exponent");

    const double g = weight.gamma;
    std::vector<SectionInfo> members;
    detail::CascadeSum measured;
    for (int x = 0; x < space.n; ++x) {
        const RadialLadder lad = radial_ladder(space, f, x);
        SectionInfo info;
        info.x = x;
        detail::CascadeSum section;
        for (std::size_t k = 0; k < lad.radius.size(); ++k) {
            const double s = lad.cum_s[k];  // int_B f dm, not averaged
            const double lo = lad.radius[k];
            const double hi = k + 1 < lad.radius.size() ? lad.radius[k + 1] : kInf;
            // |S| > lambda * C(t)^{2/p} with C(t) = (4t)^g / g
            const double level = std::pow(std::fabs(s) / lambda, 0.5 * p);
            const double cut = 0.25 * std::pow(g * level, 1.0 / g);
            const double end = std::min(hi, cut);
            if (end <= lo) continue;
            section.add(weight.mass_from_zero(end) -
                        (lo > 0.0 ? weight.mass_from_zero(lo) : 0.0));
            if (end > info.t) {
                info.t = end;
                info.witness_r = lad.radius[k];
                info.witness_val = std::fabs(s);
            }
        }
        info.section = section.total();
        if (info.section > 0.0) {
            measured.add(space.masses[static_cast<std::size_t>(x)] * info.section);
            members.push_back(info);
        }
    }
    return run_cover(space, f, p, lambda, members, measured.total(), &weight);
}

double carleson_tent_ratio(const PointCloudSpace& space, const PowerWeight& weight, int x,
                           double t) {
    require(x >= 0 && x < space.n, "carleson_tent_ratio: point index out of range");
    require(t > 0.0, "carleson_tent_ratio: t must be positive");
    const double column = weight.mass_from_zero(t);
    detail::CascadeSum tent;
    double ball = 0.0;
    for (int y = 0; y < space.n; ++y)
        if (space.d(x, y) <= t) {
            tent.add(space.masses[static_cast<std::size_t>(y)] * column);
            ball += space.masses[static_cast<std::size_t>(y)];
        }
    return tent.total() / ball;
}

// ---------------------------------------------------------------------------
// ahlfors_fit, ccbsy_check
// ---------------------------------------------------------------------------

AhlforsCheck ahlfors_fit(const PointCloudSpace& space) {
    AhlforsCheck out;
    if (space.resolution == 0.0) {
        out.dimension = 0.0;
        out.c0 = out.C0 = space.total_mass;
        return out;
    }
    const double lo = 2.0 * space.resolution;  // the smallest positive distance
    const double hi = std::max(0.5 * space.diam, lo);
    const int kRadii = 32;
    std::vector<double> lr, lm;
    for (int i = 0; i < kRadii; ++i) {
        const double r =
            lo * std::pow(hi / lo, kRadii > 1 ? static_cast<double>(i) / (kRadii - 1) : 0.0);
        for (int x = 0; x < space.n; ++x) {
            lr.push_back(std::log(r));
            lm.push_back(std::log(space.ball_mass(x, r)));
        }
    }
    const double k = static_cast<double>(lr.size());
    double mr = 0.0, mm = 0.0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        mr += lr[i];
        mm += lm[i];
    }
    mr /= k;
    mm /= k;
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        cov += (lr[i] - mr) * (lm[i] - mm);
        var += (lr[i] - mr) * (lr[i] - mr);
    }
    out.dimension = var > 0.0 ? cov / var : 0.0;
    out.c0 = kInf;
    out.C0 = 0.0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        const double q = std::exp(lm[i] - out.dimension * lr[i]);
        out.c0 = std::min(out.c0, q);
        out.C0 = std::max(out.C0, q);
    }
    return out;
}

CcbsyResult ccbsy_check(const PointCloudSpace& space, std::span<const double> f, double p,
                        const RadialGauge& gauge) {
    require(f.size() == static_cast<std::size_t>(space.n),
            "ccbsy_check: f must have one value per point");
    require(p > 1.0, "ccbsy_check: p must exceed 1");
    CcbsyResult out;
    out.regularity = ahlfors_fit(space);
    if (out.regularity.spread() > 100.0)
        throw std::invalid_argument(
            "ccbsy_check: the space fails the regularity check (ball-mass spread above 100)");
    if (space.n == 1 || space.resolution == 0.0) return out;

    const double nn = out.regularity.dimension;
    // global lower-Stieltjes ladder for int_0^tau d(rho_bar)/lambda^{2N}
    const double base = 2.0 * space.diam;
    const int kPerOctave = 16, kOctaves = 46;
    const int kCells = kPerOctave * kOctaves;
    std::vector<double> lam(static_cast<std::size_t>(kCells) + 1);
    std::vector<double> rb(static_cast<std::size_t>(kCells) + 1);
    std::vector<double> cum(static_cast<std::size_t>(kCells) + 1, 0.0);
    for (int j = 0; j <= kCells; ++j) {
        lam[static_cast<std::size_t>(j)] =
            base * std::pow(2.0, static_cast<double>(j - kCells) / kPerOctave);
        rb[static_cast<std::size_t>(j)] = gauge.rho_bar(lam[static_cast<std::size_t>(j)]);
    }
    for (int j = 1; j <= kCells; ++j)
        cum[static_cast<std::size_t>(j)] =
            cum[static_cast<std::size_t>(j) - 1] +
            (rb[static_cast<std::size_t>(j)] - rb[static_cast<std::size_t>(j) - 1]) /
                std::pow(lam[static_cast<std::size_t>(j)], 2.0 * nn);
    const auto integral = [&](double tau) {
        const auto it = std::upper_bound(lam.begin(), lam.end(), tau);
        if (it == lam.begin()) return gauge.rho_bar(tau) / std::pow(tau, 2.0 * nn);
        const std::size_t j = static_cast<std::size_t>(it - lam.begin()) - 1;
        return cum[j] + (gauge.rho_bar(tau) - rb[j]) / std::pow(tau, 2.0 * nn);
    };

    std::vector<double> values, weights;
    values.reserve(static_cast<std::size_t>(space.n) * (static_cast<std::size_t>(space.n) - 1) /
                   2);
    weights.reserve(values.capacity());
    for (int x = 0; x < space.n; ++x)
        for (int y = x + 1; y < space.n; ++y) {
            const double dd = space.d(x, y);
            if (dd == 0.0) continue;
            const double g = std::fabs(f[static_cast<std::size_t>(x)] -
                                       f[static_cast<std::size_t>(y)]) /
                             (std::pow(dd, nn / p) * integral(2.0 * dd));
            values.push_back(g);
            weights.push_back(2.0 * space.masses[static_cast<std::size_t>(x)] *
                              space.masses[static_cast<std::size_t>(y)]);
        }
    out.lhs_quasinorm =
        std::pow(DistributionCurve(std::move(values), std::move(weights)).weak_lp_p(p), 1.0 / p);

    const std::vector<SharpLadder> ladders =
        sharp_ladders(space, f, [&gauge](double r) { return gauge.rho_bar(r); });
    detail::CascadeSum rhs;
    for (int x = 0; x < space.n; ++x)
        rhs.add(space.masses[static_cast<std::size_t>(x)] *
                std::pow(ladders[static_cast<std::size_t>(x)].below(space.diam), p));
    out.rhs_cc_norm = std::pow(rhs.total(), 1.0 / p);
    out.ratio = out.rhs_cc_norm > 0.0 ? out.lhs_quasinorm / out.rhs_cc_norm : 0.0;
    return out;
}

}  // namespace ineq

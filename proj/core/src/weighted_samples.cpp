#include "ineq/weighted_samples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ineq/detail/sum.hpp"

namespace ineq {

void WeightedSampleSet::validate() const {
    if (values.size() != masses.size())
        throw std::invalid_argument("WeightedSampleSet: values/masses length mismatch");
    for (double m : masses) {
        if (!(m >= 0.0) || !std::isfinite(m))
            throw std::invalid_argument("WeightedSampleSet: masses must be finite and >= 0");
    }
    for (double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("WeightedSampleSet: values must be finite");
    }
}

double WeightedSampleSet::total_mass() const {
    return detail::pairwise_sum(masses);
}

double distribution_mass(const WeightedSampleSet& s, double lambda) {
    detail::CascadeSum acc;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::fabs(s.values[i]) > lambda) acc.add(s.masses[i]);
    return acc.total();
}

double lp_norm(const WeightedSampleSet& s, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    detail::CascadeSum acc;
    for (std::size_t i = 0; i < s.size(); ++i)
        acc.add(std::pow(std::fabs(s.values[i]), p) * s.masses[i]);
    return std::pow(acc.total(), 1.0 / p);
}

DistributionCurve::DistributionCurve(const WeightedSampleSet& s) {
    s.validate();
    mag_.resize(s.size());
    tail_.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) mag_[i] = std::fabs(s.values[i]);
    tail_ = s.masses;
    build();
}

DistributionCurve::DistributionCurve(std::vector<double> magnitudes,
                                     std::vector<double> masses)
    : mag_(std::move(magnitudes)), tail_(std::move(masses)) {
    if (mag_.size() != tail_.size())
        throw std::invalid_argument("DistributionCurve: length mismatch");
    build();
}

void DistributionCurve::build() {
    const std::size_t n = mag_.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return mag_[a] < mag_[b]; });

    std::vector<double> mag(n), mass(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = mag_[order[i]];
        mass[i] = tail_[order[i]];
    }
    mag_ = std::move(mag);

    // suffix sums in descending-magnitude order keep the large-lambda tail
    // numerically clean (small masses accumulate before large ones join)
    tail_.assign(n, 0.0);
    double run = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        run += mass[i];
        tail_[i] = run;
    }
    total_ = n ? tail_[0] : 0.0;
}

double DistributionCurve::mass_above(double lambda) const {
    // first index with magnitude > lambda
    const auto it = std::upper_bound(mag_.begin(), mag_.end(), lambda);
    if (it == mag_.end()) return 0.0;
    return tail_[static_cast<std::size_t>(it - mag_.begin())];
}

double DistributionCurve::mass_at_least(double v) const {
    const auto it = std::lower_bound(mag_.begin(), mag_.end(), v);
    if (it == mag_.end()) return 0.0;
    return tail_[static_cast<std::size_t>(it - mag_.begin())];
}

double DistributionCurve::weak_lp_p(double p) const {
    // sup_{lambda>0} lambda^p mass{|v| > lambda}.  On discrete data the sup
    // over lambda in (mag_{i-1}, mag_i) is approached at lambda -> mag_i^-,
    // where the strict tail equals mass{|v| >= mag_i}; so the sup equals
    // max_i mag_i^p * tail_[i], scanning distinct magnitudes only.
    double best = 0.0;
    for (std::size_t i = 0; i < mag_.size(); ++i) {
        // first index of each tied run carries the full >= mass
        if (i > 0 && mag_[i] == mag_[i - 1]) continue;
        if (mag_[i] <= 0.0) continue;
        best = std::max(best, std::pow(mag_[i], p) * tail_[i]);
    }
    return best;
}

double weak_lp_quasinorm(const WeightedSampleSet& s, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("weak_lp_quasinorm: p must be positive");
    DistributionCurve curve(s);
    return std::pow(curve.weak_lp_p(p), 1.0 / p);
}

Curve superlevel_curve(const WeightedSampleSet& s, double p,
                       std::span<const double> lambdas) {
    DistributionCurve curve(s);
    Curve out;
    out.reserve(lambdas.size());
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw std::invalid_argument("superlevel_curve: lambda must be > 0");
        out.push_back({lam, std::pow(lam, p) * curve.mass_above(lam), 0.0});
    }
    return out;
}

void ProductSampleGrid::validate() const {
    if (values.size() != mass1.size() * mass2.size())
        throw std::invalid_argument("ProductSampleGrid: values size != rows * cols");
    for (double m : mass1)
        if (!(m >= 0.0)) throw std::invalid_argument("ProductSampleGrid: negative axis-1 mass");
    for (double m : mass2)
        if (!(m >= 0.0)) throw std::invalid_argument("ProductSampleGrid: negative axis-2 mass");
}

WeightedSampleSet ProductSampleGrid::flatten() const {
    validate();
    WeightedSampleSet s;
    s.reserve(values.size());
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j)
            s.push(values[i * cols() + j], mass1[i] * mass2[j]);
    return s;
}

MixedNormComparison mixed_norm_check(const ProductSampleGrid& g, double p) {
    MixedNormComparison r;
    r.lhs = weak_lp_quasinorm(g.flatten(), p);

    detail::CascadeSum acc;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        WeightedSampleSet row;
        row.reserve(g.cols());
        for (std::size_t j = 0; j < g.cols(); ++j)
            row.push(g.values[i * g.cols() + j], g.mass2[j]);
        const double q = weak_lp_quasinorm(row, p);
        acc.add(std::pow(q, p) * g.mass1[i]);
    }
    r.rhs = std::pow(acc.total(), 1.0 / p);
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
    return r;
}

CurveAccumulator::CurveAccumulator(std::vector<double> lambda_ladder, std::size_t strata)
    : ladder_(std::move(lambda_ladder)), strata_(strata) {
    if (ladder_.empty() || strata_ == 0)
        throw std::invalid_argument("CurveAccumulator: empty ladder or zero strata");
    if (!std::is_sorted(ladder_.begin(), ladder_.end()))
        throw std::invalid_argument("CurveAccumulator: ladder must be ascending");
    w_.assign(ladder_.size() * strata_, 0.0);
    w2_.assign(ladder_.size() * strata_, 0.0);
    draws_.assign(strata_, 0);
}

void CurveAccumulator::add(double q, double w, std::size_t stratum) {
    // bin b covers [ladder_[b], ladder_[b+1]); q == ladder_[b] lands in bin
    // b-1 so that suffix sums realize the strict inequality mass{q > lambda}
    const auto it = std::lower_bound(ladder_.begin(), ladder_.end(), q);
    if (it == ladder_.begin()) return;
    const std::size_t bin = static_cast<std::size_t>(it - ladder_.begin()) - 1;
    w_[bin * strata_ + stratum] += w;
    w2_[bin * strata_ + stratum] += w * w;
}

void CurveAccumulator::set_stratum_draws(std::size_t stratum, std::int64_t draws) {
    draws_[stratum] = draws;
}

void CurveAccumulator::merge_into_stratum(const CurveAccumulator& single,
                                          std::size_t stratum) {
    if (single.strata_ != 1 || single.ladder_ != ladder_ || stratum >= strata_)
        throw std::invalid_argument("CurveAccumulator::merge_into_stratum: layout mismatch");
    for (std::size_t b = 0; b < ladder_.size(); ++b) {
        w_[b * strata_ + stratum] += single.w_[b];
        w2_[b * strata_ + stratum] += single.w2_[b];
    }
    draws_[stratum] += single.draws_[0];
}

void CurveAccumulator::merge(const CurveAccumulator& other) {
    if (other.ladder_ != ladder_ || other.strata_ != strata_)
        throw std::invalid_argument("CurveAccumulator::merge: layout mismatch");
    for (std::size_t i = 0; i < w_.size(); ++i) {
        w_[i] += other.w_[i];
        w2_[i] += other.w2_[i];
    }
    for (std::size_t s = 0; s < strata_; ++s) draws_[s] += other.draws_[s];
}

Curve CurveAccumulator::finalize(double p) const {
    const std::size_t nbins = ladder_.size();
    std::vector<double> W(strata_, 0.0), W2(strata_, 0.0);
    Curve out(nbins);
    for (std::size_t b = nbins; b-- > 0;) {
        for (std::size_t s = 0; s < strata_; ++s) {
            W[s] += w_[b * strata_ + s];
            W2[s] += w2_[b * strata_ + s];
        }
        double est = 0.0, var = 0.0;
        for (std::size_t s = 0; s < strata_; ++s) {
            const double n = static_cast<double>(draws_[s]);
            if (n <= 0.0) continue;
            est += W[s] / n;
            if (n > 1.0) {
                const double ss = (W2[s] - W[s] * W[s] / n) / (n - 1.0);
                var += std::max(ss, 0.0) / n;
            }
        }
        const double scale = std::pow(ladder_[b], p);
        out[b] = {ladder_[b], scale * est, scale * std::sqrt(var)};
    }
    return out;
}

}  // namespace ineq

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ineq {

// A finite weighted point set {(value_i, mass_i)}: the discrete measure that
// every superlevel functional in this library is evaluated against.
struct WeightedSampleSet {
    std::vector<double> values;
    std::vector<double> masses;

    void reserve(std::size_t n) {
        values.reserve(n);
        masses.reserve(n);
    }
    void push(double value, double mass) {
        values.push_back(value);
        masses.push_back(mass);
    }
    std::size_t size() const { return values.size(); }

    // throws std::invalid_argument on length mismatch or negative mass
    void validate() const;
    double total_mass() const;
};

// mass{ |value| > lambda }, strict inequality
double distribution_mass(const WeightedSampleSet& s, double lambda);

// ( sup_{lambda>0} lambda^p mass{|value|>lambda} )^{1/p}; exact on discrete
// data: the sup is attained with >= at one of the distinct |value|s.
double weak_lp_quasinorm(const WeightedSampleSet& s, double p);

// ( sum |value|^p mass )^{1/p}
double lp_norm(const WeightedSampleSet& s, double p);

struct CurvePoint {
    double param = 0.0;
    double value = 0.0;
    double se = 0.0;  // standard error when Monte Carlo, else 0
};
using Curve = std::vector<CurvePoint>;

// lambda^p mass{|value| > lambda} for each lambda; one sort, then a single
// sweep over the sorted magnitudes.
Curve superlevel_curve(const WeightedSampleSet& s, double p,
                       std::span<const double> lambdas);

// Sorted-magnitude view of a sample set supporting exact tail queries.
class DistributionCurve {
public:
    explicit DistributionCurve(const WeightedSampleSet& s);
    DistributionCurve(std::vector<double> magnitudes, std::vector<double> masses);

    double mass_above(double lambda) const;     // strict >
    double mass_at_least(double v) const;       // >=
    double weak_lp_p(double p) const;           // sup lambda^p mass, exact
    double total_mass() const { return total_; }

    std::span<const double> magnitudes() const { return mag_; }

private:
    void build();
    std::vector<double> mag_;    // ascending
    std::vector<double> tail_;   // tail_[i] = sum of masses with |v| >= mag_[i]
    double total_ = 0.0;
};

// Product of two weighted 1-D layouts with one value per cell pair.  Joint
// mass of cell (i, j) is mass1[i] * mass2[j]; values are row-major.
struct ProductSampleGrid {
    std::vector<double> mass1;
    std::vector<double> mass2;
    std::vector<double> values;

    std::size_t rows() const { return mass1.size(); }
    std::size_t cols() const { return mass2.size(); }
    void validate() const;
    WeightedSampleSet flatten() const;
};

struct MixedNormComparison {
    double lhs = 0.0;   // joint weak-L^p quasinorm
    double rhs = 0.0;   // L^p (axis 1) of the per-row weak-L^p quasinorms
    bool holds = false;
};

// Verifies ||F||_{L(p,inf)(X1 x X2)} <= || ||F(x1,.)||_{L(p,inf)(X2)} ||_{L^p(X1)}
// with slack 1 + 1e-12.
MixedNormComparison mixed_norm_check(const ProductSampleGrid& g, double p);

// Streaming lambda-binned accumulator for Monte Carlo superlevel curves.
// Bins are right-open between consecutive ladder points; finalize() turns
// per-bin totals into suffix sums, so curve values are exact with respect to
// the sampled quotients as long as every query lambda is a ladder point.
// Per-stratum sums of w and w^2 feed the stratified standard error.
class CurveAccumulator {
public:
    CurveAccumulator(std::vector<double> lambda_ladder, std::size_t strata);

    // Record one sampled quotient q carrying importance weight w.
    void add(double q, double w, std::size_t stratum);
    void set_stratum_draws(std::size_t stratum, std::int64_t draws);
    void merge(const CurveAccumulator& other);
    // Fold a single-stratum accumulator (same ladder) into one stratum slot.
    void merge_into_stratum(const CurveAccumulator& single, std::size_t stratum);

    // value_k = lambda_k^p * (estimated mass above lambda_k)
    Curve finalize(double p) const;

private:
    std::vector<double> ladder_;
    std::size_t strata_;
    // bin-by-stratum weight sums; bin b covers [ladder_[b], ladder_[b+1})
    std::vector<double> w_;
    std::vector<double> w2_;          // per-stratum, suffix-aggregated at finalize
    std::vector<std::int64_t> draws_;
};

}  // namespace ineq

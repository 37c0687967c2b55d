#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ineq::detail {

// Pairwise (cascade) summation: error O(log n) ulps instead of O(n),
// and a fixed association order so results do not depend on chunking.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(std::span<const double> xs) {
    return pairwise_sum(xs.data(), xs.size());
}

// Streaming accumulator with the same tree order as pairwise_sum over the
// pushed sequence.  Keeps one partial per binary level.
class CascadeSum {
public:
    void add(double v) {
        std::size_t level = 0;
        while (count_ >> level & 1u) {
            v += partial_[level];
            ++level;
        }
        if (level >= partial_.size()) partial_.resize(level + 1);
        partial_[level] = v;
        ++count_;
    }

    double total() const {
        double s = 0.0;
        for (std::size_t l = 0; l < partial_.size(); ++l)
            if (count_ >> l & 1u) s += partial_[l];
        return s;
    }

    std::size_t count() const { return count_; }

private:
    std::vector<double> partial_;
    std::size_t count_ = 0;
};

}  // namespace ineq::detail

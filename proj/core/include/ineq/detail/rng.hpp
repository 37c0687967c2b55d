#pragma once

#include <cmath>
#include <cstdint>

namespace ineq::detail {

// splitmix64: full-period 64-bit mixer.  Used both as the generator and to
// derive decorrelated substreams, so every experiment is reproducible from a
// single seed regardless of evaluation order.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // one warmup step decouples trivially related seeds
        (void)splitmix64_next(state_);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Independent stream for a labelled subtask (shell index, cloud index...).
    Rng substream(std::uint64_t label) const {
        std::uint64_t s = state_ ^ (0xa0761d6478bd642full * (label + 1));
        return Rng(s);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * next_unit(); }

    // Box-Muller; two normals per call keeps the draw count deterministic.
    void next_normal_pair(double& z0, double& z1) {
        double u1 = next_unit();
        while (u1 == 0.0) u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        z0 = r * std::cos(two_pi * u2);
        z1 = r * std::sin(two_pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace ineq::detail

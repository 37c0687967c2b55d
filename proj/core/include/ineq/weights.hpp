#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

namespace ineq {

// Measure t^{gamma-1} dt on (0, infinity).  Cell masses use the exact
// antiderivative t^gamma / gamma, which stays correct for gamma < 0 where
// midpoint-density quadrature would be badly biased.
struct PowerWeight {
    double gamma = 1.0;

    explicit PowerWeight(double g) : gamma(g) {
        if (g == 0.0) throw std::invalid_argument("PowerWeight: gamma must be nonzero");
    }

    double density(double t) const { return std::pow(t, gamma - 1.0); }

    // mass of (a, b), 0 < a < b; positive for every nonzero gamma
    double cell_mass(double a, double b) const {
        return (std::pow(b, gamma) - std::pow(a, gamma)) / gamma;
    }

    // mass of (0, t]; finite only for gamma > 0
    double mass_from_zero(double t) const {
        if (gamma <= 0.0)
            throw std::domain_error("PowerWeight: (0,t] has infinite mass for gamma <= 0");
        return std::pow(t, gamma) / gamma;
    }
};

// Measure t^{-1} log(1/t)^{-eta} dt on (0, 1/2), eta > 1.  Antiderivative
// log(1/t)^{1-eta} / (eta - 1); total mass log(2)^{1-eta} / (eta - 1).
struct LogWeight {
    double eta = 2.0;

    explicit LogWeight(double e) : eta(e) {
        if (e <= 1.0) throw std::invalid_argument("LogWeight: eta must exceed 1");
    }

    double density(double t) const {
        return 1.0 / (t * std::pow(std::log(1.0 / t), eta));
    }

    // mass of (a, b), 0 < a < b < 1/2
    double cell_mass(double a, double b) const {
        const double la = std::pow(std::log(1.0 / a), 1.0 - eta);
        const double lb = std::pow(std::log(1.0 / b), 1.0 - eta);
        return (lb - la) / (eta - 1.0);
    }

    // mass of (0, t]; the tail near zero decays only like log(1/t)^{1-eta},
    // so summing cells from a small positive cutoff converges very slowly
    double mass_from_zero(double t) const {
        return std::pow(std::log(1.0 / t), 1.0 - eta) / (eta - 1.0);
    }

    double total_mass() const { return mass_from_zero(0.5); }
};

using ScaleWeight = std::variant<PowerWeight, LogWeight>;

inline double cell_mass(const ScaleWeight& w, double a, double b) {
    return std::visit([&](const auto& ww) { return ww.cell_mass(a, b); }, w);
}

}  // namespace ineq

#pragma once

#include <cmath>

#include "carroll/error.hpp"

namespace carroll {

/// hbar, m and c. Natural units (all ones) unless overridden.
struct PhysicalConstants {
    double hbar = 1.0;
    double m = 1.0;
    double c = 1.0;

    static PhysicalConstants natural() { return {}; }

    /// Throws DomainError unless every field is finite and strictly positive.
    void validate() const {
        auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!ok(hbar) || !ok(m) || !ok(c)) {
            throw DomainError("physical constants must be finite and strictly positive");
        }
    }

    double mc2() const { return m * c * c; }
    double mc3() const { return m * c * c * c; }

    /// Dispersion coefficient of the free x-evolution, hbar / (2 m c^3).
    double beta() const { return hbar / (2.0 * mc3()); }
};

}  // namespace carroll

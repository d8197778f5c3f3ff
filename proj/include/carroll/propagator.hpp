#pragma once

#include <vector>

#include "carroll/constants.hpp"
#include "carroll/numerics.hpp"
#include "carroll/potential.hpp"

namespace carroll {

/// Psi(x, .) at a fixed station x, sampled on a periodic time grid.
struct Wavefunction {
    double x = 0.0;
    TimeGrid grid;
    std::vector<cplx> values;
    PhysicalConstants constants;

    ComplexSignal signal() const { return {grid, values}; }
    /// Trapezoid (periodic) norm sqrt(dt sum |psi|^2).
    double norm() const;
};

/// <phi, psi> = dt sum conj(phi) psi.
cplx inner_product(const Wavefunction& phi, const Wavefunction& psi);

/// Free x-evolution: every frequency component picks up e^{-i beta dx w^2},
/// beta = hbar / (2 m c^3).
Wavefunction evolve_free(const Wavefunction& psi, double dx);

struct GaussianParams {
    double sigma = 1.0;
    double t0 = 0.0;
    /// Carrier frequency; the datum is multiplied by e^{+i omega0 (t - t0)},
    /// which has energy E0 = hbar omega0 under E~ = -i hbar d/dt.
    double omega0 = 0.0;

    void validate() const;
};

/// Closed-form solution of the free equation with a normalized Gaussian
/// datum at x = 0:
///   Psi = (pi sigma^2)^{-1/4} D^{-1/2} exp(-(t - t0)^2 / (2 sigma^2 D)),
///   D = 1 + i chi, chi = hbar x / (m c^3 sigma^2).
/// A carrier is included by the exact frequency shift
///   Psi_w0(x, t) = e^{i w0 (t - t0) - i beta x w0^2} Psi(x, t - 2 beta w0 x).
cplx gaussian_value(const GaussianParams& p, double x, double t, const PhysicalConstants& k);
/// d/dt of gaussian_value.
cplx gaussian_dt(const GaussianParams& p, double x, double t, const PhysicalConstants& k);

Wavefunction gaussian_exact(const GaussianParams& p, double x, const TimeGrid& grid,
                            const PhysicalConstants& k);

/// sigma_eff(x) = sqrt(sigma^2 + (hbar x / (m c^3 sigma))^2).
double effective_width(double sigma, double x, const PhysicalConstants& k);

/// t_c(x) = t0 + E0 x / (m c^3).
double carrier_center(double t0, double e0, double x, const PhysicalConstants& k);

/// Trapezoid moments of |psi|^2.
struct Moments {
    double norm2;     // int |psi|^2
    double centroid;  // int t |psi|^2 / norm2
    double variance;  // int (t - centroid)^2 |psi|^2 / norm2
    /// sqrt(2 variance): the width parameter of exp(-(t - t_c)^2 / w^2),
    /// directly comparable with sigma_eff.
    double width() const;
};
Moments moments(const Wavefunction& psi);

/// Equal-x density and currents of the Carroll equation with a time-only
/// potential V:
///   rho_t = |psi|^2                               (= J^x)
///   j_t   = (hbar/mc^3) Im(psi* psi_t) - V |psi|^2 / mc^3
///   rho_car = (i hbar/2mc^3)(psi* psi_t - psi psi_t*) + V |psi|^2 / mc^3 = -j_t
/// satisfying d/dx rho_t + d/dt j_t = 0 on solutions.
struct CarrollCurrents {
    std::vector<double> rho_t;
    std::vector<double> j_t;
    std::vector<double> rho_car;
};

/// psi_t is taken spectrally unless supplied.
CarrollCurrents carroll_density_current(const Wavefunction& psi, const PotentialSpec& v_car);
CarrollCurrents carroll_density_current(const Wavefunction& psi, const std::vector<cplx>& psi_t,
                                        const PotentialSpec& v_car);

/// max_t | (rho_b - rho_a)/dx + d/dt (j_a + j_b)/2 | for stations x and x + dx.
double continuity_residual(const Wavefunction& a, const Wavefunction& b,
                           const PotentialSpec& v_car);

}  // namespace carroll

#pragma once

#include <functional>
#include <vector>

#include "carroll/constants.hpp"
#include "carroll/field.hpp"
#include "carroll/numerics.hpp"
#include "carroll/potential.hpp"
#include "carroll/propagator.hpp"

namespace carroll {

/// Modes of a time-only potential confined to the window [0, T] with
/// Dirichlet ends:
///   E_n = n pi hbar / T,   p_n = E_n^2 / (2 m c^3),
///   Psi_n(x, t) = e^{-i p_n x / hbar} e^{(i/hbar) int_{t0}^t V} sqrt(2/T) sin(n pi t / T).
/// The spatial factor carries the Carroll momentum of level n, which is what
/// makes Psi_n solve the x-evolution.
struct SpectrumResult {
    double T = 0.0;
    double x = 0.0;
    Axis t;                                   // closed [0, T]
    std::vector<double> levels;               // E_1 .. E_nmax
    std::vector<double> momenta;              // p_n
    std::vector<std::vector<double>> envelopes;  // sqrt(2/T) sin(n pi t / T)
    std::vector<cplx> gauge;                  // e^{(i/hbar) int_{t0}^t V}
    std::vector<std::vector<cplx>> modes;     // Psi_n(x, t)
    std::vector<std::vector<cplx>> modes_dt;  // d_t Psi_n(x, t), analytic

    /// rho_n = |Psi_n|^2. The gauge factor has unit modulus, so only the
    /// envelope enters.
    std::vector<double> density(std::size_t n) const;
};

SpectrumResult quantized_modes(double T, std::size_t n_max, const PotentialSpec& v_time,
                               const PhysicalConstants& k, std::size_t n_samples = 1025,
                               double x = 0.0, double t0 = 0.0);

/// Carroll temporal current of mode n (1-based):
///   J_t = (hbar / m c^3) Im(Psi* d_t Psi) - V |Psi|^2 / m c^3.
std::vector<double> stationary_temporal_current(const SpectrumResult& s, std::size_t n,
                                                const PotentialSpec& v_time,
                                                const PhysicalConstants& k);

/// F(x, t) = int_{t0}^t d_x V(x, tau) d tau, evaluated row by row on a time axis.
class InteractionMomentum {
public:
    using Row = std::function<std::vector<double>(double x, const Axis& t)>;
    using Fn2 = std::function<double(double x, double t)>;

    /// Fourth-order quadrature of d_x V from t0. Rejects complex V.
    static InteractionMomentum from_potential(const PotentialSpec& v, double t0);
    /// F given in closed form.
    static InteractionMomentum direct(Fn2 f, double t0);

    double t0() const { return t0_; }
    std::vector<double> row(double x, const Axis& t) const;
    RealField2D sample(const Axis& x, const Axis& t) const;

private:
    InteractionMomentum(Row row, double t0) : row_(std::move(row)), t0_(t0) {}
    Row row_;
    double t0_;
};

InteractionMomentum interaction_momentum(const PotentialSpec& v, double t0);

/// phi = e^{-(i/hbar) int_{t0}^t V(x, tau) d tau} Psi. Removes V from the
/// second-order time operator of
///   i hbar c Psi_x - (1/2mc^2)(-i hbar d_t - V)^2 Psi = 0
/// and leaves i hbar c phi_x + (hbar^2/2mc^2) phi_tt - c F phi = 0.
Field2D gauge_reduce(const Field2D& psi, const PotentialSpec& v, double t0,
                     const PhysicalConstants& k);
/// Inverse phase of gauge_reduce.
Field2D gauge_unreduce(const Field2D& phi, const PotentialSpec& v, double t0,
                       const PhysicalConstants& k);

/// max |i hbar c phi_x + (hbar^2/2mc^2) phi_tt - c F phi| over the interior,
/// fourth-order differences in both directions.
double reduced_residual(const Field2D& phi, const InteractionMomentum& f,
                        const PhysicalConstants& k);

/// Strang split-step for i hbar c phi_x = -(hbar^2/2mc^2) phi_tt + c F phi:
/// half potential phase at x_k, full kinetic multiplier, half phase at x_{k+1}.
Wavefunction evolve_interacting(const Wavefunction& phi0, const InteractionMomentum& f,
                                double x_end, std::size_t n_steps);

/// Same scheme for a general real potential term P(x, t):
///   i hbar c phi_x = -(hbar^2/2mc^2) phi_tt + P phi.
Wavefunction evolve_with_potential(const Wavefunction& phi0, const PotentialSpec& p,
                                   double x_end, std::size_t n_steps);

/// First-order Dyson solution for the potential term g(t) + eps eta(x, t):
///   phi ~ U0(x, x0) phi0 - (i eps / hbar c) int U0(x, xi) eta(xi) U0(xi, x0) phi0 d xi,
/// U0 the split-step evolution with g alone (substeps per interval), the
/// xi-integral by composite Simpson on n_steps (even) intervals.
struct DysonOptions {
    std::size_t n_steps = 64;
    std::size_t substeps = 8;
};

Wavefunction dyson_first_order(const Wavefunction& phi0, const RealFn& g, const PotentialSpec& eta,
                               double eps, double x_end, const DysonOptions& opt = {});

/// Split-step solution of the full problem g + eps eta with n_steps * substeps
/// steps, the reference for dyson_first_order.
Wavefunction dyson_reference(const Wavefunction& phi0, const RealFn& g, const PotentialSpec& eta,
                             double eps, double x_end, const DysonOptions& opt = {});

/// sqrt(dt sum |a - b|^2).
double l2_distance(const Wavefunction& a, const Wavefunction& b);

}  // namespace carroll

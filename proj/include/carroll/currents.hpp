#pragma once

#include "carroll/constants.hpp"
#include "carroll/field.hpp"
#include "carroll/potential.hpp"

namespace carroll {

/// rho = |psi|^2, J = (i hbar/2m)(psi d_x psi* - psi* d_x psi) = (hbar/m) Im(psi* psi_x).
/// Fourth-order central differences; margin grows by 2.
struct DensityCurrent {
    RealField2D rho;
    RealField2D j;
};
DensityCurrent schrodinger_density_current(const Field2D& psi, const PhysicalConstants& k);

/// max | d_t rho + d_x J | over the valid interior.
double schrodinger_continuity_residual(const Field2D& psi, const PhysicalConstants& k);

/// Phi = exp(-(i/hbar) int_{t0}^t V(x, tau) d tau) Psi, the integral taken
/// with the fourth-order cumulative rule along each row. t0 must lie on the
/// t-range.
Field2D gauge_remove(const Field2D& psi, const PotentialSpec& v, double t0,
                     const PhysicalConstants& k);
/// Inverse phase of gauge_remove.
Field2D gauge_restore(const Field2D& phi, const PotentialSpec& v, double t0,
                      const PhysicalConstants& k);

/// (x, t) -> (x', t') = (c t, x / c). Index-level transpose with rescaled
/// axes; no interpolation.
Field2D coordinate_inversion(const Field2D& field, const PhysicalConstants& k);
/// (x', t') -> (x, t) = (c t', x' / c).
Field2D coordinate_restore(const Field2D& field, const PhysicalConstants& k);

/// Carroll continuity on a field solving the Carroll equation with potential V:
///   d_x |psi|^2 + d_t j_t,   j_t = (hbar/mc^3) Im(psi* psi_t) - V |psi|^2 / mc^3,
/// max over the valid interior.
double carroll_continuity_residual(const Field2D& psi, const PotentialSpec& v_car,
                                   const PhysicalConstants& k);

/// Gauge removal followed by the coordinate inversion, then the Schrödinger
/// continuity residual of the transformed field.
double continuity_equivalence(const Field2D& psi_car, const PotentialSpec& v_car, double t0,
                              const PhysicalConstants& k);
double continuity_equivalence(const Field2D& psi_car, const PhysicalConstants& k);

}  // namespace carroll

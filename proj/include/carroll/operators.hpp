#pragma once

#include <span>
#include <vector>

#include "carroll/constants.hpp"
#include "carroll/field.hpp"
#include "carroll/potential.hpp"

namespace carroll {

/// Schrödinger constraint H psi = -hbar^2/(2m) psi_xx + V psi - i hbar psi_t.
///
/// Fourth-order central differences; the result has margin psi.margin + 2.
/// Both axes need at least 16 samples.
Field2D apply_H(const Field2D& psi, const PotentialSpec& v_sch, const PhysicalConstants& k);

/// Carroll constraint F psi = c p~ psi - (E~ - V)^2 psi / (2 m c^2) with
/// p~ = i hbar d/dx and E~ = -i hbar d/dt. The square is applied as two
/// successive factors, which expands to
///   -hbar^2 psi_tt + 2 i hbar V psi_t + i hbar V_t psi + V^2 psi.
Field2D apply_F(const Field2D& psi, const PotentialSpec& v_car, const PhysicalConstants& k);

/// Gaussian bumps used to probe the commutator; three distinct centers,
/// widths and carriers, placed well inside the grid.
std::vector<Field2D> default_probes(const Axis& x, const Axis& t);

/// max over probes of ||(HF - FH) psi|| / ||psi||, norms over samples at
/// least four away from every edge.
double commutator_residual(const PotentialSpec& v_sch, const PotentialSpec& v_car,
                           std::span<const Field2D> probes, const PhysicalConstants& k);

struct SharedCheck {
    bool holds;
    /// -hbar c k - (E_k + C)^2 / (2 m c^2)
    double residual;
};

/// Whether the separated Schrödinger solution e^{ikx} with energy E_k also
/// solves the Carroll equation for V_car = -V_sch + C.
SharedCheck strong_shared_check(double e_k, double offset, double wavenumber,
                                const PhysicalConstants& k);

}  // namespace carroll

#pragma once

#include <vector>

#include "carroll/constants.hpp"
#include "carroll/numerics.hpp"
#include "carroll/potential.hpp"

namespace carroll {

/// delta(t) = C1 + C0 * int_anchor^t exp((2i/hbar) int_anchor^t' V_car) dt'
/// sampled on a uniform t-axis, together with its exact first derivative.
struct DeltaSamples {
    Axis t;
    std::vector<cplx> delta;
    std::vector<cplx> delta_dot;
};

/// Reparametrization x = delta(t) generated by a time-only Carroll potential.
/// The inner integral uses the fourth-order cumulative rule; C0 = 1, C1 = 0
/// are the conventional defaults.
DeltaSamples forward_delta(const PotentialSpec& v_car, const Axis& t, double anchor,
                           const PhysicalConstants& k, cplx c0 = 1.0, cplx c1 = 0.0);

/// Schrödinger potential tabulated at the image points x_k = delta(t_k):
///   V_sch = E_sch + (i hbar V_car' + V_car^2 - E0^2) / (2 m delta_dot^2).
struct SchrodingerSamples {
    std::vector<double> t;
    std::vector<cplx> x;
    std::vector<cplx> v_sch;
};

SchrodingerSamples vsch_from_vcar(const PotentialSpec& v_car, const DeltaSamples& delta,
                                  double e_sch, double e0, const PhysicalConstants& k);

enum class Branch { standard, hermitian };

/// Sampled map between a Schrödinger patch in x and the Carroll time axis.
///
/// tau is tabulated on a uniform x-axis covering [x_lo, x_hi]; delta
/// is tabulated on a uniform parameter s with t = offset + unit * s (unit = 1
/// for the standard branch, i for the Hermitian one; the offset is non-zero
/// only on a Hermitian patch where |sigma| > 1).
struct DualityMap {
    double e0 = 1.0;
    double e_sch = 0.0;
    cplx c0 = 1.0;
    cplx c1 = 0.0;
    Branch branch = Branch::standard;

    Axis x;
    std::vector<double> y1, y2, y1_prime, y2_prime;
    std::vector<cplx> sigma;
    std::vector<cplx> tau;
    double x_lo = 0.0, x_hi = 0.0;

    /// Every `stride`-th sample feeds the finite-difference derivatives, so
    /// third-derivative stencils do not amplify rounding noise of the dense
    /// tabulation.
    std::size_t stride = 1;

    cplx unit = 1.0;
    cplx offset = 0.0;
    Axis s;
    std::vector<double> delta;

    /// (tau(x) - offset) / unit, real and strictly monotone on the patch.
    std::vector<double> tau_parameter() const;
};

struct InverseOptions {
    double x_lo = 0.5;
    double x_hi = 2.5;
    /// Samples on [x_lo, x_hi] (n - 1 RK4 steps).
    std::size_t n = 4001;
    /// Point where the fundamental pair takes its canonical data
    /// (y1, y1') = (1, 0), (y2, y2') = (0, 1). Must not exceed x_lo.
    double pair_anchor = 0.0;
    /// Target number of intervals for the finite-difference grid.
    std::size_t derivative_intervals = 600;
};

/// Uniform samples of a derived quantity.
template <class T>
struct Curve {
    Axis x;
    std::vector<T> values;
};

/// Build tau from a static target: integrate y'' = q y with
/// q = (2m/hbar^2)(V_sch - E_sch), take sigma = y1/y2 and
/// tau = (hbar/E0) arctan(sigma), restricted to the largest patch where y2
/// has no zero (with a two-sample guard band). delta = tau^{-1} is tabulated
/// on the image interval.
DualityMap inverse_tau(const PotentialSpec& v_sch, double e_sch, double e0,
                       const InverseOptions& opts, const PhysicalConstants& k);

/// sigma -> i sigma, tau -> i (hbar/E0) artanh(sigma). Throws DomainError if
/// |sigma| reaches 1 on the patch.
DualityMap hermitian_branch(const DualityMap& map, const PhysicalConstants& k);

/// |{sigma, x} + 2 q| on the derivative grid (finite differences of sigma).
Curve<double> schwarzian_residual(const DualityMap& map, const PotentialSpec& v_sch,
                                        const PhysicalConstants& k);

/// V_sch reconstructed from the sampled tau through
///   V_sch - E_sch = (hbar^2/4m) {delta,t}/delta_dot^2 - (E0^2/2m)/delta_dot^2,
/// with the delta derivatives obtained from tau by the inverse-function rules.
Curve<cplx> reconstruct_vsch(const DualityMap& map, const PhysicalConstants& k);

/// Carroll potential V_car = -(i hbar/2) delta''/delta' on the delta samples,
/// derivatives taken with respect to t = unit * s. The curve's axis is s.
Curve<cplx> reconstruct_vcar(const DualityMap& map, const PhysicalConstants& k);

/// Sub-range of sample indices used for residuals: the patch shrunk by 10%
/// of its length at each end.
struct IndexRange {
    std::size_t first, last;  // inclusive
};
IndexRange interior_range(std::size_t n);

/// max |V_rec - V_target| / max(1, max |V_target|) over the interior.
double roundtrip_residual(const PotentialSpec& v_sch, double e_sch, double e0,
                          const InverseOptions& opts, const PhysicalConstants& k);
double roundtrip_residual(const DualityMap& map, const PotentialSpec& v_sch,
                          const PhysicalConstants& k);

/// delta(tau(x)) - x and tau(delta(s)) - s, worst case over the interior.
struct InversionError {
    double delta_of_tau;
    double tau_of_delta;
};
InversionError inversion_error(const DualityMap& map);

}  // namespace carroll

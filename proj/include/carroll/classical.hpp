#pragma once

#include <vector>

#include "carroll/constants.hpp"
#include "carroll/numerics.hpp"
#include "carroll/potential.hpp"

namespace carroll {

/// Energy-momentum two-vector; complex so that ultra-boosted images fit.
struct TwoMomentum {
    cplx E;
    cplx P;
};

/// (E/c)^2 - P^2.
cplx invariant(const TwoMomentum& p, const PhysicalConstants& k);

/// Boost continued past |beta| = 1 on gamma = i / sqrt(beta^2 - 1), taken at
/// infinite rapidity: E' = -i c P, P' = -i E / c.
TwoMomentum ultra_boost(const TwoMomentum& p, const PhysicalConstants& k);
/// The map squares to -1, so its inverse is (E, P) -> (i c P, i E / c).
TwoMomentum inverse_ultra_boost(const TwoMomentum& p, const PhysicalConstants& k);

enum class Root { positive, negative };

/// E0 = +-sqrt(2 m c^3 p0), the root of c p0 = E0^2 / (2 m c^2).
double carroll_dispersion(double p0, Root root, const PhysicalConstants& k);
/// p0 = E0^2 / (2 m c^3); both signs of E0 give the same p0.
double carroll_momentum(double e0, const PhysicalConstants& k);

/// Complete integral of the free Hamilton-Jacobi equation
///   (d_t S)^2 / (2 m c^3) + d_x S = 0,
///   S = -p0 x +- sqrt(2 m c^3 p0) t + C0.
/// Momenta follow p_x = -d_x S (so p_x = p0) and p_t = d_t S.
class SeparableAction {
public:
    SeparableAction(double p0, Root root, double c0, const PhysicalConstants& k);

    double p0() const { return p0_; }
    double energy() const { return e0_; }

    double operator()(double x, double t) const;
    double dS_dx(double x, double t) const;
    double dS_dt(double x, double t) const;
    /// Left-hand side of the Hamilton-Jacobi equation.
    double hj_residual(double x, double t) const;
    /// dS/dp0 = -x +- sqrt(m c^3 / 2 p0) t; needs p0 > 0.
    double dS_dp0(double x, double t) const;
    /// Solves dS/dp0 = beta for x: x = +-v t - beta.
    double trajectory(double t, double beta) const;

private:
    double p0_;
    Root root_;
    double c0_;
    double e0_;
    PhysicalConstants k_;
};

/// v = +-sqrt(m c^3 / (2 p0)).
double group_velocity(double p0, Root root, const PhysicalConstants& k);
/// |p| = m c^3 / (2 v^2).
double momentum_from_velocity(double v, const PhysicalConstants& k);
/// E = m c^3 / v (sign carried by v).
double energy_from_velocity(double v, const PhysicalConstants& k);

/// One sample on a characteristic. q = p_t + V_car(x, t) and p_x = q^2 / (2 m c^3).
struct RayState {
    double x;
    double t;
    double q;
    double p_x;
};

struct RaySolution {
    std::vector<RayState> samples;
    double x0;
    double t0;
    double q0;
};

/// Characteristics in the gauge lambda = -x / c:
///   dt/dx = -q / m c^3,   dq/dx = d_x V_car(x, t(x)),
/// integrated with classical RK4 over n_steps equal steps from x0 to x_end.
RaySolution trace_ray(const PotentialSpec& v_car, double x0, double t0, double q0, double x_end,
                      std::size_t n_steps, const PhysicalConstants& k);

/// -c p_x + q^2 / (2 m c^2); zero on every traced sample.
double ray_constraint(const RayState& s, const PhysicalConstants& k);

/// Picard iterates of the quadrature form of the ray system on a uniform
/// x-grid from x0 to x_end > x0; iterate 0 is the straight line
/// t0 - q0 (x - x0) / m c^3.
struct PicardResult {
    Axis x;
    std::vector<std::vector<double>> t;  // t[n][i]
    std::vector<std::vector<double>> q;  // q[0] is the constant q0
};

PicardResult picard_iterate(const PotentialSpec& v_car, double x0, double t0, double q0,
                            double x_end, std::size_t n_iter, const PhysicalConstants& k,
                            std::size_t n_nodes = 1025);

}  // namespace carroll

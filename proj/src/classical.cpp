#include "carroll/classical.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace carroll {

namespace {

double root_sign(Root r) { return r == Root::positive ? 1.0 : -1.0; }

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

cplx invariant(const TwoMomentum& p, const PhysicalConstants& k) {
    const cplx e = p.E / k.c;
    return e * e - p.P * p.P;
}

TwoMomentum ultra_boost(const TwoMomentum& p, const PhysicalConstants& k) {
    k.validate();
    const cplx i{0.0, 1.0};
    return {-i * k.c * p.P, -i * p.E / k.c};
}

TwoMomentum inverse_ultra_boost(const TwoMomentum& p, const PhysicalConstants& k) {
    k.validate();
    const cplx i{0.0, 1.0};
    return {i * k.c * p.P, i * p.E / k.c};
}

double carroll_dispersion(double p0, Root root, const PhysicalConstants& k) {
    k.validate();
    require_finite(p0, "p0");
    if (p0 < 0.0) throw DomainError("Carroll momentum p0 must be non-negative");
    return root_sign(root) * std::sqrt(2.0 * k.mc3() * p0);
}

double carroll_momentum(double e0, const PhysicalConstants& k) {
    k.validate();
    require_finite(e0, "E0");
    return e0 * e0 / (2.0 * k.mc3());
}

SeparableAction::SeparableAction(double p0, Root root, double c0, const PhysicalConstants& k)
    : p0_(p0), root_(root), c0_(c0), e0_(carroll_dispersion(p0, root, k)), k_(k) {
    require_finite(c0, "C0");
}

double SeparableAction::operator()(double x, double t) const { return -p0_ * x + e0_ * t + c0_; }

double SeparableAction::dS_dx(double, double) const { return -p0_; }

double SeparableAction::dS_dt(double, double) const { return e0_; }

double SeparableAction::hj_residual(double x, double t) const {
    const double st = dS_dt(x, t);
    return st * st / (2.0 * k_.mc3()) + dS_dx(x, t);
}

double SeparableAction::dS_dp0(double x, double t) const {
    return -x + group_velocity(p0_, root_, k_) * t;
}

double SeparableAction::trajectory(double t, double beta) const {
    return group_velocity(p0_, root_, k_) * t - beta;
}

double group_velocity(double p0, Root root, const PhysicalConstants& k) {
    k.validate();
    require_finite(p0, "p0");
    if (!(p0 > 0.0)) throw DomainError("group velocity needs p0 > 0");
    return root_sign(root) * std::sqrt(k.mc3() / (2.0 * p0));
}

double momentum_from_velocity(double v, const PhysicalConstants& k) {
    k.validate();
    require_finite(v, "velocity");
    if (v == 0.0) throw DomainError("velocity must be non-zero");
    return k.mc3() / (2.0 * v * v);
}

double energy_from_velocity(double v, const PhysicalConstants& k) {
    k.validate();
    require_finite(v, "velocity");
    if (v == 0.0) throw DomainError("velocity must be non-zero");
    return k.mc3() / v;
}

RaySolution trace_ray(const PotentialSpec& v_car, double x0, double t0, double q0, double x_end,
                      std::size_t n_steps, const PhysicalConstants& k) {
    k.validate();
    require_finite(x0, "x0");
    require_finite(t0, "t0");
    require_finite(q0, "q0");
    require_finite(x_end, "x_end");
    if (n_steps < 16) throw DomainError("trace_ray needs at least 16 steps");
    if (x_end == x0) throw DomainError("ray has zero length");
    const double mc3 = k.mc3();
    const double h = (x_end - x0) / static_cast<double>(n_steps);

    // State (t, q); slopes (-q / mc3, dV/dx).
    auto slope = [&](double x, double t, double q) {
        const double f = v_car.real_dx(x, t);
        return std::pair{-q / mc3, f};
    };

    RaySolution out{{}, x0, t0, q0};
    out.samples.reserve(n_steps + 1);
    double t = t0, q = q0;
    out.samples.push_back({x0, t, q, q * q / (2.0 * mc3)});
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double x = x0 + static_cast<double>(s) * h;
        const auto [a1, b1] = slope(x, t, q);
        const auto [a2, b2] = slope(x + 0.5 * h, t + 0.5 * h * a1, q + 0.5 * h * b1);
        const auto [a3, b3] = slope(x + 0.5 * h, t + 0.5 * h * a2, q + 0.5 * h * b2);
        const auto [a4, b4] = slope(x + h, t + h * a3, q + h * b3);
        t += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        q += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        if (!std::isfinite(t) || !std::isfinite(q)) throw NumericalError("ray left the finite range");
        const double xn = s + 1 == n_steps ? x_end : x0 + static_cast<double>(s + 1) * h;
        out.samples.push_back({xn, t, q, q * q / (2.0 * mc3)});
    }
    return out;
}

double ray_constraint(const RayState& s, const PhysicalConstants& k) {
    return -k.c * s.p_x + s.q * s.q / (2.0 * k.mc2());
}

PicardResult picard_iterate(const PotentialSpec& v_car, double x0, double t0, double q0,
                            double x_end, std::size_t n_iter, const PhysicalConstants& k,
                            std::size_t n_nodes) {
    k.validate();
    require_finite(t0, "t0");
    require_finite(q0, "q0");
    if (n_nodes < 4) throw DomainError("Picard grid needs at least four nodes");
    const Axis ax = make_closed_axis(x0, x_end, n_nodes);
    const double mc3 = k.mc3();

    PicardResult out{ax, {}, {}};
    std::vector<double> t(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) t[i] = t0 - q0 * (ax.at(i) - x0) / mc3;
    out.t.push_back(t);
    out.q.emplace_back(n_nodes, q0);

    std::vector<double> force(n_nodes);
    for (std::size_t n = 0; n < n_iter; ++n) {
        const auto& prev = out.t.back();
        for (std::size_t i = 0; i < n_nodes; ++i) force[i] = v_car.real_dx(ax.at(i), prev[i]);
        auto q = cumulative_integral_4th<double>(ax, force, x0);
        for (auto& v : q) v += q0;
        auto tq = cumulative_integral_4th<double>(ax, q, x0);
        for (auto& v : tq) v = t0 - v / mc3;
        out.q.push_back(std::move(q));
        out.t.push_back(std::move(tq));
    }
    return out;
}

}  // namespace carroll

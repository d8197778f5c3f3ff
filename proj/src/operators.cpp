#include "carroll/operators.hpp"

#include <algorithm>
#include <cmath>

namespace carroll {

namespace {

constexpr std::size_t kMinSamples = 16;

void check_grid(const Field2D& psi) {
    psi.validate();
    if (psi.nx() < kMinSamples || psi.nt() < kMinSamples) {
        throw DomainError("grid too coarse: operators need at least 16 samples per axis");
    }
    if (2 * (psi.margin + 2) >= std::min(psi.nx(), psi.nt())) {
        throw DomainError("no valid interior left after applying the stencil");
    }
}

struct Derivs {
    cplx d1x, d2x, d1t, d2t;
};

Derivs derivs(const Field2D& f, std::size_t i, std::size_t j) {
    const double hx = f.x_axis.step;
    const double ht = f.t_axis.step;
    auto X = [&](int o) { return f.at(i + o, j); };
    auto T = [&](int o) { return f.at(i, j + o); };
    return {
        (X(-2) - 8.0 * X(-1) + 8.0 * X(1) - X(2)) / (12.0 * hx),
        (-X(-2) + 16.0 * X(-1) - 30.0 * X(0) + 16.0 * X(1) - X(2)) / (12.0 * hx * hx),
        (T(-2) - 8.0 * T(-1) + 8.0 * T(1) - T(2)) / (12.0 * ht),
        (-T(-2) + 16.0 * T(-1) - 30.0 * T(0) + 16.0 * T(1) - T(2)) / (12.0 * ht * ht),
    };
}

template <class Kernel>
Field2D apply_stencil(const Field2D& psi, Kernel&& kernel) {
    check_grid(psi);
    Field2D out = Field2D::zeros(psi.x_axis, psi.t_axis);
    out.margin = psi.margin + 2;
    for (std::size_t i = out.margin; i + out.margin < psi.nx(); ++i) {
        const double x = psi.x_axis.at(i);
        for (std::size_t j = out.margin; j + out.margin < psi.nt(); ++j) {
            out.at(i, j) = kernel(x, psi.t_axis.at(j), psi.at(i, j), derivs(psi, i, j));
        }
    }
    return out;
}

}  // namespace

Field2D apply_H(const Field2D& psi, const PotentialSpec& v_sch, const PhysicalConstants& k) {
    k.validate();
    const cplx i_hbar{0.0, k.hbar};
    const double kin = k.hbar * k.hbar / (2.0 * k.m);
    return apply_stencil(psi, [&](double x, double t, cplx p, const Derivs& d) {
        return -kin * d.d2x + v_sch.value(x, t) * p - i_hbar * d.d1t;
    });
}

Field2D apply_F(const Field2D& psi, const PotentialSpec& v_car, const PhysicalConstants& k) {
    k.validate();
    const cplx i_hbar{0.0, k.hbar};
    const double inv = 1.0 / (2.0 * k.mc2());
    return apply_stencil(psi, [&](double x, double t, cplx p, const Derivs& d) {
        const cplx v = v_car.value(x, t);
        const cplx square = -k.hbar * k.hbar * d.d2t + 2.0 * i_hbar * v * d.d1t +
                            i_hbar * v_car.dt(x, t) * p + v * v * p;
        return i_hbar * k.c * d.d1x - inv * square;
    });
}

std::vector<Field2D> default_probes(const Axis& x, const Axis& t) {
    struct Bump {
        double fx, ft, wx, wt, kx, wt_carrier;
    };
    // Centers and widths as fractions of the grid extent.
    constexpr Bump bumps[] = {
        {0.50, 0.50, 0.08, 0.08, 0.0, 0.0},
        {0.42, 0.58, 0.06, 0.10, 1.5, -1.0},
        {0.60, 0.45, 0.10, 0.07, -0.8, 2.0},
    };
    const double lx = x.back() - x.start;
    const double lt = t.back() - t.start;
    std::vector<Field2D> out;
    for (const auto& b : bumps) {
        const double xc = x.start + b.fx * lx, tc = t.start + b.ft * lt;
        const double sx = b.wx * lx, st = b.wt * lt;
        out.push_back(Field2D::sample(x, t, [&](double xv, double tv) {
            const double ax = (xv - xc) / sx, at = (tv - tc) / st;
            return std::exp(cplx{-0.5 * (ax * ax + at * at), b.kx * xv - b.wt_carrier * tv});
        }));
    }
    return out;
}

double commutator_residual(const PotentialSpec& v_sch, const PotentialSpec& v_car,
                           std::span<const Field2D> probes, const PhysicalConstants& k) {
    if (probes.empty()) throw DomainError("empty probe set");
    double worst = 0.0;
    for (const auto& psi : probes) {
        const Field2D hf = apply_H(apply_F(psi, v_car, k), v_sch, k);
        const Field2D fh = apply_F(apply_H(psi, v_sch, k), v_car, k);
        Field2D diff = hf;
        for (std::size_t n = 0; n < diff.values.size(); ++n) diff.values[n] -= fh.values[n];
        const std::size_t ring = hf.margin;
        const double base = interior_norm(psi, ring);
        if (base == 0.0) throw DomainError("probe vanishes on the interior");
        worst = std::max(worst, interior_norm(diff, ring) / base);
    }
    return worst;
}

SharedCheck strong_shared_check(double e_k, double offset, double wavenumber,
                                const PhysicalConstants& k) {
    k.validate();
    const double lhs = -k.hbar * k.c * wavenumber;
    const double s = e_k + offset;
    const double rhs = s * s / (2.0 * k.mc2());
    const double residual = lhs - rhs;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return {std::abs(residual) <= 1e-10 * scale, residual};
}

}  // namespace carroll

#include "carroll/currents.hpp"

#include <algorithm>
#include <cmath>

namespace carroll {

namespace {

// Fourth-order first derivative along x (axis 0) or t (axis 1) at (i, j).
template <class F>
auto d1(const F& f, std::size_t i, std::size_t j, int axis) {
    const double h = axis == 0 ? f.x_axis.step : f.t_axis.step;
    auto at = [&](int o) {
        return axis == 0 ? f.at(i + static_cast<std::size_t>(o), j)
                         : f.at(i, j + static_cast<std::size_t>(o));
    };
    return (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
}

void require_interior(std::size_t n, std::size_t margin) {
    if (2 * margin >= n) throw DomainError("grid too small for the stencil footprint");
}

Field2D apply_phase(const Field2D& psi, const PotentialSpec& v, double t0,
                    const PhysicalConstants& k, double sign) {
    k.validate();
    psi.validate();
    if (psi.nt() < 4) throw DomainError("gauge phase needs at least four time samples");
    Field2D out = psi;
    std::vector<cplx> row(psi.nt());
    for (std::size_t i = 0; i < psi.nx(); ++i) {
        const double x = psi.x_axis.at(i);
        for (std::size_t j = 0; j < psi.nt(); ++j) row[j] = v.value(x, psi.t_axis.at(j));
        const auto theta = cumulative_integral_4th<cplx>(psi.t_axis, row, t0);
        for (std::size_t j = 0; j < psi.nt(); ++j) {
            out.at(i, j) *= std::exp(cplx{0.0, sign / k.hbar} * theta[j]);
        }
    }
    return out;
}

Field2D transpose(const Field2D& f, const Axis& new_x, const Axis& new_t) {
    Field2D out = Field2D::zeros(new_x, new_t);
    out.margin = f.margin;
    for (std::size_t i = 0; i < f.nx(); ++i) {
        for (std::size_t j = 0; j < f.nt(); ++j) out.at(j, i) = f.at(i, j);
    }
    return out;
}

}  // namespace

DensityCurrent schrodinger_density_current(const Field2D& psi, const PhysicalConstants& k) {
    k.validate();
    psi.validate();
    const std::size_t m = psi.margin + 2;
    require_interior(std::min(psi.nx(), psi.nt()), m);
    DensityCurrent out;
    out.rho = {psi.x_axis, psi.t_axis, std::vector<double>(psi.values.size()), psi.margin};
    out.j = {psi.x_axis, psi.t_axis, std::vector<double>(psi.values.size()), m};
    for (std::size_t i = 0; i < psi.nx(); ++i) {
        for (std::size_t j = 0; j < psi.nt(); ++j) {
            out.rho.at(i, j) = std::norm(psi.at(i, j));
            if (i >= m && j >= m && i + m < psi.nx() && j + m < psi.nt()) {
                const cplx dx = d1(psi, i, j, 0);
                out.j.at(i, j) = k.hbar / k.m * (std::conj(psi.at(i, j)) * dx).imag();
            }
        }
    }
    return out;
}

double schrodinger_continuity_residual(const Field2D& psi, const PhysicalConstants& k) {
    const auto dc = schrodinger_density_current(psi, k);
    const std::size_t m = dc.j.margin + 2;
    require_interior(std::min(psi.nx(), psi.nt()), m);
    double worst = 0.0;
    for (std::size_t i = m; i + m < psi.nx(); ++i) {
        for (std::size_t j = m; j + m < psi.nt(); ++j) {
            worst = std::max(worst, std::abs(d1(dc.rho, i, j, 1) + d1(dc.j, i, j, 0)));
        }
    }
    return worst;
}

Field2D gauge_remove(const Field2D& psi, const PotentialSpec& v, double t0,
                     const PhysicalConstants& k) {
    return apply_phase(psi, v, t0, k, -1.0);
}

Field2D gauge_restore(const Field2D& phi, const PotentialSpec& v, double t0,
                      const PhysicalConstants& k) {
    return apply_phase(phi, v, t0, k, +1.0);
}

Field2D coordinate_inversion(const Field2D& field, const PhysicalConstants& k) {
    k.validate();
    const Axis x_new{k.c * field.t_axis.start, k.c * field.t_axis.step, field.t_axis.n};
    const Axis t_new{field.x_axis.start / k.c, field.x_axis.step / k.c, field.x_axis.n};
    return transpose(field, x_new, t_new);
}

Field2D coordinate_restore(const Field2D& field, const PhysicalConstants& k) {
    k.validate();
    const Axis x_old{k.c * field.t_axis.start, k.c * field.t_axis.step, field.t_axis.n};
    const Axis t_old{field.x_axis.start / k.c, field.x_axis.step / k.c, field.x_axis.n};
    return transpose(field, x_old, t_old);
}

double carroll_continuity_residual(const Field2D& psi, const PotentialSpec& v_car,
                                   const PhysicalConstants& k) {
    k.validate();
    psi.validate();
    const std::size_t m1 = psi.margin + 2;
    const std::size_t m2 = m1 + 2;
    require_interior(std::min(psi.nx(), psi.nt()), m2);
    const double mc3 = k.mc3();
    RealField2D rho{psi.x_axis, psi.t_axis, std::vector<double>(psi.values.size()), psi.margin};
    RealField2D jt{psi.x_axis, psi.t_axis, std::vector<double>(psi.values.size()), m1};
    for (std::size_t i = 0; i < psi.nx(); ++i) {
        const double x = psi.x_axis.at(i);
        for (std::size_t j = 0; j < psi.nt(); ++j) {
            const double r = std::norm(psi.at(i, j));
            rho.at(i, j) = r;
            if (i >= m1 && j >= m1 && i + m1 < psi.nx() && j + m1 < psi.nt()) {
                const cplx dt = d1(psi, i, j, 1);
                const double v = v_car.real_value(x, psi.t_axis.at(j));
                jt.at(i, j) = k.hbar / mc3 * (std::conj(psi.at(i, j)) * dt).imag() - v * r / mc3;
            }
        }
    }
    double worst = 0.0;
    for (std::size_t i = m2; i + m2 < psi.nx(); ++i) {
        for (std::size_t j = m2; j + m2 < psi.nt(); ++j) {
            worst = std::max(worst, std::abs(d1(rho, i, j, 0) + d1(jt, i, j, 1)));
        }
    }
    return worst;
}

double continuity_equivalence(const Field2D& psi_car, const PotentialSpec& v_car, double t0,
                              const PhysicalConstants& k) {
    const Field2D phi = gauge_remove(psi_car, v_car, t0, k);
    return schrodinger_continuity_residual(coordinate_inversion(phi, k), k);
}

double continuity_equivalence(const Field2D& psi_car, const PhysicalConstants& k) {
    return continuity_equivalence(psi_car, PotentialSpec::zero(), psi_car.t_axis.start, k);
}

}  // namespace carroll

#include "carroll/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace carroll {

double Wavefunction::norm() const { return signal().norm(); }

cplx inner_product(const Wavefunction& phi, const Wavefunction& psi) {
    if (phi.values.size() != psi.values.size() || phi.grid.n != psi.grid.n) {
        throw DomainError("inner product of wavefunctions on different grids");
    }
    cplx acc{};
    for (std::size_t k = 0; k < phi.values.size(); ++k) acc += std::conj(phi.values[k]) * psi.values[k];
    return acc * phi.grid.dt;
}

Wavefunction evolve_free(const Wavefunction& psi, double dx) {
    psi.constants.validate();
    psi.signal().validate();
    if (!std::isfinite(dx)) throw DomainError("step must be finite");
    auto spec = unitary_dft(std::span<const cplx>(psi.values));
    const double beta = psi.constants.beta();
    for (std::size_t j = 0; j < spec.size(); ++j) {
        const double w = psi.grid.frequency(j);
        spec[j] *= std::polar(1.0, -beta * dx * w * w);
    }
    return {psi.x + dx, psi.grid, unitary_idft(spec), psi.constants};
}

void GaussianParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
    if (!std::isfinite(t0) || !std::isfinite(omega0)) throw DomainError("non-finite Gaussian parameter");
}

namespace {

struct Packet {
    cplx phase;  // carrier factor
    cplx g;      // envelope
    cplx g_s;    // d/ds of the envelope
};

Packet packet(const GaussianParams& p, double x, double t, const PhysicalConstants& k) {
    const double beta = k.beta();
    const double chi = k.hbar * x / (k.mc3() * p.sigma * p.sigma);
    const cplx d{1.0, chi};
    const double s = t - 2.0 * beta * p.omega0 * x - p.t0;
    const double amp = std::pow(std::numbers::pi * p.sigma * p.sigma, -0.25);
    const cplx g = amp / std::sqrt(d) * std::exp(-s * s / (2.0 * p.sigma * p.sigma * d));
    const cplx g_s = -s / (p.sigma * p.sigma * d) * g;
    const double theta = p.omega0 * (t - p.t0) - beta * x * p.omega0 * p.omega0;
    return {std::polar(1.0, theta), g, g_s};
}

}  // namespace

cplx gaussian_value(const GaussianParams& p, double x, double t, const PhysicalConstants& k) {
    const auto pk = packet(p, x, t, k);
    return pk.phase * pk.g;
}

cplx gaussian_dt(const GaussianParams& p, double x, double t, const PhysicalConstants& k) {
    const auto pk = packet(p, x, t, k);
    return pk.phase * (cplx{0.0, p.omega0} * pk.g + pk.g_s);
}

Wavefunction gaussian_exact(const GaussianParams& p, double x, const TimeGrid& grid,
                            const PhysicalConstants& k) {
    p.validate();
    k.validate();
    Wavefunction out{x, grid, std::vector<cplx>(grid.n), k};
    for (std::size_t j = 0; j < grid.n; ++j) out.values[j] = gaussian_value(p, x, grid.at(j), k);
    return out;
}

double effective_width(double sigma, double x, const PhysicalConstants& k) {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    k.validate();
    const double spread = k.hbar * x / (k.mc3() * sigma);
    return std::sqrt(sigma * sigma + spread * spread);
}

double carrier_center(double t0, double e0, double x, const PhysicalConstants& k) {
    k.validate();
    return t0 + e0 * x / k.mc3();
}

double Moments::width() const { return std::sqrt(2.0 * variance); }

Moments moments(const Wavefunction& psi) {
    const auto& g = psi.grid;
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double r = std::norm(psi.values[j]);
        m0 += r;
        m1 += r * g.at(j);
    }
    if (m0 == 0.0) throw DomainError("moments of a vanishing wavefunction");
    const double c = m1 / m0;
    double m2 = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double d = g.at(j) - c;
        m2 += std::norm(psi.values[j]) * d * d;
    }
    return {m0 * g.dt, c, m2 / m0};
}

CarrollCurrents carroll_density_current(const Wavefunction& psi, const PotentialSpec& v_car) {
    return carroll_density_current(psi, spectral_derivative(psi.signal(), 1), v_car);
}

CarrollCurrents carroll_density_current(const Wavefunction& psi, const std::vector<cplx>& psi_t,
                                        const PotentialSpec& v_car) {
    psi.constants.validate();
    const std::size_t n = psi.values.size();
    if (psi_t.size() != n) throw DomainError("derivative samples do not match the wavefunction");
    const double mc3 = psi.constants.mc3();
    const double hbar = psi.constants.hbar;
    CarrollCurrents out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        const cplx p = psi.values[j];
        const double r = std::norm(p);
        const double v = v_car.real_value(psi.x, psi.grid.at(j));
        const double flux = hbar / mc3 * (std::conj(p) * psi_t[j]).imag();
        out.rho_t[j] = r;
        out.j_t[j] = flux - v * r / mc3;
        out.rho_car[j] = -flux + v * r / mc3;
    }
    return out;
}

double continuity_residual(const Wavefunction& a, const Wavefunction& b,
                           const PotentialSpec& v_car) {
    const double dx = b.x - a.x;
    if (dx == 0.0) throw DomainError("stations coincide");
    if (a.grid.n != b.grid.n || a.grid.dt != b.grid.dt) throw DomainError("stations use different grids");
    const auto ca = carroll_density_current(a, v_car);
    const auto cb = carroll_density_current(b, v_car);
    std::vector<cplx> j_mid(a.grid.n);
    for (std::size_t k = 0; k < j_mid.size(); ++k) j_mid[k] = 0.5 * (ca.j_t[k] + cb.j_t[k]);
    const auto dj = spectral_derivative({a.grid, j_mid}, 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < j_mid.size(); ++k) {
        const double r = (cb.rho_t[k] - ca.rho_t[k]) / dx + dj[k].real();
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

}  // namespace carroll

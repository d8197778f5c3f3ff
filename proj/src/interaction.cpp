#include "carroll/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carroll/currents.hpp"

namespace carroll {

std::vector<double> SpectrumResult::density(std::size_t n) const {
    if (n == 0 || n > envelopes.size()) throw DomainError("mode index out of range");
    std::vector<double> out(envelopes[n - 1].size());
    std::transform(envelopes[n - 1].begin(), envelopes[n - 1].end(), out.begin(),
                   [](double a) { return a * a; });
    return out;
}

SpectrumResult quantized_modes(double T, std::size_t n_max, const PotentialSpec& v_time,
                               const PhysicalConstants& k, std::size_t n_samples, double x,
                               double t0) {
    k.validate();
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("window length T must be positive");
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    if (n_samples < 4) throw DomainError("modes need at least four samples");
    if (!(t0 >= 0.0 && t0 <= T)) throw DomainError("gauge anchor t0 must lie in [0, T]");
    if (v_time.depends_on_x()) throw DomainError("quantized modes need a time-only potential");

    SpectrumResult s;
    s.T = T;
    s.x = x;
    s.t = make_closed_axis(0.0, T, n_samples);
    std::vector<double> v(n_samples);
    for (std::size_t j = 0; j < n_samples; ++j) v[j] = v_time.real_value(x, s.t.at(j));
    const auto theta = cumulative_integral_4th<double>(s.t, v, t0);
    s.gauge.resize(n_samples);
    for (std::size_t j = 0; j < n_samples; ++j) s.gauge[j] = std::polar(1.0, theta[j] / k.hbar);

    const double amp = std::sqrt(2.0 / T);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double e = static_cast<double>(n) * std::numbers::pi * k.hbar / T;
        const double p = e * e / (2.0 * k.mc3());
        const double w = static_cast<double>(n) * std::numbers::pi / T;
        const cplx spatial = std::polar(1.0, -p * x / k.hbar);
        std::vector<double> env(n_samples);
        std::vector<cplx> mode(n_samples), mode_dt(n_samples);
        for (std::size_t j = 0; j < n_samples; ++j) {
            const double t = s.t.at(j);
            env[j] = amp * std::sin(w * t);
            const double env_dt = amp * w * std::cos(w * t);
            const cplx f = spatial * s.gauge[j];
            mode[j] = f * env[j];
            mode_dt[j] = f * (cplx{0.0, v[j] / k.hbar} * env[j] + env_dt);
        }
        s.levels.push_back(e);
        s.momenta.push_back(p);
        s.envelopes.push_back(std::move(env));
        s.modes.push_back(std::move(mode));
        s.modes_dt.push_back(std::move(mode_dt));
    }
    return s;
}

std::vector<double> stationary_temporal_current(const SpectrumResult& s, std::size_t n,
                                                const PotentialSpec& v_time,
                                                const PhysicalConstants& k) {
    k.validate();
    if (n == 0 || n > s.modes.size()) throw DomainError("mode index out of range");
    const auto& psi = s.modes[n - 1];
    const auto& psi_t = s.modes_dt[n - 1];
    const double mc3 = k.mc3();
    std::vector<double> j_t(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double v = v_time.real_value(s.x, s.t.at(j));
        j_t[j] = k.hbar / mc3 * (std::conj(psi[j]) * psi_t[j]).imag() - v * std::norm(psi[j]) / mc3;
    }
    return j_t;
}

InteractionMomentum InteractionMomentum::from_potential(const PotentialSpec& v, double t0) {
    if (!v.is_real()) throw DomainError("interaction momentum needs a real potential");
    if (!std::isfinite(t0)) throw DomainError("anchor t0 must be finite");
    return InteractionMomentum(
        [v, t0](double x, const Axis& t) {
            std::vector<double> dv(t.n);
            for (std::size_t j = 0; j < t.n; ++j) dv[j] = v.real_dx(x, t.at(j));
            return cumulative_integral_4th<double>(t, dv, t0);
        },
        t0);
}

InteractionMomentum InteractionMomentum::direct(Fn2 f, double t0) {
    if (!f) throw DomainError("interaction momentum needs a function");
    return InteractionMomentum(
        [f](double x, const Axis& t) {
            std::vector<double> out(t.n);
            for (std::size_t j = 0; j < t.n; ++j) out[j] = f(x, t.at(j));
            return out;
        },
        t0);
}

std::vector<double> InteractionMomentum::row(double x, const Axis& t) const {
    auto r = row_(x, t);
    for (double v : r) {
        if (!std::isfinite(v)) throw NumericalError("interaction momentum is not finite");
    }
    return r;
}

RealField2D InteractionMomentum::sample(const Axis& x, const Axis& t) const {
    RealField2D out{x, t, std::vector<double>(x.n * t.n), 0};
    for (std::size_t i = 0; i < x.n; ++i) {
        const auto r = row(x.at(i), t);
        std::copy(r.begin(), r.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * t.n));
    }
    return out;
}

InteractionMomentum interaction_momentum(const PotentialSpec& v, double t0) {
    return InteractionMomentum::from_potential(v, t0);
}

Field2D gauge_reduce(const Field2D& psi, const PotentialSpec& v, double t0,
                     const PhysicalConstants& k) {
    return gauge_remove(psi, v, t0, k);
}

Field2D gauge_unreduce(const Field2D& phi, const PotentialSpec& v, double t0,
                       const PhysicalConstants& k) {
    return gauge_restore(phi, v, t0, k);
}

double reduced_residual(const Field2D& phi, const InteractionMomentum& f,
                        const PhysicalConstants& k) {
    k.validate();
    phi.validate();
    const std::size_t m = phi.margin + 2;
    if (2 * m >= std::min(phi.nx(), phi.nt())) throw DomainError("grid too small for the stencil footprint");
    const double hx = phi.x_axis.step, ht = phi.t_axis.step;
    const double kin = k.hbar * k.hbar / (2.0 * k.mc2());
    const cplx ihc{0.0, k.hbar * k.c};
    double worst = 0.0;
    for (std::size_t i = m; i + m < phi.nx(); ++i) {
        const auto fr = f.row(phi.x_axis.at(i), phi.t_axis);
        for (std::size_t j = m; j + m < phi.nt(); ++j) {
            const cplx px = (phi.at(i - 2, j) - 8.0 * phi.at(i - 1, j) + 8.0 * phi.at(i + 1, j) -
                             phi.at(i + 2, j)) / (12.0 * hx);
            const cplx ptt = (-phi.at(i, j - 2) + 16.0 * phi.at(i, j - 1) - 30.0 * phi.at(i, j) +
                              16.0 * phi.at(i, j + 1) - phi.at(i, j + 2)) / (12.0 * ht * ht);
            const cplx r = ihc * px + kin * ptt - k.c * fr[j] * phi.at(i, j);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

namespace {

// Potential term divided by hbar c, sampled on the grid at a station x.
using RateRow = std::function<std::vector<double>(double x)>;

Wavefunction strang(const Wavefunction& phi0, const RateRow& rate, double x_end,
                    std::size_t n_steps) {
    phi0.constants.validate();
    phi0.signal().validate();
    if (n_steps == 0) throw DomainError("split-step needs at least one step");
    if (!std::isfinite(x_end)) throw DomainError("x_end must be finite");
    const double h = (x_end - phi0.x) / static_cast<double>(n_steps);
    const std::size_t n = phi0.grid.n;
    const double beta = phi0.constants.beta();
    std::vector<cplx> kinetic(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w = phi0.grid.frequency(j);
        kinetic[j] = std::polar(1.0, -beta * h * w * w);
    }

    std::vector<cplx> psi = phi0.values;
    auto half_kick = [&](double x) {
        const auto r = rate(x);
        for (std::size_t j = 0; j < n; ++j) psi[j] *= std::polar(1.0, -0.5 * h * r[j]);
    };
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double xa = phi0.x + static_cast<double>(s) * h;
        const double xb = s + 1 == n_steps ? x_end : xa + h;
        half_kick(xa);
        auto spec = unitary_dft(std::span<const cplx>(psi));
        for (std::size_t j = 0; j < n; ++j) spec[j] *= kinetic[j];
        psi = unitary_idft(std::span<const cplx>(spec));
        half_kick(xb);
    }
    return {x_end, phi0.grid, std::move(psi), phi0.constants};
}

RateRow potential_rate(const PotentialSpec& p, const Wavefunction& phi0) {
    if (!p.is_real()) throw DomainError("split-step potential must be real");
    const double hc = phi0.constants.hbar * phi0.constants.c;
    const TimeGrid grid = phi0.grid;
    return [p, hc, grid](double x) {
        std::vector<double> r(grid.n);
        for (std::size_t j = 0; j < grid.n; ++j) r[j] = p.real_value(x, grid.at(j)) / hc;
        return r;
    };
}

PotentialSpec time_term(const RealFn& g) {
    if (!g) return PotentialSpec::zero();
    return PotentialSpec::time_profile(g);
}

}  // namespace

Wavefunction evolve_interacting(const Wavefunction& phi0, const InteractionMomentum& f,
                                double x_end, std::size_t n_steps) {
    const double hbar = phi0.constants.hbar;
    const Axis t = phi0.grid.axis();
    return strang(
        phi0,
        [&](double x) {
            auto r = f.row(x, t);
            for (auto& v : r) v /= hbar;
            return r;
        },
        x_end, n_steps);
}

Wavefunction evolve_with_potential(const Wavefunction& phi0, const PotentialSpec& p,
                                   double x_end, std::size_t n_steps) {
    return strang(phi0, potential_rate(p, phi0), x_end, n_steps);
}

Wavefunction dyson_first_order(const Wavefunction& phi0, const RealFn& g, const PotentialSpec& eta,
                               double eps, double x_end, const DysonOptions& opt) {
    phi0.constants.validate();
    if (!std::isfinite(eps)) throw DomainError("eps must be finite");
    if (opt.n_steps < 2 || opt.n_steps % 2 != 0) throw DomainError("Simpson rule needs an even step count");
    if (opt.substeps == 0) throw DomainError("substeps must be positive");
    if (!eta.is_real()) throw DomainError("perturbation eta must be real");
    const auto g_rate = potential_rate(time_term(g), phi0);
    const std::size_t n = phi0.grid.n;
    const std::size_t N = opt.n_steps;
    const double h = (x_end - phi0.x) / static_cast<double>(N);

    auto weight = [&](std::size_t k) {
        if (k == 0 || k == N) return h / 3.0;
        return (k % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    };
    auto eta_times = [&](double xi, const std::vector<cplx>& v, double w, std::vector<cplx>& acc) {
        for (std::size_t j = 0; j < n; ++j) acc[j] += w * eta.real_value(xi, phi0.grid.at(j)) * v[j];
    };

    Wavefunction psi = phi0;                       // U0(xi_k, x0) phi0
    Wavefunction acc{phi0.x, phi0.grid, std::vector<cplx>(n), phi0.constants};
    eta_times(phi0.x, psi.values, weight(0), acc.values);
    for (std::size_t k = 1; k <= N; ++k) {
        const double xi = k == N ? x_end : phi0.x + static_cast<double>(k) * h;
        psi = strang(psi, g_rate, xi, opt.substeps);
        acc = strang(acc, g_rate, xi, opt.substeps);
        eta_times(xi, psi.values, weight(k), acc.values);
    }
    const cplx coeff{0.0, -eps / (phi0.constants.hbar * phi0.constants.c)};
    for (std::size_t j = 0; j < n; ++j) psi.values[j] += coeff * acc.values[j];
    return psi;
}

Wavefunction dyson_reference(const Wavefunction& phi0, const RealFn& g, const PotentialSpec& eta,
                             double eps, double x_end, const DysonOptions& opt) {
    if (!eta.is_real()) throw DomainError("perturbation eta must be real");
    if (!std::isfinite(eps)) throw DomainError("eps must be finite");
    const PotentialSpec gt = time_term(g);
    const auto total = PotentialSpec::general(
        [gt, eta, eps](double x, double t) { return gt.real_value(x, t) + eps * eta.real_value(x, t); });
    return evolve_with_potential(phi0, total, x_end, opt.n_steps * opt.substeps);
}

double l2_distance(const Wavefunction& a, const Wavefunction& b) {
    if (a.values.size() != b.values.size()) throw DomainError("wavefunctions on different grids");
    double s = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(s * a.grid.dt);
}

}  // namespace carroll

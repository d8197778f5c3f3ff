#include "carroll/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace carroll {

DeltaSamples forward_delta(const PotentialSpec& v_car, const Axis& t, double anchor,
                           const PhysicalConstants& k, cplx c0, cplx c1) {
    k.validate();
    if (v_car.depends_on_x()) throw DomainError("forward map needs a time-only Carroll potential");
    if (t.n < 4) throw DomainError("forward map needs at least four samples");

    std::vector<cplx> v(t.n);
    for (std::size_t j = 0; j < t.n; ++j) v[j] = v_car.value(0.0, t.at(j));
    const auto theta = cumulative_integral_4th<cplx>(t, v, anchor);

    DeltaSamples out{t, {}, std::vector<cplx>(t.n)};
    const cplx factor{0.0, 2.0 / k.hbar};
    std::vector<cplx> phase(t.n);
    for (std::size_t j = 0; j < t.n; ++j) {
        phase[j] = std::exp(factor * theta[j]);
        out.delta_dot[j] = c0 * phase[j];
    }
    out.delta = cumulative_integral_4th<cplx>(t, phase, anchor);
    for (auto& d : out.delta) d = c1 + c0 * d;
    return out;
}

SchrodingerSamples vsch_from_vcar(const PotentialSpec& v_car, const DeltaSamples& delta,
                                  double e_sch, double e0, const PhysicalConstants& k) {
    k.validate();
    const std::size_t n = delta.t.n;
    if (delta.delta.size() != n || delta.delta_dot.size() != n) {
        throw DomainError("delta samples do not match their axis");
    }
    SchrodingerSamples out{delta.t.samples(), delta.delta, std::vector<cplx>(n)};
    const cplx i_hbar{0.0, k.hbar};
    for (std::size_t j = 0; j < n; ++j) {
        const double t = delta.t.at(j);
        const cplx dd = delta.delta_dot[j];
        if (std::abs(dd) < 1e-12) {
            throw NumericalError("map degenerate: delta_dot vanishes at t = " + std::to_string(t));
        }
        const cplx v = v_car.value(0.0, t);
        out.v_sch[j] = e_sch + (i_hbar * v_car.dt(0.0, t) + v * v - e0 * e0) / (2.0 * k.m * dd * dd);
    }
    return out;
}

std::vector<double> DualityMap::tau_parameter() const {
    std::vector<double> out(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) out[i] = ((tau[i] - offset) / unit).real();
    return out;
}

IndexRange interior_range(std::size_t n) {
    if (n < 8) throw DomainError("patch too short for an interior");
    const auto trim = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n - 1)));
    return {trim, n - 1 - trim};
}

namespace {

constexpr std::size_t kMinPatch = 16;
constexpr std::size_t kGuard = 2;

// Largest run of samples with no sign change of y, shrunk by the guard band
// next to each zero it touches.
IndexRange zero_free_patch(const std::vector<double>& y) {
    const std::size_t n = y.size();
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    if (ymax < 1e-300) throw NumericalError("second solution is identically small");

    auto positive = [&](std::size_t i) { return y[i] > 0.0; };
    IndexRange best{0, 0};
    std::size_t best_len = 0;
    std::size_t start = 0;
    while (start < n) {
        while (start < n && y[start] == 0.0) ++start;
        if (start >= n) break;
        std::size_t end = start;
        while (end + 1 < n && y[end + 1] != 0.0 && positive(end + 1) == positive(start)) ++end;
        std::size_t lo = start, hi = end;
        if (start > 0) lo += kGuard;
        if (end + 1 < n) hi = hi >= kGuard ? hi - kGuard : 0;
        if (hi > lo && hi - lo + 1 > best_len) {
            best = {lo, hi};
            best_len = hi - lo + 1;
        }
        start = end + 1;
    }
    if (best_len < kMinPatch) throw NumericalError("no monotone patch found");
    return best;
}

template <class T>
Curve<T> decimate(const Axis& axis, const std::vector<T>& v, std::size_t stride) {
    Curve<T> out;
    const std::size_t m = (v.size() - 1) / stride + 1;
    out.x = {axis.start, axis.step * static_cast<double>(stride), m};
    out.values.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.values[i] = v[i * stride];
    return out;
}

// Tabulate delta = tau^{-1} on a uniform parameter grid over the image.
void tabulate_delta(DualityMap& map) {
    const auto s_of_x = map.tau_parameter();
    const std::size_t n = s_of_x.size();
    const double s_lo = std::min(s_of_x.front(), s_of_x.back());
    const double s_hi = std::max(s_of_x.front(), s_of_x.back());
    map.s = make_closed_axis(s_lo, s_hi, n);
    map.delta.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double target = std::clamp(map.s.at(j), s_lo, s_hi);
        map.delta[j] = invert_monotone(map.x, s_of_x, target);
    }
}

}  // namespace

DualityMap inverse_tau(const PotentialSpec& v_sch, double e_sch, double e0,
                       const InverseOptions& opts, const PhysicalConstants& k) {
    k.validate();
    if (e0 == 0.0 || !std::isfinite(e0)) throw DomainError("E0 must be finite and non-zero");
    if (!(opts.x_hi > opts.x_lo)) throw DomainError("degenerate x-range");
    if (opts.pair_anchor > opts.x_lo) throw DomainError("pair anchor must not exceed x_lo");
    if (opts.n < kMinPatch) throw DomainError("inverse map needs at least 16 samples");
    if (v_sch.depends_on_t()) throw DomainError("inverse map needs a static Schrödinger potential");

    const double scale = 2.0 * k.m / (k.hbar * k.hbar);
    // y'' = q y, written as y'' + Q y = 0 with Q = -q.
    const RealFn neg_q = [&](double x) { return -scale * (v_sch.real_value(x, 0.0) - e_sch); };

    const double h = (opts.x_hi - opts.x_lo) / static_cast<double>(opts.n - 1);
    double a1 = 1.0, b1 = 0.0, a2 = 0.0, b2 = 1.0;
    if (opts.pair_anchor < opts.x_lo) {
        const auto steps = static_cast<std::size_t>(std::ceil((opts.x_lo - opts.pair_anchor) / h));
        const auto pre = integrate_fundamental_pair(neg_q, opts.pair_anchor, opts.x_lo, steps);
        a1 = pre.y1.back();
        b1 = pre.y1_prime.back();
        a2 = pre.y2.back();
        b2 = pre.y2_prime.back();
    }
    const auto u = integrate_fundamental_pair(neg_q, opts.x_lo, opts.x_hi, opts.n - 1);

    const std::size_t n = opts.n;
    std::vector<double> y1(n), y2(n), y1p(n), y2p(n);
    for (std::size_t i = 0; i < n; ++i) {
        y1[i] = a1 * u.y1[i] + b1 * u.y2[i];
        y1p[i] = a1 * u.y1_prime[i] + b1 * u.y2_prime[i];
        y2[i] = a2 * u.y1[i] + b2 * u.y2[i];
        y2p[i] = a2 * u.y1_prime[i] + b2 * u.y2_prime[i];
    }

    const auto patch = zero_free_patch(y2);
    const std::size_t m = patch.last - patch.first + 1;

    DualityMap map;
    map.e0 = e0;
    map.e_sch = e_sch;
    map.branch = Branch::standard;
    map.x = {opts.x_lo + static_cast<double>(patch.first) * h, h, m};
    map.x_lo = map.x.start;
    map.x_hi = map.x.back();
    auto slice = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(patch.first),
                                   v.begin() + static_cast<std::ptrdiff_t>(patch.last + 1));
    };
    map.y1 = slice(y1);
    map.y2 = slice(y2);
    map.y1_prime = slice(y1p);
    map.stride = std::max<std::size_t>(1, (m - 1) / std::max<std::size_t>(1, opts.derivative_intervals));
    if ((m - 1) / map.stride < kMinPatch) map.stride = 1;
    map.y2_prime = slice(y2p);
    map.sigma.resize(m);
    map.tau.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = map.y1[i] / map.y2[i];
        map.sigma[i] = s;
        map.tau[i] = k.hbar / e0 * std::atan(s);
    }
    tabulate_delta(map);
    return map;
}

DualityMap hermitian_branch(const DualityMap& map, const PhysicalConstants& k) {
    k.validate();
    if (map.branch == Branch::hermitian) throw DomainError("map is already on the Hermitian branch");
    const std::size_t m = map.sigma.size();
    const bool inside = std::abs(map.sigma.front()) < 1.0;
    for (const auto& s : map.sigma) {
        if (std::abs(s.imag()) > 0.0) throw DomainError("Hermitian branch needs a real sigma");
        const double a = std::abs(s.real());
        if (a == 1.0 || (a < 1.0) != inside) {
            throw DomainError("|sigma| = 1 inside the interval: Hermitian branch undefined");
        }
    }

    DualityMap out = map;
    out.branch = Branch::hermitian;
    out.unit = cplx{0.0, 1.0};
    const double scale = k.hbar / map.e0;
    // Principal artanh; outside the unit disc it equals artanh(1/sigma) + i pi/2 sign(sigma),
    // the constant part of which becomes the offset of t.
    const double sign = map.sigma.front().real() > 0.0 ? 1.0 : -1.0;
    out.offset = inside ? cplx{} : cplx{-scale * std::numbers::pi / 2.0 * sign, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
        const double s = map.sigma[i].real();
        out.sigma[i] = cplx{0.0, s};
        const double r = inside ? std::atanh(s) : std::atanh(1.0 / s);
        out.tau[i] = out.offset + out.unit * (scale * r);
    }
    tabulate_delta(out);
    return out;
}

Curve<double> schwarzian_residual(const DualityMap& map, const PotentialSpec& v_sch,
                                  const PhysicalConstants& k) {
    const auto sig = decimate(map.x, map.sigma, map.stride);
    const auto s = sampled_schwarzian(sig.values, sig.x.step);
    const double scale = 2.0 * k.m / (k.hbar * k.hbar);
    Curve<double> out{sig.x, std::vector<double>(s.size())};
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double q = scale * (v_sch.real_value(sig.x.at(i), 0.0) - map.e_sch);
        out.values[i] = std::abs(s[i] + 2.0 * q);
    }
    return out;
}

Curve<cplx> reconstruct_vsch(const DualityMap& map, const PhysicalConstants& k) {
    auto tau = decimate(map.x, map.tau, map.stride);
    const auto d = sampled_derivatives(tau.values, tau.x.step);
    for (std::size_t i = 0; i < tau.values.size(); ++i) {
        const cplx t1 = d.d1[i], t2 = d.d2[i], t3 = d.d3[i];
        const cplx dd1 = 1.0 / t1;
        const cplx dd2 = -t2 / (t1 * t1 * t1);
        const cplx dd3 = (3.0 * t2 * t2 - t1 * t3) / std::pow(t1, 5);
        const cplx ratio = dd2 / dd1;
        const cplx schw = dd3 / dd1 - 1.5 * ratio * ratio;
        const cplx inv_sq = 1.0 / (dd1 * dd1);
        tau.values[i] = map.e_sch + k.hbar * k.hbar / (4.0 * k.m) * schw * inv_sq -
                        map.e0 * map.e0 / (2.0 * k.m) * inv_sq;
    }
    return tau;
}

Curve<cplx> reconstruct_vcar(const DualityMap& map, const PhysicalConstants& k) {
    std::vector<cplx> delta(map.delta.begin(), map.delta.end());
    auto curve = decimate(map.s, delta, map.stride);
    const auto d = sampled_derivatives(curve.values, curve.x.step);
    const cplx pref{0.0, -k.hbar / 2.0};
    for (std::size_t j = 0; j < curve.values.size(); ++j) {
        if (std::abs(d.d1[j]) == 0.0) throw NumericalError("delta is stationary");
        curve.values[j] = pref * d.d2[j] / (map.unit * d.d1[j]);
    }
    return curve;
}

double roundtrip_residual(const DualityMap& map, const PotentialSpec& v_sch,
                          const PhysicalConstants& k) {
    const auto rec = reconstruct_vsch(map, k);
    const auto r = interior_range(rec.values.size());
    double vmax = 0.0, err = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) {
        const double target = v_sch.real_value(rec.x.at(i), 0.0);
        vmax = std::max(vmax, std::abs(target));
        err = std::max(err, std::abs(rec.values[i] - target));
    }
    return err / std::max(1.0, vmax);
}

double roundtrip_residual(const PotentialSpec& v_sch, double e_sch, double e0,
                          const InverseOptions& opts, const PhysicalConstants& k) {
    return roundtrip_residual(inverse_tau(v_sch, e_sch, e0, opts, k), v_sch, k);
}

InversionError inversion_error(const DualityMap& map) {
    const auto s_of_x = map.tau_parameter();
    InversionError e{0.0, 0.0};
    const auto rx = interior_range(map.x.n);
    for (std::size_t i = rx.first; i <= rx.last; ++i) {
        const double x = interpolate_cubic<double>(map.s, map.delta, s_of_x[i]);
        e.delta_of_tau = std::max(e.delta_of_tau, std::abs(x - map.x.at(i)));
    }
    const auto rs = interior_range(map.s.n);
    for (std::size_t j = rs.first; j <= rs.last; ++j) {
        const double s = interpolate_cubic<double>(map.x, s_of_x, map.delta[j]);
        e.tau_of_delta = std::max(e.tau_of_delta, std::abs(s - map.s.at(j)));
    }
    return e;
}

}  // namespace carroll

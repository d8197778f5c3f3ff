#include "carroll/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace carroll {

std::vector<double> Axis::samples() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i);
    return out;
}

Axis make_closed_axis(double lo, double hi, std::size_t n) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("degenerate interval");
    }
    if (n < 2) throw DomainError("axis needs at least two samples");
    return {lo, (hi - lo) / static_cast<double>(n - 1), n};
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

TimeGrid make_uniform_grid(double t_min, double t_max, std::size_t n) {
    if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_max > t_min)) {
        throw DomainError("degenerate interval [" + std::to_string(t_min) + ", " +
                          std::to_string(t_max) + ")");
    }
    if (n < 8 || !is_power_of_two(n)) {
        throw DomainError("grid size must be a power of two >= 8, got " + std::to_string(n));
    }
    return {t_min, t_max, n, (t_max - t_min) / static_cast<double>(n)};
}

std::vector<double> TimeGrid::samples() const {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = at(k);
    return out;
}

double TimeGrid::frequency(std::size_t j) const {
    const double dw = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    const auto jj = static_cast<double>(j);
    return j < n / 2 ? jj * dw : (jj - static_cast<double>(n)) * dw;
}

std::vector<double> TimeGrid::frequencies() const {
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = frequency(j);
    return w;
}

void ComplexSignal::validate() const {
    if (values.size() != grid.n) throw DomainError("signal length does not match grid");
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DomainError("signal contains non-finite samples");
        }
    }
}

double ComplexSignal::norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(acc * grid.dt);
}

// ---------------------------------------------------------------------------
// FFT

void fft_inplace(std::span<cplx> data, int sign) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) throw DomainError("FFT length must be a power of two");
    if (n == 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    // Twiddles are computed directly (not by recurrence) so rounding stays at
    // the level of a single sin/cos evaluation.
    std::vector<cplx> twiddle(n / 2);
    const double base = static_cast<double>(sign) * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double a = base * static_cast<double>(k);
        twiddle[k] = {std::cos(a), std::sin(a)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + half] * twiddle[k * stride];
                data[i + k] = u + v;
                data[i + k + half] = u - v;
            }
        }
    }
}

namespace {

std::vector<cplx> unitary_transform(std::span<const cplx> x, int sign) {
    std::vector<cplx> out(x.begin(), x.end());
    fft_inplace(out, sign);
    const double scale = 1.0 / std::sqrt(static_cast<double>(out.size()));
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace

std::vector<cplx> unitary_dft(std::span<const cplx> x) { return unitary_transform(x, -1); }
std::vector<cplx> unitary_idft(std::span<const cplx> x) { return unitary_transform(x, +1); }

Spectrum unitary_dft(const ComplexSignal& signal) {
    signal.validate();
    return {signal.grid, unitary_dft(std::span<const cplx>(signal.values))};
}

ComplexSignal unitary_idft(const Spectrum& spectrum) {
    if (spectrum.values.size() != spectrum.grid.n) {
        throw DomainError("spectrum length does not match grid");
    }
    return {spectrum.grid, unitary_idft(std::span<const cplx>(spectrum.values))};
}

std::vector<cplx> spectral_derivative(const ComplexSignal& signal, int order) {
    if (order < 0) throw DomainError("derivative order must be non-negative");
    auto spec = unitary_dft(std::span<const cplx>(signal.values));
    const auto& g = signal.grid;
    for (std::size_t j = 0; j < g.n; ++j) {
        const cplx iw{0.0, g.frequency(j)};
        cplx factor{1.0, 0.0};
        for (int p = 0; p < order; ++p) factor *= iw;
        spec[j] *= factor;
    }
    if (order % 2 == 1) spec[g.n / 2] = 0.0;
    return unitary_idft(spec);
}

// ---------------------------------------------------------------------------
// Fundamental pair

double FundamentalPair::wronskian_drift() const {
    double drift = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double w = y1[k] * y2_prime[k] - y1_prime[k] * y2[k];
        drift = std::max(drift, std::abs(w - wronskian));
    }
    return drift;
}

FundamentalPair::Value FundamentalPair::evaluate(double at) const {
    if (x.empty()) throw DomainError("empty fundamental pair");
    const double lo = x.front();
    const double hi = x.back();
    if (at < lo - 1e-12 * std::max(1.0, std::abs(lo)) ||
        at > hi + 1e-12 * std::max(1.0, std::abs(hi))) {
        throw DomainError("evaluation point outside the integrated interval");
    }
    auto k = static_cast<std::size_t>(std::floor((at - lo) / h));
    k = std::min(k, x.size() - 2);
    const double s = std::clamp((at - x[k]) / h, 0.0, 1.0);
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;

    // Quintic Hermite basis and its s-derivative.
    const std::array<double, 6> b = {
        1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
        s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
        0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5),
        0.5 * (s3 - 2.0 * s4 + s5),
        -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
        10.0 * s3 - 15.0 * s4 + 6.0 * s5,
    };
    const std::array<double, 6> db = {
        -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
        1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
        0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4),
        0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4),
        -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
        30.0 * s2 - 60.0 * s3 + 30.0 * s4,
    };

    auto interp = [&](const std::vector<double>& y, const std::vector<double>& yp,
                      double& value, double& slope) {
        const double ypp0 = -q[k] * y[k];
        const double ypp1 = -q[k + 1] * y[k + 1];
        const std::array<double, 6> c = {y[k], h * yp[k], h * h * ypp0, h * h * ypp1,
                                         h * yp[k + 1], y[k + 1]};
        value = 0.0;
        slope = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            value += b[i] * c[i];
            slope += db[i] * c[i];
        }
        slope /= h;
    };

    Value v{};
    interp(y1, y1_prime, v.y1, v.y1_prime);
    interp(y2, y2_prime, v.y2, v.y2_prime);
    return v;
}

FundamentalPair integrate_fundamental_pair(const RealFn& q, double x_lo, double x_hi,
                                           std::size_t n) {
    if (!(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
        throw DomainError("degenerate interval for fundamental pair");
    }
    if (n < 1) throw DomainError("fundamental pair needs at least one step");

    FundamentalPair pair;
    pair.x_lo = x_lo;
    pair.h = (x_hi - x_lo) / static_cast<double>(n);
    pair.x.resize(n + 1);
    pair.q.resize(n + 1);
    pair.y1.resize(n + 1);
    pair.y2.resize(n + 1);
    pair.y1_prime.resize(n + 1);
    pair.y2_prime.resize(n + 1);

    auto eval_q = [&](double at) {
        const double v = q(at);
        if (!std::isfinite(v)) {
            throw NumericalError("q(x) is not finite at x = " + std::to_string(at));
        }
        return v;
    };

    // State (y, y') for both solutions advanced together.
    std::array<double, 4> s = {1.0, 0.0, 0.0, 1.0};
    auto rhs = [](const std::array<double, 4>& u, double qv) {
        return std::array<double, 4>{u[1], -qv * u[0], u[3], -qv * u[2]};
    };

    const double h = pair.h;
    double q_lo = eval_q(x_lo);
    for (std::size_t k = 0; k <= n; ++k) {
        const double xk = x_lo + static_cast<double>(k) * h;
        pair.x[k] = xk;
        pair.q[k] = q_lo;
        pair.y1[k] = s[0];
        pair.y1_prime[k] = s[1];
        pair.y2[k] = s[2];
        pair.y2_prime[k] = s[3];
        if (k == n) break;

        const double q_mid = eval_q(xk + 0.5 * h);
        const double q_hi = eval_q(xk + h);
        const auto k1 = rhs(s, q_lo);
        std::array<double, 4> tmp{};
        for (int i = 0; i < 4; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
        const auto k2 = rhs(tmp, q_mid);
        for (int i = 0; i < 4; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
        const auto k3 = rhs(tmp, q_mid);
        for (int i = 0; i < 4; ++i) tmp[i] = s[i] + h * k3[i];
        const auto k4 = rhs(tmp, q_hi);
        for (int i = 0; i < 4; ++i) s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        q_lo = q_hi;
    }
    pair.wronskian = 1.0;
    return pair;
}

// ---------------------------------------------------------------------------
// Schwarzian

cplx schwarzian(const Jet3& jet, double singular_threshold) {
    if (std::abs(jet.d1) <= singular_threshold) {
        throw NumericalError("Schwarzian undefined at a critical point (f' = 0)");
    }
    const cplx r = jet.d2 / jet.d1;
    return jet.d3 / jet.d1 - 1.5 * r * r;
}

cplx schwarzian(const AnalyticFunction& f, double x) {
    return schwarzian(Jet3{f.d1(x), f.d2(x), f.d3(x)});
}

double schwarzian_step(double x) { return std::max(2.5e-3 * std::abs(x), 2.5e-3); }

cplx schwarzian(const ComplexFn& f, double x) {
    const double h = schwarzian_step(x);
    std::array<cplx, 9> g;
    for (int k = -4; k <= 4; ++k) g[static_cast<std::size_t>(k + 4)] = f(x + k * h);
    auto at = [&](int k) { return g[static_cast<std::size_t>(k + 4)]; };

    const cplx d1 = (-at(-3) + 9.0 * at(-2) - 45.0 * at(-1) + 45.0 * at(1) - 9.0 * at(2) + at(3)) /
                    (60.0 * h);
    const cplx d2 = (2.0 * at(-3) - 27.0 * at(-2) + 270.0 * at(-1) - 490.0 * at(0) +
                     270.0 * at(1) - 27.0 * at(2) + 2.0 * at(3)) /
                    (180.0 * h * h);
    constexpr std::array<double, 9> c3 = {-7.0 / 240, 3.0 / 10, -169.0 / 120, 61.0 / 30, 0.0,
                                          -61.0 / 30, 169.0 / 120, -3.0 / 10, 7.0 / 240};
    cplx d3 = 0.0;
    for (std::size_t i = 0; i < 9; ++i) d3 += c3[i] * g[i];
    d3 /= h * h * h;

    const double scale = std::max(1.0, std::abs(at(0)));
    return schwarzian(Jet3{d1, d2, d3}, 1e-10 * scale);
}

SampledDerivatives sampled_derivatives(std::span<const cplx> f, double h) {
    const std::size_t n = f.size();
    if (n < 5) throw DomainError("need at least five samples for third derivatives");
    SampledDerivatives out{std::vector<cplx>(n), std::vector<cplx>(n), std::vector<cplx>(n)};
    const double h2 = h * h, h3 = h2 * h;

    for (std::size_t i = 0; i < n; ++i) {
        const bool c1 = i >= 1 && i + 1 < n;
        const bool c2 = i >= 2 && i + 2 < n;
        const bool c3 = i >= 3 && i + 3 < n;
        auto F = [&](std::ptrdiff_t off) { return f[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + off)]; };

        if (c2) {
            out.d1[i] = (F(-2) - 8.0 * F(-1) + 8.0 * F(1) - F(2)) / (12.0 * h);
            out.d2[i] = (-F(-2) + 16.0 * F(-1) - 30.0 * F(0) + 16.0 * F(1) - F(2)) / (12.0 * h2);
        } else if (c1) {
            out.d1[i] = (F(1) - F(-1)) / (2.0 * h);
            out.d2[i] = (F(-1) - 2.0 * F(0) + F(1)) / h2;
        } else if (i == 0) {
            out.d1[i] = (-3.0 * F(0) + 4.0 * F(1) - F(2)) / (2.0 * h);
            out.d2[i] = (2.0 * F(0) - 5.0 * F(1) + 4.0 * F(2) - F(3)) / h2;
        } else {
            out.d1[i] = (3.0 * F(0) - 4.0 * F(-1) + F(-2)) / (2.0 * h);
            out.d2[i] = (2.0 * F(0) - 5.0 * F(-1) + 4.0 * F(-2) - F(-3)) / h2;
        }

        if (c3) {
            out.d3[i] = (-F(3) + 8.0 * F(2) - 13.0 * F(1) + 13.0 * F(-1) - 8.0 * F(-2) + F(-3)) /
                        (8.0 * h3);
        } else if (c2) {
            out.d3[i] = (F(2) - 2.0 * F(1) + 2.0 * F(-1) - F(-2)) / (2.0 * h3);
        } else if (i + 4 < n) {
            out.d3[i] = (-5.0 * F(0) + 18.0 * F(1) - 24.0 * F(2) + 14.0 * F(3) - 3.0 * F(4)) /
                        (2.0 * h3);
        } else {
            out.d3[i] = (5.0 * F(0) - 18.0 * F(-1) + 24.0 * F(-2) - 14.0 * F(-3) + 3.0 * F(-4)) /
                        (2.0 * h3);
        }
    }
    return out;
}

std::vector<cplx> sampled_schwarzian(std::span<const cplx> f, double h) {
    const auto d = sampled_derivatives(f, h);
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        out[i] = schwarzian(Jet3{d.d1[i], d.d2[i], d.d3[i]}, 0.0);
    }
    return out;
}

cplx central_derivative(const ComplexFn& f, double x, double h) {
    return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

// ---------------------------------------------------------------------------
// Monotone inversion

double invert_monotone(const RealFn& f, double lo, double hi, double target) {
    if (!(hi > lo)) throw DomainError("degenerate bracket");
    double a = lo, b = hi;
    double fa = f(a) - target;
    double fb = f(b) - target;
    if (!std::isfinite(fa) || !std::isfinite(fb)) throw NumericalError("non-finite function value");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) throw DomainError("target outside the range of the function");

    constexpr double plateau = 1e-14;
    int side = 0;
    for (int iter = 0; iter < 400; ++iter) {
        if (std::abs(fa) < plateau && std::abs(fb) < plateau) return 0.5 * (a + b);
        const double width = b - a;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)) ||
            width == 0.0) {
            break;
        }
        // Illinois step, falling back to bisection if it leaves the bracket
        // interior or the bracket is shrinking too slowly.
        double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b) || iter % 4 == 3) c = 0.5 * (a + b);
        const double fc = f(c) - target;
        if (!std::isfinite(fc)) throw NumericalError("non-finite function value");
        if (fc == 0.0) return c;
        if ((fc > 0.0) == (fb > 0.0)) {
            b = c;
            fb = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == +1) fb *= 0.5;
            side = +1;
        }
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

template <class T>
T interpolate_cubic(const Axis& axis, std::span<const T> samples, double at) {
    const std::size_t n = samples.size();
    if (n < 4) throw DomainError("cubic interpolation needs four samples");
    const double u = (at - axis.start) / axis.step;
    auto k = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 4);
    const double s = u - static_cast<double>(k);  // nodes at s = 0, 1, 2, 3
    const std::array<double, 4> w = {
        -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
        s * (s - 2.0) * (s - 3.0) / 2.0,
        -s * (s - 1.0) * (s - 3.0) / 2.0,
        s * (s - 1.0) * (s - 2.0) / 6.0,
    };
    T acc{};
    for (std::size_t i = 0; i < 4; ++i) acc += w[i] * samples[static_cast<std::size_t>(k) + i];
    return acc;
}

double invert_monotone(const Axis& axis, std::span<const double> samples, double target) {
    const std::size_t n = samples.size();
    if (n != axis.n || n < 4) throw DomainError("sampled inversion needs >= 4 samples on the axis");
    const bool increasing = samples[n - 1] > samples[0];
    for (std::size_t i = 1; i < n; ++i) {
        const bool up = samples[i] > samples[i - 1];
        if (up != increasing || samples[i] == samples[i - 1]) {
            throw DomainError("samples are not strictly monotone");
        }
    }
    const double fmin = std::min(samples.front(), samples.back());
    const double fmax = std::max(samples.front(), samples.back());
    if (target < fmin || target > fmax) throw DomainError("target outside sampled range");

    // Bracket on the samples, then solve on the local cubic.
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if ((samples[mid] < target) == increasing) lo = mid;
        else hi = mid;
    }
    if (samples[lo] == target) return axis.at(lo);
    if (samples[hi] == target) return axis.at(hi);
    auto interp = [&](double x) { return interpolate_cubic<double>(axis, samples, x); };
    return invert_monotone(interp, axis.at(lo), axis.at(hi), target);
}

// ---------------------------------------------------------------------------
// Cumulative quadrature

namespace {

template <class T>
T anchor_value(const Axis& axis, const std::vector<T>& F, std::span<const T> f, double anchor,
               bool fourth_order) {
    const double tol = 1e-12 * std::max(1.0, std::abs(axis.back()) + std::abs(axis.start));
    if (anchor < axis.start - tol || anchor > axis.back() + tol) {
        throw DomainError("anchor outside the integration grid");
    }
    const double u = (anchor - axis.start) / axis.step;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) < 1e-9) {
        return F[static_cast<std::size_t>(std::clamp(nearest, 0.0, static_cast<double>(axis.n - 1)))];
    }
    if (fourth_order) return interpolate_cubic<T>(axis, std::span<const T>(F), anchor);
    // Integrate the linear interpolant of f from the sample below the anchor.
    auto k = static_cast<std::size_t>(std::floor(u));
    k = std::min(k, axis.n - 2);
    const double s = (anchor - axis.at(k)) / axis.step;
    const T fa = f[k] + s * (f[k + 1] - f[k]);
    return F[k] + 0.5 * s * axis.step * (f[k] + fa);
}

}  // namespace

template <class T>
std::vector<T> cumulative_integral(const Axis& axis, std::span<const T> f, double anchor) {
    if (f.size() != axis.n || axis.n < 2) throw DomainError("samples do not match axis");
    std::vector<T> F(axis.n);
    F[0] = T{};
    for (std::size_t k = 1; k < axis.n; ++k) F[k] = F[k - 1] + 0.5 * axis.step * (f[k - 1] + f[k]);
    const T shift = anchor_value(axis, F, f, anchor, false);
    for (auto& v : F) v -= shift;
    return F;
}

template <class T>
std::vector<T> cumulative_integral_4th(const Axis& axis, std::span<const T> f, double anchor) {
    const std::size_t n = axis.n;
    if (f.size() != n || n < 4) throw DomainError("fourth-order quadrature needs >= 4 samples");
    const double h = axis.step;
    std::vector<T> F(n);
    F[0] = T{};
    for (std::size_t k = 0; k + 1 < n; ++k) {
        T piece;
        if (k == 0) {
            piece = (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) * (h / 24.0);
        } else if (k + 2 >= n) {
            piece = (f[k - 2] - 5.0 * f[k - 1] + 19.0 * f[k] + 9.0 * f[k + 1]) * (h / 24.0);
        } else {
            piece = (-f[k - 1] + 13.0 * f[k] + 13.0 * f[k + 1] - f[k + 2]) * (h / 24.0);
        }
        F[k + 1] = F[k] + piece;
    }
    const T shift = anchor_value(axis, F, f, anchor, true);
    for (auto& v : F) v -= shift;
    return F;
}

template double interpolate_cubic<double>(const Axis&, std::span<const double>, double);
template cplx interpolate_cubic<cplx>(const Axis&, std::span<const cplx>, double);
template std::vector<double> cumulative_integral<double>(const Axis&, std::span<const double>, double);
template std::vector<cplx> cumulative_integral<cplx>(const Axis&, std::span<const cplx>, double);
template std::vector<double> cumulative_integral_4th<double>(const Axis&, std::span<const double>,
                                                             double);
template std::vector<cplx> cumulative_integral_4th<cplx>(const Axis&, std::span<const cplx>, double);

}  // namespace carroll

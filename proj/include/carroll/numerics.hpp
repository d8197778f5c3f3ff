#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "carroll/error.hpp"

namespace carroll {

using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;

/// Closed uniform sampling: n points from start to start + (n-1)*step.
struct Axis {
    double start = 0.0;
    double step = 1.0;
    std::size_t n = 0;

    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
    double back() const { return at(n - 1); }
    std::vector<double> samples() const;
};

/// Axis with both endpoints included. Requires hi > lo and n >= 2.
Axis make_closed_axis(double lo, double hi, std::size_t n);

/// Periodic sampling of the t-axis used by every spectral routine.
/// n is a power of two, t_max itself is excluded.
struct TimeGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t n = 8;
    double dt = 0.125;

    double at(std::size_t k) const { return t_min + static_cast<double>(k) * dt; }
    double length() const { return t_max - t_min; }
    std::vector<double> samples() const;
    Axis axis() const { return {t_min, dt, n}; }

    /// Angular frequency of DFT bin j in wrap-around order:
    /// j < n/2 -> j*dw, otherwise (j-n)*dw, with dw = 2*pi/(n*dt).
    double frequency(std::size_t j) const;
    std::vector<double> frequencies() const;
};

TimeGrid make_uniform_grid(double t_min, double t_max, std::size_t n);

bool is_power_of_two(std::size_t n);

/// Complex samples over a TimeGrid.
struct ComplexSignal {
    TimeGrid grid;
    std::vector<cplx> values;

    /// Throws DomainError on length mismatch or non-finite samples.
    void validate() const;
    /// Discrete L2 norm, sqrt(dt * sum |v|^2).
    double norm() const;
};

/// DFT coefficients of a ComplexSignal, bins in wrap-around order.
struct Spectrum {
    TimeGrid grid;
    std::vector<cplx> values;

    std::vector<double> frequencies() const { return grid.frequencies(); }
};

/// In-place radix-2 FFT, unnormalized. Sign -1 is the forward transform
/// (e^{-i w t}), +1 the inverse. Length must be a power of two.
void fft_inplace(std::span<cplx> data, int sign);

/// Unitary DFT (1/sqrt(n) each direction).
std::vector<cplx> unitary_dft(std::span<const cplx> x);
std::vector<cplx> unitary_idft(std::span<const cplx> x);
Spectrum unitary_dft(const ComplexSignal& signal);
ComplexSignal unitary_idft(const Spectrum& spectrum);

/// d^order/dt^order of a periodic signal by multiplication with (i w)^order.
/// For odd orders the Nyquist bin is zeroed.
std::vector<cplx> spectral_derivative(const ComplexSignal& signal, int order = 1);

/// y1, y2 solving y'' + q(x) y = 0 with (y1, y1') = (1, 0) and
/// (y2, y2') = (0, 1) at x_lo.
struct FundamentalPair {
    double x_lo = 0.0;
    double h = 0.0;
    std::vector<double> x;
    std::vector<double> q;
    std::vector<double> y1, y2, y1_prime, y2_prime;
    /// Value of y1*y2' - y1'*y2 at x_lo (exactly 1 for the canonical data).
    double wronskian = 1.0;

    std::size_t size() const { return x.size(); }
    /// Largest |W(x_k) - W(x_lo)| over the samples.
    double wronskian_drift() const;

    struct Value {
        double y1, y2, y1_prime, y2_prime;
    };
    /// Quintic Hermite interpolation between samples (uses y'' = -q y).
    Value evaluate(double at) const;
};

/// Fixed-step classical RK4 with n steps (n + 1 samples) on [x_lo, x_hi].
FundamentalPair integrate_fundamental_pair(const RealFn& q, double x_lo, double x_hi,
                                           std::size_t n);

/// Derivatives f', f'', f''' at a point.
struct Jet3 {
    cplx d1, d2, d3;
};

/// {f, x} = f'''/f' - 3/2 (f''/f')^2 from a derivative jet.
/// Throws NumericalError when |f'| is below `singular_threshold`.
cplx schwarzian(const Jet3& jet, double singular_threshold = 1e-12);

/// Closed-form function with its first three derivatives.
struct AnalyticFunction {
    ComplexFn f, d1, d2, d3;
};

cplx schwarzian(const AnalyticFunction& f, double x);

/// Schwarzian by sixth-order central differences, step max(2.5e-3 |x|, 2.5e-3).
cplx schwarzian(const ComplexFn& f, double x);

/// Step used by the finite-difference Schwarzian at x.
double schwarzian_step(double x);

/// First three derivatives of uniformly sampled data. Fourth-order central
/// stencils where they fit, second-order central or one-sided otherwise.
struct SampledDerivatives {
    std::vector<cplx> d1, d2, d3;
};
SampledDerivatives sampled_derivatives(std::span<const cplx> f, double h);

/// Pointwise Schwarzian of uniformly sampled data.
std::vector<cplx> sampled_schwarzian(std::span<const cplx> f, double h);

/// Solve f(x) = target for strictly monotone f on [lo, hi] by bracketed
/// bisection with Illinois (regula falsi) refinement.
double invert_monotone(const RealFn& f, double lo, double hi, double target);

/// Same for uniformly sampled monotone data, interpolated with local cubics.
/// Throws DomainError when samples are not strictly monotone or target is out
/// of range.
double invert_monotone(const Axis& axis, std::span<const double> samples, double target);

/// Local four-point cubic (Lagrange) interpolation of uniform samples.
template <class T>
T interpolate_cubic(const Axis& axis, std::span<const T> samples, double at);

/// Trapezoid antiderivative of uniform samples, zero at `anchor`.
template <class T>
std::vector<T> cumulative_integral(const Axis& axis, std::span<const T> f, double anchor);

/// Fourth-order antiderivative (piecewise cubic rule), zero at `anchor`.
template <class T>
std::vector<T> cumulative_integral_4th(const Axis& axis, std::span<const T> f, double anchor);

/// Fourth-order central difference of a scalar function.
cplx central_derivative(const ComplexFn& f, double x, double h);

}  // namespace carroll

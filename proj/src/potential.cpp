#include "carroll/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>

namespace carroll {

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::zero: return "zero";
        case PotentialKind::constant: return "constant";
        case PotentialKind::time_profile: return "time_profile";
        case PotentialKind::space_profile: return "space_profile";
        case PotentialKind::separable: return "separable";
        case PotentialKind::general: return "general";
        case PotentialKind::tabulated: return "tabulated";
    }
    return "unknown";
}

namespace {

double fd_step(double at) { return 1e-3 * std::max(1.0, std::abs(at)); }

template <class F>
cplx fd4(const F& f, double at) {
    const double h = fd_step(at);
    return (f(at - 2.0 * h) - 8.0 * f(at - h) + 8.0 * f(at + h) - f(at + 2.0 * h)) / (12.0 * h);
}

cplx real_call(const RealFn& f, double at) { return {f(at), 0.0}; }

std::array<double, 4> lagrange4(double s) {
    return {-(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0, s * (s - 2.0) * (s - 3.0) / 2.0,
            -s * (s - 1.0) * (s - 3.0) / 2.0, s * (s - 1.0) * (s - 2.0) / 6.0};
}

// Lagrange weights and their first derivative on the four nodes around `at`.
struct Stencil4 {
    std::size_t k;
    std::array<double, 4> w;
    std::array<double, 4> dw;
};

Stencil4 stencil4(const Axis& axis, double at) {
    const double tol = 1e-12 * std::max(1.0, std::abs(axis.start) + std::abs(axis.back()));
    if (at < axis.start - tol || at > axis.back() + tol) {
        throw DomainError("potential evaluated outside its tabulated range");
    }
    const double u = (at - axis.start) / axis.step;
    auto k = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(axis.n) - 4);
    const double s = u - static_cast<double>(k);
    Stencil4 st{static_cast<std::size_t>(k), lagrange4(s), {}};
    // d/ds of each cubic weight, scaled to d/d(at).
    st.dw = {-(3.0 * s * s - 12.0 * s + 11.0) / 6.0, (3.0 * s * s - 10.0 * s + 6.0) / 2.0,
             -(3.0 * s * s - 8.0 * s + 3.0) / 2.0, (3.0 * s * s - 6.0 * s + 2.0) / 6.0};
    for (auto& v : st.dw) v /= axis.step;
    return st;
}

}  // namespace

PotentialSpec::PotentialSpec()
    : value_([](double, double) { return cplx{}; }),
      dx_([](double, double) { return cplx{}; }),
      dt_([](double, double) { return cplx{}; }) {}

PotentialSpec PotentialSpec::zero() { return {}; }

PotentialSpec PotentialSpec::constant(double v0) {
    PotentialSpec p = complex_constant({v0, 0.0});
    p.real_ = true;
    return p;
}

PotentialSpec PotentialSpec::complex_constant(cplx v0) {
    PotentialSpec p;
    p.kind_ = PotentialKind::constant;
    p.real_ = v0.imag() == 0.0;
    p.value_ = [v0](double, double) { return v0; };
    p.dx_ = [](double, double) { return cplx{}; };
    p.dt_ = [](double, double) { return cplx{}; };
    return p;
}

PotentialSpec PotentialSpec::time_profile(RealFn v, RealFn dv) {
    if (!v) throw DomainError("time profile needs a function");
    ComplexFn cv = [v](double t) { return real_call(v, t); };
    ComplexFn cdv;
    if (dv) cdv = [dv](double t) { return real_call(dv, t); };
    PotentialSpec p = complex_time_profile(std::move(cv), std::move(cdv));
    p.real_ = true;
    return p;
}

PotentialSpec PotentialSpec::complex_time_profile(ComplexFn v, ComplexFn dv) {
    if (!v) throw DomainError("time profile needs a function");
    PotentialSpec p;
    p.kind_ = PotentialKind::time_profile;
    p.real_ = false;
    p.value_ = [v](double, double t) { return v(t); };
    p.dx_ = [](double, double) { return cplx{}; };
    if (dv) {
        p.dt_ = [dv](double, double t) { return dv(t); };
    } else {
        p.dt_ = [v](double, double t) { return fd4(v, t); };
    }
    return p;
}

PotentialSpec PotentialSpec::time_samples(const Axis& t, std::vector<cplx> v) {
    if (v.size() != t.n || t.n < 4) throw DomainError("time samples need >= 4 values on the axis");
    const bool real = std::all_of(v.begin(), v.end(), [](cplx z) { return z.imag() == 0.0; });
    auto data = std::make_shared<const std::vector<cplx>>(std::move(v));
    PotentialSpec p;
    p.kind_ = PotentialKind::time_profile;
    p.real_ = real;
    p.value_ = [t, data](double, double at) {
        const auto st = stencil4(t, at);
        cplx acc{};
        for (std::size_t i = 0; i < 4; ++i) acc += st.w[i] * (*data)[st.k + i];
        return acc;
    };
    p.dx_ = [](double, double) { return cplx{}; };
    p.dt_ = [t, data](double, double at) {
        const auto st = stencil4(t, at);
        cplx acc{};
        for (std::size_t i = 0; i < 4; ++i) acc += st.dw[i] * (*data)[st.k + i];
        return acc;
    };
    return p;
}

PotentialSpec PotentialSpec::space_profile(RealFn v, RealFn dv) {
    if (!v) throw DomainError("space profile needs a function");
    PotentialSpec p;
    p.kind_ = PotentialKind::space_profile;
    p.real_ = true;
    p.value_ = [v](double x, double) { return real_call(v, x); };
    if (dv) {
        p.dx_ = [dv](double x, double) { return real_call(dv, x); };
    } else {
        p.dx_ = [v](double x, double) { return fd4([&](double s) { return real_call(v, s); }, x); };
    }
    p.dt_ = [](double, double) { return cplx{}; };
    return p;
}

PotentialSpec PotentialSpec::separable(RealFn a, RealFn b, RealFn da, RealFn db) {
    if (!a || !b) throw DomainError("separable potential needs both factors");
    if (!da) da = [a](double x) { return fd4(a, x).real(); };
    if (!db) db = [b](double t) { return fd4(b, t).real(); };
    PotentialSpec p;
    p.kind_ = PotentialKind::separable;
    p.real_ = true;
    p.value_ = [a, b](double x, double t) { return cplx{a(x) * b(t), 0.0}; };
    p.dx_ = [da, b](double x, double t) { return cplx{da(x) * b(t), 0.0}; };
    p.dt_ = [a, db](double x, double t) { return cplx{a(x) * db(t), 0.0}; };
    return p;
}

PotentialSpec PotentialSpec::general(std::function<double(double, double)> v,
                                     std::function<double(double, double)> dvx,
                                     std::function<double(double, double)> dvt) {
    if (!v) throw DomainError("general potential needs a function");
    PotentialSpec p;
    p.kind_ = PotentialKind::general;
    p.real_ = true;
    p.value_ = [v](double x, double t) { return cplx{v(x, t), 0.0}; };
    if (dvx) {
        p.dx_ = [dvx](double x, double t) { return cplx{dvx(x, t), 0.0}; };
    } else {
        p.dx_ = [v](double x, double t) { return fd4([&](double s) { return cplx{v(s, t), 0.0}; }, x); };
    }
    if (dvt) {
        p.dt_ = [dvt](double x, double t) { return cplx{dvt(x, t), 0.0}; };
    } else {
        p.dt_ = [v](double x, double t) { return fd4([&](double s) { return cplx{v(x, s), 0.0}; }, t); };
    }
    return p;
}

PotentialSpec PotentialSpec::tabulated(Field2D samples) {
    samples.validate();
    if (samples.nx() < 4 || samples.nt() < 4) {
        throw DomainError("tabulated potential needs at least 4x4 samples");
    }
    const bool real = std::all_of(samples.values.begin(), samples.values.end(),
                                  [](cplx z) { return z.imag() == 0.0; });
    if (!real) throw DomainError("tabulated potentials must be real-valued");
    auto data = std::make_shared<const Field2D>(std::move(samples));

    auto eval = [data](double x, double t, int dxo, int dto) {
        const auto sx = stencil4(data->x_axis, x);
        const auto st = stencil4(data->t_axis, t);
        const auto& wx = dxo ? sx.dw : sx.w;
        const auto& wt = dto ? st.dw : st.w;
        cplx acc{};
        for (std::size_t a = 0; a < 4; ++a) {
            cplx row{};
            for (std::size_t b = 0; b < 4; ++b) row += wt[b] * data->at(sx.k + a, st.k + b);
            acc += wx[a] * row;
        }
        return acc;
    };
    PotentialSpec p;
    p.kind_ = PotentialKind::tabulated;
    p.real_ = true;
    p.value_ = [eval](double x, double t) { return eval(x, t, 0, 0); };
    p.dx_ = [eval](double x, double t) { return eval(x, t, 1, 0); };
    p.dt_ = [eval](double x, double t) { return eval(x, t, 0, 1); };
    return p;
}

bool PotentialSpec::depends_on_x() const {
    return kind_ == PotentialKind::space_profile || kind_ == PotentialKind::separable ||
           kind_ == PotentialKind::general || kind_ == PotentialKind::tabulated;
}

bool PotentialSpec::depends_on_t() const {
    return kind_ == PotentialKind::time_profile || kind_ == PotentialKind::separable ||
           kind_ == PotentialKind::general || kind_ == PotentialKind::tabulated;
}

namespace {

cplx checked(cplx v, const char* what, double x, double t) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw NumericalError(std::string("potential ") + what + " is not finite at (x, t) = (" +
                             std::to_string(x) + ", " + std::to_string(t) + ")");
    }
    return v;
}

}  // namespace

cplx PotentialSpec::value(double x, double t) const { return checked(value_(x, t), "value", x, t); }
cplx PotentialSpec::dx(double x, double t) const { return checked(dx_(x, t), "x-derivative", x, t); }
cplx PotentialSpec::dt(double x, double t) const { return checked(dt_(x, t), "t-derivative", x, t); }

double PotentialSpec::real_value(double x, double t) const {
    if (!real_) throw DomainError("potential is complex-valued");
    return value(x, t).real();
}

double PotentialSpec::real_dx(double x, double t) const {
    if (!real_) throw DomainError("potential is complex-valued");
    return dx(x, t).real();
}

double PotentialSpec::real_dt(double x, double t) const {
    if (!real_) throw DomainError("potential is complex-valued");
    return dt(x, t).real();
}

}  // namespace carroll

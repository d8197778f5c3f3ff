#pragma once

#include <functional>
#include <string_view>

#include "carroll/field.hpp"
#include "carroll/numerics.hpp"

namespace carroll {

enum class PotentialKind { zero, constant, time_profile, space_profile, separable, general, tabulated };

std::string_view to_string(PotentialKind kind);

/// A scalar potential V(x, t) with its first partial derivatives.
///
/// Closed-form kinds carry optional analytic derivatives; when omitted the
/// derivative is taken by a fourth-order central difference with step
/// 1e-3 * max(1, |arg|). Tabulated potentials are interpolated with local
/// four-point Lagrange polynomials in each direction.
///
/// Real-valued unless built through one of the `complex_*` factories.
class PotentialSpec {
public:
    using Fn2 = std::function<cplx(double, double)>;

    PotentialSpec();

    static PotentialSpec zero();
    static PotentialSpec constant(double v0);
    static PotentialSpec complex_constant(cplx v0);
    static PotentialSpec time_profile(RealFn v, RealFn dv = {});
    static PotentialSpec complex_time_profile(ComplexFn v, ComplexFn dv = {});
    /// V(t) from samples on a uniform axis (cubic interpolation).
    static PotentialSpec time_samples(const Axis& t, std::vector<cplx> v);
    static PotentialSpec space_profile(RealFn v, RealFn dv = {});
    /// V(x, t) = a(x) b(t).
    static PotentialSpec separable(RealFn a, RealFn b, RealFn da = {}, RealFn db = {});
    /// Real closed-form V(x, t) with optional partial derivatives.
    static PotentialSpec general(std::function<double(double, double)> v,
                                 std::function<double(double, double)> dvx = {},
                                 std::function<double(double, double)> dvt = {});
    /// General V(x, t) from real samples.
    static PotentialSpec tabulated(Field2D samples);

    PotentialKind kind() const { return kind_; }
    bool is_real() const { return real_; }
    bool depends_on_x() const;
    bool depends_on_t() const;

    cplx value(double x, double t) const;
    cplx dx(double x, double t) const;
    cplx dt(double x, double t) const;

    /// Value of a real potential; throws DomainError on a complex one.
    double real_value(double x, double t) const;
    double real_dx(double x, double t) const;
    double real_dt(double x, double t) const;

private:
    PotentialKind kind_ = PotentialKind::zero;
    bool real_ = true;
    Fn2 value_;
    Fn2 dx_;
    Fn2 dt_;
};

}  // namespace carroll

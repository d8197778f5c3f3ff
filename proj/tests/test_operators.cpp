#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "carroll/operators.hpp"

using namespace carroll;

namespace {

double max_valid_error(const Field2D& got, const std::function<cplx(double, double)>& want) {
    double worst = 0.0;
    for (std::size_t i = 0; i < got.nx(); ++i) {
        for (std::size_t j = 0; j < got.nt(); ++j) {
            if (!got.valid(i, j)) continue;
            worst = std::max(worst, std::abs(got.at(i, j) - want(got.x_axis.at(i), got.t_axis.at(j))));
        }
    }
    return worst;
}

PotentialSpec sin_profile(double sign, double offset) {
    return PotentialSpec::time_profile([=](double t) { return sign * std::sin(t) + offset; },
                                       [=](double t) { return sign * std::cos(t); });
}

}  // namespace

TEST_CASE("H on a plane wave") {
    const PhysicalConstants k{1.0, 2.0, 1.5};
    const double kx = 0.8, w = 0.6;
    const Axis x = make_closed_axis(-2.0, 2.0, 161), t = make_closed_axis(-2.0, 2.0, 161);
    auto wave = [=](double a, double b) { return std::exp(cplx{0.0, kx * a - w * b}); };
    const auto psi = Field2D::sample(x, t, wave);
    const auto v = PotentialSpec::space_profile([](double a) { return a; }, [](double) { return 1.0; });
    const auto h = apply_H(psi, v, k);
    CHECK(h.margin == 2);
    const double err = max_valid_error(h, [&](double a, double b) {
        return (k.hbar * k.hbar * kx * kx / (2.0 * k.m) + a - k.hbar * w) * wave(a, b);
    });
    CHECK(err < 1e-7);
}

TEST_CASE("F on a plane wave with a time-dependent potential") {
    const PhysicalConstants k{1.0, 1.0, 2.0};
    const double kx = -0.5, w = 0.9;
    const Axis x = make_closed_axis(-2.0, 2.0, 161), t = make_closed_axis(-2.0, 2.0, 161);
    auto wave = [=](double a, double b) { return std::exp(cplx{0.0, kx * a - w * b}); };
    const auto f = apply_F(Field2D::sample(x, t, wave), sin_profile(1.0, 0.0), k);
    const double err = max_valid_error(f, [&](double a, double b) {
        const double v = std::sin(b), dv = std::cos(b);
        // E~ = -i hbar d/dt gives e^{-i w t} the eigenvalue -hbar w.
        const double e = -k.hbar * w;
        // (E - V)^2 with the derivative falling on V once.
        const cplx sq = e * e - 2.0 * e * v + v * v + cplx{0.0, k.hbar * dv};
        return (-k.hbar * k.c * kx - sq / (2.0 * k.mc2())) * wave(a, b);
    });
    CHECK(err < 1e-7);
}

TEST_CASE("operators reject undersized grids") {
    const Axis small = make_closed_axis(0.0, 1.0, 8);
    const auto psi = Field2D::zeros(small, small);
    CHECK_THROWS_AS(apply_H(psi, PotentialSpec::zero(), PhysicalConstants{}), DomainError);
}

TEST_CASE("commutator residuals") {
    const PhysicalConstants k;
    auto residual = [&](const PotentialSpec& vs, const PotentialSpec& vc, std::size_t n) {
        const Axis ax = make_closed_axis(-6.0, 6.0, n);
        const auto probes = default_probes(ax, ax);
        return commutator_residual(vs, vc, probes, k);
    };
    SUBCASE("free pair commutes") {
        CHECK(residual(PotentialSpec::zero(), PotentialSpec::zero(), 128) < 1e-9);
    }
    SUBCASE("opposite-sign time profile converges") {
        const double a = residual(sin_profile(1.0, 0.0), sin_profile(-1.0, 0.7), 64);
        const double b = residual(sin_profile(1.0, 0.0), sin_profile(-1.0, 0.7), 128);
        const double c = residual(sin_profile(1.0, 0.0), sin_profile(-1.0, 0.7), 256);
        CHECK(std::log2(a / b) > 2.0);
        CHECK(std::log2(b / c) > 2.0);
    }
    SUBCASE("same-sign time profile leaves a finite commutator") {
        // [H, F] reduces to a multiple of d_t(V_sch + V_car), non-zero here.
        const double a = residual(sin_profile(1.0, 0.0), sin_profile(1.0, 0.7), 128);
        const double b = residual(sin_profile(1.0, 0.0), sin_profile(1.0, 0.7), 256);
        CHECK(a > 1.0);
        CHECK(std::abs(a - b) < 0.05 * b);
    }
    SUBCASE("linear Schrödinger potential stays bounded away from zero") {
        const auto vx = PotentialSpec::space_profile([](double x) { return x; }, [](double) { return 1.0; });
        const double a = residual(vx, PotentialSpec::zero(), 128);
        const double b = residual(vx, PotentialSpec::zero(), 256);
        CHECK(b > 0.5);
        CHECK(std::abs(a - b) < 1e-2 * b);
    }
}

TEST_CASE("strong shared-solution check") {
    const PhysicalConstants k;
    // With V_car = -V_sch + C the Carroll dispersion needs -hbar c k = (E + C)^2 / 2mc^2.
    const double e = 0.8, c = 0.2;
    const double wavenumber = -(e + c) * (e + c) / (2.0 * k.mc2() * k.hbar * k.c);
    const auto ok = strong_shared_check(e, c, wavenumber, k);
    CHECK(ok.holds);
    CHECK(std::abs(ok.residual) < 1e-14);
    const auto bad = strong_shared_check(e, c, -wavenumber, k);
    CHECK_FALSE(bad.holds);
    CHECK(bad.residual == doctest::Approx(-2.0 * k.hbar * k.c * (-wavenumber)));
}

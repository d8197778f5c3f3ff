#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "carroll/numerics.hpp"

using namespace carroll;

namespace {

// Direct O(n^2) DFT with the same sign and normalization.
std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) {
            acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(j * k % n) / double(n));
        }
        out[k] = acc / std::sqrt(double(n));
    }
    return out;
}

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& z : v) z = {u(rng), u(rng)};
    return v;
}

}  // namespace

TEST_CASE("axis and grid construction") {
    const Axis a = make_closed_axis(-1.0, 1.0, 5);
    CHECK(a.step == doctest::Approx(0.5));
    CHECK(a.back() == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_closed_axis(1.0, 1.0, 5), DomainError);
    CHECK_THROWS_AS(make_closed_axis(0.0, 1.0, 1), DomainError);

    const TimeGrid g = make_uniform_grid(-4.0, 4.0, 16);
    CHECK(g.dt == doctest::Approx(0.5));
    CHECK(g.frequency(1) == doctest::Approx(2.0 * std::numbers::pi / 8.0));
    CHECK(g.frequency(15) == doctest::Approx(-2.0 * std::numbers::pi / 8.0));
    CHECK(g.frequency(8) == doctest::Approx(-std::numbers::pi / 0.5));
    CHECK_THROWS_AS(make_uniform_grid(0.0, 1.0, 12), DomainError);
}

TEST_CASE("fft matches the direct transform") {
    for (std::size_t n : {1u, 2u, 8u, 64u}) {
        const auto x = random_vector(n, 7 + n);
        const auto fast = unitary_dft(std::span<const cplx>(x));
        const auto slow = naive_dft(x);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-12);
    }
}

TEST_CASE("unitary transform round trip and Parseval") {
    const auto x = random_vector(256, 3);
    const auto X = unitary_dft(std::span<const cplx>(x));
    const auto back = unitary_idft(std::span<const cplx>(X));
    double ex = 0.0, eX = 0.0, err = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        ex += std::norm(x[k]);
        eX += std::norm(X[k]);
        err = std::max(err, std::abs(back[k] - x[k]));
    }
    CHECK(err < 1e-14);
    CHECK(std::abs(ex - eX) < 1e-12 * ex);
    std::vector<cplx> odd(12);
    CHECK_THROWS_AS(fft_inplace(odd, -1), DomainError);
}

TEST_CASE("spectral derivative of a resolved periodic signal") {
    const TimeGrid g = make_uniform_grid(0.0, 2.0 * std::numbers::pi, 64);
    ComplexSignal s{g, std::vector<cplx>(g.n)};
    for (std::size_t j = 0; j < g.n; ++j) s.values[j] = std::exp(cplx{0.0, 3.0 * g.at(j)}) + std::cos(g.at(j));
    const auto d1 = spectral_derivative(s, 1);
    const auto d2 = spectral_derivative(s, 2);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double t = g.at(j);
        CHECK(std::abs(d1[j] - (cplx{0.0, 3.0} * std::exp(cplx{0.0, 3.0 * t}) - std::sin(t))) < 1e-11);
        CHECK(std::abs(d2[j] - (-9.0 * std::exp(cplx{0.0, 3.0 * t}) - std::cos(t))) < 1e-10);
    }
}

TEST_CASE("fundamental pair for constant coefficient") {
    // y'' + y = 0 from x = 0: y1 = cos, y2 = sin.
    const auto p = integrate_fundamental_pair([](double) { return 1.0; }, 0.0, 3.0, 3000);
    CHECK(p.wronskian_drift() < 1e-8);
    double err = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        err = std::max(err, std::abs(p.y1[i] - std::cos(p.x[i])));
        err = std::max(err, std::abs(p.y2[i] - std::sin(p.x[i])));
    }
    CHECK(err < 1e-10);
    const auto v = p.evaluate(1.2345);
    CHECK(std::abs(v.y1 - std::cos(1.2345)) < 1e-10);
    CHECK(std::abs(v.y2_prime - std::cos(1.2345)) < 1e-10);
}

TEST_CASE("Schwarzian of closed forms") {
    // {tan x, x} = 2; {e^{kx}, x} = -k^2/2; Moebius images share the value.
    AnalyticFunction tanf{[](double x) { return cplx{std::tan(x)}; },
                          [](double x) { return cplx{1.0 / (std::cos(x) * std::cos(x))}; },
                          [](double x) { return cplx{2.0 * std::tan(x) / (std::cos(x) * std::cos(x))}; },
                          [](double x) {
                              const double s = 1.0 / (std::cos(x) * std::cos(x));
                              return cplx{2.0 * s * s + 4.0 * std::tan(x) * std::tan(x) * s};
                          }};
    CHECK(std::abs(schwarzian(tanf, 0.4) - 2.0) < 1e-12);

    const double k = 1.7;
    auto expf = [k](double x) { return cplx{std::exp(k * x)}; };
    CHECK(std::abs(schwarzian(ComplexFn(expf), 0.3) + k * k / 2.0) < 1e-6);
    auto mobius = [k](double x) { const double e = std::exp(k * x); return cplx{(2.0 * e + 1.0) / (e + 3.0)}; };
    CHECK(std::abs(schwarzian(ComplexFn(mobius), 0.3) + k * k / 2.0) < 1e-6);
    auto rotated = [k](double x) { return cplx{0.0, std::exp(k * x)}; };
    CHECK(std::abs(schwarzian(ComplexFn(rotated), 0.3) - schwarzian(ComplexFn(expf), 0.3)) < 1e-6);

    CHECK_THROWS_AS(schwarzian(Jet3{0.0, 1.0, 1.0}), NumericalError);
}

TEST_CASE("sampled derivatives and Schwarzian") {
    const double h = 2.5e-3;
    std::vector<cplx> f(401);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::tan(0.2 + h * double(i));
    const auto s = sampled_schwarzian(f, h);
    for (std::size_t i = 4; i + 4 < f.size(); ++i) CHECK(std::abs(s[i] - 2.0) < 1e-5);
    const auto d = sampled_derivatives(f, h);
    const double x = 0.2 + h * 100.0;  // 0.45
    CHECK(std::abs(d.d1[100] - 1.0 / (std::cos(x) * std::cos(x))) < 1e-6);
}

TEST_CASE("monotone inversion") {
    const double r = invert_monotone([](double x) { return x * x * x + x; }, 0.0, 2.0, 3.0);
    CHECK(std::abs(r * r * r + r - 3.0) < 1e-13);
    CHECK_THROWS_AS(invert_monotone([](double x) { return x; }, 0.0, 1.0, 5.0), DomainError);

    const Axis a = make_closed_axis(0.0, 2.0, 201);
    std::vector<double> v(a.n);
    for (std::size_t i = 0; i < a.n; ++i) v[i] = std::exp(a.at(i));
    CHECK(std::abs(invert_monotone(a, v, std::exp(1.234)) - 1.234) < 1e-8);
    v[50] = v[49];
    CHECK_THROWS_AS(invert_monotone(a, v, 2.0), DomainError);
}

TEST_CASE("interpolation and cumulative integrals") {
    const Axis a = make_closed_axis(0.0, 1.0, 11);
    std::vector<double> cubic(a.n);
    for (std::size_t i = 0; i < a.n; ++i) {
        const double x = a.at(i);
        cubic[i] = 2.0 * x * x * x - x + 1.0;
    }
    CHECK(interpolate_cubic<double>(a, cubic, 0.537) ==
          doctest::Approx(2.0 * 0.537 * 0.537 * 0.537 - 0.537 + 1.0).epsilon(1e-13));

    // Antiderivative of a cubic is exact under the fourth-order rule.
    const auto F = cumulative_integral_4th<double>(a, cubic, 0.3);
    for (std::size_t i = 0; i < a.n; ++i) {
        auto prim = [](double x) { return 0.5 * x * x * x * x - 0.5 * x * x + x; };
        CHECK(F[i] == doctest::Approx(prim(a.at(i)) - prim(0.3)).epsilon(1e-12));
    }
    // Trapezoid is exact for linear data.
    std::vector<cplx> lin(a.n);
    for (std::size_t i = 0; i < a.n; ++i) lin[i] = cplx{a.at(i), -2.0};
    const auto G = cumulative_integral<cplx>(a, lin, 0.0);
    CHECK(std::abs(G.back() - cplx{0.5, -2.0}) < 1e-14);
}

TEST_CASE("fourth-order rule converges at order four") {
    auto err = [](std::size_t n) {
        const Axis a = make_closed_axis(0.0, 2.0, n);
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(std::sin(a.at(i)));
        const auto F = cumulative_integral_4th<double>(a, f, 0.0);
        const auto Fref = [&] {
            const Axis b = make_closed_axis(0.0, 2.0, 8 * (n - 1) + 1);
            std::vector<double> g(b.n);
            for (std::size_t i = 0; i < b.n; ++i) g[i] = std::exp(std::sin(b.at(i)));
            return cumulative_integral_4th<double>(b, g, 0.0).back();
        }();
        return std::abs(F.back() - Fref);
    };
    CHECK(err(41) / err(81) > 12.0);
}

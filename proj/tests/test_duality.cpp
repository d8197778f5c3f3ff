#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carroll/duality.hpp"

using namespace carroll;

namespace {

const PhysicalConstants nat{};

double interior_max(const std::vector<double>& v) {
    const auto r = interior_range(v.size());
    double m = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) m = std::max(m, v[i]);
    return m;
}

PotentialSpec harmonic() {
    return PotentialSpec::space_profile([](double x) { return 0.5 * x * x; }, [](double x) { return x; });
}

}  // namespace

TEST_CASE("forward map for elementary Carroll potentials") {
    const Axis t = make_closed_axis(-1.0, 1.0, 801);
    SUBCASE("zero potential gives the identity map") {
        const auto d = forward_delta(PotentialSpec::zero(), t, 0.0, nat);
        for (std::size_t j = 0; j < t.n; ++j) {
            CHECK(std::abs(d.delta[j] - t.at(j)) < 1e-12);
            CHECK(std::abs(d.delta_dot[j] - 1.0) < 1e-14);
        }
    }
    SUBCASE("constant potential") {
        const double v0 = 0.4;
        const auto d = forward_delta(PotentialSpec::constant(v0), t, 0.0, nat);
        for (std::size_t j = 0; j < t.n; ++j) {
            const cplx e = std::exp(cplx{0.0, 2.0 * v0 * t.at(j)});
            CHECK(std::abs(d.delta_dot[j] - e) < 1e-10);
            CHECK(std::abs(d.delta[j] - (e - 1.0) / cplx{0.0, 2.0 * v0}) < 1e-10);
        }
    }
    SUBCASE("velocity profile v = 1 + t^2") {
        const cplx pref{0.0, -0.5};
        const auto v = PotentialSpec::complex_time_profile(
            [=](double s) { return pref * 2.0 * s / (1.0 + s * s); },
            [=](double s) { return pref * (2.0 - 2.0 * s * s) / ((1.0 + s * s) * (1.0 + s * s)); });
        const auto d = forward_delta(v, t, 0.0, nat);
        const auto s = vsch_from_vcar(v, d, 0.3, 1.0, nat);
        for (std::size_t j = 0; j < t.n; ++j) {
            const double tt = t.at(j), vv = 1.0 + tt * tt;
            CHECK(std::abs(d.delta_dot[j] - vv) < 1e-6);
            CHECK(std::abs(d.delta[j] - (tt + tt * tt * tt / 3.0)) < 1e-6);
            const double u = 2.0 * tt / vv, du = (2.0 - 2.0 * tt * tt) / (vv * vv);
            const double want = 0.3 + (0.5 * du - 0.25 * u * u - 1.0) / (2.0 * vv * vv);
            CHECK(std::abs(s.v_sch[j] - want) < 1e-6);
        }
    }
}

TEST_CASE("Schrödinger potential from the identity map") {
    const Axis t = make_closed_axis(0.0, 1.0, 101);
    const auto d = forward_delta(PotentialSpec::zero(), t, 0.0, nat);
    const double e0 = 1.3;
    const auto free = vsch_from_vcar(PotentialSpec::zero(), d, e0 * e0 / 2.0, e0, nat);
    const auto flat = vsch_from_vcar(PotentialSpec::zero(), d, 0.0, e0, nat);
    for (std::size_t j = 0; j < t.n; ++j) {
        CHECK(std::abs(free.v_sch[j]) < 1e-14);
        CHECK(std::abs(flat.v_sch[j] + e0 * e0 / 2.0) < 1e-14);
    }
}

TEST_CASE("free inverse map") {
    const auto map = inverse_tau(PotentialSpec::zero(), 0.0, 1.0, {}, nat);
    CHECK(map.branch == Branch::standard);
    // sigma = y1/y2 = 1/x for the pair anchored at 0.
    CHECK(std::abs(interpolate_cubic<cplx>(map.x, map.tau, 1.0).real() - std::numbers::pi / 4.0) < 1e-8);
    for (std::size_t i = 0; i < map.x.n; i += 97) {
        CHECK(std::abs(map.tau[i] - std::atan(1.0 / map.x.at(i))) < 1e-9);
    }
    CHECK(roundtrip_residual(map, PotentialSpec::zero(), nat) < 1e-6);
    CHECK(interior_max(schwarzian_residual(map, PotentialSpec::zero(), nat).values) < 1e-5);
    const auto e = inversion_error(map);
    CHECK(e.delta_of_tau < 1e-8);
    CHECK(e.tau_of_delta < 1e-8);
}

TEST_CASE("constant and harmonic targets") {
    SUBCASE("constant q") {
        // q = 2 (V - E) = 1: exponential pair, sigma a Moebius image of e^{2x}.
        const auto v = PotentialSpec::constant(0.5);
        const auto map = inverse_tau(v, 0.0, 1.0, {}, nat);
        CHECK(interior_max(schwarzian_residual(map, v, nat).values) < 1e-6);
        CHECK(roundtrip_residual(map, v, nat) < 1e-6);
        CHECK(inversion_error(map).delta_of_tau < 1e-8);
    }
    SUBCASE("harmonic") {
        const auto map = inverse_tau(harmonic(), 0.5, 1.0, {}, nat);
        CHECK(interior_max(schwarzian_residual(map, harmonic(), nat).values) < 1e-5);
        CHECK(roundtrip_residual(map, harmonic(), nat) < 1e-4);
        CHECK(inversion_error(map).delta_of_tau < 1e-8);
    }
}

TEST_CASE("patch trimming at zeros of y2") {
    // q = -4 (V - E = -2): y2 = sin(2x)/2 vanishes at pi/2, inside [0.5, 2.5].
    InverseOptions o;
    const auto map = inverse_tau(PotentialSpec::constant(-2.0), 0.0, 1.0, o, nat);
    const bool left = map.x_hi < std::numbers::pi / 2.0;
    const bool right = map.x_lo > std::numbers::pi / 2.0;
    CHECK((left || right));
    CHECK(roundtrip_residual(map, PotentialSpec::constant(-2.0), nat) < 1e-6);
    CHECK_THROWS_AS(inverse_tau(PotentialSpec::zero(), 0.0, 0.0, o, nat), DomainError);
}

TEST_CASE("Hermitian branch") {
    InverseOptions o;
    o.x_lo = 1.5;
    o.x_hi = 3.0;
    const auto map = inverse_tau(PotentialSpec::zero(), 0.0, 1.0, o, nat);
    const auto h = hermitian_branch(map, nat);
    CHECK(h.branch == Branch::hermitian);
    const auto a = schwarzian_residual(map, PotentialSpec::zero(), nat).values;
    const auto b = schwarzian_residual(h, PotentialSpec::zero(), nat).values;
    const auto r = interior_range(a.size());
    for (std::size_t i = r.first; i <= r.last; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);

    const auto vc = reconstruct_vcar(h, nat).values;
    const auto rv = interior_range(vc.size());
    for (std::size_t j = rv.first; j <= rv.last; ++j) {
        CHECK(std::abs(vc[j].imag()) <= 1e-6 * std::abs(vc[j].real()) + 1e-9);
    }
    CHECK(roundtrip_residual(h, PotentialSpec::zero(), nat) < 1e-6);

    // sigma = 1/x crosses 1 at x = 1.
    const auto crossing = inverse_tau(PotentialSpec::zero(), 0.0, 1.0, {}, nat);
    CHECK_THROWS_AS(hermitian_branch(crossing, nat), DomainError);
}

TEST_CASE("inversion identity and chain rule on the free closed form") {
    // tau = atan(1/x), delta = cot t, {delta, t} = 2, delta_dot = -1/sin^2 t.
    const ComplexFn tau = [](double x) { return cplx{std::atan(1.0 / x)}; };
    for (double x : {0.8, 1.3, 2.1}) {
        const double t = std::atan(1.0 / x);
        const double dd = -1.0 / (std::sin(t) * std::sin(t));
        const cplx st = schwarzian(tau, x);
        CHECK(std::abs(2.0 / (dd * dd) + st) < 1e-5);
        // {tan(tau), x} = {1/x, x} = 0 = {tan, u} tau'^2 + {tau, x}.
        const double tp = -1.0 / (1.0 + x * x);
        CHECK(std::abs(2.0 * tp * tp + st) < 1e-5);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "carroll/classical.hpp"

using namespace carroll;

namespace {

PotentialSpec coupled(double alpha) {
    return PotentialSpec::general([=](double x, double t) { return alpha * x * std::sin(t); },
                                  [=](double, double t) { return alpha * std::sin(t); },
                                  [=](double x, double t) { return alpha * x * std::cos(t); });
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("ultra-boost") {
    const PhysicalConstants k{1.0, 1.0, 1.0};
    const auto b = ultra_boost({2.0, 1.0}, k);
    CHECK(std::abs(b.E - cplx{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(b.P - cplx{0.0, -2.0}) < 1e-15);

    const PhysicalConstants kc{1.0, 1.0, 2.5};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int n = 0; n < 100; ++n) {
        const TwoMomentum p{{u(rng), u(rng)}, {u(rng), u(rng)}};
        const auto q = ultra_boost(p, kc);
        CHECK(std::abs(invariant(q, kc) - invariant(p, kc)) < 1e-12);
        const auto r = inverse_ultra_boost(q, kc);
        CHECK(std::abs(r.E - p.E) < 1e-13);
        CHECK(std::abs(r.P - p.P) < 1e-13);
        // Two boosts give the negated vector.
        const auto qq = ultra_boost(q, kc);
        CHECK(std::abs(qq.E + p.E) < 1e-13);
        CHECK(std::abs(qq.P + p.P) < 1e-13);
    }
}

TEST_CASE("dispersion branches") {
    const PhysicalConstants k;
    CHECK(carroll_dispersion(1.0, Root::positive, k) == doctest::Approx(std::sqrt(2.0)));
    CHECK(carroll_dispersion(1.0, Root::negative, k) == doctest::Approx(-std::sqrt(2.0)));
    CHECK(carroll_momentum(-std::sqrt(2.0), k) == doctest::Approx(1.0));
    CHECK_THROWS_AS(carroll_dispersion(-0.1, Root::positive, k), DomainError);

    const PhysicalConstants kk{1.3, 0.6, 2.0};
    for (double p0 : {0.1, 1.0, 4.0}) {
        const double e = carroll_dispersion(p0, Root::positive, kk);
        CHECK(kk.c * p0 == doctest::Approx(e * e / (2.0 * kk.mc2())));
    }
}

TEST_CASE("separable action solves the Hamilton-Jacobi equation") {
    const PhysicalConstants k{1.0, 1.5, 1.2};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> up(0.05, 3.0), ux(-5.0, 5.0);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        const SeparableAction s(up(rng), n % 2 ? Root::positive : Root::negative, 0.3, k);
        worst = std::max(worst, std::abs(s.hj_residual(ux(rng), ux(rng))) / std::max(1.0, s.p0()));
    }
    CHECK(worst <= 1e-13);

    const SeparableAction s(0.8, Root::positive, 0.0, k);
    CHECK(s.dS_dx(1.0, 2.0) == doctest::Approx(-0.8));
    CHECK(s.dS_dt(1.0, 2.0) == doctest::Approx(s.energy()));
    CHECK(s(0.0, 0.0) == 0.0);

    // dS/dp0 against a central difference in p0.
    const double h = 1e-5, x = 0.7, t = -1.1;
    const SeparableAction sp(0.8 + h, Root::positive, 0.0, k), sm(0.8 - h, Root::positive, 0.0, k);
    CHECK(s.dS_dp0(x, t) == doctest::Approx((sp(x, t) - sm(x, t)) / (2.0 * h)).epsilon(1e-8));

    // The trajectory is the level set dS/dp0 = beta, moving at the group velocity.
    const double beta = 0.4;
    for (double tt : {-2.0, 0.0, 3.0}) CHECK(s.dS_dp0(s.trajectory(tt, beta), tt) == doctest::Approx(beta));
    const double v = group_velocity(0.8, Root::positive, k);
    CHECK(s.trajectory(1.0, beta) - s.trajectory(0.0, beta) == doctest::Approx(v));
}

TEST_CASE("velocity relations round trip") {
    const PhysicalConstants k{1.0, 2.0, 0.9};
    for (double p0 : {0.2, 1.0, 7.5}) {
        for (Root r : {Root::positive, Root::negative}) {
            const double v = group_velocity(p0, r, k);
            CHECK(momentum_from_velocity(v, k) == doctest::Approx(p0));
            CHECK(energy_from_velocity(v, k) == doctest::Approx(carroll_dispersion(p0, r, k)));
        }
    }
    CHECK_THROWS_AS(group_velocity(0.0, Root::positive, k), DomainError);
    CHECK_THROWS_AS(momentum_from_velocity(0.0, k), DomainError);
}

TEST_CASE("ray tracing against closed forms") {
    const PhysicalConstants k;
    SUBCASE("time-only potential keeps q fixed") {
        const auto v = PotentialSpec::time_profile([](double t) { return std::sin(t); },
                                                   [](double t) { return std::cos(t); });
        const auto r = trace_ray(v, 0.0, 1.0, 0.5, 2.0, 64, k);
        for (const auto& s : r.samples) {
            CHECK(s.q == doctest::Approx(0.5));
            CHECK(std::abs(s.t - (1.0 - 0.5 * s.x)) < 1e-14);
        }
    }
    SUBCASE("linear potential") {
        const auto v = PotentialSpec::space_profile([](double x) { return x; }, [](double) { return 1.0; });
        const auto r = trace_ray(v, 0.0, 0.0, 0.0, 3.0, 32, k);
        for (const auto& s : r.samples) CHECK(std::abs(s.t + 0.5 * s.x * s.x) < 1e-13);
    }
    SUBCASE("quadratic potential gives a cubic ray") {
        const double kappa = 6.0;
        const auto v = PotentialSpec::space_profile([=](double x) { return 0.5 * kappa * x * x; },
                                                    [=](double x) { return kappa * x; });
        const auto r = trace_ray(v, 0.0, 0.0, 0.0, 2.0, 32, k);
        for (const auto& s : r.samples) {
            CHECK(std::abs(s.t + s.x * s.x * s.x) < 1e-12);
            CHECK(std::abs(s.q - 3.0 * s.x * s.x) < 1e-12);
        }
    }
    SUBCASE("coupled potential converges at fourth order") {
        auto end_t = [&](std::size_t n) { return trace_ray(coupled(0.5), 0.0, 0.2, 0.3, 3.0, n, k).samples.back().t; };
        const double ref = end_t(8192);
        const double ratio = std::abs(end_t(128) - ref) / std::abs(end_t(256) - ref);
        CHECK(ratio >= 14.0);
        const auto r = trace_ray(coupled(0.5), 0.0, 0.2, 0.3, 3.0, 64, k);
        for (const auto& s : r.samples) CHECK(std::abs(ray_constraint(s, k)) <= 1e-12);
        CHECK(r.samples.size() == 65);
        CHECK(r.samples.front().x == 0.0);
        CHECK(r.samples.back().x == doctest::Approx(3.0));
    }
    CHECK_THROWS_AS(trace_ray(PotentialSpec::zero(), 0.0, 0.0, 0.0, 1.0, 4, k), DomainError);
}

TEST_CASE("Picard iterates") {
    const PhysicalConstants k;
    SUBCASE("space-only potential is exact after one sweep") {
        const auto v = PotentialSpec::space_profile([](double x) { return 3.0 * x * x; },
                                                    [](double x) { return 6.0 * x; });
        const auto p = picard_iterate(v, 0.0, 0.0, 0.0, 2.0, 3, k, 65);
        REQUIRE(p.t.size() == 4);
        for (std::size_t i = 0; i < p.x.n; ++i) {
            const double x = p.x.at(i);
            CHECK(p.t[0][i] == 0.0);
            CHECK(std::abs(p.q[1][i] - 3.0 * x * x) < 1e-12);
        }
        for (std::size_t n = 1; n < p.t.size(); ++n) {
            for (std::size_t i = 0; i < p.x.n; ++i) CHECK(std::abs(p.t[n][i] + std::pow(p.x.at(i), 3)) < 1e-12);
        }
    }
    SUBCASE("iterates approach the traced ray") {
        const auto p = picard_iterate(coupled(0.5), 0.0, 0.2, 0.3, 1.0, 12, k);
        const auto r = trace_ray(coupled(0.5), 0.0, 0.2, 0.3, 1.0, 1024, k);
        CHECK(std::abs(p.t.back().back() - r.samples.back().t) < 1e-9);
        CHECK(std::abs(p.q.back().back() - r.samples.back().q) < 1e-9);
    }
    SUBCASE("second correction scales with the square of the coupling") {
        auto second = [&](double alpha) {
            const auto p = picard_iterate(coupled(alpha), 0.0, 0.2, 0.3, 1.0, 3, k, 257);
            return max_abs_diff(p.t[2], p.t[1]);
        };
        const double ratio = second(0.2) / second(0.1);
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
    CHECK_THROWS_AS(picard_iterate(PotentialSpec::zero(), 1.0, 0.0, 0.0, 0.0, 2, k), DomainError);
}

#include "carroll_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "carroll/classical.hpp"
#include "carroll/currents.hpp"
#include "carroll/duality.hpp"
#include "carroll/interaction.hpp"
#include "carroll/operators.hpp"
#include "carroll/propagator.hpp"

namespace carroll::app {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kSchema = "carroll-run/1";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string integer(std::size_t v) { return std::to_string(v); }

struct Table {
    std::string file;
    std::string formula;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        if (row.size() != header.size()) throw std::logic_error("row width does not match header");
        rows.push_back(std::move(row));
    }
};

// Writes to a sibling temporary file, then renames over the target.
void write_table(const fs::path& dir, const Table& t) {
    const fs::path target = dir / t.file;
    const fs::path tmp = dir / (t.file + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw DomainError("cannot write " + tmp.string());
        std::istringstream lines(t.formula);
        for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
        for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
        os << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
        if (!os.flush()) throw DomainError("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

// Config lookup with type checking; absent keys fall back to `def`.
template <class T>
T get(const json& block, const char* key, T def) {
    if (!block.is_object() || !block.contains(key)) return def;
    const json& v = block.at(key);
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw DomainError(std::string("config field '") + key + "' has the wrong type");
    }
}

double positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
    return v;
}

std::size_t at_least(std::size_t v, std::size_t lo, const char* what) {
    if (v < lo) throw DomainError(std::string(what) + " must be at least " + std::to_string(lo));
    return v;
}

struct Context {
    json cfg;
    PhysicalConstants k;
    fs::path out;
    double tol_scale = 1.0;
    std::uint64_t seed = 0;
    std::string target;
    std::ostream* log = nullptr;
    std::vector<std::string> breaches;

    json block(const char* name) const {
        return cfg.contains(name) ? cfg.at(name) : json::object();
    }
    /// Records a breach when |value| exceeds the scaled tolerance.
    void check(const std::string& what, double value, double tol) {
        const double lim = tol * tol_scale;
        if (!(std::abs(value) <= lim)) {
            breaches.push_back(what + " = " + num(value) + " exceeds " + num(lim));
        }
    }
    void emit(const Table& t) {
        write_table(out, t);
        *log << "wrote " << (out / t.file).string() << '\n';
    }
};

// Uniform double in [lo, hi) from the top 53 bits of the engine output.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    return lo + (hi - lo) * u;
}

double observed_order(double coarse, double fine) {
    return coarse > 0.0 && fine > 0.0 ? std::log2(coarse / fine) : 0.0;
}

// ---------------------------------------------------------------- commutator

void run_commutator(Context& ctx) {
    const json b = ctx.block("commutator");
    const auto sizes = get<std::vector<std::size_t>>(b, "sizes", {64, 128, 256});
    const double half = positive(get(b, "half_width", 6.0), "half_width");
    const double offset = get(b, "offset", 0.7);
    const double amp = get(b, "amplitude", 1.0);
    if (sizes.empty()) throw DomainError("commutator sizes must not be empty");

    const auto vt = PotentialSpec::time_profile([amp](double t) { return amp * std::sin(t); },
                                                [amp](double t) { return amp * std::cos(t); });
    struct Pairing {
        std::string name;
        PotentialSpec v_sch, v_car;
    };
    const std::vector<Pairing> pairings = {
        {"v_car=v+c", vt,
         PotentialSpec::time_profile([=](double t) { return amp * std::sin(t) + offset; },
                                     [=](double t) { return amp * std::cos(t); })},
        {"v_car=-v+c", vt,
         PotentialSpec::time_profile([=](double t) { return -amp * std::sin(t) + offset; },
                                     [=](double t) { return -amp * std::cos(t); })},
        {"v_sch=x", PotentialSpec::space_profile([](double x) { return x; }, [](double) { return 1.0; }),
         PotentialSpec::zero()},
        {"free", PotentialSpec::zero(), PotentialSpec::zero()},
    };

    Table t{"commutator.csv",
            "residual = max over probes of ||(H F - F H) psi|| / ||psi||\n"
            "H = -hbar^2/2m d_xx + V_sch - i hbar d_t ; F = i hbar c d_x - (-i hbar d_t - V_car)^2 / 2mc^2\n"
            "order = log2(residual(n/2) / residual(n))",
            {"pairing", "n", "residual", "order"},
            {}};
    for (const auto& p : pairings) {
        double prev = 0.0;
        for (std::size_t n : sizes) {
            at_least(n, 16, "commutator grid size");
            const Axis ax = make_closed_axis(-half, half, n);
            const auto probes = default_probes(ax, ax);
            const double r = commutator_residual(p.v_sch, p.v_car, probes, ctx.k);
            t.add({p.name, integer(n), num(r), prev > 0.0 ? num(observed_order(prev, r)) : ""});
            prev = r;
        }
    }
    ctx.emit(t);
}

// ------------------------------------------------------------------ duality

struct InverseTarget {
    PotentialSpec v;
    double e_sch;
    double e0;
    InverseOptions opts;
    double roundtrip_tol;
};

InverseTarget inverse_target(const std::string& name, const json& b) {
    InverseOptions o;
    o.x_lo = get(b, "x_lo", o.x_lo);
    o.x_hi = get(b, "x_hi", o.x_hi);
    o.n = at_least(get(b, "n", o.n), 64, "duality n");
    const double e0 = get(b, "e0", 1.0);
    if (e0 == 0.0 || !std::isfinite(e0)) throw DomainError("E0 must be non-zero");
    if (name == "free") {
        return {PotentialSpec::zero(), get(b, "e_sch", 0.0), e0, o, 1e-6};
    }
    if (name == "constant") {
        const double v0 = get(b, "v0", 0.5);
        return {PotentialSpec::constant(v0), get(b, "e_sch", 0.0), e0, o, 1e-6};
    }
    if (name == "harmonic") {
        const double w = positive(get(b, "omega", 1.0), "omega");
        const double x0 = get(b, "x0", 0.0);
        auto v = PotentialSpec::space_profile([w, x0](double x) { return 0.5 * w * w * (x - x0) * (x - x0); },
                                              [w, x0](double x) { return w * w * (x - x0); });
        return {v, get(b, "e_sch", 0.5), e0, o, 1e-4};
    }
    if (name == "coulomb-like") {
        const double a = get(b, "strength", 1.0);
        const double x0 = get(b, "x0", 0.0);
        if (!(o.x_lo > x0)) throw DomainError("coulomb-like patch must lie on x > x0");
        o.pair_anchor = get(b, "pair_anchor", x0 + 0.5 * (o.x_lo - x0));
        if (!(o.pair_anchor > x0 && o.pair_anchor <= o.x_lo)) {
            throw DomainError("coulomb-like pair anchor must lie in (x0, x_lo]");
        }
        auto v = PotentialSpec::space_profile([a, x0](double x) { return -a / (x - x0); },
                                              [a, x0](double x) { return a / ((x - x0) * (x - x0)); });
        return {v, get(b, "e_sch", -0.5), e0, o, 1e-4};
    }
    throw DomainError("unknown duality target '" + name + "'");
}

void run_duality_inverse(Context& ctx, const std::string& name, const json& b) {
    const auto tg = inverse_target(name, b);
    const auto map = inverse_tau(tg.v, tg.e_sch, tg.e0, tg.opts, ctx.k);
    const auto rec = reconstruct_vsch(map, ctx.k);
    const auto schw = schwarzian_residual(map, tg.v, ctx.k);

    Table t{"duality_" + name + ".csv",
            "q = (2m/hbar^2)(V_sch - E_sch) ; y'' = q y ; sigma = y1/y2 ; tau = (hbar/E0) atan(sigma)\n"
            "v_rec = E_sch + (hbar^2/4m){delta,t}/delta_dot^2 - (E0^2/2m)/delta_dot^2 at t = tau(x)\n"
            "schwarzian_residual = |{sigma,x} + 2q|",
            {"x", "tau_re", "tau_im", "sigma_re", "sigma_im", "v_target", "v_rec_re", "v_rec_im",
             "schwarzian_residual"},
            {}};
    for (std::size_t i = 0; i < rec.values.size(); ++i) {
        const double x = rec.x.at(i);
        const cplx tau = interpolate_cubic<cplx>(map.x, map.tau, x);
        const cplx sig = interpolate_cubic<cplx>(map.x, map.sigma, x);
        t.add({num(x), num(tau.real()), num(tau.imag()), num(sig.real()), num(sig.imag()),
               num(tg.v.real_value(x, 0.0)), num(rec.values[i].real()), num(rec.values[i].imag()),
               num(schw.values[i])});
    }
    ctx.emit(t);

    Table d{"duality_" + name + "_delta.csv", "delta = tau^{-1} on t = offset + unit * s",
            {"s", "t_re", "t_im", "delta"}, {}};
    for (std::size_t j = 0; j < map.s.n; j += map.stride) {
        const cplx tt = map.offset + map.unit * map.s.at(j);
        d.add({num(map.s.at(j)), num(tt.real()), num(tt.imag()), num(map.delta[j])});
    }
    ctx.emit(d);

    const double rt = roundtrip_residual(map, tg.v, ctx.k);
    const auto r = interior_range(schw.values.size());
    double sw = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) sw = std::max(sw, schw.values[i]);
    const auto inv = inversion_error(map);
    const bool has_unit_point = name == "free" && map.x_lo <= 1.0 && 1.0 <= map.x_hi;
    const double tau1 = has_unit_point ? interpolate_cubic<cplx>(map.x, map.tau, 1.0).real() : 0.0;

    Table s{"duality_" + name + "_summary.csv",
            "roundtrip = max |v_rec - v_target| / max(1, max |v_target|) over the interior\n"
            "tau_at_1 = tau(1), free case closed form atan(1) = pi/4",
            {"target", "x_lo", "x_hi", "roundtrip", "schwarzian_max", "delta_of_tau", "tau_of_delta",
             "tau_at_1"},
            {}};
    s.add({name, num(map.x_lo), num(map.x_hi), num(rt), num(sw), num(inv.delta_of_tau),
           num(inv.tau_of_delta), has_unit_point ? num(tau1) : ""});
    ctx.emit(s);

    ctx.check(name + " roundtrip", rt, tg.roundtrip_tol);
    ctx.check(name + " schwarzian residual", sw, 1e-5);
    ctx.check(name + " delta(tau(x)) - x", inv.delta_of_tau, 1e-8);
    if (has_unit_point) ctx.check("free tau(1) - pi/4", tau1 - std::numbers::pi / 4.0, 1e-8);
}

// V_car = -(i hbar/2) v'/v for v(t) = 1 + t^2, pushed through the forward map.
void run_duality_velocity(Context& ctx, const json& b) {
    const double hbar = ctx.k.hbar;
    const double e0 = get(b, "e0", 1.0);
    const double e_sch = get(b, "e_sch", 0.0);
    const double t_lo = get(b, "t_lo", -1.0), t_hi = get(b, "t_hi", 1.0);
    const std::size_t n = at_least(get<std::size_t>(b, "n", 2001), 16, "velocity-profile n");
    auto v = [](double t) { return 1.0 + t * t; };
    auto u = [](double t) { return 2.0 * t / (1.0 + t * t); };  // v'/v
    auto du = [](double t) { return (2.0 - 2.0 * t * t) / ((1.0 + t * t) * (1.0 + t * t)); };
    const cplx pref{0.0, -hbar / 2.0};
    const auto v_car = PotentialSpec::complex_time_profile([=](double t) { return pref * u(t); },
                                                           [=](double t) { return pref * du(t); });
    const Axis ax = make_closed_axis(t_lo, t_hi, n);
    const double anchor = std::clamp(0.0, t_lo, t_hi);
    const auto d = forward_delta(v_car, ax, anchor, ctx.k, cplx{v(anchor)}, 0.0);
    const auto s = vsch_from_vcar(v_car, d, e_sch, e0, ctx.k);

    Table t{"duality_velocity-profile.csv",
            "delta(t) = C1 + C0 int exp((2i/hbar) int V_car) ; V_car = -(i hbar/2) v'/v, v = 1 + t^2\n"
            "v_sch = E_sch + (i hbar V_car' + V_car^2 - E0^2) / (2 m delta_dot^2)\n"
            "v_sch_velocity = E_sch + (hbar^2/2 (v'/v)' - hbar^2/4 (v'/v)^2 - E0^2) / (2 m v^2)",
            {"t", "x_re", "x_im", "delta_dot_re", "delta_dot_im", "v", "v_sch_re", "v_sch_im",
             "v_sch_velocity"},
            {}};
    double dd_err = 0.0, vs_err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double tt = ax.at(j);
        const double vv = v(tt);
        const double vel = e_sch + (0.5 * hbar * hbar * du(tt) - 0.25 * hbar * hbar * u(tt) * u(tt) - e0 * e0) /
                                       (2.0 * ctx.k.m * vv * vv);
        dd_err = std::max(dd_err, std::abs(d.delta_dot[j] - vv));
        vs_err = std::max(vs_err, std::abs(s.v_sch[j] - vel));
        t.add({num(tt), num(s.x[j].real()), num(s.x[j].imag()), num(d.delta_dot[j].real()),
               num(d.delta_dot[j].imag()), num(vv), num(s.v_sch[j].real()), num(s.v_sch[j].imag()),
               num(vel)});
    }
    ctx.emit(t);
    ctx.check("velocity-profile |delta_dot - v|", dd_err, 1e-6);
    ctx.check("velocity-profile |v_sch - velocity form|", vs_err, 1e-6);
}

void run_duality(Context& ctx) {
    const json b = ctx.block("duality");
    std::string target = ctx.target.empty() ? get<std::string>(b, "target", "free") : ctx.target;
    if (target == "velocity-profile") {
        run_duality_velocity(ctx, b);
    } else {
        run_duality_inverse(ctx, target, b);
    }
}

// ----------------------------------------------------------------- gaussian

void run_gaussian(Context& ctx) {
    const json b = ctx.block("gaussian");
    GaussianParams p{get(b, "sigma", 1.0), get(b, "t0", 0.0), get(b, "omega0", 1.0)};
    p.validate();
    const double x_max = get(b, "x_max", 5.0);
    if (!std::isfinite(x_max)) throw DomainError("x_max must be finite");
    const std::size_t stations = at_least(get<std::size_t>(b, "stations", 11), 2, "stations");
    const std::size_t n = get<std::size_t>(b, "n", 1024);
    if (!is_power_of_two(n) || n < 16) throw DomainError("gaussian n must be a power of two >= 16");
    const double span = positive(get(b, "span", 20.0), "span");
    const auto& k = ctx.k;
    const double e0 = k.hbar * p.omega0;

    Table t{"gaussian.csv",
            "sigma_eff = sqrt(sigma^2 + (hbar x / (m c^3 sigma))^2) ; measured width = sqrt(2 Var_t |psi|^2)\n"
            "centroid_predicted = t0 + E0 x / (m c^3), E0 = hbar omega0\n"
            "max_abs_error = max_t |evolve_free(psi(0), x) - psi_exact(x)|",
            {"x", "sigma_eff_predicted", "sigma_eff_measured", "ratio", "centroid_measured",
             "centroid_predicted", "max_abs_error", "norm_ratio"},
            {}};
    std::vector<double> xs, cs;
    double worst_ratio = 0.0, worst_err = 0.0, worst_c = 0.0;
    for (std::size_t i = 0; i < stations; ++i) {
        const double x = x_max * static_cast<double>(i) / static_cast<double>(stations - 1);
        const double se = effective_width(p.sigma, x, k);
        const double tc = carrier_center(p.t0, e0, x, k);
        const TimeGrid g = make_uniform_grid(tc - span * se, tc + span * se, n);
        const auto psi0 = gaussian_exact(p, 0.0, g, k);
        const auto psi = evolve_free(psi0, x);
        const auto exact = gaussian_exact(p, x, g, k);
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(psi.values[j] - exact.values[j]));
        const auto m = moments(psi);
        const double ratio = m.width() / se;
        worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
        worst_err = std::max(worst_err, err);
        worst_c = std::max(worst_c, std::abs(m.centroid - tc));
        xs.push_back(x);
        cs.push_back(m.centroid);
        t.add({num(x), num(se), num(m.width()), num(ratio), num(m.centroid), num(tc), num(err),
               num(psi.norm() / psi0.norm())});
    }
    ctx.emit(t);

    // Least-squares slope of the measured centroid.
    double mx = 0.0, mc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], mc += cs[i];
    mx /= static_cast<double>(xs.size());
    mc /= static_cast<double>(xs.size());
    double sxx = 0.0, sxc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxc += (xs[i] - mx) * (cs[i] - mc);
    }
    const double slope = sxx > 0.0 ? sxc / sxx : 0.0;
    const double predicted = e0 / k.mc3();
    Table d{"gaussian_drift.csv", "slope_predicted = E0 / (m c^3) = 2 beta omega0",
            {"slope_measured", "slope_predicted"}, {}};
    d.add({num(slope), num(predicted)});
    ctx.emit(d);

    // Unitarity over seeded random packets and steps.
    const std::size_t packets = get<std::size_t>(b, "packets", 100);
    std::mt19937_64 rng(ctx.seed);
    const TimeGrid ug = make_uniform_grid(-80.0, 80.0, 1024);
    Table u{"gaussian_unitarity.csv", "norm_ratio = ||evolve_free(psi, dx)|| / ||psi||",
            {"packet", "sigma", "t0", "omega0", "dx", "norm_ratio"}, {}};
    double worst_norm = 0.0;
    for (std::size_t i = 0; i < packets; ++i) {
        GaussianParams q{uniform(rng, 0.5, 2.0), uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
        const double dx = uniform(rng, -10.0, 10.0);
        const auto psi = gaussian_exact(q, 0.0, ug, k);
        const double r = evolve_free(psi, dx).norm() / psi.norm();
        worst_norm = std::max(worst_norm, std::abs(r - 1.0));
        u.add({integer(i), num(q.sigma), num(q.t0), num(q.omega0), num(dx), num(r)});
    }
    ctx.emit(u);

    ctx.check("gaussian width ratio - 1", worst_ratio, 1e-6);
    ctx.check("gaussian pointwise error", worst_err, 1e-8);
    ctx.check("gaussian centroid offset", worst_c, 1e-6);
    ctx.check("gaussian drift slope error", slope - predicted, 1e-6);
    ctx.check("unitarity norm ratio - 1", worst_norm, 1e-12);
}

// ----------------------------------------------------------------- currents

void run_currents(Context& ctx) {
    const json b = ctx.block("currents");
    GaussianParams p{get(b, "sigma", 1.0), get(b, "t0", 2.0), get(b, "omega0", 1.0)};
    p.validate();
    const double x_lo = get(b, "x_lo", 0.0), x_hi = get(b, "x_hi", 4.0);
    const double t_lo = get(b, "t_lo", -2.0), t_hi = get(b, "t_hi", 6.0);
    const double amp = get(b, "v_amplitude", 0.3);
    const auto sizes = get<std::vector<std::size_t>>(b, "sizes", {32, 64, 128, 256});
    if (sizes.empty()) throw DomainError("currents sizes must not be empty");
    const auto& k = ctx.k;
    const auto v = PotentialSpec::time_profile([amp](double t) { return amp * std::sin(t); },
                                               [amp](double t) { return amp * std::cos(t); });

    Table t{"currents.csv",
            "carroll = max |d_x |psi|^2 + d_t j_t|, j_t = (hbar/mc^3) Im(psi* psi_t) - V |psi|^2 / mc^3\n"
            "schrodinger = max |d_t' rho + d_x' J| after phi = exp(-(i/hbar) int V) psi and (x', t') = (c t, x / c)\n"
            "psi = exp((i/hbar) int_{t_lo}^t V) psi_free",
            {"potential", "n", "carroll_residual", "schrodinger_residual", "carroll_ratio",
             "schrodinger_ratio"},
            {}};
    double last_ratio = 0.0;
    for (const std::string name : {"free", "sin"}) {
        const PotentialSpec pot = name == "free" ? PotentialSpec::zero() : v;
        double pc = 0.0, ps = 0.0;
        for (std::size_t n : sizes) {
            at_least(n, 16, "currents grid size");
            const Axis x = make_closed_axis(x_lo, x_hi, n);
            const Axis tt = make_closed_axis(t_lo, t_hi, n);
            auto f = Field2D::sample(x, tt, [&](double a, double s) {
                const double theta = name == "free" ? 0.0 : amp * (std::cos(t_lo) - std::cos(s));
                return std::polar(1.0, theta / k.hbar) * gaussian_value(p, a, s, k);
            });
            const double rc = carroll_continuity_residual(f, pot, k);
            const double rs = continuity_equivalence(f, pot, t_lo, k);
            t.add({name, integer(n), num(rc), num(rs), pc > 0.0 ? num(pc / rc) : "",
                   ps > 0.0 ? num(ps / rs) : ""});
            if (ps > 0.0) last_ratio = ps / rs;
            pc = rc;
            ps = rs;
        }
        if (sizes.size() > 1 && !(last_ratio >= 3.5)) {
            ctx.breaches.push_back(name + " continuity refinement ratio " + num(last_ratio) + " below 3.5");
        }
    }
    ctx.emit(t);
}

// --------------------------------------------------------------------- rays

void run_rays(Context& ctx) {
    const json b = ctx.block("rays");
    const std::string kind = get<std::string>(b, "case", "linear");
    const double x0 = get(b, "x0", 0.0), t0 = get(b, "t0", 0.0);
    const double x_end = get(b, "x_end", 2.0);
    const double p_t0 = get(b, "p_t0", 0.0);
    const std::size_t n_steps = at_least(get<std::size_t>(b, "n_steps", 64), 16, "n_steps");
    const std::size_t n_picard = get<std::size_t>(b, "picard", 3);
    const double mc3 = ctx.k.mc3();

    PotentialSpec v;
    std::function<double(double)> exact;
    std::string formula;
    if (kind == "time-only") {
        const double a = get(b, "amplitude", 0.5);
        v = PotentialSpec::time_profile([a](double t) { return a * std::sin(t); },
                                        [a](double t) { return a * std::cos(t); });
        const double q0 = p_t0 + v.real_value(x0, t0);
        exact = [=](double x) { return t0 - q0 * (x - x0) / mc3; };
        formula = "V_car = a sin t ; t_exact = t0 - q0 (x - x0) / mc^3";
    } else if (kind == "linear") {
        const double v0 = get(b, "v0", 0.0), alpha = get(b, "alpha", 1.0);
        v = PotentialSpec::space_profile([=](double x) { return v0 + alpha * x; },
                                         [=](double) { return alpha; });
        exact = [=](double x) {
            return t0 - (p_t0 + v0) * (x - x0) / mc3 - alpha * (x * x - x0 * x0) / (2.0 * mc3);
        };
        formula = "V_car = V0 + alpha x ; t_exact = t0 - (p_t0 + V0)(x - x0)/mc^3 - alpha (x^2 - x0^2)/(2 mc^3)";
    } else if (kind == "quadratic") {
        const double kappa = get(b, "kappa", 6.0);
        v = PotentialSpec::space_profile([=](double x) { return 0.5 * kappa * x * x; },
                                         [=](double x) { return kappa * x; });
        exact = [=](double x) {
            return t0 - p_t0 * (x - x0) / mc3 - kappa * (x * x * x - x0 * x0 * x0) / (6.0 * mc3);
        };
        formula = "V_car = kappa x^2 / 2 ; t_exact = t0 - p_t0 (x - x0)/mc^3 - kappa (x^3 - x0^3)/(6 mc^3)";
    } else if (kind == "coupled") {
        const double a = get(b, "amplitude", 0.5);
        v = PotentialSpec::general([a](double x, double t) { return a * std::sin(x) * std::cos(t); },
                                   [a](double x, double t) { return a * std::cos(x) * std::cos(t); },
                                   [a](double x, double t) { return -a * std::sin(x) * std::sin(t); });
        formula = "V_car = a sin x cos t ; no closed form";
    } else {
        throw DomainError("unknown ray case '" + kind + "'");
    }
    const double q0 = p_t0 + v.real_value(x0, t0);
    const auto ray = trace_ray(v, x0, t0, q0, x_end, n_steps, ctx.k);
    std::vector<std::vector<double>> picard;
    if (x_end > x0 && n_picard > 0) {
        picard = picard_iterate(v, x0, t0, q0, x_end, n_picard, ctx.k, n_steps + 1).t;
    }

    Table t{"rays_" + kind + ".csv",
            formula + "\ndt/dx = -q / mc^3 ; dq/dx = d_x V_car(x, t(x)) ; p_x = q^2 / (2 mc^3)\n"
                      "constraint = -c p_x + q^2 / (2 m c^2) ; t_picard_n = n-th Picard iterate",
            {"x", "t", "q", "p_x", "constraint", "t_exact"},
            {}};
    for (std::size_t n = 1; n < picard.size(); ++n) t.header.push_back("t_picard_" + integer(n));
    double worst = 0.0, worst_c = 0.0;
    for (std::size_t i = 0; i < ray.samples.size(); ++i) {
        const auto& s = ray.samples[i];
        const double c = ray_constraint(s, ctx.k);
        worst_c = std::max(worst_c, std::abs(c));
        std::vector<std::string> row{num(s.x), num(s.t), num(s.q), num(s.p_x), num(c)};
        if (exact) {
            const double te = exact(s.x);
            worst = std::max(worst, std::abs(te - s.t));
            row.push_back(num(te));
        } else {
            row.emplace_back();
        }
        for (std::size_t n = 1; n < picard.size(); ++n) row.push_back(num(picard[n][i]));
        t.add(std::move(row));
    }
    ctx.emit(t);
    if (exact) ctx.check(kind + " ray vs closed form", worst, 1e-8);
    ctx.check(kind + " ray constraint", worst_c, 1e-12);
}

// ----------------------------------------------------------------- quantize

void run_quantize(Context& ctx) {
    const json b = ctx.block("quantize");
    const double T = positive(get(b, "T", std::numbers::pi), "T");
    const std::size_t n_max = at_least(get<std::size_t>(b, "n_max", 3), 1, "n_max");
    const std::size_t samples = at_least(get<std::size_t>(b, "samples", 257), 4, "samples");
    const std::string pot = get<std::string>(b, "potential", "sin");
    const double a = get(b, "amplitude", 1.0);
    PotentialSpec v;
    if (pot == "zero") {
        v = PotentialSpec::zero();
    } else if (pot == "constant") {
        v = PotentialSpec::constant(a);
    } else if (pot == "sin") {
        v = PotentialSpec::time_profile([a](double t) { return a * std::sin(t); },
                                        [a](double t) { return a * std::cos(t); });
    } else {
        throw DomainError("unknown quantize potential '" + pot + "'");
    }
    const auto s = quantized_modes(T, n_max, v, ctx.k, samples);

    Table lv{"quantize_levels.csv",
             "E_n = n pi hbar / T ; p_n = E_n^2 / (2 m c^3)\n"
             "norm = int_0^T rho_n dt (trapezoid) ; max_abs_j_t = max |J_t| of the mode",
             {"n", "E_n", "p_n", "norm", "max_abs_j_t"},
             {}};
    double worst_norm = 0.0, worst_j = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto rho = s.density(n);
        double norm = 0.0;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            norm += (j == 0 || j + 1 == rho.size() ? 0.5 : 1.0) * rho[j];
        }
        norm *= s.t.step;
        double jmax = 0.0;
        for (double jt : stationary_temporal_current(s, n, v, ctx.k)) jmax = std::max(jmax, std::abs(jt));
        worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
        worst_j = std::max(worst_j, jmax);
        lv.add({integer(n), num(s.levels[n - 1]), num(s.momenta[n - 1]), num(norm), num(jmax)});
    }
    ctx.emit(lv);

    Table md{"quantize_modes.csv",
             "Psi_n = exp(-i p_n x / hbar) exp((i/hbar) int_0^t V) sqrt(2/T) sin(n pi t / T) ; rho_n = |Psi_n|^2",
             {"t"},
             {}};
    for (std::size_t n = 1; n <= n_max; ++n) {
        md.header.push_back("rho_" + integer(n));
        md.header.push_back("psi_" + integer(n) + "_re");
        md.header.push_back("psi_" + integer(n) + "_im");
    }
    for (std::size_t j = 0; j < s.t.n; ++j) {
        std::vector<std::string> row{num(s.t.at(j))};
        for (std::size_t n = 1; n <= n_max; ++n) {
            const double e = s.envelopes[n - 1][j];
            row.push_back(num(e * e));
            row.push_back(num(s.modes[n - 1][j].real()));
            row.push_back(num(s.modes[n - 1][j].imag()));
        }
        md.add(std::move(row));
    }
    ctx.emit(md);
    ctx.check("mode normalization", worst_norm, 1e-10);
    ctx.check("temporal current", worst_j, 1e-12);
}

// -------------------------------------------------------------------- dyson

void run_dyson(Context& ctx) {
    const json b = ctx.block("dyson");
    const auto eps = get<std::vector<double>>(b, "eps", {0.05, 0.02, 0.01, 0.005});
    if (eps.size() < 2) throw DomainError("dyson needs at least two eps values");
    for (double e : eps) positive(e, "eps");
    DysonOptions opt;
    opt.n_steps = get(b, "n_steps", opt.n_steps);
    opt.substeps = get(b, "substeps", opt.substeps);
    const double x_end = get(b, "x_end", 1.0);
    const std::size_t n = get<std::size_t>(b, "n", 512);
    if (!is_power_of_two(n) || n < 16) throw DomainError("dyson n must be a power of two >= 16");
    const double half = positive(get(b, "t_half", 20.0), "t_half");
    const double g_amp = get(b, "g_amplitude", 0.3);
    const double eta_amp = get(b, "eta_amplitude", 0.5);
    GaussianParams p{get(b, "sigma", 1.0), 0.0, get(b, "omega0", 0.5)};
    p.validate();

    const TimeGrid grid = make_uniform_grid(-half, half, n);
    const auto phi0 = gaussian_exact(p, 0.0, grid, ctx.k);
    const RealFn g = [g_amp](double t) { return g_amp * std::exp(-t * t / 8.0); };
    const auto eta = PotentialSpec::general(
        [eta_amp](double x, double t) { return (1.0 + eta_amp * std::sin(x)) * std::exp(-t * t / 18.0); });

    Table t{"dyson.csv",
            "potential term g(t) + eps eta(x, t), g = a exp(-t^2/8), eta = (1 + b sin x) exp(-t^2/18)\n"
            "dyson = U0 phi0 - (i eps / hbar c) int U0(x, xi) eta U0(xi, x0) phi0 d xi\n"
            "error = ||dyson - split_step_reference|| ; slope = d log(error) / d log(eps)",
            {"eps", "error", "slope"},
            {}};
    std::vector<double> le, lr;
    double prev_e = 0.0, prev_r = 0.0;
    for (double e : eps) {
        const double err = l2_distance(dyson_first_order(phi0, g, eta, e, x_end, opt),
                                       dyson_reference(phi0, g, eta, e, x_end, opt));
        std::string slope;
        if (prev_e > 0.0) slope = num(std::log(err / prev_r) / std::log(e / prev_e));
        t.add({num(e), num(err), slope});
        le.push_back(std::log(e));
        lr.push_back(std::log(err));
        prev_e = e;
        prev_r = err;
    }
    ctx.emit(t);

    double me = 0.0, mr = 0.0;
    for (std::size_t i = 0; i < le.size(); ++i) me += le[i], mr += lr[i];
    me /= static_cast<double>(le.size());
    mr /= static_cast<double>(le.size());
    double see = 0.0, ser = 0.0;
    for (std::size_t i = 0; i < le.size(); ++i) {
        see += (le[i] - me) * (le[i] - me);
        ser += (le[i] - me) * (lr[i] - mr);
    }
    const double fit = ser / see;
    Table f{"dyson_fit.csv", "least-squares slope of log(error) against log(eps)", {"slope_fit"}, {}};
    f.add({num(fit)});
    ctx.emit(f);
    ctx.check("dyson slope - 2", fit - 2.0, 0.2);
}

using Handler = void (*)(Context&);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"commutator", run_commutator}, {"duality", run_duality}, {"gaussian", run_gaussian},
        {"currents", run_currents},     {"rays", run_rays},       {"quantize", run_quantize},
        {"dyson", run_dyson},
    };
    return h;
}

json load_config(const std::string& path) {
    if (path.empty()) return json{{"schema", kSchema}};
    std::ifstream is(path);
    if (!is) throw DomainError("cannot open config " + path);
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("malformed config: ") + e.what());
    }
    if (!cfg.is_object()) throw DomainError("config must be a JSON object");
    if (get<std::string>(cfg, "schema", "") != kSchema) {
        throw DomainError(std::string("config schema must be '") + kSchema + "'");
    }
    return cfg;
}

PhysicalConstants load_constants(const json& cfg) {
    const json c = cfg.contains("constants") ? cfg.at("constants") : json::object();
    PhysicalConstants k{get(c, "hbar", 1.0), get(c, "m", 1.0), get(c, "c", 1.0)};
    k.validate();
    return k;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& log) {
    CLI::App cli{"Carroll-Schrödinger numerical experiments", "carroll"};
    std::string config, out, profile = "default", target;
    cli.add_option("--config", config, "JSON run configuration");
    cli.add_option("--out", out, "Output directory");
    cli.add_option("--tolerance-profile", profile, "strict or default")
        ->check(CLI::IsMember({"strict", "default"}));
    cli.require_subcommand(1);
    for (const auto& [name, fn] : handlers()) {
        auto* sub = cli.add_subcommand(name);
        sub->fallthrough();
        if (name == "duality") {
            sub->add_option("--target", target, "free, constant, harmonic, coulomb-like or velocity-profile");
        }
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        cli.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        log << cli.help();
        return Exit::ok;
    } catch (const CLI::ParseError& e) {
        log << "error: " << e.what() << '\n';
        return Exit::invalid;
    }

    try {
        Context ctx;
        ctx.log = &log;
        ctx.cfg = load_config(config);
        ctx.k = load_constants(ctx.cfg);
        ctx.tol_scale = profile == "strict" ? 0.1 : 1.0;
        ctx.seed = get<std::uint64_t>(ctx.cfg, "seed", 20240601);
        ctx.target = target;
        ctx.out = out.empty() ? fs::path(get<std::string>(ctx.cfg, "output_dir", "out")) : fs::path(out);
        fs::create_directories(ctx.out);

        const std::string name = cli.get_subcommands().front()->get_name();
        handlers().at(name)(ctx);
        if (!ctx.breaches.empty()) {
            for (const auto& b : ctx.breaches) log << "tolerance breach: " << b << '\n';
            return Exit::numerical;
        }
        return Exit::ok;
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << '\n';
        return Exit::numerical;
    } catch (const DomainError& e) {
        log << "invalid input: " << e.what() << '\n';
        return Exit::invalid;
    } catch (const fs::filesystem_error& e) {
        log << "invalid input: " << e.what() << '\n';
        return Exit::invalid;
    }
}

}  // namespace carroll::app

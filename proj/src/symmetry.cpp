#include "noetherlab/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fd.hpp"

namespace nlab {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Indeterminate: return "indeterminate";
        case Verdict::Fail: return "fail";
    }
    return "?";
}

Verdict verdict_of(double residual) {
    if (residual < kSymmetryPass) return Verdict::Pass;
    if (residual > kSymmetryFail) return Verdict::Fail;
    return Verdict::Indeterminate;
}

// ---------------------------------------------------------------------------

Vec2 determining_residual_2nd(const Generator& g, const SystemDef& sys, const PhaseState& jet,
                              const DeterminingOptions& opts) {
    require_admissible(jet);
    const double h = opts.h_time;
    // Solution through the jet at t₀ + kh, k = −4..4, each node advanced from its neighbour.
    std::array<PhaseState, 9> path;
    path[4] = jet;
    for (int k = 1; k <= 4; ++k) {
        path[4 + k] = advance(sys, path[3 + k], h, opts.flow_tol);
        path[4 - k] = advance(sys, path[5 - k], -h, opts.flow_tol);
    }
    auto at = [&](int i, double e) { return g.P[i](path[4 + static_cast<int>(std::lround(e / h))]); };

    Vec2 P{}, Pd{}, Pdd{};
    for (int i = 0; i < 2; ++i) {
        P[i] = g.P[i](jet);
        Pd[i] = fd::d1_8([&](double e) { return at(i, e); }, h);
        Pdd[i] = fd::d2_8([&](double e) { return at(i, e); }, h);
    }
    const fd::Tangent dir{0.0, P, Pd};
    Vec2 res{};
    for (int i = 0; i < 2; ++i) {
        const double lin = fd::along8([&](const PhaseState& s) { return sys.accel(s)[i]; }, jet, dir, opts.h_jet);
        res[i] = Pdd[i] - lin;
    }
    return res;
}

double max_determining_residual(const Generator& g, const SystemDef& sys, std::span<const PhaseState> jets,
                                const DeterminingOptions& opts) {
    double worst = 0.0;
    for (const auto& s : jets) {
        const Vec2 r = determining_residual_2nd(g, sys, s, opts);
        worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
        if (!std::isfinite(r[0]) || !std::isfinite(r[1])) return std::numeric_limits<double>::quiet_NaN();
    }
    return worst;
}

std::vector<PhaseState> random_jets(const SystemDef& sys, std::uint64_t seed, std::size_t n,
                                    const JetDomain& domain) {
    const std::size_t per = TestCurve{}.times.size();
    const auto curves = random_test_curves(sys, seed, (n + per - 1) / per, domain);
    std::vector<PhaseState> jets;
    for (const auto& c : curves)
        for (double t : c.times)
            if (jets.size() < n) jets.push_back(c.jet(t));
    return jets;
}

// ---------------------------------------------------------------------------

namespace {

ExtFn constant(double c) {
    return [c](const ExtPoint&) { return c; };
}

IntegralPartials partials_at(const ExtPoint& p, double lambda, double omega, const RefPoint& ref) {
    return eval_darboux_partials(p.r, p.L, p.E, p.s, lambda, omega, ref);
}

ExtPoint shifted(ExtPoint p, const std::array<double, 5>& d, double e) {
    p.t += e * d[0];
    p.r += e * d[1];
    p.theta += e * d[2];
    p.L += e * d[3];
    p.E += e * d[4];
    return p;
}

// Components in the order (t, r, θ, L, E).
std::array<double, 5> components(const ExtendedGenerator& Y, const ExtPoint& p) {
    return {Y.tau(p), 0.0, Y.eta_theta(p), Y.eta_L(p), Y.eta_E(p)};
}

double directional(const ExtFn& f, const ExtPoint& p, const std::array<double, 5>& d, double h) {
    double n = 1.0;
    for (double x : d) n = std::max(n, std::abs(x));
    return fd::d1([&](double e) { return f(shifted(p, d, e)); }, h / n);
}

}  // namespace

ExtendedGenerator family_generator(const std::array<double, 4>& C, double lambda, double omega, FamilySign sign,
                                   const RefPoint& ref) {
    const double c1 = C[0], c2 = C[1], c3 = C[2], c4 = C[3];
    ExtendedGenerator Y;
    Y.name = "Y";
    Y.lambda = lambda;
    Y.omega = omega;
    Y.constants = C;
    if (c1 == 0 && c2 == 0) {
        Y.tau = constant(c3);
        Y.eta_theta = constant(-c4);
    } else {
        Y.tau = [=](const ExtPoint& p) {
            const auto d = partials_at(p, lambda, omega, ref);
            return c1 * d.dE_Theta + c2 * d.dE_T + c3;
        };
        Y.eta_theta = [=](const ExtPoint& p) {
            const auto d = partials_at(p, lambda, omega, ref);
            return -c1 * d.dL_Theta - c2 * d.dL_T - c4;
        };
    }
    Y.eta_L = constant(c1);
    Y.eta_E = constant(sign == FamilySign::Consistent ? -c2 : c2);
    return Y;
}

namespace {

ExtendedGenerator named(std::string name, ExtendedGenerator Y) {
    Y.name = std::move(name);
    return Y;
}

}  // namespace

ExtendedGenerator Y_L(double lambda, double omega) {
    return named("Y_L", family_generator({0, 0, 0, 1}, lambda, omega));
}
ExtendedGenerator Y_E(double lambda, double omega) {
    return named("Y_E", family_generator({0, 0, 1, 0}, lambda, omega));
}
ExtendedGenerator Y_Theta(double lambda, double omega, const RefPoint& ref) {
    return named("Y_Theta", family_generator({1, 0, 0, 0}, lambda, omega, FamilySign::Consistent, ref));
}
ExtendedGenerator Y_T(double lambda, double omega, const RefPoint& ref) {
    return named("Y_T", family_generator({0, 1, 0, 0}, lambda, omega, FamilySign::Consistent, ref));
}
ExtendedGenerator Y_T_displayed(double lambda, double omega, const RefPoint& ref) {
    return named("Y_T_displayed", family_generator({0, -1, 0, 0}, lambda, omega, FamilySign::Printed, ref));
}

double first_order_Fr(const ExtPoint& p, double lambda, double omega) {
    const double D = darboux_radicand(p.r, p.L, p.E, lambda, omega);
    return p.s * std::sqrt(std::max(D, 0.0)) / (p.r * (1 + lambda * p.r * p.r));
}

double first_order_Ftheta(const ExtPoint& p, double lambda) {
    return p.L / (p.r * p.r * (1 + lambda * p.r * p.r));
}

void require_classical(const ExtPoint& p, double lambda, double omega) {
    if (!(p.r > 0) || !(darboux_radicand(p.r, p.L, p.E, lambda, omega) > 0))
        fail(ErrorCode::OutsideClassicalRegion, "point outside the classical region");
}

std::array<double, 4> determining_residual_1st(const ExtendedGenerator& Y, const ExtPoint& p, double h) {
    const double lam = Y.lambda, om = Y.omega;
    require_classical(p, lam, om);
    auto d_r = [&](const ExtFn& f) {
        return fd::d1_8([&](double e) { ExtPoint q = p; q.r += e; return f(q); }, h);
    };
    auto d_L = [&](auto&& f) {
        return fd::d1_8([&](double e) { ExtPoint q = p; q.L += e; return f(q); }, h);
    };
    auto d_E = [&](auto&& f) {
        return fd::d1_8([&](double e) { ExtPoint q = p; q.E += e; return f(q); }, h);
    };
    auto Fr = [&](const ExtPoint& q) { return first_order_Fr(q, lam, om); };
    auto Ft = [&](const ExtPoint& q) { return first_order_Ftheta(q, lam); };

    const double fr = Fr(p), ft = Ft(p);
    const double eL = Y.eta_L(p), eE = Y.eta_E(p);
    const double dr_tau = d_r(Y.tau);
    std::array<double, 4> res{};
    res[0] = -(fr * fr * dr_tau + eE * d_E(Fr) + eL * d_L(Fr));
    res[1] = fr * (d_r(Y.eta_theta) - ft * dr_tau) - eE * d_E(Ft) - eL * d_L(Ft);
    res[2] = fr * d_r(Y.eta_L);
    res[3] = fr * d_r(Y.eta_E);
    return res;
}

ExtPoint ext_point(const PhaseState& s, double lambda, double omega) {
    const PhaseState p = to_polar(s);
    return ExtPoint{p.t, p.q[0], p.q[1], darboux_L(p, lambda), darboux_E(p, lambda, omega),
                    radial_branch(make_darboux(lambda, omega), p)};
}

Generator project_to_dynamical(const ExtendedGenerator& Y) {
    const double lam = Y.lambda, om = Y.omega;
    Generator g;
    g.name = "proj_" + Y.name;
    g.P[0] = [Y, lam, om](const PhaseState& s) { return -Y.tau(ext_point(s, lam, om)) * s.v[0]; };
    g.P[1] = [Y, lam, om](const PhaseState& s) {
        const ExtPoint p = ext_point(s, lam, om);
        return Y.eta_theta(p) - Y.tau(p) * s.v[1];
    };
    return g;
}

std::vector<ExtPoint> random_classical_points(double lambda, double omega, std::uint64_t seed, std::size_t n) {
    const SystemDef sys = make_darboux(lambda, omega);
    std::vector<ExtPoint> pts;
    for (const auto& s : random_jets(sys, seed, n)) pts.push_back(ext_point(s, lambda, omega));
    return pts;
}

std::array<double, 4> commutator(const ExtendedGenerator& a, const ExtendedGenerator& b, const ExtPoint& p,
                                 double h) {
    require_classical(p, a.lambda, a.omega);
    const auto ca = components(a, p), cb = components(b, p);
    const std::array<const ExtFn*, 4> fa{&a.tau, &a.eta_theta, &a.eta_L, &a.eta_E};
    const std::array<const ExtFn*, 4> fb{&b.tau, &b.eta_theta, &b.eta_L, &b.eta_E};
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k)
        out[k] = directional(*fb[k], p, ca, h) - directional(*fa[k], p, cb, h);
    return out;
}

double norm(const std::array<double, 4>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::string_view to_string(CanonicalCoordinate c) {
    switch (c) {
        case CanonicalCoordinate::MinusTheta: return "-Theta";
        case CanonicalCoordinate::T: return "T";
        case CanonicalCoordinate::L: return "L";
        case CanonicalCoordinate::MinusE: return "-E";
    }
    return "?";
}

ExtFn canonical_coordinate(CanonicalCoordinate c, double lambda, double omega, const RefPoint& ref) {
    switch (c) {
        case CanonicalCoordinate::MinusTheta:
            return [=](const ExtPoint& p) {
                return -darboux_theta_raw(p.r, p.theta, p.L, p.E, p.s, lambda, omega, ref);
            };
        case CanonicalCoordinate::T:
            return [=](const ExtPoint& p) { return darboux_T_raw(p.t, p.r, p.L, p.E, p.s, lambda, omega, ref); };
        case CanonicalCoordinate::L: return [](const ExtPoint& p) { return p.L; };
        case CanonicalCoordinate::MinusE: return [](const ExtPoint& p) { return -p.E; };
    }
    fail(ErrorCode::InvalidParam, "unknown canonical coordinate");
}

double canonical_coordinate_residual(const ExtendedGenerator& Y, const ExtFn& zeta, std::span<const ExtPoint> points,
                                     double h) {
    double worst = 0.0;
    for (const auto& p : points) {
        require_classical(p, Y.lambda, Y.omega);
        worst = std::max(worst, std::abs(directional(zeta, p, components(Y, p), h) - 1.0));
    }
    return worst;
}

}  // namespace nlab

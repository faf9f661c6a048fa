#include <cmath>
#include <numbers>

#include "noetherlab/quadrature.hpp"
#include "noetherlab/systems.hpp"

namespace nlab {

std::string_view to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::Coulomb: return "coulomb";
        case PotentialKind::Isotropic: return "isotropic";
        case PotentialKind::PerturbedCoulomb: return "perturbed_coulomb";
        case PotentialKind::PowerLaw: return "power_law";
        case PotentialKind::SpecialKKr3: return "special_kkr3";
        case PotentialKind::InvertedInverseSquare: return "inverted_inverse_square";
    }
    return "?";
}

std::optional<PotentialKind> potential_from_string(std::string_view name) {
    for (auto k : {PotentialKind::Coulomb, PotentialKind::Isotropic, PotentialKind::PerturbedCoulomb,
                   PotentialKind::PowerLaw, PotentialKind::SpecialKKr3, PotentialKind::InvertedInverseSquare})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

void validate_potential(const PotentialSpec& U) {
    auto bad = [](const std::string& m) { fail(ErrorCode::InvalidParam, m); };
    if (!std::isfinite(U.k) || !std::isfinite(U.K) || !std::isfinite(U.p)) bad("potential parameters must be finite");
    switch (U.kind) {
        case PotentialKind::PowerLaw:
            if (!(U.p > -2.0) || U.p == 0.0) bad("power-law exponent p must lie in (-2, inf) without 0");
            if (!(U.k * U.p > 0)) bad("power-law potential must be attractive (k*p > 0)");
            break;
        default:
            if (!(U.k > 0)) bad("potential strength k must be positive");
    }
}

double potential_value(const PotentialSpec& U, double r) {
    switch (U.kind) {
        case PotentialKind::Coulomb: return -U.k / r;
        case PotentialKind::Isotropic: return U.k * r * r;
        case PotentialKind::PerturbedCoulomb: return -U.k / r - U.K / (r * r);
        case PotentialKind::PowerLaw: return U.k * std::pow(r, U.p);
        case PotentialKind::SpecialKKr3: return U.k * r + U.K / (r * r * r);
        case PotentialKind::InvertedInverseSquare: return -0.5 * U.k * r * r + U.K / (r * r);
    }
    return 0.0;
}

double potential_derivative(const PotentialSpec& U, double r) {
    switch (U.kind) {
        case PotentialKind::Coulomb: return U.k / (r * r);
        case PotentialKind::Isotropic: return 2 * U.k * r;
        case PotentialKind::PerturbedCoulomb: return U.k / (r * r) + 2 * U.K / (r * r * r);
        case PotentialKind::PowerLaw: return U.k * U.p * std::pow(r, U.p - 1);
        case PotentialKind::SpecialKKr3: return U.k - 3 * U.K / (r * r * r * r);
        case PotentialKind::InvertedInverseSquare: return -U.k * r - 2 * U.K / (r * r * r);
    }
    return 0.0;
}

std::optional<double> equilibrium_radius(const PotentialSpec& U) {
    switch (U.kind) {
        case PotentialKind::Isotropic: return 0.0;
        case PotentialKind::PerturbedCoulomb:
            if (U.K < 0) return -2 * U.K / U.k;
            return std::nullopt;
        case PotentialKind::SpecialKKr3:
            if (U.K > 0) return std::pow(3 * U.K / U.k, 0.25);
            return std::nullopt;
        default: return std::nullopt;
    }
}

double equilibrium_offset(const PotentialSpec& U) {
    const auto r = equilibrium_radius(U);
    if (!r || *r == 0.0) return 0.0;
    return potential_value(U, *r);
}

SystemDef make_central(const PotentialSpec& U) {
    validate_potential(U);
    SystemDef sys;
    sys.name = "central";
    sys.chart = Chart::Polar;
    sys.params.k = U.k;
    sys.params.K = U.K;
    sys.params.p = U.p;
    sys.params.potential = static_cast<int>(U.kind);
    sys.accel = [U](const PhaseState& s) {
        const double r = s.q[0], rd = s.v[0], td = s.v[1];
        return Vec2{td * td * r - potential_derivative(U, r), -2 * td * rd / r};
    };
    sys.lagrangian = [U](const PhaseState& s) {
        const double r = s.q[0];
        return 0.5 * (s.v[0] * s.v[0] + r * r * s.v[1] * s.v[1]) - potential_value(U, r);
    };
    sys.noether_weights = [](const Vec2& q) { return Vec2{1.0, q[0] * q[0]}; };
    return sys;
}

PotentialSpec potential_of(const SystemDef& sys) {
    if (sys.params.potential < 0) fail(ErrorCode::InvalidParam, "system is not a central-force system");
    return PotentialSpec{static_cast<PotentialKind>(sys.params.potential), sys.params.k, sys.params.K, sys.params.p};
}

EffectivePotential central_effective_potential(const PotentialSpec& U, double L) {
    const double off = equilibrium_offset(U);
    return {[U, L, off](double r) { return potential_value(U, r) + 0.5 * L * L / (r * r) - off; },
            [U, L](double r) { return potential_derivative(U, r) - L * L / (r * r * r); }};
}

double central_L(const PhaseState& s) { return s.q[0] * s.q[0] * s.v[1]; }

double central_E(const PhaseState& s, const PotentialSpec& U) {
    const double r = s.q[0], L = central_L(s);
    return 0.5 * (s.v[0] * s.v[0] + L * L / (r * r)) + potential_value(U, r) - equilibrium_offset(U);
}

namespace {

struct Orbit {
    PotentialSpec U;
    double L, E, off;
    double R(double r) const { return 2 * (E + off - potential_value(U, r)) * r * r - L * L; }
    // R(a + d) − R(a) with the cancellation carried out analytically; a is a root of R.
    double R_from_root(double a, double d) const {
        const double r = a + d, sq = d * (2 * a + d);  // r² − a²
        double dP = 0.0;                                 // U(r)r² − U(a)a²
        switch (U.kind) {
            case PotentialKind::Coulomb:
            case PotentialKind::PerturbedCoulomb: dP = -U.k * d; break;
            case PotentialKind::Isotropic: dP = U.k * sq * (r * r + a * a); break;
            case PotentialKind::PowerLaw: dP = U.k * std::pow(a, U.p + 2) * std::expm1((U.p + 2) * std::log1p(d / a)); break;
            case PotentialKind::SpecialKKr3: dP = U.k * d * (r * r + r * a + a * a) - U.K * d / (r * a); break;
            case PotentialKind::InvertedInverseSquare: dP = -0.5 * U.k * sq * (r * r + a * a); break;
        }
        return 2 * (E + off) * sq - 2 * dP;
    }
};

RadialBounds bounds_of(const Orbit& o, double r_hint) {
    auto R = [&o](double r) { return o.R(r); };
    const double scale = std::max({o.L * o.L, std::abs(2 * (o.E + o.off - potential_value(o.U, r_hint))) * r_hint * r_hint, 1e-300});
    double mid = r_hint;
    if (!(R(mid) > 1e-12 * scale)) {
        bool found = false;
        for (int j = 0; j < 60 && !found; ++j) {
            const double d = 1e-9 * std::ldexp(1.0, j) * r_hint;
            if (d > 0.5 * r_hint) break;
            for (double c : {r_hint + d, r_hint - d})
                if (R(c) > 1e-12 * scale) {
                    mid = c;
                    found = true;
                    break;
                }
        }
        if (!found) {
            if (R(r_hint) < -1e-8 * scale) fail(ErrorCode::OutsideClassicalRegion, "radicand negative at r");
            fail(ErrorCode::UndefinedOnCircular, "classical region degenerates to a circle");
        }
    }
    double lo = mid;
    while (R(lo) > 0) {
        lo *= 0.5;
        if (lo < 1e-12) fail(ErrorCode::UnboundedRegime, "orbit reaches the centre");
    }
    double hi = mid;
    while (R(hi) > 0) {
        hi *= 1.5;
        if (hi > 1e8) fail(ErrorCode::UnboundedRegime, "orbit is not bounded");
    }
    RadialBounds b{bracketed_root(R, lo, mid, 1e-14), bracketed_root(R, mid, hi, 1e-14)};
    if (b.r_out - b.r_in < 1e-9 * b.r_out) fail(ErrorCode::UndefinedOnCircular, "circular orbit");
    return b;
}

// ∫_{r_in}^{x} g, keeping the singular turning point at a declared end.
double from_inner(const std::function<double(double)>& g, const std::function<double(double, double)>& gd,
                  const RadialBounds& b, double full, double x,
                  double tol) {
    if (x <= b.r_in) return 0.0;
    if (x >= b.r_out) return full;
    if (x - b.r_in <= b.r_out - x) return integrate_singular({g, b.r_in, x, true, false, gd}, tol);
    return full - integrate_singular({g, x, b.r_out, false, true, gd}, tol);
}

double reference_radius(const Orbit& o, const RadialBounds& b, const RefPoint& ref) {
    switch (ref.kind) {
        case RefPoint::Kind::OuterTurning: return b.r_out;
        case RefPoint::Kind::InnerTurning: return b.r_in;
        case RefPoint::Kind::Inertial:
            return bracketed_root(central_effective_potential(o.U, o.L).derivative, b.r_in, b.r_out, 1e-14);
        case RefPoint::Kind::Explicit:
            if (ref.r0 < b.r_in * (1 - 1e-12) || ref.r0 > b.r_out * (1 + 1e-12))
                fail(ErrorCode::OutsideClassicalRegion, "reference radius outside the classical region");
            return ref.r0;
    }
    return b.r_out;
}

void check_inside(const RadialBounds& b, double r) {
    if (r < b.r_in * (1 - 1e-9) || r > b.r_out * (1 + 1e-9))
        fail(ErrorCode::OutsideClassicalRegion, "r outside the classical region");
}

// 1/(r√R) for the angle, r/√R for the time.
std::function<double(double)> integrand(const Orbit& o, bool angle) {
    if (angle) return [&o](double x) { return 1.0 / (x * std::sqrt(o.R(x))); };
    return [&o](double x) { return x / std::sqrt(o.R(x)); };
}

std::function<double(double, double)> offset_integrand(const Orbit& o, bool angle) {
    if (angle) return [&o](double x, double d) { return 1.0 / (x * std::sqrt(o.R_from_root(x - d, d))); };
    return [&o](double x, double d) { return x / std::sqrt(o.R_from_root(x - d, d)); };
}

// s·∫_{r₀}^{r} g for g = 1/(r√R) (angle) or r/√R (time).
double radial_difference(const Orbit& o, double r, const RefPoint& ref, bool angle, double tol) {
    const RadialBounds b = bounds_of(o, r);
    check_inside(b, r);
    const auto g = integrand(o, angle);
    const auto gd = offset_integrand(o, angle);
    const double full = integrate_singular({g, b.r_in, b.r_out, true, true, gd}, tol);
    const double r0 = reference_radius(o, b, ref);
    return from_inner(g, gd, b, full, r, tol) - from_inner(g, gd, b, full, r0, tol);
}

int branch_of(const PhaseState& s, const PotentialSpec& U) {
    if (s.v[0] > 0) return 1;
    if (s.v[0] < 0) return -1;
    return s.v[1] * s.v[1] * s.q[0] - potential_derivative(U, s.q[0]) >= 0 ? 1 : -1;
}

}  // namespace

RadialBounds central_turning_points(const PotentialSpec& U, double L, double E, double r_hint) {
    return bounds_of(Orbit{U, L, E, equilibrium_offset(U)}, r_hint);
}

double central_inertial_point(const PotentialSpec& U, double L, double E, double r_hint) {
    const Orbit o{U, L, E, equilibrium_offset(U)};
    return reference_radius(o, bounds_of(o, r_hint), RefPoint::inertial());
}

double central_theta_raw(const PotentialSpec& U, double r, double theta, double L, double E, int s,
                         const RefPoint& ref, double tol) {
    const Orbit o{U, L, E, equilibrium_offset(U)};
    return theta - s * L * radial_difference(o, r, ref, true, tol);
}

double central_T_raw(const PotentialSpec& U, double t, double r, double L, double E, int s,
                     const RefPoint& ref, double tol) {
    const Orbit o{U, L, E, equilibrium_offset(U)};
    return t - s * radial_difference(o, r, ref, false, tol);
}

double eval_central_Theta(const PhaseState& s, double L, double E, const RefPoint& ref, const PotentialSpec& U) {
    const double raw = central_theta_raw(U, s.q[0], s.q[1], L, E, branch_of(s, U), ref);
    return reduce_mod(raw, 2 * std::numbers::pi);
}

double eval_central_T(const PhaseState& s, double L, double E, const RefPoint& ref, const PotentialSpec& U) {
    return central_T_raw(U, s.t, s.q[0], L, E, branch_of(s, U), ref);
}

double central_apsidal_angle(const PotentialSpec& U, double L, double E, double r_hint, double tol) {
    const Orbit o{U, L, E, equilibrium_offset(U)};
    const RadialBounds b = bounds_of(o, r_hint);
    return std::abs(L) * integrate_singular({integrand(o, true), b.r_in, b.r_out, true, true, offset_integrand(o, true)}, tol);
}

double central_radial_period(const PotentialSpec& U, double L, double E, double r_hint, double tol) {
    const Orbit o{U, L, E, equilibrium_offset(U)};
    const RadialBounds b = bounds_of(o, r_hint);
    return 2 * integrate_singular({integrand(o, false), b.r_in, b.r_out, true, true, offset_integrand(o, false)}, tol);
}

IntegralPartials central_partials(const PotentialSpec& U, double r, double L, double E, int s,
                                  const RefPoint& ref) {
    auto richardson = [](const std::function<double(double)>& f, double x, double h) {
        auto d = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2 * hh); };
        return (4 * d(0.5 * h) - d(h)) / 3;
    };
    auto th_L = [&](double l) { return central_theta_raw(U, r, 0.0, l, E, s, ref); };
    auto th_E = [&](double e) { return central_theta_raw(U, r, 0.0, L, e, s, ref); };
    auto t_L = [&](double l) { return central_T_raw(U, 0.0, r, l, E, s, ref); };
    auto t_E = [&](double e) { return central_T_raw(U, 0.0, r, L, e, s, ref); };
    const double hL = 1e-4 * std::max(1.0, std::abs(L));
    const double hE = 1e-4 * std::max(1.0, std::abs(E));
    IntegralPartials p;
    p.dL_Theta = richardson(th_L, L, hL);
    p.dE_Theta = richardson(th_E, E, hE);
    p.dL_T = richardson(t_L, L, hL);
    p.dE_T = richardson(t_E, E, hE);
    return p;
}

std::vector<FirstIntegral> central_integrals(const PotentialSpec& U, const RefPoint& ref) {
    validate_potential(U);
    const std::vector<EventSpec> turns{{EventKind::TurningPoint, 1}};
    std::vector<FirstIntegral> out;
    FirstIntegral L;
    L.name = IntegralName::L;
    L.eval = [](const PhaseState& s) { return central_L(s); };
    out.push_back(L);
    FirstIntegral E;
    E.name = IntegralName::E;
    E.eval = [U](const PhaseState& s) { return central_E(s, U); };
    out.push_back(E);

    auto partials = [U, ref](const PhaseState& s) {
        return central_partials(U, s.q[0], central_L(s), central_E(s, U), branch_of(s, U), ref);
    };
    FirstIntegral th;
    th.name = IntegralName::Theta;
    // The isotropic orbit is symmetric under r → −r, so its apsidal line is only defined mod π.
    th.valuedness = U.kind == PotentialKind::Isotropic ? Valuedness::ModPi : Valuedness::Mod2Pi;
    const double period = valuedness_period(th.valuedness);
    th.eval = [U, ref, period](const PhaseState& s) {
        return reduce_mod(eval_central_Theta(s, central_L(s), central_E(s, U), ref, U), period);
    };
    th.reference_point = ref;
    th.jump_events = turns;
    th.partials = partials;
    out.push_back(th);
    FirstIntegral T;
    T.name = IntegralName::T;
    T.time_explicit = true;
    T.eval = [U, ref](const PhaseState& s) { return eval_central_T(s, central_L(s), central_E(s, U), ref, U); };
    T.reference_point = ref;
    T.jump_events = turns;
    T.period = [U](const PhaseState& s) { return central_radial_period(U, central_L(s), central_E(s, U), s.q[0]); };
    T.partials = partials;
    out.push_back(T);
    return out;
}

}  // namespace nlab

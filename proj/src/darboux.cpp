#include <cmath>
#include <numbers>

#include "noetherlab/systems.hpp"

namespace nlab {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

void require_params(double lambda, double omega) {
    if (!(lambda >= 0 && std::isfinite(lambda))) fail(ErrorCode::InvalidParam, "lambda must be >= 0");
    if (!(omega > 0 && std::isfinite(omega))) fail(ErrorCode::InvalidParam, "omega must be positive");
}

struct Orbit {
    double L, E, lambda, omega;
    double W() const { return omega * omega - 2 * lambda * E; }
    double den() const { return E * E - W() * L * L; }
    double m(double r) const { return 1 + lambda * r * r; }
    double D(double r) const { return darboux_radicand(r, L, E, lambda, omega); }
};

// √D with round-off negatives near turning points clamped to 0.
double sqrt_radicand(const Orbit& o, double r) {
    const double d = o.D(r);
    const double scale = std::max({o.L * o.L, o.omega * o.omega * r * r * r * r, std::abs(o.E) * r * r * o.m(r)});
    if (d < -1e-9 * scale) fail(ErrorCode::OutsideClassicalRegion, "radicand negative");
    return d > 0 ? std::sqrt(d) : 0.0;
}

double sgnL(double L) { return L < 0 ? -1.0 : 1.0; }

// a(r) = arctan((Er² − L²)/(L√D)) on the principal branch.
double angle_term(const Orbit& o, double r, double sqrtD) {
    return std::atan2((o.E * r * r - o.L * o.L) * sgnL(o.L), std::abs(o.L) * sqrtD);
}

// b(r) = arctan((E − Wr²)/(√W√D)).
double time_angle(const Orbit& o, double r, double sqrtD) {
    return std::atan2(o.E - o.W() * r * r, std::sqrt(o.W()) * sqrtD);
}

double c_of(const Orbit& o) { return (o.omega * o.omega - o.lambda * o.E) / std::pow(o.W(), 1.5); }

void require_bound(const Orbit& o) {
    if (!(o.W() > 0)) fail(ErrorCode::UnboundedRegime, "omega^2 - 2*lambda*E <= 0");
}

// Reference radius together with the arctan limits a(r₀), b(r₀) and √D(r₀).
struct Ref {
    double r0;
    double a0;
    double b0;
    double sqrtD0;
    bool turning;
};

Ref reference(const Orbit& o, const RefPoint& ref) {
    switch (ref.kind) {
        case RefPoint::Kind::OuterTurning: {
            const RadialBounds b = darboux_turning_points(o.L, o.E, o.lambda, o.omega);
            // E r_out² − L² > 0 and E − W r_out² < 0 at the outer apsis.
            return {b.r_out, kHalfPi * sgnL(o.L), -kHalfPi, 0.0, true};
        }
        case RefPoint::Kind::InnerTurning: {
            const RadialBounds b = darboux_turning_points(o.L, o.E, o.lambda, o.omega);
            return {b.r_in, -kHalfPi * sgnL(o.L), kHalfPi, 0.0, true};
        }
        case RefPoint::Kind::Inertial: {
            const double r0 = darboux_inertial_point(o.L, o.lambda, o.omega);
            const double sd = sqrt_radicand(o, r0);
            return {r0, angle_term(o, r0, sd), o.W() > 0 ? time_angle(o, r0, sd) : 0.0, sd, false};
        }
        case RefPoint::Kind::Explicit: {
            const double r0 = ref.r0;
            if (!(r0 > 0)) fail(ErrorCode::InvalidParam, "reference radius must be positive");
            const double sd = sqrt_radicand(o, r0);
            return {r0, angle_term(o, r0, sd), o.W() > 0 ? time_angle(o, r0, sd) : 0.0, sd, false};
        }
    }
    return {};
}

// Boundary functions whose differences give the partials: ∂_LΘ = s[gL]ʳᵣ₀ etc.
double gL(const Orbit& o, double r, double sqrtD) {
    const double m = o.m(r), E = o.E, L = o.L, w2 = o.omega * o.omega;
    return ((2 * m * E - w2 * r * r) * E + (2 * o.lambda * E - w2) * L * L) / (2 * sqrtD * o.den());
}

double gE(const Orbit& o, double r, double sqrtD) {
    const double m = o.m(r), w2 = o.omega * o.omega;
    return o.L * (w2 * r * r - m * o.E - o.lambda * o.L * o.L) / (2 * sqrtD * o.den());
}

double hE_arctan_coeff(const Orbit& o) {
    const double W = o.W();
    return o.lambda * (2 * o.omega * o.omega - o.lambda * o.E) / (2 * std::pow(W, 2.5));
}

double hE(const Orbit& o, double r, double sqrtD) {
    const double W = o.W(), m = o.m(r), E = o.E, L = o.L, lam = o.lambda, w2 = o.omega * o.omega;
    const double den = o.den();
    return hE_arctan_coeff(o) * time_angle(o, r, sqrtD) +
           m * (lam * r * r + (w2 - lam * E) * (E * r * r - L * L) / den) / (2 * W * sqrtD) +
           lam / (2 * W * W) * (2 * lam + E * (w2 - lam * E) / den) * sqrtD;
}

int branch_of(const PhaseState& s, double lambda, double omega) {
    if (s.v[0] > 0) return 1;
    if (s.v[0] < 0) return -1;
    const double r = s.q[0], m = 1 + lambda * r * r, td = s.v[1];
    const double fr = (2 * lambda * r * r + 1) * td * td * r / m - omega * omega * r / (m * m * m);
    return fr >= 0 ? 1 : -1;
}

// √D straight from the state, free of the cancellation in the (r, L, E) formula.
double state_sqrtD(const PhaseState& s, double lambda) {
    const double r = s.q[0];
    return std::abs(r * (1 + lambda * r * r) * s.v[0]);
}

}  // namespace

SystemDef make_darboux(double lambda, double omega) {
    require_params(lambda, omega);
    SystemDef sys;
    sys.name = "darboux";
    sys.chart = Chart::Polar;
    sys.params.lambda = lambda;
    sys.params.omega = omega;
    const double w2 = omega * omega;
    sys.accel = [lambda, w2](const PhaseState& s) {
        const double r = s.q[0], rd = s.v[0], td = s.v[1];
        const double m = 1 + lambda * r * r, k = 2 * lambda * r * r + 1;
        return Vec2{(k * td * td - lambda * rd * rd) * r / m - w2 * r / (m * m * m), -2 * td * rd * k / (m * r)};
    };
    sys.lagrangian = [lambda, w2](const PhaseState& s) {
        const double r = s.q[0], m = 1 + lambda * r * r;
        return 0.5 * m * (s.v[0] * s.v[0] + r * r * s.v[1] * s.v[1]) - 0.5 * w2 * r * r / m;
    };
    sys.noether_weights = [lambda](const Vec2& q) {
        const double r2 = q[0] * q[0], m = 1 + lambda * r2;
        return Vec2{m, r2 * m};
    };
    return sys;
}

double darboux_L(const PhaseState& s, double lambda) {
    const double r = s.q[0];
    return r * r * (1 + lambda * r * r) * s.v[1];
}

double darboux_E(const PhaseState& s, double lambda, double omega) {
    const double r = s.q[0], m = 1 + lambda * r * r, L = darboux_L(s, lambda);
    return 0.5 * (m * s.v[0] * s.v[0] + (omega * omega * r * r + L * L / (r * r)) / m);
}

double darboux_radicand(double r, double L, double E, double lambda, double omega) {
    const double r2 = r * r;
    return 2 * E * r2 * (1 + lambda * r2) - L * L - omega * omega * r2 * r2;
}

RadialBounds darboux_turning_points(double L, double E, double lambda, double omega) {
    const Orbit o{L, E, lambda, omega};
    require_bound(o);
    const double den = o.den();
    if (!(E > 0)) fail(ErrorCode::OutsideClassicalRegion, "energy must be positive");
    if (den < -1e-14 * E * E) fail(ErrorCode::OutsideClassicalRegion, "no classical region for (L, E)");
    if (den <= 1e-14 * E * E) fail(ErrorCode::UndefinedOnCircular, "circular orbit");
    // Roots in u = r² of −W u² + 2E u − L², written to avoid cancellation.
    const double q = E + std::sqrt(den);
    return {std::sqrt(L * L / q), std::sqrt(q / o.W())};
}

double darboux_inertial_point(double L, double lambda, double omega) {
    if (L == 0.0) fail(ErrorCode::InvalidParam, "no inertial point for L = 0");
    const double L2 = L * L, w2 = omega * omega;
    return std::sqrt((lambda * L2 + std::sqrt(lambda * lambda * L2 * L2 + w2 * L2)) / w2);
}

double darboux_radial_period(double E, double lambda, double omega) {
    const Orbit o{0.0, E, lambda, omega};
    require_bound(o);
    return std::numbers::pi * c_of(o);
}

double darboux_theta_raw(double r, double theta, double L, double E, int s, double lambda, double omega,
                         const RefPoint& ref, double sqrtD) {
    const Orbit o{L, E, lambda, omega};
    const Ref rf = reference(o, ref);
    const double sd = sqrtD >= 0 ? sqrtD : sqrt_radicand(o, r);
    return theta - 0.5 * s * (angle_term(o, r, sd) - rf.a0);
}

double darboux_T_raw(double t, double r, double L, double E, int s, double lambda, double omega,
                     const RefPoint& ref, double sqrtD) {
    const Orbit o{L, E, lambda, omega};
    require_bound(o);
    const Ref rf = reference(o, ref);
    const double sd = sqrtD >= 0 ? sqrtD : sqrt_radicand(o, r);
    return t + 0.5 * c_of(o) * s * (time_angle(o, r, sd) - rf.b0) +
           0.5 * (lambda / o.W()) * s * (sd - rf.sqrtD0);
}

DarbouxIntegrals eval_darboux_integrals(const PhaseState& s, double lambda, double omega, const RefPoint& ref) {
    require_admissible(s);
    DarbouxIntegrals out;
    out.L = darboux_L(s, lambda);
    out.E = darboux_E(s, lambda, omega);
    const int br = branch_of(s, lambda, omega);
    const double sd = state_sqrtD(s, lambda);
    out.Theta = reduce_mod(darboux_theta_raw(s.q[0], s.q[1], out.L, out.E, br, lambda, omega, ref, sd),
                           2 * std::numbers::pi);
    out.T = darboux_T_raw(s.t, s.q[0], out.L, out.E, br, lambda, omega, ref, sd);
    return out;
}

IntegralPartials eval_darboux_partials(double r, double L, double E, int s, double lambda, double omega,
                                       const RefPoint& ref) {
    const Orbit o{L, E, lambda, omega};
    require_bound(o);
    const double sd = sqrt_radicand(o, r);
    const Ref rf = reference(o, ref);
    IntegralPartials p;
    if (rf.r0 == r && !rf.turning) return p;
    double gL0 = 0.0, gE0 = 0.0, hE0 = hE_arctan_coeff(o) * rf.b0;
    if (!rf.turning) {
        gL0 = gL(o, rf.r0, rf.sqrtD0);
        gE0 = gE(o, rf.r0, rf.sqrtD0);
        hE0 = hE(o, rf.r0, rf.sqrtD0);
    }
    p.dL_Theta = s * (gL(o, r, sd) - gL0);
    p.dE_Theta = s * (gE(o, r, sd) - gE0);
    p.dE_T = s * (hE(o, r, sd) - hE0);
    p.dL_T = -p.dE_Theta;
    if (ref.kind == RefPoint::Kind::Inertial) {
        // r₀ depends on L: add the chain terms ∂_r(·)(r₀)·r₀′(L).
        const double u = rf.r0 * rf.r0, L2 = L * L, w2 = omega * omega;
        const double du = (2 * lambda * L * u + L) / (w2 * u - lambda * L2);
        const double dr0 = du / (2 * rf.r0);
        p.dL_Theta += s * L * dr0 / (rf.r0 * rf.sqrtD0);
        p.dL_T += s * rf.r0 * o.m(rf.r0) * dr0 / rf.sqrtD0;
    }
    return p;
}

IntegralPartials eval_darboux_partials(const PhaseState& s, double lambda, double omega, const RefPoint& ref) {
    return eval_darboux_partials(s.q[0], darboux_L(s, lambda), darboux_E(s, lambda, omega),
                                 branch_of(s, lambda, omega), lambda, omega, ref);
}

CartesianConstants cartesian_constants(const PhaseState& s, double lambda, double omega) {
    const PhaseState c = to_cartesian(s);
    const double q2 = c.q[0] * c.q[0] + c.q[1] * c.q[1], m = 1 + lambda * q2;
    const double p1 = m * c.v[0], p2 = m * c.v[1];
    const double H = (p1 * p1 + p2 * p2 + omega * omega * q2) / (2 * m);
    const double k = 2 * lambda * H - omega * omega;
    const double ang = c.q[0] * p2 - c.q[1] * p1;
    return {p1 * p1 - k * c.q[0] * c.q[0], p2 * p2 - k * c.q[1] * c.q[1], ang * ang};
}

std::vector<FirstIntegral> darboux_integrals(double lambda, double omega, const RefPoint& ref) {
    require_params(lambda, omega);
    const std::vector<EventSpec> turns{{EventKind::TurningPoint, 1}};
    std::vector<FirstIntegral> out;
    auto add = [&out](IntegralName n, std::function<double(const PhaseState&)> f) {
        FirstIntegral I;
        I.name = n;
        I.eval = std::move(f);
        out.push_back(I);
        return &out.back();
    };
    add(IntegralName::L, [lambda](const PhaseState& s) { return darboux_L(s, lambda); });
    add(IntegralName::E, [lambda, omega](const PhaseState& s) { return darboux_E(s, lambda, omega); });
    auto partials = [lambda, omega, ref](const PhaseState& s) { return eval_darboux_partials(s, lambda, omega, ref); };
    {
        FirstIntegral* th = add(IntegralName::Theta, [lambda, omega, ref](const PhaseState& s) {
            return reduce_mod(eval_darboux_integrals(s, lambda, omega, ref).Theta, std::numbers::pi);
        });
        // Like the isotropic limit, the deformed orbit is centrally symmetric: Θ is an axis, mod π.
        th->valuedness = Valuedness::ModPi;
        th->reference_point = ref;
        th->jump_events = turns;
        th->partials = partials;
    }
    {
        FirstIntegral* T = add(IntegralName::T, [lambda, omega, ref](const PhaseState& s) {
            return eval_darboux_integrals(s, lambda, omega, ref).T;
        });
        T->time_explicit = true;
        T->reference_point = ref;
        T->jump_events = turns;
        T->period = [lambda, omega](const PhaseState& s) {
            return darboux_radial_period(darboux_E(s, lambda, omega), lambda, omega);
        };
        T->partials = partials;
    }
    add(IntegralName::E1_cart, [lambda, omega](const PhaseState& s) { return cartesian_constants(s, lambda, omega).E1; });
    add(IntegralName::E2_cart, [lambda, omega](const PhaseState& s) { return cartesian_constants(s, lambda, omega).E2; });
    add(IntegralName::C2_cart, [lambda, omega](const PhaseState& s) { return cartesian_constants(s, lambda, omega).C2; });
    return out;
}

}  // namespace nlab

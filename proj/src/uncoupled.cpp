#include <cmath>
#include <numbers>

#include "noetherlab/systems.hpp"

namespace nlab {

namespace {

// arctan(ωq/q̇) with IEEE division, so q̇ = ±0 gives ±π/2 by the sign of the zero.
double phase_angle(double omega, double q, double v) {
    if (q == 0.0 && v == 0.0) fail(ErrorCode::UndefinedPhase, "oscillator at the origin of its phase plane");
    return std::atan(omega * q / v);
}

void require_frequencies(double w1, double w2) {
    if (!(w1 > 0 && w2 > 0 && std::isfinite(w1) && std::isfinite(w2)))
        fail(ErrorCode::InvalidParam, "omega1 and omega2 must be positive");
}

}  // namespace

SystemDef make_uncoupled(double omega1, double omega2) {
    require_frequencies(omega1, omega2);
    SystemDef sys;
    sys.name = "uncoupled";
    sys.chart = Chart::Cartesian;
    sys.params.omega1 = omega1;
    sys.params.omega2 = omega2;
    const double a = omega1 * omega1, b = omega2 * omega2;
    sys.accel = [a, b](const PhaseState& s) { return Vec2{-a * s.q[0], -b * s.q[1]}; };
    sys.lagrangian = [a, b](const PhaseState& s) {
        return 0.5 * (s.v[0] * s.v[0] + s.v[1] * s.v[1] - a * s.q[0] * s.q[0] - b * s.q[1] * s.q[1]);
    };
    sys.noether_weights = [](const Vec2&) { return Vec2{1.0, 1.0}; };
    return sys;
}

double uncoupled_energy(const PhaseState& s, double omega, int index) {
    const int i = index - 1;
    return 0.5 * (s.v[i] * s.v[i] + omega * omega * s.q[i] * s.q[i]);
}

double eval_phase_integral_Phi(const PhaseState& s, double omega1, double omega2) {
    const double a1 = phase_angle(omega1, s.q[0], s.v[0]);
    const double a2 = phase_angle(omega2, s.q[1], s.v[1]);
    const double phi = (1 + omega2 / omega1) * a1 - (1 + omega1 / omega2) * a2;
    return reduce_mod(phi, std::numbers::pi);
}

double eval_uncoupled_T(const PhaseState& s, double omega1, double omega2) {
    const double a1 = phase_angle(omega1, s.q[0], s.v[0]);
    const double a2 = phase_angle(omega2, s.q[1], s.v[1]);
    return s.t - (a1 / (2 * omega1) + a2 / (2 * omega2));
}

std::vector<FirstIntegral> uncoupled_integrals(double omega1, double omega2) {
    require_frequencies(omega1, omega2);
    const std::vector<EventSpec> turns{{EventKind::TurningPoint, 1}, {EventKind::TurningPoint, 2}};
    std::vector<FirstIntegral> out;
    FirstIntegral e1;
    e1.name = IntegralName::E1;
    e1.eval = [omega1](const PhaseState& s) { return uncoupled_energy(s, omega1, 1); };
    out.push_back(e1);
    FirstIntegral e2;
    e2.name = IntegralName::E2;
    e2.eval = [omega2](const PhaseState& s) { return uncoupled_energy(s, omega2, 2); };
    out.push_back(e2);
    FirstIntegral phi;
    phi.name = IntegralName::Phi;
    phi.eval = [omega1, omega2](const PhaseState& s) { return eval_phase_integral_Phi(s, omega1, omega2); };
    phi.valuedness = Valuedness::ModPi;
    phi.jump_events = turns;
    out.push_back(phi);
    FirstIntegral t;
    t.name = IntegralName::Tosc;
    t.eval = [omega1, omega2](const PhaseState& s) { return eval_uncoupled_T(s, omega1, omega2); };
    t.time_explicit = true;
    t.jump_events = turns;
    out.push_back(t);
    return out;
}

}  // namespace nlab

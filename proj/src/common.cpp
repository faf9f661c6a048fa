#include <cmath>
#include <numbers>

#include "noetherlab/systems.hpp"

namespace nlab {

Generator point_generator(std::string name, std::function<double(const PhaseState&)> tau,
                          std::function<Vec2(const PhaseState&)> xi) {
    Generator g;
    g.name = std::move(name);
    g.tau = tau;
    g.P[0] = [tau, xi](const PhaseState& s) { return xi(s)[0] - tau(s) * s.v[0]; };
    g.P[1] = [tau, xi](const PhaseState& s) { return xi(s)[1] - tau(s) * s.v[1]; };
    return g;
}

std::string_view to_string(IntegralName n) {
    switch (n) {
        case IntegralName::L: return "L";
        case IntegralName::E: return "E";
        case IntegralName::Theta: return "Theta";
        case IntegralName::T: return "T";
        case IntegralName::E1: return "E1";
        case IntegralName::E2: return "E2";
        case IntegralName::Phi: return "Phi";
        case IntegralName::Tosc: return "Tosc";
        case IntegralName::E1_cart: return "E1_cart";
        case IntegralName::E2_cart: return "E2_cart";
        case IntegralName::C2_cart: return "C2_cart";
    }
    return "?";
}

double valuedness_period(Valuedness v) {
    switch (v) {
        case Valuedness::ModPi: return std::numbers::pi;
        case Valuedness::Mod2Pi: return 2 * std::numbers::pi;
        case Valuedness::SingleValued: return 0.0;
    }
    return 0.0;
}

double reduce_mod(double x, double period) {
    if (!(period > 0)) return x;
    double y = std::fmod(x, period);
    if (y < 0) y += period;
    if (y >= period) y -= period;
    return y;
}

double circular_diff(double a, double b, double period) {
    if (!(period > 0)) return a - b;
    double d = std::remainder(a - b, period);
    if (d <= -0.5 * period) d += period;
    return d;
}

PhaseState to_polar(const PhaseState& s) {
    if (s.chart == Chart::Polar) return s;
    const double x = s.q[0], y = s.q[1], vx = s.v[0], vy = s.v[1];
    const double r = std::hypot(x, y);
    if (r == 0.0) fail(ErrorCode::OriginSingularity, "to_polar at the origin");
    PhaseState p;
    p.t = s.t;
    p.chart = Chart::Polar;
    p.q = {r, std::atan2(y, x)};
    p.v = {(x * vx + y * vy) / r, (x * vy - y * vx) / (r * r)};
    return p;
}

PhaseState to_cartesian(const PhaseState& s) {
    if (s.chart == Chart::Cartesian) return s;
    const double r = s.q[0], th = s.q[1], rd = s.v[0], thd = s.v[1];
    const double c = std::cos(th), sn = std::sin(th);
    PhaseState p;
    p.t = s.t;
    p.chart = Chart::Cartesian;
    p.q = {r * c, r * sn};
    p.v = {rd * c - r * thd * sn, rd * sn + r * thd * c};
    return p;
}

int radial_branch(const SystemDef& sys, const PhaseState& s) {
    if (s.v[0] > 0) return 1;
    if (s.v[0] < 0) return -1;
    return sys.accel(s)[0] >= 0 ? 1 : -1;
}

}  // namespace nlab

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "noetherlab/dynamics.hpp"
#include "noetherlab/systems.hpp"

using namespace nlab;

namespace {

PhaseState polar(double t, double r, double th, double rd, double thd) {
    return PhaseState{t, {r, th}, {rd, thd}, Chart::Polar};
}

PhaseState cart(double t, double q1, double q2, double v1, double v2) {
    return PhaseState{t, {q1, q2}, {v1, v2}, Chart::Cartesian};
}

double max_rel_drift(const Trajectory& tr, const std::function<double(const PhaseState&)>& f) {
    const double f0 = f(tr.samples.front());
    double m = 0;
    for (const auto& s : tr.samples) m = std::max(m, std::abs(f(s) - f0) / std::max(1.0, std::abs(f0)));
    return m;
}

}  // namespace

TEST_CASE("darboux energy drift stays below 1e-9") {
    const auto sys = make_darboux(1.0, 1.0);
    const auto tr = integrate(sys, polar(0, 1, 0, 0, 0.5), 50.0);
    CHECK(max_rel_drift(tr, [](const PhaseState& s) { return darboux_E(s, 1.0, 1.0); }) < 1e-9);
}

TEST_CASE("uncoupled oscillator reproduces cos and sin") {
    const auto sys = make_uncoupled(1, 1);
    const auto tr = integrate(sys, cart(0, 1, 0, 0, 1), 10.0);
    double err = 0;
    for (const auto& s : tr.samples)
        err = std::max({err, std::abs(s.q[0] - std::cos(s.t)), std::abs(s.q[1] - std::sin(s.t))});
    CHECK(err < 1e-8);
    CHECK(tr.samples.back().t == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("circular Coulomb orbit keeps r = 1") {
    const auto sys = make_central({PotentialKind::Coulomb, 1});
    IntegratorOptions o;
    o.events = {{EventKind::TurningPoint, 1}};
    const auto tr = integrate(sys, polar(0, 1, 0, 0, 1), 20.0, o);
    double err = 0;
    for (const auto& s : tr.samples) err = std::max(err, std::abs(s.q[0] - 1));
    CHECK(err < 1e-9);
    CHECK(tr.events.empty());
}

TEST_CASE("samples increase and events lie in range") {
    const auto sys = make_darboux(0.5, 1.2);
    IntegratorOptions o;
    o.events = {{EventKind::TurningPoint, 1}, {EventKind::InertialPoint, 1}};
    const auto tr = integrate(sys, polar(0, 1, 0, 0.3, 0.7), 20.0, o);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) CHECK(tr.samples[i].t > tr.samples[i - 1].t);
    CHECK(!tr.events.empty());
    for (const auto& e : tr.events) {
        CHECK(e.t >= tr.samples.front().t);
        CHECK(e.t <= tr.samples.back().t);
        CHECK(std::abs(event_value(sys, e.state, {e.kind, e.index})) < 1e-10);
    }
}

TEST_CASE("Kepler ellipse turning points at 2/3 and 2") {
    // E = −3/8, L = 1: start at the outer apsis r = 2 with θ̇ = L/r².
    const auto sys = make_central({PotentialKind::Coulomb, 1});
    const PhaseState s0 = polar(0, 2, 0, 0, 0.25);
    CHECK(central_E(s0, {PotentialKind::Coulomb, 1}) == doctest::Approx(-0.375));
    IntegratorOptions o;
    o.events = {{EventKind::TurningPoint, 1}};
    // Radial period 2π a^{3/2} with a = 4/3; start just after the apsis to avoid counting it.
    const double period = 2 * std::numbers::pi * std::pow(4.0 / 3.0, 1.5);
    const auto tr = integrate(sys, advance(sys, s0, 1e-3), period + 1e-3 + 0.01, o);
    REQUIRE(tr.events.size() == 2);
    CHECK(tr.events[0].state.q[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(tr.events[1].state.q[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(tr.events[0].direction == 1);
    CHECK(tr.events[1].direction == -1);
}

TEST_CASE("zero crossings of cos t") {
    const auto sys = make_uncoupled(1, 1);
    const auto tr = integrate(sys, cart(0, 1, 0.5, 0, 0.1), 2 * std::numbers::pi);
    const std::vector<EventSpec> kinds{{EventKind::ZeroCrossing, 1}};
    const auto ev = detect_events(sys, tr, kinds);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].t == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
    CHECK(ev[1].t == doctest::Approx(3 * std::numbers::pi / 2).epsilon(1e-10));
}

TEST_CASE("refine_event bracket and degenerate bracket") {
    const auto sys = make_uncoupled(1, 1);
    const PhaseState a = cart(1.5, std::cos(1.5), 0, -std::sin(1.5), 0);
    const PhaseState b = advance(sys, a, 0.2);
    const Event e = refine_event(sys, a, b, {EventKind::ZeroCrossing, 1});
    CHECK(std::abs(e.t - std::numbers::pi / 2) < 1e-10);
    const PhaseState c = advance(sys, a, 0.01);
    CHECK_THROWS_AS(refine_event(sys, a, c, {EventKind::ZeroCrossing, 1}), Error);
}

TEST_CASE("refine turning point on Kepler ellipse") {
    const auto sys = make_central({PotentialKind::Coulomb, 1});
    const PhaseState apo = polar(0, 2, 0, 0, 0.25);
    const Event e = refine_event(sys, advance(sys, apo, -0.3), advance(sys, apo, 0.2), {EventKind::TurningPoint, 1});
    CHECK(std::abs(e.state.q[0] - 2.0) < 1e-9);
}

TEST_CASE("time reversal returns to the start") {
    IntegratorOptions o;
    o.rtol = o.atol = 1e-11;
    struct Case {
        SystemDef sys;
        PhaseState s0;
    };
    const std::vector<Case> cases{
        {make_uncoupled(1, 1.7), cart(0, 1, 0.2, 0.1, -0.3)},
        {make_central({PotentialKind::Coulomb, 1}), polar(0, 1.2, 0.1, 0.2, 0.8)},
        {make_darboux(0.5, 1.0), polar(0, 1.0, 0.0, 0.3, 0.6)},
    };
    for (const auto& c : cases) {
        const auto fwd = integrate(c.sys, c.s0, 10.0, o);
        PhaseState back = fwd.samples.back();
        back.v = {-back.v[0], -back.v[1]};
        const auto rev = integrate(c.sys, back, back.t + 10.0, o);
        const PhaseState& e = rev.samples.back();
        double err = 0;
        for (int i = 0; i < 2; ++i) err = std::max({err, std::abs(e.q[i] - c.s0.q[i]), std::abs(e.v[i] + c.s0.v[i])});
        CHECK(err < 10 * 1e-8);
    }
}

TEST_CASE("energy drift decreases with tolerance") {
    const auto sys = make_darboux(1.0, 1.0);
    std::vector<double> drift;
    for (double tol : {1e-7, 1e-9, 1e-11}) {
        IntegratorOptions o;
        o.rtol = o.atol = tol;
        o.sample_dt = 0.1;
        const auto tr = integrate(sys, polar(0, 1, 0, 0.2, 0.5), 50.0, o);
        drift.push_back(max_rel_drift(tr, [](const PhaseState& s) { return darboux_E(s, 1.0, 1.0); }));
    }
    CHECK(drift[1] < drift[0]);
    CHECK(drift[2] < drift[1]);
}

TEST_CASE("domain guards") {
    const auto sys = make_central({PotentialKind::Coulomb, 1});
    CHECK_THROWS_AS(integrate(sys, polar(0, 1e-13, 0, 0, 0), 1.0), Error);
    CHECK_THROWS_AS(integrate(sys, polar(0, -1, 0, 0, 0), 1.0), Error);
    // Radial infall reaches the centre.
    try {
        integrate(sys, polar(0, 1, 0, 0, 0), 5.0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK((e.code() == ErrorCode::BlowUp || e.code() == ErrorCode::StepUnderflow));
    }
}

TEST_CASE("dense output matches nodes and interpolates smoothly") {
    const auto sys = make_uncoupled(1, 1);
    const auto tr = integrate(sys, cart(0, 1, 0, 0, 1), 3.0);
    const PhaseState s = tr.at(1.2345);
    CHECK(std::abs(s.q[0] - std::cos(1.2345)) < 1e-9);
}

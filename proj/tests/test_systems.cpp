#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "noetherlab/systems.hpp"
#include "support.hpp"

using namespace nlab;
using namespace testsupport;

constexpr double pi = std::numbers::pi;

TEST_CASE("uncoupled accelerations and energy") {
    auto a = make_uncoupled(1, 1).accel(cart(0, 1, 0, 0, 0));
    CHECK(a[0] == -1);
    CHECK(a[1] == 0);
    a = make_uncoupled(1, 2).accel(cart(0, 0, 1, 0, 0));
    CHECK(a[1] == -4);
    CHECK(uncoupled_energy(cart(0, 1, 0, 0, 0), 1, 1) == 0.5);
    CHECK_THROWS_AS(make_uncoupled(0, 1), Error);
}

TEST_CASE("Phi examples") {
    for (double t0 : {0.3, 1.1, 2.5}) {
        const double c = std::cos(t0), s = -std::sin(t0);
        const double phi = eval_phase_integral_Phi(cart(0, c, c, s, s), 1, 1);
        CHECK(std::min(phi, pi - phi) < 1e-14);
    }
    CHECK(eval_phase_integral_Phi(cart(0, 0, 0, 1, 1), 1, 2) == 0.0);
    try {
        eval_phase_integral_Phi(cart(0, 0, 1, 0, 1), 1, 2);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UndefinedPhase);
    }
    // q̇ = ±0 follows the sign of the zero.
    const double p = eval_phase_integral_Phi(cart(0, 1, 0, 0.0, 1), 1, 1);
    const double m = eval_phase_integral_Phi(cart(0, 1, 0, -0.0, 1), 1, 1);
    CHECK(p >= 0);
    CHECK(p < pi);
    CHECK(std::abs(circular_diff(p, m, pi)) < 1e-14);
}

TEST_CASE("central accelerations") {
    CHECK(make_central({PotentialKind::Coulomb, 1}).accel(polar(0, 1, 0, 0, 0))[0] == -1);
    CHECK(make_central({PotentialKind::Isotropic, 1}).accel(polar(0, 1, 0, 0, 1))[0] == -1);
    CHECK(make_central({PotentialKind::PerturbedCoulomb, 1, 0.18}).accel(polar(0, 1, 0, 0, 0))[0] ==
          doctest::Approx(-1.36).epsilon(1e-15));
    CHECK_THROWS_AS(make_central({PotentialKind::PowerLaw, 1, 0, -3}), Error);
    CHECK_THROWS_AS(make_central({PotentialKind::Coulomb, -1}), Error);
    const PotentialSpec sp{PotentialKind::SpecialKKr3, 2, 0.5};
    const double req = *equilibrium_radius(sp);
    CHECK(std::abs(potential_derivative(sp, req)) < 1e-12);
}

TEST_CASE("central Theta at the reference radius is theta") {
    const PotentialSpec U{PotentialKind::Coulomb, 1};
    const PhaseState s = polar(0, 1.5, 0.7, 0.3, 0.4);
    const double L = central_L(s), E = central_E(s, U);
    CHECK(std::abs(eval_central_Theta(s, L, E, RefPoint::at(1.5), U) - 0.7) < 1e-15);
}

TEST_CASE("Kepler Theta is constant along the orbit") {
    const PotentialSpec U{PotentialKind::Coulomb, 1};
    const auto sys = make_central(U);
    const PhaseState s0 = polar(0, 2, 0.4, 0, 0.25);
    IntegratorOptions o;
    o.sample_dt = 0.5;
    const auto tr = integrate(sys, advance(sys, s0, 0.01), 30, o);
    const auto ints = central_integrals(U);
    const auto& th = ints[2];
    const double ref = th.eval(tr.samples.front());
    int n = 0;
    for (std::size_t i = 0; i < tr.samples.size(); i += 3, ++n) {
        const double v = th.eval(tr.samples[i]);
        CHECK(std::abs(circular_diff(v, ref, 2 * pi)) < 1e-6);
    }
    CHECK(n >= 20);
    CHECK(std::abs(circular_diff(ref, 0.4, 2 * pi)) < 1e-6);
}

TEST_CASE("perturbed Coulomb Theta jumps at the inner turning point") {
    const PotentialSpec U{PotentialKind::PerturbedCoulomb, 1, 0.18};
    const double L = 1, E = central_E(polar(0, 1, 0, 0, 1), U);
    const RadialBounds b = central_turning_points(U, L, E, 1.0);
    const double r = b.r_in;
    const double before = central_theta_raw(U, r, 0, L, E, -1, RefPoint::outer());
    const double after = central_theta_raw(U, r, 0, L, E, +1, RefPoint::outer());
    const double expected = 2 * std::abs(pi / std::sqrt(1 - 2 * 0.18) - pi);
    CHECK(std::abs(std::abs(circular_diff(after, before, 2 * pi)) - expected) < 1e-4);
    CHECK(central_apsidal_angle(U, L, E, 1.0) == doctest::Approx(pi / 0.8).epsilon(1e-10));
}

TEST_CASE("darboux accelerations") {
    const auto d0 = make_darboux(0, 1.3);
    const auto c0 = make_central({PotentialKind::Isotropic, 0.5 * 1.3 * 1.3});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.2, 2);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = polar(0, u(rng), u(rng), u(rng) - 1, u(rng) - 1);
        const auto a = d0.accel(s), b = c0.accel(s);
        CHECK(std::abs(a[0] - b[0]) < 1e-12);
        CHECK(std::abs(a[1] - b[1]) < 1e-12);
    }
    const auto d = make_darboux(1, 1);
    CHECK(d.accel(polar(0, 1, 0, 0, 0.5))[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d.accel(polar(0, 1, 0, 1, 0))[1] == 0);
    CHECK_THROWS_AS(make_darboux(-1, 1), Error);
}

TEST_CASE("darboux L and E by hand") {
    // ω² − 2λE = 0 here, so only L and E exist.
    CHECK(darboux_L(polar(0, 1, 0, 0, 0.5), 1) == doctest::Approx(1.0));
    CHECK(darboux_E(polar(0, 1, 0, 0, 0.5), 1, 1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(eval_darboux_integrals(polar(0, 1, 0, 0, 0.5), 1, 1), Error);
    const PhaseState s = polar(0, 1.3, 0, 0.4, 0.7);
    const double L = central_L(s);
    CHECK(darboux_E(s, 0, 1.1) == doctest::Approx(0.5 * (0.16 + L * L / 1.69) + 0.5 * 1.21 * 1.69));
}

TEST_CASE("darboux Theta constant mod pi along the orbit") {
    const double lam = 0.1, w = 1;
    const auto sys = make_darboux(lam, w);
    IntegratorOptions o;
    o.sample_dt = 0.37;
    const auto tr = integrate(sys, polar(0, 1, 0.2, 0.3, 0.8), 20 * 0.37 + 1e-9, o);
    const auto th = darboux_integrals(lam, w)[2];
    REQUIRE(th.valuedness == Valuedness::ModPi);
    const double ref = th.eval(tr.samples.front());
    REQUIRE(tr.samples.size() >= 20);
    for (const auto& s : tr.samples) CHECK(std::abs(circular_diff(th.eval(s), ref, pi)) < 1e-6);
}

TEST_CASE("darboux T is constant on arcs") {
    const double lam = 0.5, w = 1.2;
    const auto sys = make_darboux(lam, w);
    const PhaseState s0 = polar(0, 1, 0, 0.3, 0.6);
    const double T0 = eval_darboux_integrals(s0, lam, w).T;
    const PhaseState s1 = advance(sys, s0, 0.05);
    CHECK(std::abs(eval_darboux_integrals(s1, lam, w).T - T0) < 1e-10);
    const double E = darboux_E(s0, lam, w);
    CHECK(darboux_radial_period(E, 0, w) == doctest::Approx(pi / w));
}

TEST_CASE("darboux partials vanish at r = r0 and satisfy the identity") {
    const double lam = 0.5, w = 1.5;
    const IntegralPartials p = eval_darboux_partials(1.0, 1.0, 2.0, 1, lam, w, RefPoint::at(1.0));
    CHECK(p.dL_Theta == 0);
    CHECK(p.dE_Theta == 0);
    CHECK(p.dE_T == 0);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_darboux_jet(rng, lam, w);
        for (auto ref : {RefPoint::outer(), RefPoint::inner()}) {
            const auto q = eval_darboux_partials(s, lam, w, ref);
            CHECK(q.dE_Theta == -q.dL_T);
        }
    }
}

TEST_CASE("darboux partials agree with finite differences") {
    const double lam = 0.5, w = 1.5;
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
        const PhaseState s = random_darboux_jet(rng, lam, w);
        const double r = s.q[0], L = darboux_L(s, lam), E = darboux_E(s, lam, w);
        const int br = s.v[0] > 0 ? 1 : -1;
        const double r_in = darboux_turning_points(L, E, lam, w).r_in;
        for (auto ref : {RefPoint::outer(), RefPoint::inner(), RefPoint::inertial(), RefPoint::at(0.5 * (r + r_in))}) {
            const auto p = eval_darboux_partials(r, L, E, br, lam, w, ref);
            auto th = [&](double l, double e) { return darboux_theta_raw(r, 0, l, e, br, lam, w, ref); };
            auto T = [&](double l, double e) { return darboux_T_raw(0, r, l, e, br, lam, w, ref); };
            const double h = 1e-5;
            auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
            CHECK(rel(p.dL_Theta, richardson([&](double l) { return th(l, E); }, L, h)) < 1e-6);
            CHECK(rel(p.dE_Theta, richardson([&](double e) { return th(L, e); }, E, h)) < 1e-6);
            CHECK(rel(p.dE_T, richardson([&](double e) { return T(L, e); }, E, h)) < 1e-6);
            CHECK(rel(p.dL_T, richardson([&](double l) { return T(l, E); }, L, h)) < 1e-6);
        }
    }
}

TEST_CASE("darboux multiplier pairs are velocity gradients of the integrals") {
    const double lam = 0.5, w = 1.5;
    const auto Q = darboux_multipliers(lam, w);
    std::mt19937_64 rng(5);
    auto integral = [&](const std::string& n, const PhaseState& s) {
        const double L = darboux_L(s, lam), E = darboux_E(s, lam, w);
        const int br = s.v[0] > 0 ? 1 : -1;
        if (n == "L") return L;
        if (n == "E") return E;
        if (n == "Theta") return darboux_theta_raw(s.q[0], s.q[1], L, E, br, lam, w, RefPoint::outer());
        return darboux_T_raw(s.t, s.q[0], L, E, br, lam, w, RefPoint::outer());
    };
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const PhaseState s = random_darboux_jet(rng, lam, w);
        for (const auto& [name, q] : Q) {
            for (int k = 0; k < 2; ++k) {
                auto f = [&](double x) {
                    PhaseState p = s;
                    p.v[k] = x;
                    return integral(q.source, p);
                };
                const double fd = richardson(f, s.v[k], 1e-4);
                worst = std::max(worst, std::abs(fd - q.Q[k](s)) / std::max(1.0, std::abs(fd)));
            }
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("cartesian constants") {
    const double w = 1.3;
    const PhaseState c = cart(0, 0.4, -0.9, 0.3, 0.2);
    const auto k0 = cartesian_constants(c, 0, w);
    CHECK(k0.E1 == doctest::Approx(2 * uncoupled_energy(c, w, 1)).epsilon(1e-14));
    CHECK(k0.E2 == doctest::Approx(2 * uncoupled_energy(c, w, 2)).epsilon(1e-14));
    const auto k = cartesian_constants(c, 0.5, w);
    const PhaseState p = to_polar(c);
    const double L = darboux_L(p, 0.5);
    CHECK(std::abs(k.C2 - L * L) < 1e-12);
    CHECK(k.E1 + k.E2 == doctest::Approx(2 * darboux_E(p, 0.5, w)).epsilon(1e-13));

    const auto sys = make_darboux(0.5, w);
    const auto tr = integrate(sys, p, 50);
    const double e0 = cartesian_constants(tr.samples.front(), 0.5, w).E1;
    double d = 0;
    for (const auto& s : tr.samples) d = std::max(d, std::abs(cartesian_constants(s, 0.5, w).E1 - e0));
    CHECK(d / std::max(1.0, std::abs(e0)) < 1e-8);
}

TEST_CASE("chart conversions") {
    auto p = to_polar(cart(0, 1, 0, 0, 1));
    CHECK(p.q[0] == 1);
    CHECK(p.q[1] == 0);
    CHECK(p.v[0] == 0);
    CHECK(p.v[1] == 1);
    auto c = to_cartesian(polar(0, 2, pi / 2, 1, 0));
    CHECK(std::abs(c.q[0]) < 1e-15);
    CHECK(c.q[1] == 2);
    CHECK(std::abs(c.v[0]) < 1e-16);
    CHECK(c.v[1] == 1);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-2, 2);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const PhaseState s = cart(0, u(rng), u(rng), u(rng), u(rng));
        const PhaseState b = to_cartesian(to_polar(s));
        for (int k = 0; k < 2; ++k)
            worst = std::max({worst, std::abs(b.q[k] - s.q[k]), std::abs(b.v[k] - s.v[k])});
    }
    CHECK(worst < 1e-14);
    CHECK_THROWS_AS(to_polar(cart(0, 0, 0, 1, 0)), Error);
}

TEST_CASE("lambda to zero matches the isotropic oscillator") {
    const double w = 1.2;
    const PotentialSpec U{PotentialKind::Isotropic, 0.5 * w * w};
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_darboux_jet(rng, 1e-10, w);
        const auto d = eval_darboux_integrals(s, 1e-10, w);
        const double L = central_L(s), E = central_E(s, U);
        CHECK(std::abs(d.L - L) < 1e-6);
        CHECK(std::abs(d.E - E) < 1e-6);
        CHECK(std::abs(circular_diff(d.Theta, eval_central_Theta(s, L, E, RefPoint::outer(), U), 2 * pi)) < 1e-6);
        CHECK(std::abs(d.T - eval_central_T(s, L, E, RefPoint::outer(), U)) < 1e-6);
    }
}

TEST_CASE("central partials match the closed forms in the isotropic case") {
    const double w = 1.2;
    const PotentialSpec U{PotentialKind::Isotropic, 0.5 * w * w};
    std::mt19937_64 rng(8);
    for (int i = 0; i < 5; ++i) {
        const PhaseState s = random_darboux_jet(rng, 0, w);
        const double L = central_L(s), E = central_E(s, U);
        const int br = s.v[0] > 0 ? 1 : -1;
        const auto a = central_partials(U, s.q[0], L, E, br, RefPoint::outer());
        const auto b = eval_darboux_partials(s.q[0], L, E, br, 0, w, RefPoint::outer());
        CHECK(std::abs(a.dL_Theta - b.dL_Theta) < 1e-7 * std::max(1.0, std::abs(b.dL_Theta)));
        CHECK(std::abs(a.dE_Theta - b.dE_Theta) < 1e-7 * std::max(1.0, std::abs(b.dE_Theta)));
        CHECK(std::abs(a.dE_T - b.dE_T) < 1e-7 * std::max(1.0, std::abs(b.dE_T)));
        CHECK(std::abs(a.dL_T - b.dL_T) < 1e-7 * std::max(1.0, std::abs(b.dL_T)));
    }
}

TEST_CASE("L, E, Theta, T are functionally independent") {
    const double lam = 0.5, w = 1.5;
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const PhaseState s = random_darboux_jet(rng, lam, w);
        auto f = [&](const PhaseState& p) {
            const double L = darboux_L(p, lam), E = darboux_E(p, lam, w);
            const int br = s.v[0] > 0 ? 1 : -1;
            return Eigen::Vector4d(L, E, darboux_theta_raw(p.q[0], p.q[1], L, E, br, lam, w, RefPoint::outer()),
                                   darboux_T_raw(p.t, p.q[0], L, E, br, lam, w, RefPoint::outer()));
        };
        Eigen::Matrix<double, 4, 5> J;
        for (int c = 0; c < 5; ++c) {
            auto shifted = [&](double h) {
                PhaseState p = s;
                double* slot[] = {&p.t, &p.q[0], &p.q[1], &p.v[0], &p.v[1]};
                *slot[c] += h;
                return f(p);
            };
            J.col(c) = (shifted(1e-6) - shifted(-1e-6)) / 2e-6;
        }
        for (int r = 0; r < 4; ++r) J.row(r) /= J.row(r).norm();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
        CHECK(svd.singularValues()(3) > 1e-8);
    }
}

TEST_CASE("valuedness bookkeeping") {
    const double lam = 0.5, w = 1.5;
    std::mt19937_64 rng(10);
    for (int i = 0; i < 20; ++i) {
        PhaseState s = random_darboux_jet(rng, lam, w);
        const double a = eval_darboux_integrals(s, lam, w).Theta;
        s.q[1] += 2 * pi;
        const double b = eval_darboux_integrals(s, lam, w).Theta;
        CHECK(a >= 0);
        CHECK(a < 2 * pi);
        CHECK(std::abs(circular_diff(a, b, 2 * pi)) < 1e-12);
        const PhaseState c = cart(0, s.q[0], s.v[1], s.v[0], s.q[1]);
        const double phi = eval_phase_integral_Phi(c, 1, 1.7);
        CHECK(phi >= 0);
        CHECK(phi < pi);
    }
}

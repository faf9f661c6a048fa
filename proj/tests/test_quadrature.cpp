#include <doctest.h>

#include <cmath>
#include <numbers>

#include "noetherlab/error.hpp"
#include "noetherlab/quadrature.hpp"

using namespace nlab;

namespace {

// Kepler radicand with k = 1, E = −3/8, L = 1.
double kepler_R(double r) { return -0.75 * r * r + 2 * r - 1; }

}  // namespace

TEST_CASE("arcsine integral") {
    const double I = integrate_singular({[](double r) { return 1 / std::sqrt(1 - r * r); }, 0, 1, false, true});
    CHECK(std::abs(I - std::numbers::pi / 2) < 1e-10);
}

TEST_CASE("Kepler half-period angle is pi") {
    const double I = integrate_singular(
        {[](double r) { return 1 / (r * std::sqrt(kepler_R(r))); }, 2.0 / 3.0, 2.0, true, true});
    CHECK(std::abs(I - std::numbers::pi) < 1e-8);
}

TEST_CASE("isotropic half-period angle is pi/2") {
    // U = ½r², E = 1, L = 0.5: R = 2r² − r⁴ − 1/4, roots r² = 1 ± √(3/4).
    const double L = 0.5;
    auto R = [](double r) { return 2 * (1 - 0.5 * r * r) * r * r - 0.25; };
    const double u_in = 1 - std::sqrt(0.75), u_out = 1 + std::sqrt(0.75);
    const double I = integrate_singular(
        {[&](double r) { return L / (r * std::sqrt(R(r))); }, std::sqrt(u_in), std::sqrt(u_out), true, true});
    CHECK(std::abs(I - std::numbers::pi / 2) < 1e-8);
}

TEST_CASE("additivity and orientation") {
    auto f = [](double r) { return 1 / (r * std::sqrt(kepler_R(r))); };
    const double a = 2.0 / 3.0, b = 2.0, c = 1.1;
    const double whole = integrate_singular({f, a, b, true, true});
    const double left = integrate_singular({f, a, c, true, false});
    const double right = integrate_singular({f, c, b, false, true});
    CHECK(std::abs(left + right - whole) < 2e-10);
    const double fwd = integrate_singular({f, a, c, true, false});
    const double rev = integrate_singular({f, c, a, false, true});
    CHECK(fwd == -rev);
}

TEST_CASE("tightening the tolerance does not move away from the reference") {
    auto f = [](double r) { return r / std::sqrt(kepler_R(r)); };
    const double ref = integrate_singular({f, 2.0 / 3.0, 2.0, true, true}, 1e-13);
    double prev = 1.0;
    for (double tol : {1e-6, 5e-7, 2.5e-7, 1.25e-7}) {
        const double d = std::abs(integrate_singular({f, 2.0 / 3.0, 2.0, true, true}, tol) - ref);
        CHECK(d <= prev + 1e-15);
        prev = d;
    }
}

TEST_CASE("double zero is not integrable") {
    // Radicand (r − 1)² at the declared end r = 1.
    auto f = [](double r) { return 1 / std::sqrt((r - 1) * (r - 1)); };
    try {
        integrate_singular({f, 1.0, 2.0, true, false});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonIntegrableSingularity);
    }
}

TEST_CASE("bracketed roots of the Kepler radicand") {
    CHECK(std::abs(bracketed_root(kepler_R, 1, 3) - 2) < 1e-12);
    CHECK(std::abs(bracketed_root(kepler_R, 0.1, 1) - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(kepler_R(bracketed_root(kepler_R, 0.1, 1, 1e-12))) < 1e-12);
    try {
        bracketed_root(kepler_R, 0.8, 1.5);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSignChange);
    }
}

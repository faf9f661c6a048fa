#include "noetherlab/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>

#include "noetherlab/error.hpp"

namespace nlab {

namespace {

constexpr std::size_t kMaxLevel = 12;

boost::math::quadrature::tanh_sinh<double>& rule() {
    thread_local boost::math::quadrature::tanh_sinh<double> ts(kMaxLevel);
    return ts;
}

// Rounding in a radicand evaluated next to its root puts a floor of order √ε under the error
// estimate. Boost stops early once refinement only makes the estimate worse; that stop is
// accepted when the estimate sits at this floor.
constexpr double kNoiseFloor = 1e-7;

void check_converged(double err, double l1, std::size_t levels, double tol) {
    if (err <= tol * (1.0 + l1)) return;
    if (levels < kMaxLevel && err <= kNoiseFloor * (1.0 + l1)) return;
    fail(ErrorCode::MaxRefinementExceeded, "tanh-sinh did not converge within the level cap");
}

// ∫₀ᵁ 2u f(end + dir·u²) du; non-finite values are tolerated only next to u = 0 and u = U,
// where the double-exponential weights are negligible.
double substituted(const SingularIntegral& si, double end, double dir, double span, double tol,
                   double& l1) {
    const double U = std::sqrt(span);
    auto raw = [&](double u) {
        const double d = dir * u * u;
        return 2.0 * u * (si.offset_integrand ? si.offset_integrand(end + d, d) : si.integrand(end + d));
    };
    // Without an offset form, end + d loses the digits of d once u² nears ε·|end|. Below u_c the
    // integrand, smooth in u², is replaced by the quadratic through its values at u_c and 2u_c.
    const double uc = si.offset_integrand ? 0.0 : 1e-4 * U;
    double gc = 0.0, slope = 0.0;
    if (uc > 0) {
        gc = raw(uc);
        slope = (raw(2 * uc) - gc) / (3 * uc * uc);
    }
    auto g = [&](double u) {
        if (u < uc) return gc + slope * (u * u - uc * uc);
        const double v = raw(u);
        if (std::isfinite(v)) return v;
        if (u < 1e-7 * U || U - u < 1e-7 * U) return 0.0;
        fail(ErrorCode::QuadratureFailure, "integrand not finite inside the interval");
    };
    // A simple zero of the radicand leaves g bounded at u = 0; a double zero makes it grow like 1/u.
    const double g1 = std::abs(raw(1e-3 * U)), g2 = std::abs(raw(1e-5 * U));
    if (g1 > 0 && g2 > 30.0 * g1)
        fail(ErrorCode::NonIntegrableSingularity, "endpoint singularity stronger than inverse square root");
    double err = 0.0;
    std::size_t levels = 0;
    const double I = rule().integrate(g, 0.0, U, tol, &err, &l1, &levels);
    check_converged(err, l1, levels, tol);
    return I;
}

double plain(const std::function<double(double)>& f, double a, double b, double tol) {
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    auto g = [&](double x) {
        const double v = f(x);
        if (!std::isfinite(v)) fail(ErrorCode::QuadratureFailure, "integrand not finite inside the interval");
        return v;
    };
    const double I = rule().integrate(g, a, b, tol, &err, &l1, &levels);
    check_converged(err, l1, levels, tol);
    return I;
}

}  // namespace

double integrate_singular(const SingularIntegral& si, double tol) {
    if (!(tol > 0)) fail(ErrorCode::InvalidParam, "quadrature tolerance must be positive");
    if (si.a == si.b) return 0.0;
    if (si.a > si.b) {
        SingularIntegral rev{si.integrand, si.b, si.a, si.singular_at_b, si.singular_at_a, si.offset_integrand};
        return -integrate_singular(rev, tol);
    }
    const auto& f = si.integrand;
    const double a = si.a, b = si.b;
    double l1 = 0.0;
    try {
        if (si.singular_at_a && si.singular_at_b) {
            const double c = 0.5 * (a + b);
            double l2 = 0.0;
            return substituted(si, a, 1.0, c - a, tol, l1) + substituted(si, b, -1.0, b - c, tol, l2);
        }
        if (si.singular_at_a) return substituted(si, a, 1.0, b - a, tol, l1);
        if (si.singular_at_b) return substituted(si, b, -1.0, b - a, tol, l1);
        return plain(f, a, b, tol);
    } catch (const boost::math::evaluation_error& e) {
        fail(ErrorCode::QuadratureFailure, e.what());
    } catch (const std::domain_error& e) {
        fail(ErrorCode::QuadratureFailure, e.what());
    }
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (lo > hi) std::swap(lo, hi);
    const double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) fail(ErrorCode::NoSignChange, "root bracket has no sign change");
    std::uintmax_t iters = 200;
    boost::math::tools::eps_tolerance<double> narrow(52);
    // Stop on a bracket at machine resolution, or once an end already meets the residual target.
    auto done = [&](double a, double b) {
        return narrow(a, b) || std::min(std::abs(f(a)), std::abs(f(b))) < 1e-3 * tol;
    };
    const auto [x0, x1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, iters);
    return std::abs(f(x0)) <= std::abs(f(x1)) ? x0 : x1;
}

}  // namespace nlab

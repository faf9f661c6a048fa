#pragma once

#include <functional>

namespace nlab {

/// ∫ₐᵇ integrand(r) dr where the integrand may blow up like (distance)^(−1/2) at declared ends.
struct SingularIntegral {
    std::function<double(double)> integrand;
    double a = 0.0;
    double b = 1.0;
    bool singular_at_a = false;
    bool singular_at_b = false;
    /// Optional form f(x, d) with d = x − end measured from the substituted end. Lets callers
    /// evaluate radicands without cancellation next to their roots.
    std::function<double(double, double)> offset_integrand = nullptr;
};

/// tanh-sinh with level cap 12, preceded by r = end ± u² at declared singular ends.
/// Result satisfies |result − true| ≤ tol·(1 + |result|).
double integrate_singular(const SingularIntegral& si, double tol = 1e-10);

/// Root of f in [lo, hi] by TOMS 748. Requires f(lo)·f(hi) ≤ 0.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

}  // namespace nlab

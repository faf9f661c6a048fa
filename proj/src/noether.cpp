#include "noetherlab/noether.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fd.hpp"
#include "noetherlab/systems.hpp"

namespace nlab {

MultiplierPair multiplier_from_generator(const Generator& g, const SystemDef& sys) {
    MultiplierPair m;
    m.source = g.name;
    for (int i = 0; i < 2; ++i)
        m.Q[i] = [P = g.P[i], w = sys.noether_weights, i](const PhaseState& s) { return -w(s.q)[i] * P(s); };
    return m;
}

Generator generator_from_multiplier(const MultiplierPair& q, const SystemDef& sys) {
    Generator g;
    g.name = q.source;
    for (int i = 0; i < 2; ++i)
        g.P[i] = [Q = q.Q[i], w = sys.noether_weights, i](const PhaseState& s) { return -Q(s) / w(s.q)[i]; };
    return g;
}

JetDomain default_domain(const SystemDef& sys) {
    if (sys.name == "darboux") {
        const double lam = sys.params.lambda, w = sys.params.omega;
        return [lam, w](const PhaseState& s) {
            if (!is_admissible(s) || std::abs(s.v[0]) < 0.2 || std::abs(s.v[0]) > 2 || std::abs(s.v[1]) > 2) return false;
            const double E = darboux_E(s, lam, w), L = darboux_L(s, lam), W = w * w - 2 * lam * E;
            return W > 0.25 * w * w && E * E - W * L * L > 0.1 * E * E && std::abs(L) > 0.05;
        };
    }
    if (sys.name == "central") {
        const PotentialSpec U = potential_of(sys);
        return [U](const PhaseState& s) {
            if (!is_admissible(s) || std::abs(s.v[0]) < 0.1 || std::abs(central_L(s)) < 0.05) return false;
            try {
                const RadialBounds b = central_turning_points(U, central_L(s), central_E(s, U), s.q[0]);
                return b.r_out - b.r_in > 0.05 * b.r_out && b.r_out < 20;
            } catch (const Error&) {
                return false;
            }
        };
    }
    if (sys.name == "uncoupled") {
        const double w1 = sys.params.omega1, w2 = sys.params.omega2;
        return [w1, w2](const PhaseState& s) {
            return is_admissible(s) && uncoupled_energy(s, w1, 1) > 0.05 && uncoupled_energy(s, w2, 2) > 0.05;
        };
    }
    return [](const PhaseState& s) { return is_admissible(s); };
}

PhaseState TestCurve::jet(double t) const {
    PhaseState s;
    s.t = t;
    s.chart = chart;
    for (int i = 0; i < 2; ++i) {
        double q = 0, v = 0;
        for (int k = 4; k >= 0; --k) q = q * t + coeff[i][k];
        for (int k = 4; k >= 1; --k) v = v * t + k * coeff[i][k];
        s.q[i] = q;
        s.v[i] = v;
    }
    return s;
}

Vec2 TestCurve::accel(double t) const {
    Vec2 a{};
    for (int i = 0; i < 2; ++i)
        for (int k = 4; k >= 2; --k) a[i] = a[i] * t + k * (k - 1) * coeff[i][k];
    return a;
}

std::vector<TestCurve> random_test_curves(const SystemDef& sys, std::uint64_t seed, std::size_t n,
                                          const JetDomain& domain) {
    const JetDomain inside = domain ? domain : default_domain(sys);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), shift(0.0, 1.0);
    std::vector<TestCurve> out;
    for (std::size_t attempts = 0; out.size() < n; ++attempts) {
        if (attempts > 100000 * n) fail(ErrorCode::InvalidParam, "no test curve found inside the domain");
        std::array<std::array<double, 5>, 2> raw{};
        for (auto& row : raw)
            for (double& x : row) x = unit(rng);
        const double offset = shift(rng);
        // Slower reparametrisations t → σt keep the coefficients in [−1, 1].
        for (double sigma : {1.0, 0.5, 0.25}) {
            TestCurve c;
            c.chart = sys.chart;
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k <= 4; ++k) c.coeff[i][k] = raw[i][k] * std::pow(sigma, k);
            if (c.chart == Chart::Polar) {
                double lo = 1e300, hi = -1e300;
                for (int j = 0; j <= 100; ++j) {
                    const double r = c.jet(0.01 * j).q[0];
                    lo = std::min(lo, r);
                    hi = std::max(hi, r);
                }
                double range = hi - lo;
                if (range > 1.5) {
                    for (double& x : c.coeff[0]) x *= 1.5 / range;
                    lo *= 1.5 / range;
                    range = 1.5;
                }
                c.coeff[0][0] += 0.5 + offset * (1.5 - range) - lo;
            }
            bool ok = true;
            for (double t : c.times)
                for (int j = -5; j <= 5 && ok; ++j) ok = inside(c.jet(t + 0.01 * j));
            if (ok) {
                out.push_back(c);
                break;
            }
        }
    }
    return out;
}

namespace {

// Function of the second jet (t, q, q̇, q̈).
using Jet2Fn = std::function<double(const PhaseState&, const Vec2&)>;
using Jet2Grad = std::function<Vec2(const PhaseState&, const Vec2&)>;

double partial_q(const Jet2Fn& F, const PhaseState& s, const Vec2& a, int j, double h) {
    return fd::d1_8([&](double e) {
        PhaseState x = s;
        x.q[j] += e;
        return F(x, a);
    }, h);
}

double partial_v(const Jet2Fn& F, const PhaseState& s, const Vec2& a, int j, double h) {
    return fd::d1_8([&](double e) {
        PhaseState x = s;
        x.v[j] += e;
        return F(x, a);
    }, h);
}

// Euler operator ∂_{qⱼ}F − D_t ∂_{q̇ⱼ}F + D_t² ∂_{q̈ⱼ}F along the curve at time t.
Vec2 euler_at(const Jet2Fn& F, const Jet2Grad& Fa, const TestCurve& c, double t, const EulerOptions& o) {
    Vec2 out{};
    const PhaseState s = c.jet(t);
    const Vec2 a = c.accel(t);
    for (int j = 0; j < 2; ++j) {
        const double dq = partial_q(F, s, a, j, o.h);
        const double dtv = fd::d1_8([&](double e) { return partial_v(F, c.jet(t + e), c.accel(t + e), j, o.h); },
                                  o.h_time);
        const double dtta = fd::d2_8([&](double e) { return Fa(c.jet(t + e), c.accel(t + e))[j]; }, o.h_time);
        out[j] = dq - dtv + dtta;
    }
    return out;
}

double max_euler(const Jet2Fn& F, const Jet2Grad& Fa, std::span<const TestCurve> curves, const EulerOptions& o) {
    double worst = 0.0;
    for (const auto& c : curves)
        for (double t : c.times) {
            const Vec2 e = euler_at(F, Fa, c, t, o);
            for (double x : e) {
                if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
                worst = std::max(worst, std::abs(x));
            }
        }
    return worst;
}

Vec2 lagrangian_dv(const SystemDef& sys, const PhaseState& s, double h) {
    Vec2 out{};
    for (int j = 0; j < 2; ++j)
        out[j] = fd::d1_8([&](double e) {
            PhaseState x = s;
            x.v[j] += e;
            return sys.lagrangian(x);
        }, h);
    return out;
}

Vec2 lagrangian_dq(const SystemDef& sys, const PhaseState& s, double h) {
    Vec2 out{};
    for (int j = 0; j < 2; ++j)
        out[j] = fd::d1_8([&](double e) {
            PhaseState x = s;
            x.q[j] += e;
            return sys.lagrangian(x);
        }, h);
    return out;
}

}  // namespace

double euler_residual(const MultiplierPair& q, const SystemDef& sys, std::span<const TestCurve> curves,
                      const EulerOptions& opts) {
    Jet2Fn lambda = [&](const PhaseState& s, const Vec2& a) {
        const Vec2 f = sys.accel(s);
        return (a[0] - f[0]) * q.Q[0](s) + (a[1] - f[1]) * q.Q[1](s);
    };
    Jet2Grad grad_a = [&](const PhaseState& s, const Vec2&) { return Vec2{q.Q[0](s), q.Q[1](s)}; };
    return max_euler(lambda, grad_a, curves, opts);
}

VariationalCheck is_variational(const Generator& g, const SystemDef& sys, std::span<const TestCurve> curves,
                                const EulerOptions& opts) {
    const double h = opts.h_inner;
    // pr⁽¹⁾X̂(ℒ) = Pⁱ∂ℒ/∂qⁱ + (D_tPⁱ)∂ℒ/∂q̇ⁱ, off-shell.
    Jet2Fn F = [&](const PhaseState& s, const Vec2& a) {
        const Vec2 Lq = lagrangian_dq(sys, s, h), Lv = lagrangian_dv(sys, s, h);
        double sum = 0.0;
        for (int i = 0; i < 2; ++i) sum += g.P[i](s) * Lq[i] + fd::along8(g.P[i], s, fd::flow_tangent(s, a), h) * Lv[i];
        return sum;
    };
    // F is linear in q̈: ∂F/∂q̈ⱼ = Σᵢ (∂Pⁱ/∂q̇ʲ) ∂ℒ/∂q̇ⁱ.
    Jet2Grad Fa = [&](const PhaseState& s, const Vec2&) {
        const Vec2 Lv = lagrangian_dv(sys, s, h);
        Vec2 out{};
        for (int j = 0; j < 2; ++j) {
            fd::Tangent d;
            d.v[j] = 1.0;
            for (int i = 0; i < 2; ++i) out[j] += fd::along8(g.P[i], s, d, h) * Lv[i];
        }
        return out;
    };
    const double r = max_euler(F, Fa, curves, opts);
    return {r < 1e-5, r};
}

VariationalCheck is_variational(const Generator& g, const SystemDef& sys) {
    const auto curves = random_test_curves(sys, 0, 10);
    return is_variational(g, sys, curves);
}

double noether_integral_from_R(const Generator& g, const JetFn& R, const SystemDef& sys, const PhaseState& s) {
    const Vec2 Lv = lagrangian_dv(sys, s, 1e-3);
    return R(s) - g.P[0](s) * Lv[0] - g.P[1](s) * Lv[1];
}

PhaseState default_basepoint(const SystemDef& sys, double L) {
    PhaseState s;
    s.chart = sys.chart;
    s.q = {1.0, 0.0};
    if (sys.chart == Chart::Polar)
        s.v = {0.0, L / sys.noether_weights(s.q)[1]};
    else
        s.v = {0.0, L};
    return s;
}

namespace {

// dI = I_t dt + I_q·dq + Q·dv with Q the multiplier, I_q = −D_tQ − Q·∂f/∂v, I_t = −(q̇·I_q + f·Q).
double one_form(const MultiplierPair& m, const SystemDef& sys, const PhaseState& s, const fd::Tangent& d,
                double h) {
    const Vec2 f = sys.accel(s);
    const Vec2 Q{m.Q[0](s), m.Q[1](s)};
    Vec2 Iq{};
    for (int j = 0; j < 2; ++j) {
        fd::Tangent dv;
        dv.v[j] = 1.0;
        const double Qfv = fd::along([&](const PhaseState& x) {
            const Vec2 fx = sys.accel(x);
            return Q[0] * fx[0] + Q[1] * fx[1];
        }, s, dv, h);
        Iq[j] = -fd::along(m.Q[j], s, fd::flow_tangent(s, f), h) - Qfv;
    }
    const double It = -(s.v[0] * Iq[0] + s.v[1] * Iq[1] + f[0] * Q[0] + f[1] * Q[1]);
    return It * d.t + Iq[0] * d.q[0] + Iq[1] * d.q[1] + Q[0] * d.v[0] + Q[1] * d.v[1];
}

double segment(const MultiplierPair& m, const SystemDef& sys, const PhaseState& a, const PhaseState& b,
               const JetDomain& inside, const ReconstructOptions& o) {
    const fd::Tangent d{b.t - a.t, {b.q[0] - a.q[0], b.q[1] - a.q[1]}, {b.v[0] - a.v[0], b.v[1] - a.v[1]}};
    auto integrand = [&](double u) {
        const PhaseState s = fd::shift(a, d, u);
        if (!inside(s)) fail(ErrorCode::PathLeavesDomain, "line-integral path leaves the admissible region");
        double v = 0.0;
        try {
            v = one_form(m, sys, s, d, o.h);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::OutsideClassicalRegion || e.code() == ErrorCode::UnboundedRegime ||
                e.code() == ErrorCode::UndefinedOnCircular)
                fail(ErrorCode::PathLeavesDomain, std::string("integrand undefined on the path: ") + e.what());
            throw;
        }
        if (!std::isfinite(v)) fail(ErrorCode::QuadratureFailure, "line-integral integrand not finite");
        return v;
    };
    double sum = 0.0;
    const int n = std::max(1, o.panels);
    for (int k = 0; k < n; ++k)
        sum += boost::math::quadrature::gauss<double, 20>::integrate(integrand, double(k) / n, double(k + 1) / n);
    return sum;
}

}  // namespace

double reconstruct_integral_path(const Generator& g, const SystemDef& sys, std::span<const PhaseState> path,
                                 const ReconstructOptions& opts) {
    if (path.size() < 2) fail(ErrorCode::InvalidParam, "a path needs at least two jets");
    const MultiplierPair m = multiplier_from_generator(g, sys);
    const JetDomain inside = [](const PhaseState& s) { return is_admissible(s); };
    double I = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) I += segment(m, sys, path[i], path[i + 1], inside, opts);
    return I;
}

double reconstruct_integral(const Generator& g, const SystemDef& sys, const PhaseState& endpoint,
                            const PhaseState& basepoint, const ReconstructOptions& opts) {
    const PhaseState path[2] = {basepoint, endpoint};
    return reconstruct_integral_path(g, sys, path, opts);
}

double reconstruction_offset_spread(const Generator& g, const SystemDef& sys, const JetFn& I, const PhaseState& base,
                                    std::span<const PhaseState> endpoints, const ReconstructOptions& opts) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const double I0 = I(base);
    for (const auto& e : endpoints) {
        const double off = reconstruct_integral(g, sys, e, base, opts) - (I(e) - I0);
        lo = std::min(lo, off);
        hi = std::max(hi, off);
    }
    return endpoints.empty() ? 0.0 : hi - lo;
}

double reconstruction_path_gap(const Generator& g, const SystemDef& sys, const PhaseState& base, const PhaseState& via,
                               const PhaseState& end, const ReconstructOptions& opts) {
    const PhaseState path[3] = {base, via, end};
    return std::abs(reconstruct_integral_path(g, sys, path, opts) - reconstruct_integral(g, sys, end, base, opts));
}

std::vector<PhaseState> reconstruction_endpoints(const SystemDef& sys, std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    auto u = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    const JetDomain inside = default_domain(sys);
    std::vector<PhaseState> out;
    for (std::size_t attempts = 0; out.size() < n; ++attempts) {
        if (attempts > 100000 * n) fail(ErrorCode::InvalidParam, "no reconstruction endpoint found inside the domain");
        PhaseState s;
        s.chart = sys.chart;
        s.t = u(-1, 1);
        if (sys.chart == Chart::Polar) {
            s.q = {u(0.8, 1.2), u(-1, 1)};
            s.v = {u(0.3, 0.6), u(0.4, 0.8)};
        } else {
            s.q = {u(0.5, 1), u(0.5, 1)};
            s.v = {u(0.3, 0.6), u(0.3, 0.6)};
        }
        if (inside(s)) out.push_back(s);
    }
    return out;
}

}  // namespace nlab

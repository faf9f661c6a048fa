#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "noetherlab/dynamics.hpp"

namespace nlab::fd {

/// Central difference f'(0) with one Richardson step.
inline double d1(const std::function<double(double)>& f, double h) {
    auto c = [&](double hh) { return (f(hh) - f(-hh)) / (2 * hh); };
    return (4 * c(0.5 * h) - c(h)) / 3;
}

/// Second central difference f''(0) with one Richardson step.
inline double d2(const std::function<double(double)>& f, double h) {
    const double f0 = f(0.0);
    auto c = [&](double hh) { return (f(hh) - 2 * f0 + f(-hh)) / (hh * hh); };
    return (4 * c(0.5 * h) - c(h)) / 3;
}

/// Central differences at h, h/2, h/4 combined to sixth order.
inline double d1_6(const std::function<double(double)>& f, double h) {
    auto c = [&](double hh) { return (f(hh) - f(-hh)) / (2 * hh); };
    const double a = c(h), b = c(0.5 * h), d = c(0.25 * h);
    const double ab = (4 * b - a) / 3, bd = (4 * d - b) / 3;
    return (16 * bd - ab) / 15;
}

inline double d2_6(const std::function<double(double)>& f, double h) {
    const double f0 = f(0.0);
    auto c = [&](double hh) { return (f(hh) - 2 * f0 + f(-hh)) / (hh * hh); };
    const double a = c(h), b = c(0.5 * h), d = c(0.25 * h);
    const double ab = (4 * b - a) / 3, bd = (4 * d - b) / 3;
    return (16 * bd - ab) / 15;
}

/// Nine-point central stencils, eighth order.
inline double d1_8(const std::function<double(double)>& f, double h) {
    static constexpr double c[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += c[k] * (f((k + 1) * h) - f(-(k + 1) * h));
    return s / h;
}

inline double d2_8(const std::function<double(double)>& f, double h) {
    static constexpr double c[4] = {8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
    double s = -205.0 / 72 * f(0.0);
    for (int k = 0; k < 4; ++k) s += c[k] * (f((k + 1) * h) + f(-(k + 1) * h));
    return s / (h * h);
}

/// Tangent (dt, dq, dv) in the first jet space.
struct Tangent {
    double t = 0.0;
    Vec2 q{};
    Vec2 v{};
};

inline PhaseState shift(const PhaseState& s, const Tangent& d, double e) {
    PhaseState o = s;
    o.t += e * d.t;
    for (int i = 0; i < 2; ++i) {
        o.q[i] += e * d.q[i];
        o.v[i] += e * d.v[i];
    }
    return o;
}

/// Derivative of F at s along the straight line s + e·d.
inline double along(const std::function<double(const PhaseState&)>& F, const PhaseState& s, const Tangent& d,
                    double h) {
    return d1([&](double e) { return F(shift(s, d, e)); }, h);
}

/// Eighth-order variant; the step shrinks with the largest tangent component.
inline double along8(const std::function<double(const PhaseState&)>& F, const PhaseState& s, const Tangent& d,
                     double h) {
    double n = 1.0;
    for (double x : {d.t, d.q[0], d.q[1], d.v[0], d.v[1]}) n = std::max(n, std::abs(x));
    return d1_8([&](double e) { return F(shift(s, d, e)); }, h / n);
}

inline Tangent flow_tangent(const PhaseState& s, const Vec2& a) { return {1.0, s.v, a}; }

}  // namespace nlab::fd

#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "noetherlab/dynamics.hpp"
#include "noetherlab/systems.hpp"

namespace testsupport {

using nlab::PhaseState;

inline PhaseState polar(double t, double r, double th, double rd, double thd) {
    return PhaseState{t, {r, th}, {rd, thd}, nlab::Chart::Polar};
}

inline PhaseState cart(double t, double q1, double q2, double v1, double v2) {
    return PhaseState{t, {q1, q2}, {v1, v2}, nlab::Chart::Cartesian};
}

/// Random bound, non-circular Darboux jet with |ṙ| bounded away from zero.
inline PhaseState random_darboux_jet(std::mt19937_64& rng, double lambda, double omega) {
    std::uniform_real_distribution<double> ur(0.6, 1.4), ut(-3.0, 3.0), uv(0.25, 0.8), uw(0.3, 0.9),
        utime(-1.0, 1.0), coin(0.0, 1.0);
    for (;;) {
        const double rd = (coin(rng) < 0.5 ? -1 : 1) * uv(rng);
        PhaseState s = polar(utime(rng), ur(rng), ut(rng), rd, uw(rng));
        const double E = nlab::darboux_E(s, lambda, omega), L = nlab::darboux_L(s, lambda);
        const double W = omega * omega - 2 * lambda * E;
        if (W <= 0.05 * omega * omega) continue;
        if (E * E - W * L * L <= 0.05 * E * E) continue;
        return s;
    }
}

inline double richardson(const std::function<double(double)>& f, double x, double h) {
    auto d = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2 * hh); };
    return (4 * d(0.5 * h) - d(h)) / 3;
}

}  // namespace testsupport

#include <cmath>

#include "noetherlab/systems.hpp"

namespace nlab {

namespace {

Generator evolutionary(std::string name, JetFn p1, JetFn p2) {
    Generator g;
    g.name = std::move(name);
    g.P = {std::move(p1), std::move(p2)};
    return g;
}

MultiplierPair multiplier(std::string source, JetFn q1, JetFn q2) {
    return MultiplierPair{std::move(source), {std::move(q1), std::move(q2)}};
}

using PartialsFn = std::function<IntegralPartials(const PhaseState&)>;

// X̂_Θ = −ṙ∂_EΘ ∂_r − (∂_LΘ + θ̇∂_EΘ)∂_θ and the analogous X̂_T.
Generator theta_generator(const PartialsFn& pd) {
    return evolutionary(
        "Xhat_Theta", [pd](const PhaseState& s) { return -s.v[0] * pd(s).dE_Theta; },
        [pd](const PhaseState& s) {
            const auto p = pd(s);
            return -(p.dL_Theta + s.v[1] * p.dE_Theta);
        });
}

Generator time_generator(const PartialsFn& pd) {
    return evolutionary(
        "Xhat_T", [pd](const PhaseState& s) { return -s.v[0] * pd(s).dE_T; },
        [pd](const PhaseState& s) {
            const auto p = pd(s);
            return -(p.dL_T + s.v[1] * p.dE_T);
        });
}

// Multipliers Q = ∂I/∂v, using ∂E/∂v = w∘v and ∂L/∂θ̇ = w₂.
MultiplierCatalog polar_multipliers(const std::function<Vec2(const Vec2&)>& weights, const PartialsFn& pd) {
    MultiplierCatalog m;
    m["Q_L"] = multiplier("L", [](const PhaseState&) { return 0.0; },
                          [weights](const PhaseState& s) { return weights(s.q)[1]; });
    m["Q_E"] = multiplier("E", [weights](const PhaseState& s) { return weights(s.q)[0] * s.v[0]; },
                          [weights](const PhaseState& s) { return weights(s.q)[1] * s.v[1]; });
    m["Q_Theta"] = multiplier(
        "Theta", [weights, pd](const PhaseState& s) { return weights(s.q)[0] * s.v[0] * pd(s).dE_Theta; },
        [weights, pd](const PhaseState& s) {
            const auto p = pd(s);
            return weights(s.q)[1] * (s.v[1] * p.dE_Theta + p.dL_Theta);
        });
    m["Q_T"] = multiplier(
        "T", [weights, pd](const PhaseState& s) { return weights(s.q)[0] * s.v[0] * pd(s).dE_T; },
        [weights, pd](const PhaseState& s) {
            const auto p = pd(s);
            return weights(s.q)[1] * (s.v[1] * p.dE_T + p.dL_T);
        });
    return m;
}

GeneratorCatalog polar_generators(const PartialsFn& pd) {
    GeneratorCatalog c;
    c["Xhat_L"] = evolutionary("Xhat_L", [](const PhaseState&) { return 0.0; }, [](const PhaseState&) { return -1.0; });
    c["Xhat_E"] = evolutionary("Xhat_E", [](const PhaseState& s) { return -s.v[0]; },
                               [](const PhaseState& s) { return -s.v[1]; });
    c["Xhat_Theta"] = theta_generator(pd);
    c["Xhat_T"] = time_generator(pd);
    c["Scale_r"] = evolutionary("Scale_r", [](const PhaseState& s) { return s.q[0]; },
                                [](const PhaseState&) { return 0.0; });
    return c;
}

int central_branch(const PotentialSpec& U, const PhaseState& s) {
    if (s.v[0] != 0) return s.v[0] > 0 ? 1 : -1;
    return s.v[1] * s.v[1] * s.q[0] - potential_derivative(U, s.q[0]) >= 0 ? 1 : -1;
}

PartialsFn central_partials_fn(const PotentialSpec& U, const RefPoint& ref) {
    return [U, ref](const PhaseState& s) {
        return central_partials(U, s.q[0], central_L(s), central_E(s, U), central_branch(U, s), ref);
    };
}

}  // namespace

GeneratorCatalog darboux_generators(double lambda, double omega, const RefPoint& ref) {
    return polar_generators(
        [lambda, omega, ref](const PhaseState& s) { return eval_darboux_partials(s, lambda, omega, ref); });
}

MultiplierCatalog darboux_multipliers(double lambda, double omega, const RefPoint& ref) {
    return polar_multipliers(make_darboux(lambda, omega).noether_weights,
                             [lambda, omega, ref](const PhaseState& s) { return eval_darboux_partials(s, lambda, omega, ref); });
}

GeneratorCatalog central_generators(const PotentialSpec& U, const RefPoint& ref) {
    GeneratorCatalog c = polar_generators(central_partials_fn(U, ref));
    const double k = U.k;
    // Scaling for U = kr^p. Coulomb and isotropic are power laws with fixed exponents.
    const double p = U.kind == PotentialKind::Coulomb ? -1.0 : U.kind == PotentialKind::Isotropic ? 2.0 : U.p;
    c["X1"] = point_generator(
        "X1", [p](const PhaseState& s) { return (1 - 0.5 * p) * s.t; },
        [](const PhaseState& s) { return Vec2{s.q[0], 0.0}; });
    c["X1_printed"] = point_generator(
        "X1_printed", [](const PhaseState& s) { return s.t; },
        [p](const PhaseState& s) { return Vec2{-2.0 / p * s.q[0], 0.0}; });
    // e^{2√k t}(∂_t + √k r∂_r).
    const double sk = std::sqrt(std::abs(k));
    c["X2"] = point_generator(
        "X2", [sk](const PhaseState& s) { return std::exp(2 * sk * s.t); },
        [sk](const PhaseState& s) { return Vec2{std::exp(2 * sk * s.t) * sk * s.q[0], 0.0}; });
    return c;
}

MultiplierCatalog central_multipliers(const PotentialSpec& U, const RefPoint& ref) {
    return polar_multipliers(make_central(U).noether_weights, central_partials_fn(U, ref));
}

GeneratorCatalog uncoupled_generators(double omega1, double omega2) {
    GeneratorCatalog c;
    const double w1 = omega1, w2 = omega2, w = omega1;
    auto zero = [](const PhaseState&) { return 0.0; };
    auto add = [&c](Generator g) { c[g.name] = std::move(g); };

    add(evolutionary("Xhat_E1", [](const PhaseState& s) { return -s.v[0]; }, zero));
    add(evolutionary("Xhat_E2", zero, [](const PhaseState& s) { return -s.v[1]; }));
    add(evolutionary(
        "Xhat_Phi", [w1, w2](const PhaseState& s) { return (w1 + w2) * s.q[0] / (2 * uncoupled_energy(s, w1, 1)); },
        [w1, w2](const PhaseState& s) { return -(w1 + w2) * s.q[1] / (2 * uncoupled_energy(s, w2, 2)); }));
    add(evolutionary(
        "Xhat_Tosc", [w1](const PhaseState& s) { return -s.q[0] / (4 * uncoupled_energy(s, w1, 1)); },
        [w2](const PhaseState& s) { return -s.q[1] / (4 * uncoupled_energy(s, w2, 2)); }));

    add(point_generator("X_trans", [](const PhaseState&) { return 1.0; }, [](const PhaseState&) { return Vec2{0, 0}; }));
    add(point_generator("X_scale1", [](const PhaseState&) { return 0.0; },
                        [](const PhaseState& s) { return Vec2{s.q[0], 0}; }));
    add(point_generator("X_scale2", [](const PhaseState&) { return 0.0; },
                        [](const PhaseState& s) { return Vec2{0, s.q[1]}; }));
    // f(t)∂_{qᵢ} with f a solution of the i-th oscillator.
    add(point_generator("X_sol1", [](const PhaseState&) { return 0.0; },
                        [w1](const PhaseState& s) { return Vec2{std::cos(w1 * s.t + 0.3), 0}; }));
    add(point_generator("X_sol2", [](const PhaseState&) { return 0.0; },
                        [w2](const PhaseState& s) { return Vec2{0, std::sin(w2 * s.t + 0.7)}; }));

    // Equal-frequency extras, real and imaginary parts of the + member of each ± pair.
    add(point_generator("X_rot", [](const PhaseState&) { return 0.0; },
                        [](const PhaseState& s) { return Vec2{s.q[1], -s.q[0]}; }));
    // e^{2iωt}(q·∂_q − (i/ω)∂_t)
    add(point_generator("X1_re", [w](const PhaseState& s) { return std::sin(2 * w * s.t) / w; },
                        [w](const PhaseState& s) {
                            const double c = std::cos(2 * w * s.t);
                            return Vec2{c * s.q[0], c * s.q[1]};
                        }));
    add(point_generator("X1_im", [w](const PhaseState& s) { return -std::cos(2 * w * s.t) / w; },
                        [w](const PhaseState& s) {
                            const double sn = std::sin(2 * w * s.t);
                            return Vec2{sn * s.q[0], sn * s.q[1]};
                        }));
    // The single-frequency variant e^{iωt}(q·∂_q − (i/ω)∂_t), kept as an off-condition check.
    add(point_generator("X1_printed_re", [w](const PhaseState& s) { return std::sin(w * s.t) / w; },
                        [w](const PhaseState& s) {
                            const double c = std::cos(w * s.t);
                            return Vec2{c * s.q[0], c * s.q[1]};
                        }));
    add(point_generator("X1_printed_im", [w](const PhaseState& s) { return -std::cos(w * s.t) / w; },
                        [w](const PhaseState& s) {
                            const double sn = std::sin(w * s.t);
                            return Vec2{sn * s.q[0], sn * s.q[1]};
                        }));
    // e^{iωt}qⱼ(q·∂_q − (i/ω)∂_t), j = 1, 2
    for (int j = 0; j < 2; ++j) {
        const std::string base = j == 0 ? "X2" : "X3";
        add(point_generator(base + "_re", [w, j](const PhaseState& s) { return std::sin(w * s.t) / w * s.q[j]; },
                            [w, j](const PhaseState& s) {
                                const double c = std::cos(w * s.t) * s.q[j];
                                return Vec2{c * s.q[0], c * s.q[1]};
                            }));
        add(point_generator(base + "_im", [w, j](const PhaseState& s) { return -std::cos(w * s.t) / w * s.q[j]; },
                            [w, j](const PhaseState& s) {
                                const double sn = std::sin(w * s.t) * s.q[j];
                                return Vec2{sn * s.q[0], sn * s.q[1]};
                            }));
    }
    return c;
}

MultiplierCatalog uncoupled_multipliers(double omega1, double omega2) {
    const double w1 = omega1, w2 = omega2;
    auto zero = [](const PhaseState&) { return 0.0; };
    MultiplierCatalog m;
    m["Q_E1"] = multiplier("E1", [](const PhaseState& s) { return s.v[0]; }, zero);
    m["Q_E2"] = multiplier("E2", zero, [](const PhaseState& s) { return s.v[1]; });
    m["Q_Phi"] = multiplier(
        "Phi", [w1, w2](const PhaseState& s) { return -(w1 + w2) * s.q[0] / (2 * uncoupled_energy(s, w1, 1)); },
        [w1, w2](const PhaseState& s) { return (w1 + w2) * s.q[1] / (2 * uncoupled_energy(s, w2, 2)); });
    m["Q_Tosc"] = multiplier(
        "Tosc", [w1](const PhaseState& s) { return s.q[0] / (4 * uncoupled_energy(s, w1, 1)); },
        [w2](const PhaseState& s) { return s.q[1] / (4 * uncoupled_energy(s, w2, 2)); });
    return m;
}

}  // namespace nlab

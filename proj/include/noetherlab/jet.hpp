#pragma once

#include <array>
#include <functional>
#include <string>

#include "noetherlab/dynamics.hpp"

namespace nlab {

using JetFn = std::function<double(const PhaseState&)>;

/// Evolutionary-form generator P¹∂_{q¹} + P²∂_{q²}. When tau is set the point form has
/// ηⁱ = Pⁱ + tau·vⁱ.
struct Generator {
    std::string name;
    std::array<JetFn, 2> P;
    JetFn tau;
};

struct MultiplierPair {
    std::string source;
    std::array<JetFn, 2> Q;
};

/// Point symmetry τ(t,q)∂_t + ξⁱ(t,q)∂_{qⁱ} written in evolutionary form.
Generator point_generator(std::string name, std::function<double(const PhaseState&)> tau,
                          std::function<Vec2(const PhaseState&)> xi);

}  // namespace nlab

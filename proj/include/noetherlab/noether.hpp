#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "noetherlab/dynamics.hpp"
#include "noetherlab/jet.hpp"

namespace nlab {

/// Qᵢ = −wᵢ·Pᵢ with w the system's Noether weights.
MultiplierPair multiplier_from_generator(const Generator& g, const SystemDef& sys);
/// Pᵢ = −Qᵢ/wᵢ.
Generator generator_from_multiplier(const MultiplierPair& q, const SystemDef& sys);

/// Region of the jet space where a check samples points.
using JetDomain = std::function<bool(const PhaseState&)>;

/// Bound, non-circular jets away from turning points for polar systems; positive partial
/// energies for the uncoupled pair.
JetDomain default_domain(const SystemDef& sys);

/// q(t) = Σ cₖ tᵏ, k ≤ 4, evaluated off-shell at five interior times of [0, 1].
struct TestCurve {
    std::array<std::array<double, 5>, 2> coeff{};
    Chart chart = Chart::Polar;
    std::array<double, 5> times{0.1, 0.3, 0.5, 0.7, 0.9};

    PhaseState jet(double t) const;
    Vec2 accel(double t) const;
};

/// Random degree-4 curves with coefficients in [−1, 1]; polar radii are shifted into [0.5, 2].
/// A draw that leaves the domain is retried at half and quarter speed.
/// A curve is kept when every jet within 0.05 of its sample times lies in the domain.
std::vector<TestCurve> random_test_curves(const SystemDef& sys, std::uint64_t seed, std::size_t n = 10,
                                          const JetDomain& domain = {});

struct EulerOptions {
    /// Step in the jet variables. All differences use nine-point eighth-order stencils.
    double h = 2e-3;
    /// Step for total time derivatives along a test curve.
    double h_time = 3e-3;
    /// Step for derivatives nested inside the evaluated expression (prolongation of ℒ).
    double h_inner = 2e-3;
};

/// max |δ/δqⱼ Σᵢ(q̈ⁱ − fⁱ)Qᵢ| over the test curves and their sample times.
double euler_residual(const MultiplierPair& q, const SystemDef& sys, std::span<const TestCurve> curves,
                      const EulerOptions& opts = {});

struct ReconstructOptions {
    /// Gauss–Legendre panels per straight segment.
    int panels = 4;
    /// Step for the on-shell time derivative of Q and for ∂f/∂v.
    double h = 1e-4;
};

/// I(endpoint) − I(basepoint) for the integral whose multiplier is multiplier_from_generator(g),
/// integrated along the straight segment between the two jets.
double reconstruct_integral(const Generator& g, const SystemDef& sys, const PhaseState& endpoint,
                            const PhaseState& basepoint, const ReconstructOptions& opts = {});

/// Same integral along the polyline through the given jets, first to last.
double reconstruct_integral_path(const Generator& g, const SystemDef& sys, std::span<const PhaseState> path,
                                 const ReconstructOptions& opts = {});

/// max − min over the endpoints of [line integral from base] − [I(end) − I(base)]; zero when the
/// reconstruction matches I up to an additive constant.
double reconstruction_offset_spread(const Generator& g, const SystemDef& sys, const JetFn& I, const PhaseState& base,
                                    std::span<const PhaseState> endpoints, const ReconstructOptions& opts = {});

/// n jets in a box around r = 1 with ṙ > 0 (polar: r∈[0.8,1.2], θ∈[−1,1], ṙ∈[0.3,0.6], θ̇∈[0.4,0.8],
/// t∈[−1,1]; uncoupled: q∈[0.5,1], v∈[0.3,0.6]) that lie in the system's default domain. All share one
/// radial branch, so the closed forms of Θ and T need no branch change between them.
std::vector<PhaseState> reconstruction_endpoints(const SystemDef& sys, std::uint64_t seed, std::size_t n);

/// |∫ base→via→end − ∫ base→end|.
double reconstruction_path_gap(const Generator& g, const SystemDef& sys, const PhaseState& base, const PhaseState& via,
                               const PhaseState& end, const ReconstructOptions& opts = {});

/// r = 1, θ = 0, ṙ = 0 and θ̇ chosen so that the angular momentum equals L (polar systems);
/// q = (1, 0), v = (0, L) for Cartesian ones.
PhaseState default_basepoint(const SystemDef& sys, double L);

/// I = R − Σ Pᵢ ∂ℒ/∂q̇ⁱ.
double noether_integral_from_R(const Generator& g, const JetFn& R, const SystemDef& sys, const PhaseState& s);

struct VariationalCheck {
    bool variational = false;
    double residual = 0.0;
};

/// Euler operator applied to pr⁽¹⁾X̂(ℒ); the generator is variational when the residual is below 1e-5.
VariationalCheck is_variational(const Generator& g, const SystemDef& sys, std::span<const TestCurve> curves,
                                const EulerOptions& opts = {});
VariationalCheck is_variational(const Generator& g, const SystemDef& sys);

}  // namespace nlab

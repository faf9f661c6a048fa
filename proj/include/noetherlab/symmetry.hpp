#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noetherlab/jet.hpp"
#include "noetherlab/noether.hpp"
#include "noetherlab/systems.hpp"

namespace nlab {

// ---------------------------------------------------------------------------
// Verdicts

inline constexpr double kSymmetryPass = 1e-5;
inline constexpr double kSymmetryFail = 1e-3;

enum class Verdict { Pass, Indeterminate, Fail };

std::string_view to_string(Verdict v);
/// Pass below 1e-5, Fail above 1e-3, Indeterminate in between (and for NaN).
Verdict verdict_of(double residual);

// ---------------------------------------------------------------------------
// Second-order determining equations

struct DeterminingOptions {
    /// Time step of the stencil along the flow used for Ṗ and P̈.
    double h_time = 1e-2;
    /// Step for the linearisation of f along (0, P, Ṗ).
    double h_jet = 1e-3;
    /// Tolerance of the flow map.
    double flow_tol = 1e-14;
};

/// P̈ᵢ − (∂fᵢ/∂q·P + ∂fᵢ/∂v·Ṗ) at the jet, with dots meaning total derivatives along solutions.
Vec2 determining_residual_2nd(const Generator& g, const SystemDef& sys, const PhaseState& jet,
                              const DeterminingOptions& opts = {});

/// Largest component over the jets.
double max_determining_residual(const Generator& g, const SystemDef& sys, std::span<const PhaseState> jets,
                                const DeterminingOptions& opts = {});

/// n jets taken from random test curves inside the domain (the system default when empty).
std::vector<PhaseState> random_jets(const SystemDef& sys, std::uint64_t seed, std::size_t n,
                                    const JetDomain& domain = {});

// ---------------------------------------------------------------------------
// Extended generators on (t, r, θ, L, E) for the deformed oscillator

/// s is the radial branch sgn(ṙ).
struct ExtPoint {
    double t = 0.0;
    double r = 1.0;
    double theta = 0.0;
    double L = 0.0;
    double E = 0.0;
    int s = 1;
};

using ExtFn = std::function<double(const ExtPoint&)>;

/// Y = τ∂_t + η^θ∂_θ + η^L∂_L + η^E∂_E.
struct ExtendedGenerator {
    std::string name;
    ExtFn tau, eta_theta, eta_L, eta_E;
    double lambda = 0.0;
    double omega = 1.0;
    std::optional<std::array<double, 4>> constants;
};

/// Consistent: η^E = −C₂. Printed: η^E = +C₂ with the same τ and η^θ.
enum class FamilySign { Consistent, Printed };

/// τ = C₁∂_EΘ + C₂∂_ET + C₃, η^θ = −C₁∂_LΘ − C₂∂_LT − C₄, η^L = C₁, η^E = ∓C₂.
ExtendedGenerator family_generator(const std::array<double, 4>& C, double lambda, double omega,
                                   FamilySign sign = FamilySign::Consistent, const RefPoint& ref = {});

/// Named members: Y_L = −∂_θ, Y_E = ∂_t, Y_Θ and Y_T at the unit constant vectors.
ExtendedGenerator Y_L(double lambda, double omega);
ExtendedGenerator Y_E(double lambda, double omega);
ExtendedGenerator Y_Theta(double lambda, double omega, const RefPoint& ref = {});
ExtendedGenerator Y_T(double lambda, double omega, const RefPoint& ref = {});
/// −∂_ET∂_t + ∂_LT∂_θ − ∂_E, the printed family at C₂ = −1.
ExtendedGenerator Y_T_displayed(double lambda, double omega, const RefPoint& ref = {});

/// ṙ = F^r = s√D/(r(1+λr²)), θ̇ = F^θ = L/(r²(1+λr²)).
double first_order_Fr(const ExtPoint& p, double lambda, double omega);
double first_order_Ftheta(const ExtPoint& p, double lambda);
void require_classical(const ExtPoint& p, double lambda, double omega);

/// Residuals of the first-order determining equations, ordered (r, θ, L, E).
std::array<double, 4> determining_residual_1st(const ExtendedGenerator& Y, const ExtPoint& p, double h = 1e-3);

/// P^r = −τṙ, P^θ = η^θ − τθ̇ with τ, η at (r, L, E, sgn ṙ) of the state.
Generator project_to_dynamical(const ExtendedGenerator& Y);

ExtPoint ext_point(const PhaseState& s, double lambda, double omega);
/// Points with the state drawn as for the noether test curves (default Darboux domain).
std::vector<ExtPoint> random_classical_points(double lambda, double omega, std::uint64_t seed, std::size_t n);

/// Lie bracket [Y₁, Y₂] as its (t, θ, L, E) components; the r-components vanish identically.
std::array<double, 4> commutator(const ExtendedGenerator& a, const ExtendedGenerator& b, const ExtPoint& p,
                                 double h = 1e-5);
double norm(const std::array<double, 4>& v);

enum class CanonicalCoordinate { MinusTheta, T, L, MinusE };

std::string_view to_string(CanonicalCoordinate c);
ExtFn canonical_coordinate(CanonicalCoordinate c, double lambda, double omega, const RefPoint& ref = {});

/// max |Y(ζ) − 1| over the points.
double canonical_coordinate_residual(const ExtendedGenerator& Y, const ExtFn& zeta, std::span<const ExtPoint> points,
                                     double h = 1e-5);

}  // namespace nlab

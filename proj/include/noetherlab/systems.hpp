#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noetherlab/dynamics.hpp"
#include "noetherlab/jet.hpp"

namespace nlab {

// ---------------------------------------------------------------------------
// First integrals

enum class IntegralName { L, E, Theta, T, E1, E2, Phi, Tosc, E1_cart, E2_cart, C2_cart };

std::string_view to_string(IntegralName n);

enum class Valuedness { SingleValued, ModPi, Mod2Pi };

/// r₀ policy for the Θ and T reference point.
struct RefPoint {
    enum class Kind { OuterTurning, InnerTurning, Inertial, Explicit };
    Kind kind = Kind::OuterTurning;
    double r0 = 0.0;

    static RefPoint outer() { return {Kind::OuterTurning, 0.0}; }
    static RefPoint inner() { return {Kind::InnerTurning, 0.0}; }
    static RefPoint inertial() { return {Kind::Inertial, 0.0}; }
    static RefPoint at(double r0) { return {Kind::Explicit, r0}; }
};

struct IntegralPartials {
    double dL_Theta = 0.0;
    double dE_Theta = 0.0;
    double dE_T = 0.0;
    double dL_T = 0.0;
};

struct FirstIntegral {
    IntegralName name = IntegralName::E;
    std::function<double(const PhaseState&)> eval;
    bool time_explicit = false;
    Valuedness valuedness = Valuedness::SingleValued;
    std::optional<RefPoint> reference_point;
    /// Events at which the value may legitimately jump (branch changes of sgn or arctan).
    std::vector<EventSpec> jump_events;
    /// State-dependent period for quantities that are single-valued only modulo a period
    /// (T modulo the radial period). Overrides valuedness when set.
    std::function<double(const PhaseState&)> period;
    std::function<IntegralPartials(const PhaseState&)> partials;
};

double valuedness_period(Valuedness v);
/// x reduced to [0, period).
double reduce_mod(double x, double period);
/// Signed distance between two values on a circle of the given period, in (−period/2, period/2].
double circular_diff(double a, double b, double period);

// ---------------------------------------------------------------------------
// Uncoupled oscillators

SystemDef make_uncoupled(double omega1, double omega2);
double uncoupled_energy(const PhaseState& s, double omega, int index);
double eval_phase_integral_Phi(const PhaseState& s, double omega1, double omega2);
double eval_uncoupled_T(const PhaseState& s, double omega1, double omega2);
std::vector<FirstIntegral> uncoupled_integrals(double omega1, double omega2);

// ---------------------------------------------------------------------------
// Central force

enum class PotentialKind { Coulomb, Isotropic, PerturbedCoulomb, PowerLaw, SpecialKKr3, InvertedInverseSquare };

/// Coulomb −k/r; Isotropic kr²; PerturbedCoulomb −k/r − K/r²; PowerLaw kr^p; SpecialKKr3 kr + K/r³;
/// InvertedInverseSquare −½kr² + K/r².
struct PotentialSpec {
    PotentialKind kind = PotentialKind::Coulomb;
    double k = 1.0;
    double K = 0.0;
    double p = 1.0;
};

std::string_view to_string(PotentialKind k);
std::optional<PotentialKind> potential_from_string(std::string_view name);

void validate_potential(const PotentialSpec& U);
double potential_value(const PotentialSpec& U, double r);
double potential_derivative(const PotentialSpec& U, double r);
std::optional<double> equilibrium_radius(const PotentialSpec& U);
/// U(r_equil), or 0 when there is no equilibrium.
double equilibrium_offset(const PotentialSpec& U);

SystemDef make_central(const PotentialSpec& U);
PotentialSpec potential_of(const SystemDef& sys);

struct EffectivePotential {
    std::function<double(double)> eval;
    std::function<double(double)> derivative;
};

EffectivePotential central_effective_potential(const PotentialSpec& U, double L);

double central_L(const PhaseState& s);
double central_E(const PhaseState& s, const PotentialSpec& U);

struct RadialBounds {
    double r_in = 0.0;
    double r_out = 0.0;
};

/// Turning points of the orbit with (L, E) whose classical region contains r_hint.
RadialBounds central_turning_points(const PotentialSpec& U, double L, double E, double r_hint);
double central_inertial_point(const PotentialSpec& U, double L, double E, double r_hint);

/// Unreduced Θ = θ − s·L∫_{r₀}^{r} dr/(r√R) at the point (r, θ) with branch s.
double central_theta_raw(const PotentialSpec& U, double r, double theta, double L, double E, int s,
                         const RefPoint& ref, double tol = 1e-13);
double central_T_raw(const PotentialSpec& U, double t, double r, double L, double E, int s,
                     const RefPoint& ref, double tol = 1e-13);

double eval_central_Theta(const PhaseState& s, double L, double E, const RefPoint& ref, const PotentialSpec& U);
double eval_central_T(const PhaseState& s, double L, double E, const RefPoint& ref, const PotentialSpec& U);

/// Angle swept from inner to outer turning point, L∫dr/(r√R) by singular quadrature.
double central_apsidal_angle(const PotentialSpec& U, double L, double E, double r_hint, double tol = 1e-12);
double central_radial_period(const PotentialSpec& U, double L, double E, double r_hint, double tol = 1e-12);

/// Partials of Θ and T with respect to L and E by central differences of the quadratures.
IntegralPartials central_partials(const PotentialSpec& U, double r, double L, double E, int s,
                                  const RefPoint& ref);

std::vector<FirstIntegral> central_integrals(const PotentialSpec& U, const RefPoint& ref = {});

// ---------------------------------------------------------------------------
// λ-deformed (Darboux) oscillator

SystemDef make_darboux(double lambda, double omega);

struct DarbouxIntegrals {
    double L = 0.0;
    double E = 0.0;
    double Theta = 0.0;
    double T = 0.0;
};

double darboux_L(const PhaseState& s, double lambda);
double darboux_E(const PhaseState& s, double lambda, double omega);
/// D = 2Er²(1+λr²) − L² − ω²r⁴; equals (r(1+λr²)ṙ)² on the state.
double darboux_radicand(double r, double L, double E, double lambda, double omega);
RadialBounds darboux_turning_points(double L, double E, double lambda, double omega);
double darboux_inertial_point(double L, double lambda, double omega);
double darboux_radial_period(double E, double lambda, double omega);

/// Unreduced Θ. sqrtD < 0 means "compute √D from (r, L, E)".
double darboux_theta_raw(double r, double theta, double L, double E, int s, double lambda, double omega,
                         const RefPoint& ref, double sqrtD = -1.0);
double darboux_T_raw(double t, double r, double L, double E, int s, double lambda, double omega,
                     const RefPoint& ref, double sqrtD = -1.0);

DarbouxIntegrals eval_darboux_integrals(const PhaseState& s, double lambda, double omega,
                                        const RefPoint& ref = {});
IntegralPartials eval_darboux_partials(double r, double L, double E, int s, double lambda, double omega,
                                       const RefPoint& ref = {});
IntegralPartials eval_darboux_partials(const PhaseState& s, double lambda, double omega,
                                       const RefPoint& ref = {});

struct CartesianConstants {
    double E1 = 0.0;
    double E2 = 0.0;
    double C2 = 0.0;
};

CartesianConstants cartesian_constants(const PhaseState& s, double lambda, double omega);
std::vector<FirstIntegral> darboux_integrals(double lambda, double omega, const RefPoint& ref = {});

PhaseState to_polar(const PhaseState& s);
PhaseState to_cartesian(const PhaseState& s);

/// sgn(ṙ) with the convention that ṙ = 0 takes the sign of the radial acceleration.
int radial_branch(const SystemDef& sys, const PhaseState& s);

// ---------------------------------------------------------------------------
// Named generators and multiplier pairs

using GeneratorCatalog = std::map<std::string, Generator>;
using MultiplierCatalog = std::map<std::string, MultiplierPair>;

GeneratorCatalog darboux_generators(double lambda, double omega, const RefPoint& ref = {});
MultiplierCatalog darboux_multipliers(double lambda, double omega, const RefPoint& ref = {});
GeneratorCatalog central_generators(const PotentialSpec& U, const RefPoint& ref = {});
MultiplierCatalog central_multipliers(const PotentialSpec& U, const RefPoint& ref = {});
/// Point symmetries and dynamical generators of the uncoupled pair. Equal-frequency extras use ω₁.
GeneratorCatalog uncoupled_generators(double omega1, double omega2);
MultiplierCatalog uncoupled_multipliers(double omega1, double omega2);

}  // namespace nlab

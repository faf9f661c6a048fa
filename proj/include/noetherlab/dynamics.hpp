#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "noetherlab/error.hpp"

namespace nlab {

using Vec2 = std::array<double, 2>;

enum class Chart { Polar, Cartesian };

/// A point (t, q, v) of the first jet space. In the polar chart q = (r, θ), v = (ṙ, θ̇).
struct PhaseState {
    double t = 0.0;
    Vec2 q{};
    Vec2 v{};
    Chart chart = Chart::Polar;
};

bool is_admissible(const PhaseState& s);
void require_admissible(const PhaseState& s);

/// Union of the parameters used by the benchmark systems; unused entries are ignored.
struct Params {
    double omega = 1.0;
    double omega1 = 1.0;
    double omega2 = 1.0;
    double lambda = 0.0;
    double k = 1.0;
    double K = 0.0;
    double p = 1.0;
    /// Potential family code for central-force systems, −1 otherwise.
    int potential = -1;
};

struct SystemDef {
    std::string name;
    Chart chart = Chart::Polar;
    std::function<Vec2(const PhaseState&)> accel;
    std::function<double(const PhaseState&)> lagrangian;
    /// Positive w such that q̈ⁱ − fⁱ = −wᵢ⁻¹ δℒ/δqⁱ.
    std::function<Vec2(const Vec2&)> noether_weights;
    Params params;
};

enum class EventKind { TurningPoint, InertialPoint, ZeroCrossing };

/// index is 1-based: TurningPoint(i) is vᵢ = 0, InertialPoint(i) is q̈ᵢ = 0, ZeroCrossing(i) is qᵢ = 0.
struct EventSpec {
    EventKind kind = EventKind::TurningPoint;
    int index = 1;
};

struct Event {
    EventKind kind = EventKind::TurningPoint;
    int index = 1;
    double t = 0.0;
    PhaseState state;
    int direction = 0;
};

std::string_view to_string(EventKind k);

struct IntegratorOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
    /// Sample spacing. Steps are clipped so that samples are integration nodes. 0 keeps every step.
    double sample_dt = 0.01;
    double h_init = 0.0;
    double h_min = 1e-13;
    double h_max = 0.25;
    double norm_cap = 1e10;
    double r_min = 1e-12;
    std::size_t max_steps = 20'000'000;
    std::vector<EventSpec> events;
    double event_tol = 1e-10;
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_error = 0.0;
};

struct Trajectory {
    std::vector<PhaseState> samples;
    std::vector<Event> events;
    IntegratorStats stats;
    /// Accepted step endpoints with their derivatives, used for dense output.
    std::vector<PhaseState> nodes;
    std::vector<std::array<double, 4>> node_rates;

    double t_begin() const { return nodes.front().t; }
    double t_end() const { return nodes.back().t; }
    /// Cubic Hermite interpolation between integration nodes.
    PhaseState at(double t) const;
};

Trajectory integrate(const SystemDef& sys, const PhaseState& s0, double t_end,
                     const IntegratorOptions& opts = {});

/// Flow map: the state reached from s after time dt (dt may be negative).
PhaseState advance(const SystemDef& sys, const PhaseState& s, double dt, double tol = 1e-14);

double event_value(const SystemDef& sys, const PhaseState& s, const EventSpec& e);

std::vector<Event> detect_events(const SystemDef& sys, const Trajectory& traj,
                                 std::span<const EventSpec> kinds, double tol = 1e-10);

Event refine_event(const SystemDef& sys, const PhaseState& left, const PhaseState& right,
                   const EventSpec& kind, double tol = 1e-10);

}  // namespace nlab

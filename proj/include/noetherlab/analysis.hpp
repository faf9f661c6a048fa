#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "noetherlab/dynamics.hpp"
#include "noetherlab/systems.hpp"

namespace nlab {

struct AnalysisOptions {
    /// Jumps at or above this size (radians, or the integral's own unit) make an integral multi-valued.
    double jump_tol = 1e-5;
    /// Single-linkage radius of the value census.
    double census_radius = 1e-6;
    /// Samples closer than this (time units) to an event are left out of drift and census.
    double guard = 1e-3;
    /// Commensurability search.
    long max_den = 100;
    double ratio_tol = 1e-9;
};

struct EvaluationFailure {
    double t = 0.0;
    std::string what;
};

struct DriftResult {
    double value = 0.0;
    std::vector<EvaluationFailure> failures;
};

/// Events on the trajectory of the kinds at which I may jump; recomputed from the integration nodes.
std::vector<Event> jump_events_of(const SystemDef& sys, const Trajectory& traj, const FirstIntegral& I);

/// max |I(s) − I(s_arc)| / max(1, |I(s_arc)|), with s_arc the first sample of each arc between
/// consecutive events. Differences of periodic integrals are taken on the circle.
DriftResult drift(const Trajectory& traj, const FirstIntegral& I, std::span<const Event> events,
                  const AnalysisOptions& opts = {});

struct Jump {
    Event event;
    double before = 0.0;
    double after = 0.0;
    double magnitude = 0.0;
};

/// One-sided limits at each event by quadratic least squares through five values on each side,
/// taken along the solution at multiples of the trajectory's sample spacing.
std::vector<Jump> jump_scan(const SystemDef& sys, const Trajectory& traj, const FirstIntegral& I,
                            std::span<const Event> events);

/// |Δθ| between the first two consecutive radial turning points of opposite direction.
double apsidal_angle(const Trajectory& traj);

/// Lowest-terms convergent p/q of ω₁/ω₂ with q ≤ max_den and |ω₁/ω₂ − p/q| < tol.
std::optional<std::pair<long, long>> commensurability(double omega1, double omega2, long max_den, double tol);

/// Number of single-linkage clusters of radius tol among values on a circle of the given period
/// (on the line when period is 0).
std::size_t value_census(std::span<const double> samples, double period, double tol);

/// Values of I at the samples outside the guard window around the events, reduced mod period.
std::vector<double> census_samples(const Trajectory& traj, const FirstIntegral& I, std::span<const Event> events,
                                   double period, double guard);

enum class Classification { SingleValued, MultiValued, SingularAtEvents };

std::string_view to_string(Classification c);

struct ReportedJump {
    double t = 0.0;
    EventKind kind = EventKind::TurningPoint;
    int index = 1;
    double magnitude = 0.0;
};

struct DiagnosticsReport {
    std::string integral;
    double max_drift = 0.0;
    std::vector<ReportedJump> jumps;
    double max_jump = 0.0;
    std::optional<double> apsidal_angle;
    Classification classification = Classification::SingleValued;
    std::optional<std::pair<long, long>> commensurate;
    std::size_t evaluation_failures = 0;
    bool grows_at_events = false;
};

/// Drift, jumps and growth next to the events aggregated over the trajectories. SingleValued iff every
/// jump is below tolerance and no evaluation failed; SingularAtEvents when values blow up (or fail)
/// next to the events; MultiValued otherwise.
DiagnosticsReport classify(const SystemDef& sys, const FirstIntegral& I, std::span<const Trajectory> trajectories,
                           const AnalysisOptions& opts = {});

}  // namespace nlab

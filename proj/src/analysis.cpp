#include "noetherlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace nlab {

std::vector<Event> jump_events_of(const SystemDef& sys, const Trajectory& traj, const FirstIntegral& I) {
    if (I.jump_events.empty()) return {};
    return detect_events(sys, traj, I.jump_events);
}

namespace {

double nearest_event_distance(double t, std::span<const Event> events) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& e : events) d = std::min(d, std::abs(t - e.t));
    return d;
}

std::size_t arc_index(double t, std::span<const Event> events) {
    return static_cast<std::size_t>(
        std::upper_bound(events.begin(), events.end(), t, [](double x, const Event& e) { return x < e.t; }) -
        events.begin());
}

double difference(const FirstIntegral& I, double a, double b) {
    return std::abs(circular_diff(a, b, valuedness_period(I.valuedness)));
}

// Quadratic least squares through the values at x = 1..5, evaluated at x = 0.
constexpr double kExtrapolate[5] = {9.0 / 5, 0.0, -4.0 / 5, -3.0 / 5, 3.0 / 5};

double sample_spacing(const Trajectory& traj) {
    if (traj.samples.size() >= 2) {
        const double h = traj.samples[1].t - traj.samples[0].t;
        if (h > 0) return h;
    }
    return 0.01;
}

bool opposite_turns(const Event& a, const Event& b) {
    return a.direction != 0 && b.direction != 0 && a.direction != b.direction;
}

std::optional<double> apsidal_from_events(std::span<const Event> events) {
    const Event* prev = nullptr;
    for (const auto& e : events) {
        if (e.kind != EventKind::TurningPoint || e.index != 1) continue;
        if (prev && opposite_turns(*prev, e)) return std::abs(e.state.q[1] - prev->state.q[1]);
        prev = &e;
    }
    return std::nullopt;
}

}  // namespace

DriftResult drift(const Trajectory& traj, const FirstIntegral& I, std::span<const Event> events,
                  const AnalysisOptions& opts) {
    DriftResult out;
    std::vector<std::optional<double>> ref(events.size() + 1);
    for (const auto& s : traj.samples) {
        if (nearest_event_distance(s.t, events) < opts.guard) continue;
        double v = 0.0;
        try {
            v = I.eval(s);
        } catch (const Error& e) {
            out.failures.push_back({s.t, e.what()});
            continue;
        }
        if (!std::isfinite(v)) {
            out.failures.push_back({s.t, "non-finite value"});
            continue;
        }
        auto& r = ref[arc_index(s.t, events)];
        if (!r) {
            r = v;
            continue;
        }
        out.value = std::max(out.value, difference(I, v, *r) / std::max(1.0, std::abs(*r)));
    }
    return out;
}

std::vector<Jump> jump_scan(const SystemDef& sys, const Trajectory& traj, const FirstIntegral& I,
                            std::span<const Event> events) {
    const double h = sample_spacing(traj);
    std::vector<Jump> out;
    for (const auto& ev : events) {
        Jump j;
        j.event = ev;
        try {
            double side[2] = {0.0, 0.0};
            for (int d = 0; d < 2; ++d) {
                const double sign = d == 0 ? -1.0 : 1.0;
                PhaseState s = ev.state;
                double acc = 0.0;
                for (int k = 0; k < 5; ++k) {
                    s = advance(sys, s, sign * h);
                    acc += kExtrapolate[k] * I.eval(s);
                }
                side[d] = acc;
            }
            j.before = side[0];
            j.after = side[1];
            double period = valuedness_period(I.valuedness);
            if (I.period) period = I.period(ev.state);
            j.magnitude = std::abs(circular_diff(j.after, j.before, period));
        } catch (const Error&) {
            j.magnitude = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(j);
    }
    return out;
}

double apsidal_angle(const Trajectory& traj) {
    const auto a = apsidal_from_events(traj.events);
    if (!a) fail(ErrorCode::InsufficientEvents, "no two consecutive turning points of opposite direction");
    return *a;
}

std::optional<std::pair<long, long>> commensurability(double omega1, double omega2, long max_den, double tol) {
    if (!(omega1 > 0) || !(omega2 > 0)) fail(ErrorCode::InvalidParam, "frequencies must be positive");
    if (max_den < 1) fail(ErrorCode::InvalidParam, "max_den must be at least 1");
    const double x = omega1 / omega2;
    // Convergents h/k of the continued fraction of x.
    long h0 = 1, k0 = 0, h1 = 0, k1 = 1;
    double rest = x;
    for (int n = 0; n < 64; ++n) {
        const double a = std::floor(rest);
        const long h = static_cast<long>(a) * h0 + h1, k = static_cast<long>(a) * k0 + k1;
        if (k > max_den) break;
        if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) < tol) return std::pair{h, k};
        h1 = h0;
        k1 = k0;
        h0 = h;
        k0 = k;
        const double frac = rest - a;
        if (frac < 1e-15) break;
        rest = 1.0 / frac;
    }
    return std::nullopt;
}

std::size_t value_census(std::span<const double> samples, double period, double tol) {
    if (samples.empty()) return 0;
    std::vector<double> v(samples.begin(), samples.end());
    if (period > 0)
        for (double& x : v) x = reduce_mod(x, period);
    std::sort(v.begin(), v.end());
    std::size_t count = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] - v[i - 1] > tol) ++count;
    if (period > 0 && count > 1 && v.front() + period - v.back() <= tol) --count;
    return count;
}

std::vector<double> census_samples(const Trajectory& traj, const FirstIntegral& I, std::span<const Event> events,
                                   double period, double guard) {
    std::vector<double> out;
    for (const auto& s : traj.samples) {
        if (nearest_event_distance(s.t, events) < guard) continue;
        try {
            const double v = I.eval(s);
            if (std::isfinite(v)) out.push_back(reduce_mod(v, period));
        } catch (const Error&) {
        }
    }
    return out;
}

std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::SingleValued: return "SingleValued";
        case Classification::MultiValued: return "MultiValued";
        case Classification::SingularAtEvents: return "SingularAtEvents";
    }
    return "?";
}

namespace {

// |I| at 1e-4 from the event exceeding ten times its size at 1e-2, on either side.
bool grows_near(const SystemDef& sys, const FirstIntegral& I, const Event& ev, std::size_t& failures) {
    for (double sign : {-1.0, 1.0}) {
        try {
            const double far = std::abs(I.eval(advance(sys, ev.state, sign * 1e-2)));
            const double near = std::abs(I.eval(advance(sys, ev.state, sign * 1e-4)));
            if (!std::isfinite(near) || near > 10 * std::max(1.0, far)) return true;
        } catch (const Error&) {
            ++failures;
            return true;
        }
    }
    return false;
}

auto initial_key(const Trajectory& t) {
    const auto& s = t.samples.front();
    return std::tuple{s.t, s.q[0], s.q[1], s.v[0], s.v[1]};
}

}  // namespace

DiagnosticsReport classify(const SystemDef& sys, const FirstIntegral& I, std::span<const Trajectory> trajectories,
                           const AnalysisOptions& opts) {
    DiagnosticsReport rep;
    rep.integral = std::string(to_string(I.name));
    const Trajectory* first = nullptr;
    for (const auto& traj : trajectories) {
        const auto events = jump_events_of(sys, traj, I);
        const auto d = drift(traj, I, events, opts);
        rep.max_drift = std::max(rep.max_drift, d.value);
        rep.evaluation_failures += d.failures.size();
        for (const auto& j : jump_scan(sys, traj, I, events)) {
            if (!std::isfinite(j.magnitude)) {
                ++rep.evaluation_failures;
                continue;
            }
            rep.jumps.push_back({j.event.t, j.event.kind, j.event.index, j.magnitude});
            rep.max_jump = std::max(rep.max_jump, j.magnitude);
        }
        for (const auto& ev : events)
            if (grows_near(sys, I, ev, rep.evaluation_failures)) rep.grows_at_events = true;
        if (!first || initial_key(traj) < initial_key(*first)) first = &traj;
    }
    std::sort(rep.jumps.begin(), rep.jumps.end(), [](const ReportedJump& a, const ReportedJump& b) {
        return std::tuple{a.t, a.kind, a.index, a.magnitude} < std::tuple{b.t, b.kind, b.index, b.magnitude};
    });
    if (first && sys.chart == Chart::Polar) {
        const std::vector<EventSpec> turns{{EventKind::TurningPoint, 1}};
        rep.apsidal_angle = apsidal_from_events(detect_events(sys, *first, turns));
    }
    if (sys.name == "uncoupled")
        rep.commensurate = commensurability(sys.params.omega1, sys.params.omega2, opts.max_den, opts.ratio_tol);

    if (rep.grows_at_events || rep.evaluation_failures > 0)
        rep.classification = Classification::SingularAtEvents;
    else if (rep.max_jump >= opts.jump_tol)
        rep.classification = Classification::MultiValued;
    else
        rep.classification = Classification::SingleValued;
    return rep;
}

}  // namespace nlab

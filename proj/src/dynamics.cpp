#include "noetherlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlab {

namespace {

using Y = std::array<double, 4>;

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

PhaseState to_state(double t, const Y& y, Chart chart) {
    return PhaseState{t, {y[0], y[1]}, {y[2], y[3]}, chart};
}

Y to_y(const PhaseState& s) { return {s.q[0], s.q[1], s.v[0], s.v[1]}; }

bool finite(const Y& y) {
    return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

class Stepper {
public:
    Stepper(const SystemDef& sys, double rtol, double atol) : sys_(sys), rtol_(rtol), atol_(atol) {}

    Y rhs(double t, const Y& y) const {
        Vec2 a;
        try {
            a = sys_.accel(to_state(t, y, sys_.chart));
        } catch (const Error&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            return {nan, nan, nan, nan};
        }
        return {y[2], y[3], a[0], a[1]};
    }

    // One trial step. Returns the scaled error norm (inf when a stage is not finite).
    double attempt(double t, const Y& y, const Y& k1, double h, Y& y_new, Y& k7) const {
        auto comb = [&](std::initializer_list<std::pair<double, const Y*>> terms) {
            Y out = y;
            for (int i = 0; i < 4; ++i) {
                double acc = 0.0;
                for (const auto& [c, k] : terms) acc += c * (*k)[i];
                out[i] += h * acc;
            }
            return out;
        };
        const Y k2 = rhs(t + c2 * h, comb({{a21, &k1}}));
        const Y k3 = rhs(t + c3 * h, comb({{a31, &k1}, {a32, &k2}}));
        const Y k4 = rhs(t + c4 * h, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Y k5 = rhs(t + c5 * h, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Y k6 = rhs(t + h, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        y_new = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        if (!finite(y_new)) return std::numeric_limits<double>::infinity();
        k7 = rhs(t + h, y_new);
        if (!finite(k7)) return std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                    e7 * k7[i]);
            const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
            sum += (err / sc) * (err / sc);
        }
        const double n = std::sqrt(sum / 4.0);
        return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
    }

    static double grow(double err) {
        if (err == 0.0) return 5.0;
        return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    }

private:
    const SystemDef& sys_;
    double rtol_, atol_;
};

void guard(const SystemDef& sys, double t, const Y& y, double r_min, double cap) {
    if (!finite(y)) fail(ErrorCode::BlowUp, "non-finite state at t=" + std::to_string(t));
    if (sys.chart == Chart::Polar && y[0] < r_min)
        fail(ErrorCode::BlowUp, "r fell below " + std::to_string(r_min) + " at t=" + std::to_string(t));
    for (double x : y)
        if (std::abs(x) > cap) fail(ErrorCode::BlowUp, "state norm above cap at t=" + std::to_string(t));
}

int sign(double x) { return (x > 0) - (x < 0); }

}  // namespace

bool is_admissible(const PhaseState& s) {
    for (double x : {s.t, s.q[0], s.q[1], s.v[0], s.v[1]})
        if (!std::isfinite(x)) return false;
    return s.chart != Chart::Polar || s.q[0] > 0.0;
}

void require_admissible(const PhaseState& s) {
    if (!is_admissible(s)) fail(ErrorCode::InvalidParam, "state not admissible (non-finite or r <= 0)");
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::TurningPoint: return "TurningPoint";
        case EventKind::InertialPoint: return "InertialPoint";
        case EventKind::ZeroCrossing: return "ZeroCrossing";
    }
    return "Unknown";
}

PhaseState Trajectory::at(double t) const {
    if (nodes.empty()) fail(ErrorCode::InvalidParam, "empty trajectory");
    if (t <= nodes.front().t) return nodes.front();
    if (t >= nodes.back().t) return nodes.back();
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double x, const PhaseState& s) { return x < s.t; });
    const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    const PhaseState& a = nodes[j - 1];
    const PhaseState& b = nodes[j];
    const double h = b.t - a.t;
    const double s = (t - a.t) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    const Y ya = to_y(a), yb = to_y(b);
    Y y;
    for (int i = 0; i < 4; ++i)
        y[i] = h00 * ya[i] + h10 * h * node_rates[j - 1][i] + h01 * yb[i] + h11 * h * node_rates[j][i];
    return to_state(t, y, a.chart);
}

PhaseState advance(const SystemDef& sys, const PhaseState& s, double dt, double tol) {
    if (dt == 0.0) return s;
    Stepper st(sys, tol, tol);
    const double dir = dt > 0 ? 1.0 : -1.0;
    const double t_end = s.t + dt;
    double t = s.t;
    Y y = to_y(s);
    Y k1 = st.rhs(t, y);
    double h = std::min(std::abs(dt), 1e-3);
    for (std::size_t n = 0; n < 10'000'000; ++n) {
        const double remaining = (t_end - t) * dir;
        if (remaining <= 0) break;
        bool last = false;
        double step = h;
        if (step >= remaining * (1 - 1e-12)) {
            step = remaining;
            last = true;
        }
        Y y_new, k7;
        const double err = st.attempt(t, y, k1, dir * step, y_new, k7);
        if (err <= 1.0) {
            t = last ? t_end : t + dir * step;
            y = y_new;
            k1 = k7;
            guard(sys, t, y, 1e-12, 1e12);
            h = last ? h : step * Stepper::grow(err);
            if (last) break;
        } else {
            h = step * std::max(0.2, Stepper::grow(err));
            if (h < 1e-15 * std::max(1.0, std::abs(t)))
                fail(ErrorCode::StepUnderflow, "flow map step underflow at t=" + std::to_string(t));
        }
    }
    return to_state(t_end, y, s.chart);
}

double event_value(const SystemDef& sys, const PhaseState& s, const EventSpec& e) {
    const int i = std::clamp(e.index, 1, 2) - 1;
    switch (e.kind) {
        case EventKind::TurningPoint: return s.v[i];
        case EventKind::ZeroCrossing: return s.q[i];
        case EventKind::InertialPoint: return sys.accel(s)[i];
    }
    return 0.0;
}

namespace {

double event_rate(const SystemDef& sys, const PhaseState& s, const EventSpec& e) {
    const int i = std::clamp(e.index, 1, 2) - 1;
    switch (e.kind) {
        case EventKind::TurningPoint: return sys.accel(s)[i];
        case EventKind::ZeroCrossing: return s.v[i];
        case EventKind::InertialPoint: {
            const double d = 1e-5;
            return (event_value(sys, advance(sys, s, d), e) - event_value(sys, advance(sys, s, -d), e)) /
                   (2 * d);
        }
    }
    return 0.0;
}

}  // namespace

Event refine_event(const SystemDef& sys, const PhaseState& left, const PhaseState& right,
                   const EventSpec& kind, double tol) {
    const double ga = event_value(sys, left, kind);
    const double gb = event_value(sys, right, kind);
    const int sa = sign(ga), sb = sign(gb);
    const int direction = sign(gb - ga);
    auto make = [&](const PhaseState& s) { return Event{kind.kind, kind.index, s.t, s, direction}; };
    if (sa == 0) return make(left);
    if (sb == 0) return make(right);
    if (sa == sb) fail(ErrorCode::NoSignChange, "event function has the same sign at both bracket ends");

    double lo = 0.0, hi = right.t - left.t;
    PhaseState best = std::abs(ga) < std::abs(gb) ? left : right;
    double gbest = std::min(std::abs(ga), std::abs(gb));
    const double floor = 1e-15 * std::max(1.0, std::abs(right.t));
    while (hi - lo > floor) {
        const double mid = 0.5 * (lo + hi);
        const PhaseState s = advance(sys, left, mid);
        const double g = event_value(sys, s, kind);
        if (std::abs(g) < gbest) {
            gbest = std::abs(g);
            best = s;
        }
        if (g == 0.0 || gbest < 1e-3 * tol) break;
        if (sign(g) == sa)
            lo = mid;
        else
            hi = mid;
    }
    // One Newton polish from the bisection result.
    const double rate = event_rate(sys, best, kind);
    if (rate != 0.0 && std::isfinite(rate)) {
        const double tau = best.t - left.t - event_value(sys, best, kind) / rate;
        if (tau >= 0.0 && tau <= right.t - left.t) {
            const PhaseState s = advance(sys, left, tau);
            const double g = std::abs(event_value(sys, s, kind));
            if (g < gbest) best = s;
        }
    }
    return make(best);
}

namespace {

void scan_interval(const SystemDef& sys, const PhaseState& a, const PhaseState& b,
                   std::span<const EventSpec> kinds, double tol, std::vector<Event>& out) {
    for (const EventSpec& k : kinds) {
        const double ga = event_value(sys, a, k);
        const double gb = event_value(sys, b, k);
        const int sa = sign(ga), sb = sign(gb);
        // An exact zero at the left node was reported with the previous interval.
        if (sa == 0) continue;
        if (sb == 0) {
            out.push_back(refine_event(sys, a, b, k, tol));
            continue;
        }
        // Sign flips confined to the tolerance band are numerical noise (e.g. circular orbits).
        if (sa != sb && std::max(std::abs(ga), std::abs(gb)) > tol)
            out.push_back(refine_event(sys, a, b, k, tol));
    }
}

}  // namespace

std::vector<Event> detect_events(const SystemDef& sys, const Trajectory& traj,
                                 std::span<const EventSpec> kinds, double tol) {
    std::vector<Event> out;
    for (std::size_t i = 1; i < traj.nodes.size(); ++i)
        scan_interval(sys, traj.nodes[i - 1], traj.nodes[i], kinds, tol, out);
    std::stable_sort(out.begin(), out.end(), [](const Event& x, const Event& y) { return x.t < y.t; });
    return out;
}

Trajectory integrate(const SystemDef& sys, const PhaseState& s0, double t_end,
                     const IntegratorOptions& opts) {
    require_admissible(s0);
    if (!(t_end > s0.t)) fail(ErrorCode::InvalidParam, "t_end must exceed the initial time");
    if (!(opts.rtol > 0 && opts.atol > 0)) fail(ErrorCode::InvalidParam, "tolerances must be positive");
    if (s0.chart != sys.chart) fail(ErrorCode::InvalidParam, "state chart does not match the system");

    Stepper st(sys, opts.rtol, opts.atol);
    Trajectory tr;
    double t = s0.t;
    Y y = to_y(s0);
    guard(sys, t, y, opts.r_min, opts.norm_cap);
    Y k1 = st.rhs(t, y);
    if (!finite(k1)) fail(ErrorCode::BlowUp, "non-finite acceleration at the initial state");

    tr.samples.push_back(s0);
    tr.nodes.push_back(s0);
    tr.node_rates.push_back(k1);

    double h = opts.h_init > 0 ? opts.h_init : 1e-3;
    h = std::min(h, opts.h_max);
    std::size_t n_sample = 1;
    auto sample_time = [&](std::size_t n) { return s0.t + static_cast<double>(n) * opts.sample_dt; };

    while (t < t_end) {
        if (tr.stats.steps + tr.stats.rejected >= opts.max_steps)
            fail(ErrorCode::StepUnderflow, "step budget exhausted at t=" + std::to_string(t));
        double target = t_end;
        if (opts.sample_dt > 0) target = std::min(t_end, sample_time(n_sample));
        double step = std::min(h, opts.h_max);
        bool hit = false;
        if (t + step >= target - 1e-12 * std::max(1.0, std::abs(target))) {
            step = target - t;
            hit = true;
        }
        Y y_new, k7;
        const double err = st.attempt(t, y, k1, step, y_new, k7);
        if (err <= 1.0) {
            const double t_new = hit ? target : t + step;
            guard(sys, t_new, y_new, opts.r_min, opts.norm_cap);
            const PhaseState prev = tr.nodes.back();
            t = t_new;
            y = y_new;
            k1 = k7;
            ++tr.stats.steps;
            tr.stats.max_error = std::max(tr.stats.max_error, err * opts.rtol);
            const PhaseState cur = to_state(t, y, sys.chart);
            tr.nodes.push_back(cur);
            tr.node_rates.push_back(k1);
            if (!opts.events.empty()) scan_interval(sys, prev, cur, opts.events, opts.event_tol, tr.events);
            if (hit && opts.sample_dt > 0 && t < t_end) {
                tr.samples.push_back(cur);
                ++n_sample;
            }
            if (opts.sample_dt <= 0 && t < t_end) tr.samples.push_back(cur);
            // Clipping to a sample time must not shrink the working step size.
            h = hit ? std::max(h, step * Stepper::grow(err)) : step * Stepper::grow(err);
        } else {
            ++tr.stats.rejected;
            h = step * std::max(0.2, Stepper::grow(err));
            if (h < opts.h_min * std::max(1.0, std::abs(t)))
                fail(ErrorCode::StepUnderflow, "step size underflow at t=" + std::to_string(t));
        }
    }
    tr.samples.push_back(tr.nodes.back());
    return tr;
}

}  // namespace nlab

#include <algorithm>
#include <charconv>
#include <cmath>

#include "noetherlab/cli.hpp"

namespace nlab::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    fail(ErrorCode::ConfigError, "invalid config field '" + field + "': " + why);
}

void finite(const std::string& field, double x) {
    if (!std::isfinite(x)) bad(field, "must be finite");
}

const std::vector<std::string> kTasks{"simulate", "integrals", "check-symmetry", "check-multiplier", "reconstruct",
                                      "diagnose"};
const std::vector<std::string> kSweepParams{"lambda", "omega", "k", "K", "p", "omega1", "omega2"};

bool one_of(const std::string& x, const std::vector<std::string>& set) {
    return std::find(set.begin(), set.end(), x) != set.end();
}

}  // namespace

void validate(const RunConfig& c) {
    if (!one_of(c.system, {"uncoupled", "central", "darboux"})) bad("system", "expected uncoupled, central or darboux");
    for (auto [name, v] : {std::pair{"lambda", c.lambda}, {"omega", c.omega}, {"k", c.k}, {"K", c.K}, {"p", c.p},
                           {"omega1", c.omega1}, {"omega2", c.omega2}, {"t0", c.t0}, {"r", c.r}, {"theta", c.theta},
                           {"rdot", c.rdot}, {"thetadot", c.thetadot}, {"q1", c.q1}, {"q2", c.q2}, {"v1", c.v1},
                           {"v2", c.v2}, {"r0", c.r0}})
        finite(name, v);
    if (c.system == "darboux") {
        if (c.lambda < 0) bad("lambda", "must be >= 0");
        if (!(c.omega > 0)) bad("omega", "must be > 0");
    }
    if (c.system == "central") {
        const auto kind = potential_from_string(c.potential);
        if (!kind) bad("potential", "unknown potential '" + c.potential + "'");
        try {
            validate_potential(PotentialSpec{*kind, c.k, c.K, c.p});
        } catch (const Error& e) {
            bad("potential", e.what());
        }
    }
    if (c.system == "uncoupled") {
        if (!(c.omega1 > 0)) bad("omega1", "must be > 0");
        if (!(c.omega2 > 0)) bad("omega2", "must be > 0");
    } else if (!(c.r > 0)) {
        bad("r", "must be > 0");
    }
    if (!one_of(c.ref, {"outer", "inner", "inertial", "explicit"})) bad("ref", "expected outer, inner, inertial or explicit");
    if (c.ref == "explicit" && !(c.r0 > 0)) bad("r0", "must be > 0");
    if (!(c.horizon > 0) || !std::isfinite(c.horizon)) bad("horizon", "must be > 0");
    if (!(c.rtol > 0)) bad("rtol", "must be > 0");
    if (!(c.atol > 0)) bad("atol", "must be > 0");
    if (!(c.sample_dt > 0)) bad("sample_dt", "must be > 0");
    if (c.format != "csv" && c.format != "json") bad("format", "expected csv or json");
    for (const auto& t : c.tasks)
        if (!one_of(t, kTasks)) bad("tasks", "unknown task '" + t + "'");
    if (c.trajectories < 3) bad("trajectories", "must be >= 3");
    if (c.threads < 0) bad("threads", "must be >= 0");
    if (!one_of(c.sweep_param, kSweepParams)) bad("sweep_param", "unknown parameter '" + c.sweep_param + "'");
}

SystemDef make_system(const RunConfig& c) {
    if (c.system == "darboux") return make_darboux(c.lambda, c.omega);
    if (c.system == "central") return make_central(PotentialSpec{*potential_from_string(c.potential), c.k, c.K, c.p});
    return make_uncoupled(c.omega1, c.omega2);
}

PhaseState initial_state(const RunConfig& c) {
    if (c.system == "uncoupled") return PhaseState{c.t0, {c.q1, c.q2}, {c.v1, c.v2}, Chart::Cartesian};
    return PhaseState{c.t0, {c.r, c.theta}, {c.rdot, c.thetadot}, Chart::Polar};
}

RefPoint reference_point(const RunConfig& c) {
    if (c.ref == "inner") return RefPoint::inner();
    if (c.ref == "inertial") return RefPoint::inertial();
    if (c.ref == "explicit") return RefPoint::at(c.r0);
    return RefPoint::outer();
}

std::vector<FirstIntegral> system_integrals(const RunConfig& c) {
    if (c.system == "darboux") return darboux_integrals(c.lambda, c.omega, reference_point(c));
    if (c.system == "central")
        return central_integrals(PotentialSpec{*potential_from_string(c.potential), c.k, c.K, c.p}, reference_point(c));
    return uncoupled_integrals(c.omega1, c.omega2);
}

IntegratorOptions integrator_options(const RunConfig& c) {
    IntegratorOptions o;
    o.rtol = c.rtol;
    o.atol = c.atol;
    o.sample_dt = c.sample_dt;
    if (c.system == "uncoupled")
        o.events = {{EventKind::TurningPoint, 1}, {EventKind::TurningPoint, 2}};
    else
        o.events = {{EventKind::TurningPoint, 1}};
    return o;
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace nlab::cli

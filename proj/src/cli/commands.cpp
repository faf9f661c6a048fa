#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "noetherlab/analysis.hpp"
#include "noetherlab/cli.hpp"
#include "noetherlab/noether.hpp"
#include "noetherlab/symmetry.hpp"

namespace nlab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json system_json(const RunConfig& c) {
    json j{{"name", c.system}};
    if (c.system == "darboux") {
        j["lambda"] = c.lambda;
        j["omega"] = c.omega;
    } else if (c.system == "central") {
        j["potential"] = c.potential;
        j["k"] = c.k;
        j["K"] = c.K;
        j["p"] = c.p;
    } else {
        j["omega1"] = c.omega1;
        j["omega2"] = c.omega2;
    }
    return j;
}

json state_json(const PhaseState& s) { return json::array({s.t, s.q[0], s.q[1], s.v[0], s.v[1]}); }

std::string state_header(const SystemDef& sys) {
    return sys.chart == Chart::Polar ? "r,theta,rdot,thetadot" : "q1,q2,v1,v2";
}

std::string state_csv(const PhaseState& s) {
    return format_double(s.q[0]) + "," + format_double(s.q[1]) + "," + format_double(s.v[0]) + "," +
           format_double(s.v[1]);
}

void write_text(const fs::path& file, const std::string& text) {
    std::ofstream f(file, std::ios::binary);
    if (!f) fail(ErrorCode::EvaluationFailed, "cannot write " + file.string());
    f << text;
}

void write_json(const fs::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

void prepare(const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) fail(ErrorCode::ConfigError, "invalid config field 'out': " + ec.message());
}

std::optional<double> try_eval(const FirstIntegral& I, const PhaseState& s) {
    try {
        const double v = I.eval(s);
        if (std::isfinite(v)) return v;
    } catch (const Error&) {
    }
    return std::nullopt;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// The configured initial state followed by ṙ (polar) or q₁ (Cartesian) offsets.
std::vector<PhaseState> diagnostic_initial_states(const RunConfig& c) {
    std::vector<PhaseState> out;
    const PhaseState s0 = initial_state(c);
    for (int i = 0; i < c.trajectories; ++i) {
        PhaseState s = s0;
        if (s.chart == Chart::Polar)
            s.v[0] += 0.05 * i;
        else
            s.q[0] *= 1.0 - 0.1 * i;
        out.push_back(s);
    }
    return out;
}

std::vector<std::string> default_checks(const RunConfig& c) {
    if (c.system == "darboux")
        return {"Xhat_L", "Xhat_E", "Xhat_Theta", "Xhat_T", "Q_L", "Q_E", "Q_Theta", "Q_T",
                "Y_L",    "Y_E",    "Y_Theta",    "Y_T"};
    if (c.system == "central") {
        std::vector<std::string> v{"Xhat_L", "Xhat_E", "Q_L", "Q_E"};
        if (c.potential == "power_law" || c.potential == "coulomb") v.push_back("X1");
        if (c.potential == "inverted_inverse_square") v.push_back("X2");
        return v;
    }
    std::vector<std::string> v;
    for (const auto& [name, g] : uncoupled_generators(c.omega1, c.omega2)) v.push_back(name);
    for (const auto& [name, q] : uncoupled_multipliers(c.omega1, c.omega2)) v.push_back(name);
    return v;
}

JetDomain check_domain(const RunConfig& c) {
    // Without bound orbits the default central domain is empty; point symmetries only need r > 0.
    if (c.system == "central" && c.potential == "inverted_inverse_square")
        return [](const PhaseState& s) { return s.q[0] > 0.4 && s.q[0] < 2.5 && std::abs(s.v[0]) < 3 && std::abs(s.v[1]) < 3; };
    return {};
}

json check_entry(const std::string& name, const std::string& kind, double residual) {
    const Verdict v = verdict_of(residual);
    return json{{"name", name},
                {"kind", kind},
                {"residual", std::isfinite(residual) ? json(residual) : json(nullptr)},
                {"verdict", std::string(to_string(v))},
                {"pass", v == Verdict::Pass}};
}

std::optional<ExtendedGenerator> extended_by_name(const std::string& name, const RunConfig& c) {
    const RefPoint ref = reference_point(c);
    if (name == "Y_L") return Y_L(c.lambda, c.omega);
    if (name == "Y_E") return Y_E(c.lambda, c.omega);
    if (name == "Y_Theta") return Y_Theta(c.lambda, c.omega, ref);
    if (name == "Y_T") return Y_T(c.lambda, c.omega, ref);
    if (name == "Y_T_displayed") return Y_T_displayed(c.lambda, c.omega, ref);
    return std::nullopt;
}

GeneratorCatalog generators_of(const RunConfig& c) {
    if (c.system == "darboux") return darboux_generators(c.lambda, c.omega, reference_point(c));
    if (c.system == "central")
        return central_generators(PotentialSpec{*potential_from_string(c.potential), c.k, c.K, c.p}, reference_point(c));
    return uncoupled_generators(c.omega1, c.omega2);
}

MultiplierCatalog multipliers_of(const RunConfig& c) {
    if (c.system == "darboux") return darboux_multipliers(c.lambda, c.omega, reference_point(c));
    if (c.system == "central")
        return central_multipliers(PotentialSpec{*potential_from_string(c.potential), c.k, c.K, c.p}, reference_point(c));
    return uncoupled_multipliers(c.omega1, c.omega2);
}

// Closed form matching the line integral of a catalog generator, unreduced and on the ṙ > 0 branch.
std::optional<std::pair<std::string, JetFn>> closed_form_for(const std::string& gen, const RunConfig& c) {
    const RefPoint ref = reference_point(c);
    if (c.system == "uncoupled") {
        const double w1 = c.omega1, w2 = c.omega2;
        if (gen == "Xhat_E1") return std::pair{"E1", JetFn([w1](const PhaseState& s) { return uncoupled_energy(s, w1, 1); })};
        if (gen == "Xhat_E2") return std::pair{"E2", JetFn([w2](const PhaseState& s) { return uncoupled_energy(s, w2, 2); })};
        return std::nullopt;
    }
    if (c.system == "darboux") {
        const double lam = c.lambda, w = c.omega;
        if (gen == "Xhat_L") return std::pair{"L", JetFn([lam](const PhaseState& s) { return darboux_L(s, lam); })};
        if (gen == "Xhat_E") return std::pair{"E", JetFn([lam, w](const PhaseState& s) { return darboux_E(s, lam, w); })};
        if (gen == "Xhat_Theta")
            return std::pair{"Theta", JetFn([lam, w, ref](const PhaseState& s) {
                                 return darboux_theta_raw(s.q[0], s.q[1], darboux_L(s, lam), darboux_E(s, lam, w), 1, lam,
                                                          w, ref);
                             })};
        if (gen == "Xhat_T")
            return std::pair{"T", JetFn([lam, w, ref](const PhaseState& s) {
                                 return darboux_T_raw(s.t, s.q[0], darboux_L(s, lam), darboux_E(s, lam, w), 1, lam, w, ref);
                             })};
        return std::nullopt;
    }
    const PotentialSpec U{*potential_from_string(c.potential), c.k, c.K, c.p};
    if (gen == "Xhat_L") return std::pair{"L", JetFn([](const PhaseState& s) { return central_L(s); })};
    if (gen == "Xhat_E") return std::pair{"E", JetFn([U](const PhaseState& s) { return central_E(s, U); })};
    if (gen == "Xhat_Theta")
        return std::pair{"Theta", JetFn([U, ref](const PhaseState& s) {
                             return central_theta_raw(U, s.q[0], s.q[1], central_L(s), central_E(s, U), 1, ref);
                         })};
    if (gen == "Xhat_T")
        return std::pair{"T", JetFn([U, ref](const PhaseState& s) {
                             return central_T_raw(U, s.t, s.q[0], central_L(s), central_E(s, U), 1, ref);
                         })};
    return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------

json cmd_simulate(const RunConfig& c, const fs::path& out) {
    const SystemDef sys = make_system(c);
    const PhaseState s0 = initial_state(c);
    const Trajectory tr = integrate(sys, s0, s0.t + c.horizon, integrator_options(c));
    prepare(out);

    if (c.format == "csv") {
        std::string text = "t," + state_header(sys) + "\n";
        for (const auto& s : tr.samples) text += format_double(s.t) + "," + state_csv(s) + "\n";
        write_text(out / "samples.csv", text);
        std::string ev = "t,kind,index,direction," + state_header(sys) + "\n";
        for (const auto& e : tr.events)
            ev += format_double(e.t) + "," + std::string(to_string(e.kind)) + "," + std::to_string(e.index) + "," +
                  std::to_string(e.direction) + "," + state_csv(e.state) + "\n";
        write_text(out / "events.csv", ev);
    } else {
        json samples = json::array();
        for (const auto& s : tr.samples) samples.push_back(state_json(s));
        write_json(out / "samples.json", json{{"columns", "t," + state_header(sys)}, {"rows", samples}});
        json events = json::array();
        for (const auto& e : tr.events)
            events.push_back(json{{"t", e.t},
                                  {"kind", std::string(to_string(e.kind))},
                                  {"index", e.index},
                                  {"direction", e.direction},
                                  {"state", state_json(e.state)}});
        write_json(out / "events.json", events);
    }

    json integrals = json::array();
    for (const auto& I : system_integrals(c)) {
        integrals.push_back(json{{"name", std::string(to_string(I.name))},
                                 {"initial", optional_number(try_eval(I, tr.samples.front()))},
                                 {"final", optional_number(try_eval(I, tr.samples.back()))}});
    }
    const json stats{{"schema", 1},
                     {"command", "simulate"},
                     {"system", system_json(c)},
                     {"initial", state_json(s0)},
                     {"horizon", c.horizon},
                     {"steps", tr.stats.steps},
                     {"rejected", tr.stats.rejected},
                     {"samples", tr.samples.size()},
                     {"events", tr.events.size()},
                     {"integrals", integrals}};
    write_json(out / "stats.json", stats);
    return stats;
}

json diagnose_report(const RunConfig& c) {
    const SystemDef sys = make_system(c);
    std::vector<Trajectory> trs;
    json ics = json::array();
    for (const auto& s : diagnostic_initial_states(c)) {
        trs.push_back(integrate(sys, s, s.t + c.horizon, integrator_options(c)));
        ics.push_back(state_json(s));
    }
    json integrals = json::array();
    std::optional<std::pair<long, long>> commensurate;
    for (const auto& I : system_integrals(c)) {
        const DiagnosticsReport rep = classify(sys, I, trs);
        commensurate = rep.commensurate;
        json jumps = json::array();
        for (const auto& j : rep.jumps)
            jumps.push_back(json{{"t", j.t}, {"kind", std::string(to_string(j.kind))}, {"index", j.index},
                                 {"magnitude", j.magnitude}});
        integrals.push_back(json{{"name", rep.integral},
                                 {"max_drift", rep.max_drift},
                                 {"max_jump", rep.max_jump},
                                 {"jumps", jumps},
                                 {"apsidal_angle", optional_number(rep.apsidal_angle)},
                                 {"classification", std::string(to_string(rep.classification))},
                                 {"evaluation_failures", rep.evaluation_failures}});
    }
    json report{{"schema", 1},
                {"command", "diagnose"},
                {"system", system_json(c)},
                {"horizon", c.horizon},
                {"initial_conditions", ics},
                {"integrals", integrals}};
    if (c.system == "uncoupled")
        report["commensurate"] = commensurate ? json{{"p", commensurate->first}, {"q", commensurate->second}} : json(nullptr);
    return report;
}

json cmd_diagnose(const RunConfig& c, const fs::path& out) {
    const json report = diagnose_report(c);
    prepare(out);
    write_json(out / "report.json", report);
    return report;
}

json cmd_check(const RunConfig& c, const fs::path& out) {
    const SystemDef sys = make_system(c);
    const auto names = c.checks.empty() ? default_checks(c) : c.checks;
    const auto gens = generators_of(c);
    const auto mults = multipliers_of(c);
    const JetDomain domain = check_domain(c);
    // Central Θ and T generators carry finite-difference partials of quadratures, which need a wider stencil.
    auto dopts_for = [&](const std::string& n) {
        DeterminingOptions o;
        if (c.system == "central" && (n == "Xhat_Theta" || n == "Xhat_T")) o.h_time = 5e-2;
        return o;
    };

    // Resolve every name before any work, so that a bad entry fails fast.
    for (const auto& n : names)
        if (!gens.count(n) && !mults.count(n) && !(c.system == "darboux" && extended_by_name(n, c)))
            fail(ErrorCode::UnknownCatalogEntry, "unknown catalog entry '" + n + "' for system " + c.system);

    json checks = json::array();
    std::vector<PhaseState> jets;
    std::vector<TestCurve> curves;
    std::vector<ExtPoint> points;
    for (const auto& n : names) {
        if (auto g = gens.find(n); g != gens.end()) {
            if (jets.empty()) jets = random_jets(sys, c.seed, 20, domain);
            checks.push_back(check_entry(n, "generator", max_determining_residual(g->second, sys, jets, dopts_for(n))));
        } else if (auto q = mults.find(n); q != mults.end()) {
            if (curves.empty()) curves = random_test_curves(sys, c.seed, 10, domain);
            checks.push_back(check_entry(n, "multiplier", euler_residual(q->second, sys, curves)));
        } else {
            if (points.empty()) points = random_classical_points(c.lambda, c.omega, c.seed, 20);
            const auto Y = *extended_by_name(n, c);
            double w = 0.0;
            for (const auto& p : points)
                for (double x : determining_residual_1st(Y, p)) w = std::max(w, std::abs(x));
            checks.push_back(check_entry(n, "extended", w));
        }
    }
    const json result{{"schema", 1}, {"command", "check"}, {"system", system_json(c)}, {"seed", c.seed}, {"checks", checks}};
    prepare(out);
    write_json(out / "checks.json", result);
    return result;
}

json cmd_reconstruct(const RunConfig& c, const fs::path& out) {
    const SystemDef sys = make_system(c);
    std::vector<std::string> names = c.checks;
    if (names.empty())
        names = c.system == "uncoupled" ? std::vector<std::string>{"Xhat_E1", "Xhat_E2"}
                                        : std::vector<std::string>{"Xhat_L", "Xhat_E", "Xhat_Theta", "Xhat_T"};
    const auto gens = generators_of(c);
    for (const auto& n : names)
        if (!gens.count(n) || !closed_form_for(n, c))
            fail(ErrorCode::UnknownCatalogEntry, "no reconstructible catalog entry '" + n + "' for system " + c.system);

    const auto pts = reconstruction_endpoints(sys, c.seed, 23);
    const PhaseState& base = pts[0];
    const std::span<const PhaseState> ends(pts.data() + 3, 20);
    json results = json::array();
    for (const auto& n : names) {
        const auto [integral, I] = *closed_form_for(n, c);
        json r{{"name", n}, {"integral", integral}, {"endpoints", ends.size()}};
        try {
            const double spread = reconstruction_offset_spread(gens.at(n), sys, I, base, ends);
            const double gap = reconstruction_path_gap(gens.at(n), sys, base, pts[1], pts[2]);
            r["offset_spread"] = spread;
            r["path_gap"] = gap;
            r["pass"] = spread < 1e-7 && gap < 1e-8;
        } catch (const Error& e) {
            r["offset_spread"] = nullptr;
            r["path_gap"] = nullptr;
            r["pass"] = false;
            r["error"] = e.what();
        }
        results.push_back(r);
    }
    const json result{{"schema", 1}, {"command", "reconstruct"}, {"system", system_json(c)}, {"seed", c.seed},
                      {"results", results}};
    prepare(out);
    write_json(out / "reconstruct.json", result);
    return result;
}

json cmd_sweep(const RunConfig& c, const fs::path& out) {
    const std::vector<double>& values = c.sweep_values;
    if (values.empty()) fail(ErrorCode::ConfigError, "invalid config field 'sweep_values': empty");
    std::vector<RunConfig> configs(values.size(), c);
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig& r = configs[i];
        double* field = c.sweep_param == "lambda"   ? &r.lambda
                        : c.sweep_param == "omega"  ? &r.omega
                        : c.sweep_param == "k"      ? &r.k
                        : c.sweep_param == "K"      ? &r.K
                        : c.sweep_param == "p"      ? &r.p
                        : c.sweep_param == "omega1" ? &r.omega1
                                                    : &r.omega2;
        *field = values[i];
        validate(r);
    }

    std::vector<json> runs(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < values.size();) {
            json entry{{"value", values[i]}};
            try {
                json summary = json::array();
                for (const auto& I : diagnose_report(configs[i])["integrals"])
                    summary.push_back(json{{"name", I["name"]},
                                           {"classification", I["classification"]},
                                           {"max_drift", I["max_drift"]},
                                           {"max_jump", I["max_jump"]}});
                entry["integrals"] = summary;
            } catch (const Error& e) {
                entry["error"] = e.what();
            }
            runs[i] = entry;
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min<std::size_t>(c.threads > 0 ? c.threads : hw, values.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    const json result{{"schema", 1}, {"command", "sweep"}, {"system", system_json(c)}, {"param", c.sweep_param},
                      {"runs", runs}};
    prepare(out);
    write_json(out / "sweep.json", result);
    return result;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv) {
    RunConfig c;
    CLI::App app{"Noether symmetries, first integrals and global-regularity diagnostics"};
    app.set_config("--config", "", "TOML-style key = value file; command-line flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);
    app.fallthrough();

    app.add_option("--system", c.system, "uncoupled | central | darboux");
    app.add_option("--lambda", c.lambda);
    app.add_option("--omega", c.omega);
    app.add_option("--potential", c.potential,
                   "coulomb | isotropic | perturbed_coulomb | power_law | special_kkr3 | inverted_inverse_square");
    app.add_option("--k", c.k);
    app.add_option("--K", c.K);
    app.add_option("--p", c.p);
    app.add_option("--omega1", c.omega1);
    app.add_option("--omega2", c.omega2);
    app.add_option("--t0", c.t0);
    app.add_option("--r", c.r);
    app.add_option("--theta", c.theta);
    app.add_option("--rdot", c.rdot);
    app.add_option("--thetadot", c.thetadot);
    app.add_option("--q1", c.q1);
    app.add_option("--q2", c.q2);
    app.add_option("--v1", c.v1);
    app.add_option("--v2", c.v2);
    app.add_option("--ref", c.ref, "outer | inner | inertial | explicit");
    app.add_option("--r0", c.r0);
    app.add_option("--horizon", c.horizon);
    app.add_option("--rtol", c.rtol);
    app.add_option("--atol", c.atol);
    double tol = 0.0;
    app.add_option("--tol", tol, "sets both rtol and atol");
    app.add_option("--sample_dt", c.sample_dt);
    app.add_option("--tasks", c.tasks)->delimiter(',');
    app.add_option("--out", c.out);
    app.add_option("--format", c.format, "csv | json");
    app.add_option("--checks", c.checks, "catalog entries for check and reconstruct")->delimiter(',');
    app.add_option("--seed", c.seed, "seed for random test points");
    app.add_option("--trajectories", c.trajectories);
    app.add_option("--sweep_param", c.sweep_param);
    app.add_option("--sweep_values", c.sweep_values)->delimiter(',');
    app.add_option("--threads", c.threads);

    auto* simulate = app.add_subcommand("simulate", "integrate and write samples, events and stats");
    auto* diagnose = app.add_subcommand("diagnose", "classify every first integral and write report.json");
    auto* check = app.add_subcommand("check", "residual suites for catalog generators and multipliers");
    auto* reconstruct = app.add_subcommand("reconstruct", "line-integral reconstruction of first integrals");
    auto* sweep = app.add_subcommand("sweep", "diagnose over a list of parameter values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (tol > 0) c.rtol = c.atol = tol;
        std::replace(c.potential.begin(), c.potential.end(), '-', '_');
        validate(c);
        const fs::path out = c.out;
        if (*simulate) cmd_simulate(c, out);
        if (*diagnose) cmd_diagnose(c, out);
        if (*check) cmd_check(c, out);
        if (*reconstruct) cmd_reconstruct(c, out);
        if (*sweep) cmd_sweep(c, out);
    } catch (const Error& e) {
        std::cerr << "noetherlab: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::ConfigError:
            case ErrorCode::UnknownCatalogEntry:
            case ErrorCode::InvalidParam: return kExitConfig;
            default: return kExitRuntime;
        }
    } catch (const std::exception& e) {
        std::cerr << "noetherlab: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace nlab::cli

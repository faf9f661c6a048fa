#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "noetherlab/systems.hpp"

namespace nlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct RunConfig {
    std::string system = "darboux";
    // darboux
    double lambda = 1.0;
    double omega = 1.0;
    // central
    std::string potential = "coulomb";
    double k = 1.0;
    double K = 0.0;
    double p = 1.0;
    // uncoupled
    double omega1 = 1.0;
    double omega2 = 1.5;
    // initial state: polar for darboux/central, Cartesian for uncoupled
    double t0 = 0.0;
    double r = 1.0;
    double theta = 0.0;
    double rdot = 0.1;
    double thetadot = 0.3;
    double q1 = 1.0;
    double q2 = 0.5;
    double v1 = 0.2;
    double v2 = -0.4;
    // Θ and T reference point: outer | inner | inertial | explicit (uses r0)
    std::string ref = "outer";
    double r0 = 1.0;
    double horizon = 50.0;
    double rtol = 1e-12;
    double atol = 1e-12;
    double sample_dt = 0.01;
    std::vector<std::string> tasks;
    std::string out = "out";
    std::string format = "csv";
    /// Catalog entries for check and reconstruct; empty means the full catalog.
    std::vector<std::string> checks;
    std::uint64_t seed = 0;
    /// Initial conditions used by diagnose (the configured one plus ṙ or q₁ offsets).
    int trajectories = 3;
    /// sweep: parameter name and values
    std::string sweep_param = "lambda";
    std::vector<double> sweep_values;
    int threads = 0;
};

/// Throws Error(ConfigError) naming the offending field.
void validate(const RunConfig& c);

SystemDef make_system(const RunConfig& c);
PhaseState initial_state(const RunConfig& c);
RefPoint reference_point(const RunConfig& c);
std::vector<FirstIntegral> system_integrals(const RunConfig& c);
IntegratorOptions integrator_options(const RunConfig& c);

/// Locale-independent shortest form with 17 significant digits.
std::string format_double(double x);

nlohmann::json cmd_simulate(const RunConfig& c, const std::filesystem::path& out);
nlohmann::json diagnose_report(const RunConfig& c);
nlohmann::json cmd_diagnose(const RunConfig& c, const std::filesystem::path& out);
nlohmann::json cmd_check(const RunConfig& c, const std::filesystem::path& out);
nlohmann::json cmd_reconstruct(const RunConfig& c, const std::filesystem::path& out);
nlohmann::json cmd_sweep(const RunConfig& c, const std::filesystem::path& out);

/// Parses arguments (subcommand, --config and overrides), runs the command, returns the exit code.
int run(int argc, const char* const* argv);

}  // namespace nlab::cli

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "noetherlab/cli.hpp"
#include "schema_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("noetherlab_test_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int tool(const std::string& args) {
    const std::string cmd = std::string("\"") + NLAB_TOOL + "\" " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

void validates(const json& doc, const std::string& schema) {
    const auto errs = schemacheck::errors(doc, schemacheck::load(NLAB_SCHEMA_DIR, schema));
    for (const auto& e : errs) FAIL_CHECK(schema << e);
    CHECK(errs.empty());
}

const json& integral(const json& report, const std::string& name) {
    for (const auto& i : report["integrals"])
        if (i["name"] == name) return i;
    throw std::runtime_error("no integral " + name);
}

}  // namespace

TEST_CASE("simulate writes samples, events and stats") {
    const auto dir = scratch("simulate");
    REQUIRE(tool("simulate --horizon 5 --out " + dir.string()) == 0);
    const auto csv = slurp(dir / "samples.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "t,r,theta,rdot,thetadot");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 502);
    CHECK(slurp(dir / "events.csv").rfind("t,kind,index,direction", 0) == 0);
    const auto stats = read_json(dir / "stats.json");
    validates(stats, "stats");
    for (const auto& i : stats["integrals"])
        CHECK(std::abs(i["final"].get<double>() - i["initial"].get<double>()) < 1e-8);

    const auto u = scratch("simulate_uncoupled");
    REQUIRE(tool("simulate --system uncoupled --horizon 2 --format json --out " + u.string()) == 0);
    CHECK(read_json(u / "samples.json")["rows"].size() == 201);
    CHECK(fs::exists(u / "events.json"));
}

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(tool("simulate --lambda -1 --out " + dir.string()) == nlab::cli::kExitConfig);
    CHECK(tool("simulate --system pendulum --out " + dir.string()) == nlab::cli::kExitConfig);
    CHECK(tool("simulate --bogus-flag 1") == nlab::cli::kExitConfig);
    CHECK(tool("") == nlab::cli::kExitConfig);
    CHECK(tool("check --checks no_such_generator --out " + dir.string()) == nlab::cli::kExitConfig);
    // A start next to the origin blows up during integration.
    CHECK(tool("simulate --r 1e-13 --out " + dir.string()) == nlab::cli::kExitRuntime);
}

TEST_CASE("config file with command-line overrides") {
    const auto dir = scratch("config");
    {
        std::ofstream f(dir / "run.toml");
        f << "system = \"central\"\npotential = \"perturbed-coulomb\"\nK = 0.18\nthetadot = 1.0\n"
             "rdot = 0.2\nhorizon = 30\nsample_dt = 0.02\n";
    }
    REQUIRE(tool("diagnose --config " + (dir / "run.toml").string() + " --out " + dir.string()) == 0);
    const auto rep = read_json(dir / "report.json");
    validates(rep, "report");
    CHECK(rep["system"]["potential"] == "perturbed_coulomb");
    const auto& th = integral(rep, "Theta");
    CHECK(th["classification"] == "MultiValued");
    CHECK(th["max_jump"].get<double>() == doctest::Approx(2 * (pi / 0.8 - pi)).epsilon(1e-4));
    CHECK(th["apsidal_angle"].get<double>() == doctest::Approx(pi / 0.8).epsilon(1e-6));
    CHECK(integral(rep, "L")["classification"] == "SingleValued");

    REQUIRE(tool("diagnose --config " + (dir / "run.toml").string() + " --K 0 --out " + dir.string()) == 0);
    CHECK(integral(read_json(dir / "report.json"), "Theta")["classification"] == "SingleValued");

    {
        std::ofstream f(dir / "bad.toml");
        f << "horizon = -2\n";
    }
    CHECK(tool("simulate --config " + (dir / "bad.toml").string() + " --out " + dir.string()) ==
          nlab::cli::kExitConfig);
    {
        std::ofstream f(dir / "extra.toml");
        f << "horizon = 2\nbogus_key = 3\n";
    }
    CHECK(tool("simulate --config " + (dir / "extra.toml").string() + " --out " + dir.string()) ==
          nlab::cli::kExitConfig);
}

TEST_CASE("diagnose verdicts") {
    const auto d = scratch("diagnose_darboux");
    REQUIRE(tool("diagnose --lambda 0.5 --horizon 30 --out " + d.string()) == 0);
    const auto rep = read_json(d / "report.json");
    validates(rep, "report");
    for (const char* n : {"L", "E", "Theta"}) CHECK(integral(rep, n)["classification"] == "SingleValued");
    CHECK(!rep.contains("commensurate"));

    const auto u = scratch("diagnose_uncoupled");
    REQUIRE(tool("diagnose --system uncoupled --omega2 1.5 --horizon 30 --out " + u.string()) == 0);
    const auto urep = read_json(u / "report.json");
    validates(urep, "report");
    CHECK(urep["commensurate"]["p"] == 2);
    CHECK(urep["commensurate"]["q"] == 3);
    CHECK(integral(urep, "E1")["classification"] == "SingleValued");
}

TEST_CASE("diagnose output is byte-identical across runs") {
    const auto a = scratch("repeat_a"), b = scratch("repeat_b");
    REQUIRE(tool("diagnose --lambda 0.3 --horizon 20 --out " + a.string()) == 0);
    REQUIRE(tool("diagnose --lambda 0.3 --horizon 20 --out " + b.string()) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
}

TEST_CASE("check and reconstruct") {
    const auto dir = scratch("check");
    REQUIRE(tool("check --lambda 0.5 --out " + dir.string()) == 0);
    const auto checks = read_json(dir / "checks.json");
    validates(checks, "checks");
    std::map<std::string, std::string> verdict;
    for (const auto& c : checks["checks"]) verdict[c["name"]] = c["verdict"];
    CHECK(verdict.at("Xhat_L") == "pass");
    CHECK(verdict.at("Xhat_Theta") == "pass");
    CHECK(verdict.at("Q_T") == "pass");

    REQUIRE(tool("check --lambda 0.5 --checks Scale_r,Xhat_E --out " + dir.string()) == 0);
    const auto two = read_json(dir / "checks.json");
    REQUIRE(two["checks"].size() == 2);
    CHECK(two["checks"][0]["verdict"] == "fail");
    CHECK(two["checks"][1]["verdict"] == "pass");

    REQUIRE(tool("check --system central --potential power_law --k 0.7 --p 2.5 --checks X1,X1_printed,Xhat_E --out " +
                 dir.string()) == 0);
    const auto power = read_json(dir / "checks.json");
    validates(power, "checks");
    CHECK(power["checks"][0]["verdict"] == "pass");
    CHECK(power["checks"][1]["verdict"] == "fail");
    CHECK(power["checks"][2]["verdict"] == "pass");

    REQUIRE(tool("reconstruct --lambda 0.5 --out " + dir.string()) == 0);
    const auto rec = read_json(dir / "reconstruct.json");
    validates(rec, "reconstruct");
    for (const auto& r : rec["results"]) {
        CAPTURE(r["name"].get<std::string>());
        CHECK(r["pass"] == true);
    }
}

TEST_CASE("sweep runs every value") {
    const auto dir = scratch("sweep");
    REQUIRE(tool("sweep --sweep_param lambda --sweep_values 0,0.5,1 --horizon 20 --threads 2 --out " + dir.string()) == 0);
    const auto sw = read_json(dir / "sweep.json");
    validates(sw, "sweep");
    REQUIRE(sw["runs"].size() == 3);
    for (const auto& r : sw["runs"]) CHECK(r.contains("integrals"));
}

TEST_CASE("format_double round-trips") {
    for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23}) CHECK(std::stod(nlab::cli::format_double(x)) == x);
    CHECK(nlab::cli::format_double(0.5) == "0.5");
}

TEST_CASE("schema checker rejects malformed documents") {
    const auto schema = schemacheck::load(NLAB_SCHEMA_DIR, "checks");
    json doc{{"schema", 1}, {"command", "check"}, {"system", {{"name", "darboux"}}}, {"seed", 0}, {"checks", json::array()}};
    CHECK(schemacheck::errors(doc, schema).empty());
    doc["schema"] = 2;
    CHECK(!schemacheck::errors(doc, schema).empty());
    doc["schema"] = 1;
    doc["extra"] = true;
    CHECK(!schemacheck::errors(doc, schema).empty());
    doc.erase("extra");
    doc["checks"].push_back({{"name", "x"}, {"kind", "generator"}, {"residual", nullptr}, {"verdict", "maybe"}, {"pass", false}});
    CHECK(schemacheck::errors(doc, schema).size() == 1);
}

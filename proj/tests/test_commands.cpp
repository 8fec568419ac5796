#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wigner/commands.hpp"

using namespace wigner;

namespace {

const std::string kSource = WIGNER_SOURCE_DIR;

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

RunConfig config(Command c) {
    RunConfig cfg;
    cfg.command = c;
    cfg.no_timing = true;
    return cfg;
}

RunConfig analyze_config() {
    RunConfig cfg = config(Command::analyze);
    cfg.input_path = kSource + "/data/oam_l100.toml";
    return cfg;
}

}  // namespace

TEST_CASE("command names") {
    for (Command c : {Command::derive, Command::quantum, Command::slitwheel, Command::analyze, Command::census,
                      Command::montecarlo, Command::adversary}) {
        CHECK(parse_command(to_string(c)) == c);
    }
    CHECK_THROWS_AS(parse_command("plot"), std::invalid_argument);
}

TEST_CASE("golden reports") {
    const auto check = [](const RunConfig& cfg, const std::string& name) {
        const CommandResult r = run_command(cfg);
        REQUIRE(r.exit_code == kExitOk);
        CHECK(r.report.dump(2) + "\n" == slurp(kSource + "/tests/golden/" + name));
    };
    check(config(Command::derive), "derive.json");
    RunConfig rounded = analyze_config();
    rounded.p_min = 0.002;
    rounded.p_max = 0.043;
    check(rounded, "analyze_rounded.json");
    check(analyze_config(), "analyze_computed.json");
}

TEST_CASE("validation errors exit with 1") {
    RunConfig missing = config(Command::analyze);
    CommandResult r = run_command(missing);
    CHECK(r.exit_code == kExitValidation);
    CHECK_FALSE(r.error.empty());

    RunConfig bad = analyze_config();
    bad.input_path = kSource + "/tests/golden/no_such_file.toml";
    CHECK(run_command(bad).exit_code == kExitValidation);

    RunConfig zero = config(Command::montecarlo);
    zero.samples = 0;
    CHECK(run_command(zero).exit_code == kExitValidation);

    RunConfig adv = config(Command::adversary);
    adv.extra = 1.0;
    CHECK(run_command(adv).exit_code == kExitValidation);

    RunConfig wheel = config(Command::slitwheel);
    wheel.slit_width_fraction = 1.0;
    CHECK(run_command(wheel).exit_code == kExitValidation);
}

TEST_CASE("reports carry no timing when asked") {
    for (Command c : {Command::derive, Command::quantum, Command::slitwheel, Command::montecarlo}) {
        RunConfig cfg = config(c);
        cfg.samples = 1000;
        const auto r = run_command(cfg);
        CHECK(r.exit_code == kExitOk);
        CHECK_FALSE(r.report.contains("elapsed_s"));
        CHECK(r.report["command"] == to_string(c));
    }
}

TEST_CASE("slitwheel writes the fringe CSV") {
    RunConfig cfg = config(Command::slitwheel);
    cfg.fringe_points = 11;
    cfg.csv_path = "fringe_test.csv";
    const auto r = run_command(cfg);
    CHECK(r.exit_code == kExitOk);
    const std::string csv = slurp("fringe_test.csv");
    CHECK(csv.rfind("phi_o_rad,probability\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("adversary and quantum reports") {
    const auto adv = run_command(config(Command::adversary)).report;
    CHECK(adv["alice_setting1_spike"] == true);
    CHECK(adv["bob_setting3_spike"] == true);
    const auto q = run_command(config(Command::quantum)).report;
    CHECK(q["violated"] == true);
    CHECK(q["scan"]["best_angles_deg"]["theta2"] == 30.0);
}

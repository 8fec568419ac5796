// Acceptance gate: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs; the exit status is non-zero if any selected criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "wigner/analysis.hpp"
#include "wigner/census.hpp"
#include "wigner/commands.hpp"
#include "wigner/distribution.hpp"
#include "wigner/quantum.hpp"
#include "wigner/symbol.hpp"

using namespace wigner;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Checks {
    std::vector<std::string> failed;
    std::vector<std::string> info;

    void expect(bool ok, const std::string& what) {
        if (!ok) failed.push_back(what);
    }
    void note(const std::string& s) { info.push_back(s); }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void c1_derivation(Checks& c) {
    const auto t0 = Clock::now();
    RunConfig cfg;
    cfg.command = Command::derive;
    cfg.no_timing = true;
    const auto r = cmd_derive(cfg);
    const auto& j = r.report;
    for (const char* s : {"S13", "S12", "S23"}) c.expect(j["sizes"][s] == 14, std::string(s) + " size 14");
    c.expect(j["terms_total"] == 28, "28 terms");
    c.expect(j["terms_canceled"] == 24, "24 canceled");
    const std::vector<std::string> residual = j["residual"];
    const std::vector<std::string> expected{"(+--,--+)", "(+-+,--+)", "(+--,+-+)", "(+-+,+-+)"};
    c.expect(residual == expected, "residual set");
    c.expect(r.exit_code == kExitOk, "self-checks");
    const double t = since(t0);
    c.expect(t < 1.0, "runtime < 1 s");
    c.note("runtime " + fmt(t) + " s");
}

void c2_quantum(Checks& c) {
    const auto t0 = Clock::now();
    const auto e = wigner_evaluation({0.0, 30.0, 60.0});
    c.expect(std::abs(e.lhs - 0.75) <= 1e-12, "lhs 0.75");
    c.expect(std::abs(e.rhs - 0.5) <= 1e-12, "rhs 0.5");
    const auto scan = max_violation_scan(1.0);
    c.expect(scan.angles.theta1 == 0.0 && scan.angles.theta2 == 30.0 && scan.angles.theta3 == 60.0,
             "scan angles (0,30,60)");
    c.expect(std::abs(scan.margin - 0.25) <= 1e-12, "scan margin 0.25");
    const double t = since(t0);
    c.expect(t < 10.0, "runtime < 10 s");
    c.note("lhs " + fmt(e.lhs) + " rhs " + fmt(e.rhs) + ", runtime " + fmt(t) + " s");
}

void c3_slitwheel(Checks& c) {
    const auto t0 = Clock::now();
    const auto p = slitwheel_probability({100, 0.149, 0.0, 64});
    c.expect(std::round(p.p_min * 1000) / 1000 == 0.002, "p_min rounds to 0.002");
    c.expect(std::round(p.p_max * 1000) / 1000 == 0.043, "p_max rounds to 0.043");
    double worst = 0.0;
    for (int l : {1, 10, 100}) {
        for (double w : {0.1, 0.149, 0.5}) {
            for (int k = 0; k < 8; ++k) {
                const SlitWheelConfig cfg{l, w, kPi / l * k / 8.0, 64};
                try {
                    const double closed = slitwheel_probability(cfg).p;
                    worst = std::max(worst, std::abs(slitwheel_probability_numeric(cfg) - closed) / closed);
                } catch (const ConvergenceError&) {
                    worst = INFINITY;
                }
            }
        }
    }
    c.expect(worst <= 1e-6, "quadrature within 1e-6 relative");
    const double t = since(t0);
    c.expect(t < 30.0, "runtime < 30 s");
    c.note("p_min " + fmt(p.p_min) + " p_max " + fmt(p.p_max) + ", worst rel err " + fmt(worst) + ", runtime " +
           fmt(t) + " s");
}

void c4_experiment(Checks& c) {
    const auto t0 = Clock::now();
    const auto in = ingest_counts(std::string(WIGNER_SOURCE_DIR) + "/data/oam_l100.toml");
    for (SigmaConvention conv : {SigmaConvention::scaled, SigmaConvention::unscaled}) {
        const auto run = run_analysis(in, conv, 0.002, 0.043);
        c.expect(run.report.violation >= 363.0 && run.report.violation <= 375.0, "violation in [363, 375]");
        c.expect(run.report.significance > 2.5, "significance > 2.5 (" + to_string(conv) + ")");
        c.note(to_string(conv) + ": violation " + fmt(run.report.violation) + " sigma " + fmt(run.report.sigma));
    }
    const auto full = run_analysis(in, SigmaConvention::scaled);
    c.expect(std::abs(full.report.violation - 294.0) < 1.0, "full precision violation ~294");
    bool note = false;
    for (const auto& n : full.notes) note |= n.rfind("sensitivity:", 0) == 0;
    c.expect(note, "sensitivity note");
    const double t = since(t0);
    c.expect(t < 1.0, "runtime < 1 s");
    c.note("full precision " + fmt(full.report.violation) + ", runtime " + fmt(t) + " s");
}

void c5_census(Checks& c) {
    for (auto v : {FlatnessVariant::both_sides, FlatnessVariant::alice_only}) {
        const FlatnessPredicate pred{v, true};
        const auto perfect = census_perfect(pred);
        c.expect(perfect.flat_count == 25, "perfect census 25 of 256 (" + to_string(v) + ", got " +
                                               std::to_string(perfect.flat_count) + ")");
        const auto single = census_one_step(pred, 1);
        const auto sharded = census_one_step(pred, 8);
        c.expect(single.universe_size == 16777216, "one-step universe 2^24");
        c.expect(single.elapsed_s <= 60.0, "single-threaded <= 60 s");
        c.expect(sharded.elapsed_s <= 10.0, "8 shards <= 10 s");
        c.expect(single.flat_count == sharded.flat_count, "shard-independent totals");
        const auto j = to_json(sharded);
        c.expect(j.contains("matches_published") && j["published_count"] == 4083, "comparison against 4083 reported");
        c.note(to_string(v) + ": perfect " + std::to_string(perfect.flat_count) + ", one-step " +
               std::to_string(single.flat_count) + " (match " + (single.matches_published() ? "yes" : "no") + "), " +
               fmt(single.elapsed_s) + " s / " + fmt(sharded.elapsed_s) + " s");
    }
    const double lr = likelihood_ratio(kPublishedPerfectFlat, 256, kPublishedOneStepFlat, std::uint64_t{1} << 24);
    c.expect(std::abs(lr - 401.0) <= 0.5, "likelihood ratio ~401");
    c.note("likelihood ratio " + fmt(lr));
}

void c6_properties(Checks& c) {
    const auto t0 = Clock::now();
    const auto raw = run_property_parallel(&run_raw_bound_property, 20140101, 100000, 1);
    const auto efa = run_property_parallel(&run_efa_property, 20140101, 100000, 1);
    c.expect(raw.samples == 100000 && raw.failures == 0, "raw bound 0 failures of 1e5");
    c.expect(efa.samples == 100000 && efa.failures == 0, "EFA 0 failures of 1e5");
    const auto s = adversarial_hvm(0.2).singles;
    c.expect(s[0] > s[1] && s[0] > s[2] && s[0] > s[3] && s[0] > s[4], "Alice setting 1 spike");
    c.expect(s[5] > s[1] && s[5] > s[2] && s[5] > s[3] && s[5] > s[4], "Bob setting 3 spike");
    const double t = since(t0);
    c.expect(t < 60.0, "runtime < 60 s");
    c.note("max slack raw " + fmt(raw.max_slack) + " efa " + fmt(efa.max_slack) + ", runtime " + fmt(t) + " s");
}

std::string run_cli(const std::string& args, int& status) {
    const std::string cmd = std::string("\"") + WIGNER_CLI + "\" " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return {};
    }
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    status = pclose(pipe);
    return out;
}

void c7_determinism(Checks& c) {
    const std::string data = std::string(WIGNER_SOURCE_DIR) + "/data/oam_l100.toml";
    const std::vector<std::string> commands{
        "derive",
        "quantum",
        "slitwheel",
        "analyze --input \"" + data + "\"",
        "analyze --input \"" + data + "\" --p-min 0.002 --p-max 0.043 --sigma-convention unscaled",
        "census --shards 8",
        "montecarlo --seed 7 --samples 20000 --shards 3",
        "adversary",
    };
    for (const auto& args : commands) {
        int s1 = 0, s2 = 0;
        const std::string a = run_cli(args + " --no-timing", s1);
        const std::string b = run_cli(args + " --no-timing", s2);
        c.expect(s1 == 0 && s2 == 0, "'" + args + "' exits 0");
        c.expect(!a.empty() && a == b, "'" + args + "' byte-identical");
    }
    c.note(std::to_string(commands.size()) + " commands run twice");
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Checks&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "derivation reproduction", c1_derivation}, {2, "quantum violation", c2_quantum},
        {3, "slit-wheel extremes", c3_slitwheel},      {4, "experimental reproduction", c4_experiment},
        {5, "census", c5_census},                      {6, "property suites", c6_properties},
        {7, "determinism", c7_determinism},
    };
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const auto& cr : all) {
        if (only && cr.id != only) continue;
        Checks c;
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.failed.push_back(std::string("exception: ") + e.what());
        }
        std::string line = (c.failed.empty() ? "PASS C" : "FAIL C") + std::to_string(cr.id) + " " + cr.name;
        std::string detail;
        for (const auto& s : c.info) detail += (detail.empty() ? "" : "; ") + s;
        if (!c.failed.empty()) {
            std::string f;
            for (const auto& s : c.failed) f += (f.empty() ? "" : ", ") + s;
            detail = "failed: " + f + " | " + detail;
        }
        std::cout << line << " :: " << detail << std::endl;
        failures += !c.failed.empty();
    }
    return failures == 0 ? 0 : 1;
}

#include "wigner/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "wigner/distribution.hpp"
#include "wigner/symbol.hpp"

namespace wigner {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json symbol_list(SymbolSet set) {
    json out = json::array();
    for (Symbol s : set.members()) out.push_back(s.str());
    return out;
}

json angles_json(const AngleTriple& t) { return {{"theta1", t.theta1}, {"theta2", t.theta2}, {"theta3", t.theta3}}; }

json singles_json(const SinglesProfile& s) {
    return {{"alice", {s[0], s[1], s[2]}}, {"bob", {s[3], s[4], s[5]}}};
}

CommandResult finish(json report, bool ok) {
    report["ok"] = ok;
    return CommandResult{ok ? kExitOk : kExitCheckFailed, std::move(report), {}};
}

}  // namespace

Command parse_command(std::string_view name) {
    if (name == "derive") return Command::derive;
    if (name == "quantum") return Command::quantum;
    if (name == "slitwheel") return Command::slitwheel;
    if (name == "analyze") return Command::analyze;
    if (name == "census") return Command::census;
    if (name == "montecarlo") return Command::montecarlo;
    if (name == "adversary") return Command::adversary;
    throw std::invalid_argument("unknown command '" + std::string(name) + "'");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::derive: return "derive";
        case Command::quantum: return "quantum";
        case Command::slitwheel: return "slitwheel";
        case Command::analyze: return "analyze";
        case Command::census: return "census";
        case Command::montecarlo: return "montecarlo";
        case Command::adversary: return "adversary";
    }
    return "unknown";
}

void RunConfig::validate() const {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (shards < 1) throw std::invalid_argument("shards must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
}

CommandResult cmd_derive(const RunConfig& config) {
    const auto t0 = Clock::now();
    const ResidualDerivation d = derive_residual();

    // Both substituted forms of the residual must be bounded by P11.
    const SymbolSet p11 = coincidence_set(SettingPair(1, 1));
    const SymbolSet form_a{Symbol::parse("(+--,+++)"), Symbol::parse("(+--,++-)"), Symbol::parse("(+--,+-+)"),
                           Symbol::parse("(+-+,+-+)")};
    const SymbolSet form_b{Symbol::parse("(++-,+-+)"), Symbol::parse("(+--,++-)"), Symbol::parse("(+--,+-+)"),
                           Symbol::parse("(+-+,+-+)")};

    const SymbolSet one_step = one_step_symbols();
    bool two_parents = true;
    for (Symbol s : one_step.members()) two_parents &= (one_step_neighbors(s) & perfect_symbols()).size() == 2;

    const json checks = {
        {"s13_size_is_14", d.s13.size() == 14},
        {"s12_size_is_14", d.s12.size() == 14},
        {"s23_size_is_14", d.s23.size() == 14},
        {"terms_total_is_28", d.terms_total == 28},
        {"terms_canceled_is_24", d.terms_canceled == 24},
        {"residual_matches", d.residual == expected_residual()},
        {"perfect_count_is_8", perfect_symbols().size() == 8},
        {"one_step_count_is_24", one_step.size() == 24},
        {"one_step_have_two_perfect_parents", two_parents},
        {"substituted_forms_within_p11", (form_a - p11).empty() && (form_b - p11).empty()},
    };
    bool ok = true;
    for (const auto& [name, value] : checks.items()) ok &= value.get<bool>();

    json report = {{"command", "derive"},
                   {"sets",
                    {{"S13", symbol_list(d.s13)},
                     {"S12", symbol_list(d.s12)},
                     {"S23", symbol_list(d.s23)},
                     {"S12_shared", symbol_list(d.s12_shared)},
                     {"S23_shared", symbol_list(d.s23_shared)}}},
                   {"sizes", {{"S13", d.s13.size()}, {"S12", d.s12.size()}, {"S23", d.s23.size()}}},
                   {"residual", symbol_list(d.residual)},
                   {"terms_total", d.terms_total},
                   {"terms_canceled", d.terms_canceled},
                   {"summary", std::to_string(d.terms_total) + " terms, " + std::to_string(d.terms_canceled) + " canceled"},
                   {"checks", checks}};
    if (!config.no_timing) report["elapsed_s"] = seconds_since(t0);
    return finish(std::move(report), ok);
}

CommandResult cmd_quantum(const RunConfig& config) {
    const auto t0 = Clock::now();
    const InequalityEvaluation eval = wigner_evaluation(config.angles);
    const ViolationScan scan = max_violation_scan(config.grid_step_deg);
    json report = {{"command", "quantum"},
                   {"angles_deg", angles_json(config.angles)},
                   {"evaluation", to_json(eval)},
                   {"violated", !eval.satisfied},
                   {"scan",
                    {{"grid_step_deg", config.grid_step_deg},
                     {"best_angles_deg", angles_json(scan.angles)},
                     {"margin", scan.margin},
                     {"evaluated", scan.evaluated}}}};
    if (!config.no_timing) report["elapsed_s"] = seconds_since(t0);
    return finish(std::move(report), true);
}

CommandResult cmd_slitwheel(const RunConfig& config) {
    const auto t0 = Clock::now();
    const SlitWheelConfig wheel{config.l, config.slit_width_fraction, deg_to_rad(config.relative_angle_deg),
                                config.quadrature_points};
    wheel.validate();
    const SlitWheelPrediction closed = slitwheel_probability(wheel);
    json report = {{"command", "slitwheel"},
                   {"config",
                    {{"l", wheel.l},
                     {"slit_width_fraction", wheel.slit_width_fraction},
                     {"relative_angle_rad", wheel.relative_angle},
                     {"quadrature_points", wheel.quadrature_points}}},
                   {"closed_form", {{"p", closed.p}, {"p_min", closed.p_min}, {"p_max", closed.p_max}}},
                   {"rounded", {{"p_min", std::round(closed.p_min * 1000.0) / 1000.0},
                                {"p_max", std::round(closed.p_max * 1000.0) / 1000.0}}}};
    bool ok = true;
    try {
        const double numeric = slitwheel_probability_numeric(wheel);
        const double rel = std::abs(numeric - closed.p) / closed.p;
        ok = rel <= 1e-6;
        report["numeric"] = {{"p", numeric}, {"relative_error", rel}, {"converged", true}};
    } catch (const ConvergenceError& e) {
        ok = false;
        report["numeric"] = {{"converged", false}, {"message", e.what()}};
    }
    const auto curve = fringe_curve(wheel.l, wheel.slit_width_fraction, config.fringe_points);
    report["fringe"] = {{"points", curve.size()}, {"period_rad", kPi / wheel.l}};
    if (config.csv_path) {
        std::ofstream csv(*config.csv_path, std::ios::binary | std::ios::trunc);
        if (!csv) throw InputError(*config.csv_path + ": cannot write fringe CSV");
        csv << fringe_csv(curve);
        report["fringe"]["csv"] = *config.csv_path;
    }
    if (!config.no_timing) report["elapsed_s"] = seconds_since(t0);
    return finish(std::move(report), ok);
}

CommandResult cmd_analyze(const RunConfig& config) {
    if (!config.input_path) throw InputError("analyze needs --input");
    const AnalysisInput in = ingest_counts(*config.input_path);
    const AnalysisRun run = run_analysis(in, config.sigma_convention, config.p_min, config.p_max);
    json report = to_json(run);
    report["command"] = "analyze";
    return finish(std::move(report), true);
}

CommandResult cmd_census(const RunConfig& config) {
    const bool timing = !config.no_timing;
    json report = {{"command", "census"}};

    json perfect = json::object();
    json one_step = json::object();
    CensusResult chosen_perfect, chosen_one_step;
    bool shard_invariant = true;
    double sharded_s = 0.0, single_s = 0.0;
    for (FlatnessVariant v : {FlatnessVariant::alice_only, FlatnessVariant::both_sides}) {
        const FlatnessPredicate pred{v, config.predicate.strict};
        const CensusResult p = census_perfect(pred, 1);
        const CensusResult single = census_one_step(pred, 1);
        CensusResult sharded = single;
        if (config.shards > 1) {
            sharded = census_one_step(pred, config.shards);
            shard_invariant &= sharded.flat_count == single.flat_count;
        }
        perfect[to_string(v)] = to_json(p, timing);
        one_step[to_string(v)] = to_json(sharded, timing);
        if (v == config.predicate.variant) {
            chosen_perfect = p;
            chosen_one_step = sharded;
            single_s = single.elapsed_s;
            sharded_s = sharded.elapsed_s;
        }
    }
    report["perfect"] = perfect;
    report["one_step"] = one_step;
    report["predicate"] = {{"variant", to_string(config.predicate.variant)}, {"strict", config.predicate.strict}};

    const GroupCensusResult group = efa_group_census("by_parent_pair", config.predicate);
    json g = to_json(group.census, timing);
    g["group_count"] = group.group_count;
    g["group_sizes"] = group.group_sizes;
    g["grouping_respected"] = group.grouping_respected;
    g["perfect_proportion"] = chosen_perfect.proportion();
    g["same_proportion_as_perfect"] = group.census.flat_count * chosen_perfect.universe_size ==
                                      chosen_perfect.flat_count * group.census.universe_size;
    report["efa_group"] = g;

    report["likelihood_ratio"] = {
        {"published_counts", likelihood_ratio(kPublishedPerfectFlat, 256, kPublishedOneStepFlat, std::uint64_t{1} << 24)},
        {"brute_force", chosen_one_step.flat_count > 0 ? json(likelihood_ratio(chosen_perfect, chosen_one_step)) : json()}};
    report["three_step_possibilities"] = kThreeStepPossibilities;
    report["shards"] = config.shards;
    report["shard_invariant"] = shard_invariant;
    if (timing) {
        report["timing"] = {{"one_step_single_shard_s", single_s},
                            {"one_step_sharded_s", sharded_s},
                            {"speedup", sharded_s > 0.0 ? single_s / sharded_s : 0.0}};
    }
    return finish(std::move(report), shard_invariant);
}

CommandResult cmd_montecarlo(const RunConfig& config) {
    const auto t0 = Clock::now();
    const PropertyRun raw =
        run_property_parallel(&run_raw_bound_property, config.seed, config.samples, config.shards, config.tolerance);
    const PropertyRun efa =
        run_property_parallel(&run_efa_property, config.seed, config.samples, config.shards, config.tolerance);
    const auto summary = [](const PropertyRun& r) {
        return json{{"samples", r.samples}, {"failures", r.failures}, {"max_slack", r.max_slack}};
    };
    json report = {{"command", "montecarlo"},
                   {"seed", config.seed},
                   {"tolerance", config.tolerance},
                   {"generator", "splitmix64-counter"},
                   {"raw_bound", summary(raw)},
                   {"efa_extended_inequality", summary(efa)}};
    if (!config.no_timing) report["elapsed_s"] = seconds_since(t0);
    return finish(std::move(report), raw.failures == 0 && efa.failures == 0);
}

CommandResult cmd_adversary(const RunConfig& config) {
    const AdversarialModel m = adversarial_hvm(config.extra);
    const auto& s = m.singles;
    const bool alice_spike = s[0] > s[1] && s[0] > s[2];
    const bool bob_spike = s[5] > s[3] && s[5] > s[4];
    const InequalityEvaluation eval = extended_inequality(m.distribution);
    json report = {{"command", "adversary"},
                   {"extra", config.extra},
                   {"distribution", m.distribution.to_json()},
                   {"singles", singles_json(s)},
                   {"alice_setting1_spike", alice_spike},
                   {"bob_setting3_spike", bob_spike},
                   {"evaluation", to_json(eval)}};
    return finish(std::move(report), true);
}

CommandResult run_command(const RunConfig& config) {
    try {
        config.validate();
        switch (config.command) {
            case Command::derive: return cmd_derive(config);
            case Command::quantum: return cmd_quantum(config);
            case Command::slitwheel: return cmd_slitwheel(config);
            case Command::analyze: return cmd_analyze(config);
            case Command::census: return cmd_census(config);
            case Command::montecarlo: return cmd_montecarlo(config);
            case Command::adversary: return cmd_adversary(config);
        }
    } catch (const InputError& e) {
        return CommandResult{kExitValidation, {}, e.what()};
    } catch (const std::invalid_argument& e) {
        return CommandResult{kExitValidation, {}, e.what()};
    } catch (const std::out_of_range& e) {
        return CommandResult{kExitValidation, {}, e.what()};
    }
    return CommandResult{kExitValidation, {}, "unknown command"};
}

}  // namespace wigner

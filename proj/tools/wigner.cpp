#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wigner/commands.hpp"

namespace {

void add_common(CLI::App* sub, wigner::RunConfig& cfg) {
    sub->add_option("--output", cfg.output_path, "Write the JSON report here instead of stdout");
    sub->add_flag("--no-timing", cfg.no_timing, "Omit wall-clock fields from the report");
}

int emit(const wigner::CommandResult& result, const wigner::RunConfig& cfg) {
    if (result.exit_code == wigner::kExitValidation) {
        std::cerr << "error: " << result.error << "\n";
        return result.exit_code;
    }
    const std::string text = result.report.dump(2) + "\n";
    if (cfg.output_path) {
        std::ofstream out(*cfg.output_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot write " << *cfg.output_path << "\n";
            return wigner::kExitValidation;
        }
        out << text;
    } else {
        std::fwrite(text.data(), 1, text.size(), stdout);
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    wigner::RunConfig cfg;
    CLI::App app{"Extended Wigner inequality toolkit"};
    app.require_subcommand(1);

    auto* derive = app.add_subcommand("derive", "Symbol-set derivation of the extended inequality");
    add_common(derive, cfg);

    auto* quantum = app.add_subcommand("quantum", "Singlet prediction and violation-angle scan");
    add_common(quantum, cfg);
    quantum->add_option("--theta1", cfg.angles.theta1, "Setting 1 (degrees)");
    quantum->add_option("--theta2", cfg.angles.theta2, "Setting 2 (degrees)");
    quantum->add_option("--theta3", cfg.angles.theta3, "Setting 3 (degrees)");
    quantum->add_option("--grid-step", cfg.grid_step_deg, "Scan grid step (degrees)")->check(CLI::Range(1e-3, 5.0));

    auto* slit = app.add_subcommand("slitwheel", "Slit-wheel coincidence probability and fringe curve");
    add_common(slit, cfg);
    slit->add_option("--l", cfg.l, "OAM quantum number")->check(CLI::PositiveNumber);
    slit->add_option("--width", cfg.slit_width_fraction, "Slit width as a fraction of the slit period");
    slit->add_option("--angle", cfg.relative_angle_deg, "Relative wheel angle (degrees)");
    slit->add_option("--quadrature-points", cfg.quadrature_points, "Gauss-Legendre nodes per slit");
    slit->add_option("--fringe-points", cfg.fringe_points, "Samples in the fringe curve")->check(CLI::Range(2, 1000000));
    slit->add_option("--csv", cfg.csv_path, "Write the fringe curve as CSV");

    auto* analyze = app.add_subcommand("analyze", "Violation and significance from measured counts");
    add_common(analyze, cfg);
    analyze->add_option("--input", cfg.input_path, "Counts file (.toml, .json or .csv)")->required();
    analyze->add_option("--p-min", cfg.p_min, "Override the predicted minimum probability");
    analyze->add_option("--p-max", cfg.p_max, "Override the predicted maximum probability");
    std::string sigma = "scaled";
    analyze->add_option("--sigma-convention", sigma, "scaled|unscaled")->check(CLI::IsMember({"scaled", "unscaled"}));

    auto* census = app.add_subcommand("census", "Exhaustive flat-singles census of on/off models");
    add_common(census, cfg);
    census->add_option("--shards", cfg.shards, "Parallel shards for the one-step scan")->check(CLI::Range(1, 1024));
    std::string predicate = "both_sides";
    census->add_option("--predicate", predicate, "alice_only|both_sides")
        ->check(CLI::IsMember({"alice_only", "both_sides"}));
    bool loose = false;
    census->add_flag("--loose", loose, "Allow per-setting counts to differ by one");

    auto* mc = app.add_subcommand("montecarlo", "Property runs over random and EFA distributions");
    add_common(mc, cfg);
    mc->add_option("--seed", cfg.seed, "Stream seed");
    mc->add_option("--samples", cfg.samples, "Samples per property")->check(CLI::PositiveNumber);
    mc->add_option("--shards", cfg.shards, "Worker threads")->check(CLI::Range(1, 1024));
    mc->add_option("--tolerance", cfg.tolerance, "Absolute tolerance")->check(CLI::PositiveNumber);

    auto* adv = app.add_subcommand("adversary", "Hidden-variable model that spikes singles at settings 1 and 3");
    add_common(adv, cfg);
    adv->add_option("--extra", cfg.extra, "Extra weight in [0,1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? wigner::kExitOk : wigner::kExitValidation;
    }

    cfg.command = wigner::parse_command(app.get_subcommands().front()->get_name());
    cfg.sigma_convention = wigner::parse_sigma_convention(sigma);
    cfg.predicate.variant = wigner::parse_flatness_variant(predicate);
    cfg.predicate.strict = !loose;
    return emit(wigner::run_command(cfg), cfg);
}

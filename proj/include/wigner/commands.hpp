#pragma once

// Batch commands behind the `wigner` CLI. Each returns a JSON report and an
// exit code: 0 success, 1 validation error, 2 self-check or property failure.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wigner/analysis.hpp"
#include "wigner/census.hpp"
#include "wigner/inequality.hpp"
#include "wigner/quantum.hpp"

namespace wigner {

enum class Command { derive, quantum, slitwheel, analyze, census, montecarlo, adversary };

Command parse_command(std::string_view name);
std::string to_string(Command c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitCheckFailed = 2;

struct RunConfig {
    Command command = Command::derive;
    std::optional<std::string> input_path;
    std::optional<std::string> output_path;
    std::uint64_t seed = 20140101;
    std::uint64_t samples = 100000;
    unsigned shards = 1;
    double tolerance = kProbabilityTolerance;
    bool no_timing = false;

    // analyze
    std::optional<double> p_min;
    std::optional<double> p_max;
    SigmaConvention sigma_convention = SigmaConvention::scaled;

    // census
    FlatnessPredicate predicate;

    // quantum
    AngleTriple angles{0.0, 30.0, 60.0};
    double grid_step_deg = 1.0;

    // slitwheel
    int l = 100;
    double slit_width_fraction = 0.149;
    double relative_angle_deg = 0.0;
    int quadrature_points = 64;
    int fringe_points = 101;
    std::optional<std::string> csv_path;

    // adversary
    double extra = 0.2;

    /// Throws std::invalid_argument on samples == 0, shards == 0 or a
    /// non-positive tolerance.
    void validate() const;
};

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::json report;
    std::string error;  // set when exit_code == kExitValidation
};

CommandResult run_command(const RunConfig& config);

CommandResult cmd_derive(const RunConfig& config);
CommandResult cmd_quantum(const RunConfig& config);
CommandResult cmd_slitwheel(const RunConfig& config);
CommandResult cmd_analyze(const RunConfig& config);
CommandResult cmd_census(const RunConfig& config);
CommandResult cmd_montecarlo(const RunConfig& config);
CommandResult cmd_adversary(const RunConfig& config);

}  // namespace wigner

#pragma once

// Coincidence-count analysis: finite-slit compensation of the minimum, the
// intensity-form inequality I13 - I_min <= I12 + I23, and Poisson errors.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wigner/quantum.hpp"

namespace wigner {

/// Total coincidence counts at equal integration time.
struct CountSet {
    std::uint64_t i13 = 0;
    std::uint64_t i12 = 0;
    std::uint64_t i23 = 0;
    std::uint64_t i_min = 0;
    std::uint64_t i_max = 0;

    /// Throws std::invalid_argument if i_min > i_max.
    void validate() const;
    bool all_zero() const noexcept { return (i13 | i12 | i23 | i_min | i_max) == 0; }

    friend bool operator==(const CountSet&, const CountSet&) = default;
};

enum class SigmaConvention {
    scaled,    // i_max error scaled by p_min / p_max (first-order propagation)
    unscaled,  // full i_max error
};

/// Throws std::invalid_argument for anything but "scaled" or "unscaled".
SigmaConvention parse_sigma_convention(std::string_view label);
std::string to_string(SigmaConvention c);

struct ViolationReport {
    double compensated_min = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double violation = 0.0;  // lhs - rhs; > 0 contradicts local realism under the EFA
    double sigma = 0.0;
    double significance = 0.0;
    SigmaConvention convention = SigmaConvention::scaled;
    bool degenerate = false;                // every count is zero
    bool negative_compensated_min = false;  // reported as-is, never clamped
};

double poisson_sigma(std::uint64_t n);

/// i_min - i_max * p_min / p_max. Throws std::invalid_argument if i_max or
/// p_max is zero.
double compensated_minimum(std::uint64_t i_min, std::uint64_t i_max, double p_min, double p_max);

double propagate_sigma(const CountSet& c, double p_min, double p_max, SigmaConvention convention);

ViolationReport evaluate_violation(const CountSet& c, double p_min, double p_max, SigmaConvention convention);

/// violation / sigma; throws std::domain_error when sigma is zero.
double significance(const ViolationReport& report);

nlohmann::json to_json(const ViolationReport& r);

// ---------------------------------------------------------------------------
// Input files

struct AngleSettings {
    double phi1 = 0.0;  // degrees
    double phi2 = 0.0;
    double phi3 = 0.0;
};

/// Published figures to compare against, if the input carries them.
struct ReferenceResult {
    double violation = 0.0;
    double sigma = 0.0;
};

struct AnalysisInput {
    CountSet counts;
    SlitWheelConfig wheel;
    AngleSettings angles;
    std::optional<double> p_min_override;
    std::optional<double> p_max_override;
    std::optional<double> integration_time_s;
    std::optional<ReferenceResult> reference;
};

/// Raised for unreadable or invalid input; the message names the source,
/// line (when known) and field.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dispatches on extension: .toml, .csv (rows of "key,value" with dotted
/// keys) or .json (the "input" echo of a report).
AnalysisInput ingest_counts(const std::string& path);

AnalysisInput parse_counts_toml(std::string_view text, std::string_view source = "<toml>");
AnalysisInput parse_counts_csv(std::string_view text, std::string_view source = "<csv>");
AnalysisInput parse_counts_json(const nlohmann::json& j, std::string_view source = "<json>");

nlohmann::json to_json(const AnalysisInput& in);

/// Full pipeline result: extremes used, evaluation and explanatory notes.
struct AnalysisRun {
    AnalysisInput input;
    double p_min = 0.0;
    double p_max = 0.0;
    bool p_overridden = false;
    ViolationReport report;
    /// Violation recomputed with the other P source (computed when the run
    /// used overrides, rounded to 3 decimals when it used computed values).
    double alternate_violation = 0.0;
    double alternate_p_min = 0.0;
    double alternate_p_max = 0.0;
    std::vector<std::string> notes;
};

/// P extremes come from the closed-form slit-wheel model unless the input
/// (or the caller, which takes precedence) overrides both.
AnalysisRun run_analysis(const AnalysisInput& in, SigmaConvention convention,
                         std::optional<double> p_min_override = std::nullopt,
                         std::optional<double> p_max_override = std::nullopt);

nlohmann::json to_json(const AnalysisRun& run);

}  // namespace wigner

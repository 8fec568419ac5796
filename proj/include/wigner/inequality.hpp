#pragma once

#include <json.hpp>

namespace wigner {

/// Absolute tolerance for probability identities (sums of at most 64 doubles).
inline constexpr double kProbabilityTolerance = 1e-12;

/// P13 - P11 <= P12 + P23 evaluated for one model.
struct InequalityEvaluation {
    double p13 = 0.0;
    double p12 = 0.0;
    double p23 = 0.0;
    double p11 = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = true;

    double margin() const noexcept { return lhs - rhs; }
};

inline InequalityEvaluation make_evaluation(double p13, double p12, double p23, double p11) {
    InequalityEvaluation e{p13, p12, p23, p11, p13 - p11, p12 + p23, true};
    e.satisfied = e.lhs <= e.rhs + kProbabilityTolerance;
    return e;
}

inline nlohmann::json to_json(const InequalityEvaluation& e) {
    return {{"p13", e.p13}, {"p12", e.p12}, {"p23", e.p23},   {"p11", e.p11},
            {"lhs", e.lhs}, {"rhs", e.rhs}, {"margin", e.margin()}, {"satisfied", e.satisfied}};
}

}  // namespace wigner

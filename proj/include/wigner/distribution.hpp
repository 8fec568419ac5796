#pragma once

// Hidden-variable models as probability weights over the 64 symbols.

#include <array>
#include <cstdint>
#include <limits>
#include <span>

#include <json.hpp>

#include "wigner/inequality.hpp"
#include "wigner/symbol.hpp"

namespace wigner {

class SymbolDistribution {
public:
    using Weights = std::array<double, Symbol::count>;

    /// Throws std::invalid_argument unless every weight is >= 0 and the total
    /// is 1 within kProbabilityTolerance.
    static SymbolDistribution from_weights(const Weights& weights);

    static SymbolDistribution point(Symbol s);

    /// Equal weight on every member; throws for an empty set.
    static SymbolDistribution uniform(SymbolSet support);

    double weight(Symbol s) const noexcept { return weights_[s.code()]; }
    const Weights& weights() const noexcept { return weights_; }

    /// Total weight of the members of `set`.
    double mass(SymbolSet set) const noexcept;

    SymbolSet support() const noexcept;

    /// {"(+--,-++)": weight, ...} over the support, keyed by canonical text.
    nlohmann::json to_json() const;
    static SymbolDistribution from_json(const nlohmann::json& j);

private:
    explicit SymbolDistribution(const Weights& w) : weights_(w) {}

    Weights weights_{};
};

double coincidence_probability(const SymbolDistribution& d, const SettingPair& p);

/// Detection probability on one side; the remote setting plays no part.
double singles_probability(const SymbolDistribution& d, Side side, int setting);

struct RawBoundCheck {
    double lhs = 0.0;  // P13 - mass(residual)
    double rhs = 0.0;  // P12 + P23
    bool holds = true;
};

/// The residual-form bound, which must hold for every distribution.
RawBoundCheck raw_bound_check(const SymbolDistribution& d);

InequalityEvaluation extended_inequality(const SymbolDistribution& d);

/// Base weights are indexed in ascending code order of perfect_symbols().
using PerfectWeights = std::array<double, 8>;

/// Every perfect symbol keeps (1 - epsilon) of its weight and spreads
/// epsilon/6 onto each single-flip neighbour. Throws std::invalid_argument
/// for negative or unnormalised base weights or epsilon outside [0, 1].
SymbolDistribution efa_mixture(const PerfectWeights& base, double epsilon);

/// Direction-dependent variant: every "+" position of a perfect symbol is
/// lost with probability loss_prob and every "-" position is gained with
/// probability gain_prob. Requires 3 * (loss_prob + gain_prob) <= 1, since a
/// perfect symbol always has three "+" and three "-" entries. loss = gain =
/// epsilon/6 reproduces efa_mixture.
SymbolDistribution efa_mixture_directional(const PerfectWeights& base, double loss_prob, double gain_prob);

/// The six singles in the order Alice 1..3 then Bob 1..3.
using SinglesProfile = std::array<double, 6>;

SinglesProfile singles_profile(const SymbolDistribution& d);

struct AdversarialModel {
    SymbolDistribution distribution;
    SinglesProfile singles;
};

/// (1 - extra) * uniform(perfect) + extra * point((+--,--+)); extra in [0, 1).
AdversarialModel adversarial_hvm(double extra);

/// Uniform draw from the 63-simplex by normalising 64 exponentials taken
/// from CounterStream(seed).
SymbolDistribution random_distribution(std::uint64_t seed);

/// Uniform draw from the 7-simplex, same method.
PerfectWeights random_perfect_weights(std::uint64_t seed);

/// Summary of a seeded property run. Sample k uses substream_seed(seed, k),
/// so any split of the index range over workers merges to the same result.
struct PropertyRun {
    std::uint64_t samples = 0;
    std::uint64_t failures = 0;
    double max_slack = -std::numeric_limits<double>::infinity();  // largest lhs - rhs seen
};

PropertyRun merge(const PropertyRun& a, const PropertyRun& b);

/// raw_bound_check on random_distribution draws for sample indices [first, last).
PropertyRun run_raw_bound_property(std::uint64_t seed, std::uint64_t first, std::uint64_t last,
                                   double tolerance = kProbabilityTolerance);

/// extended_inequality on efa_mixture draws (random base, epsilon uniform in
/// [0, 1]) for sample indices [first, last).
PropertyRun run_efa_property(std::uint64_t seed, std::uint64_t first, std::uint64_t last,
                             double tolerance = kProbabilityTolerance);

/// Splits [0, samples) into `workers` contiguous ranges run on separate
/// threads; the merged result does not depend on `workers`.
PropertyRun run_property_parallel(PropertyRun (*kernel)(std::uint64_t, std::uint64_t, std::uint64_t, double),
                                  std::uint64_t seed, std::uint64_t samples, unsigned workers,
                                  double tolerance = kProbabilityTolerance);

}  // namespace wigner

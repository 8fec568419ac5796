#include "wigner/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wigner/rng.hpp"

namespace wigner {

namespace {

double total(std::span<const double> w) {
    double sum = 0.0;
    for (double x : w) sum += x;
    return sum;
}

void check_base(const PerfectWeights& base) {
    for (double w : base) {
        if (!(w >= 0.0)) throw std::invalid_argument("base weights must be non-negative");
    }
    if (std::abs(total(base) - 1.0) > kProbabilityTolerance) {
        throw std::invalid_argument("base weights must sum to 1");
    }
}

}  // namespace

SymbolDistribution SymbolDistribution::from_weights(const Weights& weights) {
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
            throw std::invalid_argument("weight of " + Symbol::from_code(static_cast<unsigned>(k)).str() +
                                        " is negative or not finite");
        }
    }
    const double sum = total(weights);
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        throw std::invalid_argument("weights sum to " + std::to_string(sum) + ", expected 1");
    }
    return SymbolDistribution(weights);
}

SymbolDistribution SymbolDistribution::point(Symbol s) {
    Weights w{};
    w[s.code()] = 1.0;
    return SymbolDistribution(w);
}

SymbolDistribution SymbolDistribution::uniform(SymbolSet support) {
    if (support.empty()) throw std::invalid_argument("uniform distribution over an empty set");
    Weights w{};
    const double each = 1.0 / support.size();
    for (Symbol s : support.members()) w[s.code()] = each;
    return SymbolDistribution(w);
}

double SymbolDistribution::mass(SymbolSet set) const noexcept {
    double sum = 0.0;
    for (std::uint64_t m = set.mask(); m != 0; m &= m - 1) {
        sum += weights_[static_cast<std::size_t>(std::countr_zero(m))];
    }
    return sum;
}

SymbolSet SymbolDistribution::support() const noexcept {
    SymbolSet out;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (weights_[k] > 0.0) out.insert(Symbol::from_code(static_cast<unsigned>(k)));
    }
    return out;
}

nlohmann::json SymbolDistribution::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (Symbol s : support().members()) j[s.str()] = weight(s);
    return j;
}

SymbolDistribution SymbolDistribution::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("distribution JSON must be an object");
    Weights w{};
    SymbolSet seen;
    for (const auto& [key, value] : j.items()) {
        const Symbol s = Symbol::parse(key);
        if (seen.contains(s)) throw std::invalid_argument("duplicate symbol " + s.str());
        seen.insert(s);
        if (!value.is_number()) throw std::invalid_argument("weight of " + key + " is not a number");
        w[s.code()] = value.get<double>();
    }
    return from_weights(w);
}

double coincidence_probability(const SymbolDistribution& d, const SettingPair& p) {
    return d.mass(coincidence_set(p));
}

double singles_probability(const SymbolDistribution& d, Side side, int setting) {
    if (setting < 1 || setting > 3) throw std::out_of_range("setting outside 1..3");
    const int position = Symbol::position_of(side, setting);
    double sum = 0.0;
    for (Symbol s : all_symbols().members()) {
        if (s.at(position)) sum += d.weight(s);
    }
    return sum;
}

RawBoundCheck raw_bound_check(const SymbolDistribution& d) {
    static const SymbolSet residual = residual_set();
    RawBoundCheck r;
    r.lhs = coincidence_probability(d, SettingPair(1, 3)) - d.mass(residual);
    r.rhs = coincidence_probability(d, SettingPair(1, 2)) + coincidence_probability(d, SettingPair(2, 3));
    r.holds = r.lhs <= r.rhs + kProbabilityTolerance;
    return r;
}

InequalityEvaluation extended_inequality(const SymbolDistribution& d) {
    return make_evaluation(coincidence_probability(d, SettingPair(1, 3)), coincidence_probability(d, SettingPair(1, 2)),
                           coincidence_probability(d, SettingPair(2, 3)), coincidence_probability(d, SettingPair(1, 1)));
}

SymbolDistribution efa_mixture(const PerfectWeights& base, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
    check_base(base);
    SymbolDistribution::Weights w{};
    const auto perfect = perfect_symbols().members();
    for (std::size_t k = 0; k < perfect.size(); ++k) {
        w[perfect[k].code()] += base[k] * (1.0 - epsilon);
        for (const Flip& f : one_step_flips(perfect[k])) w[f.result.code()] += base[k] * epsilon / 6.0;
    }
    return SymbolDistribution::from_weights(w);
}

SymbolDistribution efa_mixture_directional(const PerfectWeights& base, double loss_prob, double gain_prob) {
    if (!(loss_prob >= 0.0) || !(gain_prob >= 0.0) || 3.0 * (loss_prob + gain_prob) > 1.0 + kProbabilityTolerance) {
        throw std::invalid_argument("loss and gain probabilities must be >= 0 with 3*(loss+gain) <= 1");
    }
    check_base(base);
    SymbolDistribution::Weights w{};
    const auto perfect = perfect_symbols().members();
    const double stay = std::max(0.0, 1.0 - 3.0 * (loss_prob + gain_prob));
    for (std::size_t k = 0; k < perfect.size(); ++k) {
        w[perfect[k].code()] += base[k] * stay;
        for (const Flip& f : one_step_flips(perfect[k])) {
            w[f.result.code()] += base[k] * (f.kind == FlipKind::loss ? loss_prob : gain_prob);
        }
    }
    return SymbolDistribution::from_weights(w);
}

SinglesProfile singles_profile(const SymbolDistribution& d) {
    SinglesProfile out{};
    for (int i = 1; i <= 3; ++i) {
        out[static_cast<std::size_t>(i - 1)] = singles_probability(d, Side::alice, i);
        out[static_cast<std::size_t>(i + 2)] = singles_probability(d, Side::bob, i);
    }
    return out;
}

AdversarialModel adversarial_hvm(double extra) {
    if (!(extra >= 0.0 && extra < 1.0)) throw std::invalid_argument("extra weight must lie in [0, 1)");
    const auto uniform = SymbolDistribution::uniform(perfect_symbols());
    SymbolDistribution::Weights w{};
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = (1.0 - extra) * uniform.weights()[k];
    w[Symbol::parse("(+--,--+)").code()] += extra;
    auto d = SymbolDistribution::from_weights(w);
    return AdversarialModel{d, singles_profile(d)};
}

SymbolDistribution random_distribution(std::uint64_t seed) {
    CounterStream rng(seed);
    SymbolDistribution::Weights w{};
    for (double& x : w) x = rng.exponential();
    const double sum = total(w);
    for (double& x : w) x /= sum;
    return SymbolDistribution::from_weights(w);
}

PerfectWeights random_perfect_weights(std::uint64_t seed) {
    CounterStream rng(seed);
    PerfectWeights w{};
    for (double& x : w) x = rng.exponential();
    const double sum = total(w);
    for (double& x : w) x /= sum;
    return w;
}

PropertyRun merge(const PropertyRun& a, const PropertyRun& b) {
    return PropertyRun{a.samples + b.samples, a.failures + b.failures, std::max(a.max_slack, b.max_slack)};
}

PropertyRun run_raw_bound_property(std::uint64_t seed, std::uint64_t first, std::uint64_t last, double tolerance) {
    PropertyRun run;
    for (std::uint64_t k = first; k < last; ++k) {
        const auto check = raw_bound_check(random_distribution(substream_seed(seed, k)));
        const double slack = check.lhs - check.rhs;
        ++run.samples;
        if (slack > tolerance) ++run.failures;
        run.max_slack = std::max(run.max_slack, slack);
    }
    return run;
}

PropertyRun run_efa_property(std::uint64_t seed, std::uint64_t first, std::uint64_t last, double tolerance) {
    PropertyRun run;
    for (std::uint64_t k = first; k < last; ++k) {
        const std::uint64_t sample_seed = substream_seed(seed, k);
        CounterStream rng(sample_seed);
        const double epsilon = rng.uniform();
        const auto eval = extended_inequality(efa_mixture(random_perfect_weights(rng.next()), epsilon));
        ++run.samples;
        if (eval.margin() > tolerance) ++run.failures;
        run.max_slack = std::max(run.max_slack, eval.margin());
    }
    return run;
}

PropertyRun run_property_parallel(PropertyRun (*kernel)(std::uint64_t, std::uint64_t, std::uint64_t, double),
                                  std::uint64_t seed, std::uint64_t samples, unsigned workers, double tolerance) {
    workers = std::max(1u, workers);
    std::vector<PropertyRun> partial(workers);
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t first = samples * w / workers;
            const std::uint64_t last = samples * (w + 1) / workers;
            threads.emplace_back([&, w, first, last] { partial[w] = kernel(seed, first, last, tolerance); });
        }
    }
    PropertyRun out;
    for (const auto& p : partial) out = merge(out, p);
    return out;
}

}  // namespace wigner

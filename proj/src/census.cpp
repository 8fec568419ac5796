#include "wigner/census.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <map>
#include <stdexcept>
#include <thread>

namespace wigner {

namespace {

bool balanced(int a, int b, int c, bool strict) noexcept {
    if (strict) return a == b && b == c;
    return std::max({a, b, c}) - std::min({a, b, c}) <= 1;
}

}  // namespace

FlatnessVariant parse_flatness_variant(std::string_view label) {
    if (label == "alice_only") return FlatnessVariant::alice_only;
    if (label == "both_sides") return FlatnessVariant::both_sides;
    throw std::invalid_argument("unknown flatness predicate '" + std::string(label) +
                                "' (expected alice_only|both_sides)");
}

std::string to_string(FlatnessVariant v) { return v == FlatnessVariant::alice_only ? "alice_only" : "both_sides"; }

std::string FlatnessPredicate::str() const { return to_string(variant) + (strict ? "" : "/loose"); }

bool is_flat(std::uint64_t code, std::span<const Symbol> symbols, const FlatnessPredicate& pred) {
    if (symbols.size() < 64 && code >> symbols.size() != 0) {
        throw std::out_of_range("subset code outside the universe");
    }
    std::array<int, 6> on{};
    for (std::size_t j = 0; j < symbols.size(); ++j) {
        if (!((code >> j) & 1u)) continue;
        for (int k = 0; k < Symbol::positions; ++k) on[static_cast<std::size_t>(k)] += symbols[j].at(k);
    }
    const bool alice = balanced(on[0], on[1], on[2], pred.strict);
    if (pred.variant == FlatnessVariant::alice_only) return alice;
    return alice && balanced(on[3], on[4], on[5], pred.strict);
}

CensusUniverse::CensusUniverse(std::string label, std::vector<Symbol> symbols)
    : label_(std::move(label)), symbols_(std::move(symbols)) {
    if (symbols_.size() > 32) throw std::invalid_argument("census universes are limited to 32 symbols");
    for (std::size_t j = 0; j < symbols_.size(); ++j) {
        for (int k = 0; k < Symbol::positions; ++k) {
            if (symbols_[j].at(k)) masks_[static_cast<std::size_t>(k)] |= std::uint32_t{1} << j;
        }
    }
}

CensusUniverse CensusUniverse::perfect() { return CensusUniverse("perfect", perfect_symbols().members()); }

CensusUniverse CensusUniverse::one_step() { return CensusUniverse("one_step", one_step_symbols().members()); }

bool CensusUniverse::flat(std::uint32_t code, const FlatnessPredicate& pred) const noexcept {
    const auto n = [&](std::size_t k) { return std::popcount(code & masks_[k]); };
    if (!balanced(n(0), n(1), n(2), pred.strict)) return false;
    return pred.variant == FlatnessVariant::alice_only || balanced(n(3), n(4), n(5), pred.strict);
}

PartialCensus census_scan_partitioned(const CensusUniverse& u, std::uint64_t range_start, std::uint64_t range_end,
                                      const FlatnessPredicate& pred) {
    if (range_start > range_end || range_end > u.size()) {
        throw std::out_of_range("census range [" + std::to_string(range_start) + ", " + std::to_string(range_end) +
                                ") outside universe of size " + std::to_string(u.size()));
    }
    PartialCensus out{range_start, range_end, 0};
    if (pred.strict && pred.variant == FlatnessVariant::both_sides) {
        // Hot path for the default predicate.
        const auto& m = u.masks();
        for (std::uint64_t code = range_start; code < range_end; ++code) {
            const auto c = static_cast<std::uint32_t>(code);
            const int a1 = std::popcount(c & m[0]);
            const int b1 = std::popcount(c & m[3]);
            out.flat_count += (a1 == std::popcount(c & m[1])) & (a1 == std::popcount(c & m[2])) &
                              (b1 == std::popcount(c & m[4])) & (b1 == std::popcount(c & m[5]));
        }
        return out;
    }
    for (std::uint64_t code = range_start; code < range_end; ++code) {
        out.flat_count += u.flat(static_cast<std::uint32_t>(code), pred);
    }
    return out;
}

MergedCensus merge_partials(std::span<const PartialCensus> partials) {
    std::vector<PartialCensus> sorted(partials.begin(), partials.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const PartialCensus& a, const PartialCensus& b) { return a.range_start < b.range_start; });
    MergedCensus out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i].range_start < sorted[i - 1].range_end) {
            throw std::invalid_argument("overlapping census ranges at code " + std::to_string(sorted[i].range_start));
        }
        out.flat_count += sorted[i].flat_count;
        out.covered += sorted[i].range_end - sorted[i].range_start;
    }
    return out;
}

CensusResult run_census(const CensusUniverse& u, const FlatnessPredicate& pred, unsigned shards) {
    shards = std::max(1u, shards);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<PartialCensus> partial(shards);
    const std::uint64_t size = u.size();
    if (shards == 1) {
        partial[0] = census_scan_partitioned(u, 0, size, pred);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(shards);
        for (unsigned s = 0; s < shards; ++s) {
            const std::uint64_t lo = size * s / shards;
            const std::uint64_t hi = size * (s + 1) / shards;
            threads.emplace_back([&, s, lo, hi] { partial[s] = census_scan_partitioned(u, lo, hi, pred); });
        }
    }
    const MergedCensus merged = merge_partials(partial);
    if (merged.covered != size) throw std::logic_error("census shards do not cover the universe");
    const auto t1 = std::chrono::steady_clock::now();

    CensusResult r;
    r.universe = u.label();
    r.universe_size = size;
    r.flat_count = merged.flat_count;
    r.predicate = pred;
    r.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
    r.partition_count = shards;
    return r;
}

CensusResult census_perfect(const FlatnessPredicate& pred, unsigned shards) {
    CensusResult r = run_census(CensusUniverse::perfect(), pred, shards);
    r.published_count = kPublishedPerfectFlat;
    return r;
}

CensusResult census_one_step(const FlatnessPredicate& pred, unsigned shards) {
    CensusResult r = run_census(CensusUniverse::one_step(), pred, shards);
    r.published_count = kPublishedOneStepFlat;
    return r;
}

double likelihood_ratio(std::uint64_t efa_flat, std::uint64_t efa_size, std::uint64_t free_flat,
                        std::uint64_t free_size) {
    if (free_flat == 0) throw std::domain_error("likelihood ratio undefined: reference census has no flat models");
    if (efa_size == 0 || free_size == 0) throw std::domain_error("likelihood ratio needs non-empty universes");
    return (static_cast<double>(efa_flat) / static_cast<double>(efa_size)) /
           (static_cast<double>(free_flat) / static_cast<double>(free_size));
}

double likelihood_ratio(const CensusResult& efa, const CensusResult& free) {
    return likelihood_ratio(efa.flat_count, efa.universe_size, free.flat_count, free.universe_size);
}

std::vector<std::vector<std::size_t>> parent_pair_groups() {
    const auto symbols = one_step_symbols().members();
    const SymbolSet perfect = perfect_symbols();
    std::map<std::pair<std::uint8_t, std::uint8_t>, std::vector<std::size_t>> by_pair;
    for (std::size_t j = 0; j < symbols.size(); ++j) {
        const auto parents = (one_step_neighbors(symbols[j]) & perfect).members();
        if (parents.size() != 2) throw std::logic_error("one-step symbol without exactly two perfect parents");
        by_pair[{parents[0].code(), parents[1].code()}].push_back(j);
    }
    std::vector<std::vector<std::size_t>> groups;
    groups.reserve(by_pair.size());
    for (auto& [key, members] : by_pair) groups.push_back(std::move(members));
    return groups;
}

std::uint32_t expand_group_code(std::uint32_t group_code, const std::vector<std::vector<std::size_t>>& groups) {
    std::uint32_t code = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!((group_code >> g) & 1u)) continue;
        for (std::size_t j : groups[g]) code |= std::uint32_t{1} << j;
    }
    return code;
}

GroupCensusResult efa_group_census(std::string_view grouping, const FlatnessPredicate& pred) {
    if (grouping != "by_parent_pair") {
        throw std::invalid_argument("unknown grouping '" + std::string(grouping) + "' (expected by_parent_pair)");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const CensusUniverse u = CensusUniverse::one_step();
    const auto groups = parent_pair_groups();

    GroupCensusResult out;
    out.group_count = groups.size();
    for (const auto& g : groups) out.group_sizes.push_back(g.size());

    std::vector<std::uint32_t> group_masks;
    for (const auto& g : groups) {
        std::uint32_t m = 0;
        for (std::size_t j : g) m |= std::uint32_t{1} << j;
        group_masks.push_back(m);
    }

    const std::uint64_t size = std::uint64_t{1} << groups.size();
    std::uint64_t flat = 0;
    for (std::uint64_t gc = 0; gc < size; ++gc) {
        const std::uint32_t code = expand_group_code(static_cast<std::uint32_t>(gc), groups);
        for (std::uint32_t gm : group_masks) {
            const std::uint32_t part = code & gm;
            if (part != 0 && part != gm) out.grouping_respected = false;
        }
        flat += u.flat(code, pred);
    }
    const auto t1 = std::chrono::steady_clock::now();

    out.census.universe = "one_step/by_parent_pair";
    out.census.universe_size = size;
    out.census.flat_count = flat;
    out.census.predicate = pred;
    out.census.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
    out.census.partition_count = 1;
    return out;
}

nlohmann::json to_json(const CensusResult& r, bool include_timing) {
    nlohmann::json j = {{"universe", r.universe},
                        {"universe_size", r.universe_size},
                        {"flat_count", r.flat_count},
                        {"proportion", r.proportion()},
                        {"predicate", {{"variant", to_string(r.predicate.variant)}, {"strict", r.predicate.strict}}},
                        {"partition_count", r.partition_count}};
    if (r.published_count) {
        j["published_count"] = *r.published_count;
        j["matches_published"] = r.matches_published();
    }
    if (include_timing) j["elapsed_s"] = r.elapsed_s;
    return j;
}

}  // namespace wigner

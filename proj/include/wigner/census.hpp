#pragma once

// Exhaustive census of on/off hidden-variable models: every subset of an
// ordered symbol list is a candidate model in which the "on" symbols are
// equiprobable, and we count the subsets whose singles are flat.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wigner/symbol.hpp"

namespace wigner {

enum class FlatnessVariant { alice_only, both_sides };

FlatnessVariant parse_flatness_variant(std::string_view label);
std::string to_string(FlatnessVariant v);

/// Strict: per-setting on-counts are equal on the checked side(s).
/// Non-strict: they differ by at most one.
struct FlatnessPredicate {
    FlatnessVariant variant = FlatnessVariant::both_sides;
    bool strict = true;

    std::string str() const;
};

/// Reference predicate: walks the on-symbols of `code` one by one.
bool is_flat(std::uint64_t code, std::span<const Symbol> symbols, const FlatnessPredicate& pred);

/// Ordered symbol list (at most 32 entries) with the per-position masks used
/// by the popcount kernel: bit j of masks[k] is set iff symbols[j] has "+"
/// at position k.
class CensusUniverse {
public:
    CensusUniverse(std::string label, std::vector<Symbol> symbols);

    static CensusUniverse perfect();
    static CensusUniverse one_step();

    const std::string& label() const noexcept { return label_; }
    std::span<const Symbol> symbols() const noexcept { return symbols_; }
    std::uint64_t size() const noexcept { return std::uint64_t{1} << symbols_.size(); }
    const std::array<std::uint32_t, 6>& masks() const noexcept { return masks_; }

    bool flat(std::uint32_t code, const FlatnessPredicate& pred) const noexcept;

private:
    std::string label_;
    std::vector<Symbol> symbols_;
    std::array<std::uint32_t, 6> masks_{};
};

struct PartialCensus {
    std::uint64_t range_start = 0;
    std::uint64_t range_end = 0;  // exclusive
    std::uint64_t flat_count = 0;
};

/// Flat codes in [range_start, range_end). Throws std::out_of_range if the
/// range leaves the universe or is reversed.
PartialCensus census_scan_partitioned(const CensusUniverse& u, std::uint64_t range_start, std::uint64_t range_end,
                                      const FlatnessPredicate& pred);

struct MergedCensus {
    std::uint64_t flat_count = 0;
    std::uint64_t covered = 0;  // codes scanned across all partials
};

/// Sums partial counts; throws std::invalid_argument if two ranges overlap.
MergedCensus merge_partials(std::span<const PartialCensus> partials);

struct CensusResult {
    std::string universe;
    std::uint64_t universe_size = 0;
    std::uint64_t flat_count = 0;
    FlatnessPredicate predicate;
    double elapsed_s = 0.0;
    unsigned partition_count = 1;
    std::optional<std::uint64_t> published_count;  // figure to compare against

    double proportion() const noexcept {
        return universe_size == 0 ? 0.0 : static_cast<double>(flat_count) / static_cast<double>(universe_size);
    }
    bool matches_published() const noexcept { return published_count && *published_count == flat_count; }
};

/// Splits the universe into `shards` contiguous ranges, scans each on its own
/// thread and merges. The count is identical for every shard count.
CensusResult run_census(const CensusUniverse& u, const FlatnessPredicate& pred, unsigned shards = 1);

/// All 2^8 subsets of the perfect symbols; compared against 25.
CensusResult census_perfect(const FlatnessPredicate& pred, unsigned shards = 1);

/// All 2^24 subsets of the one-step symbols; compared against 2^12 - 13.
CensusResult census_one_step(const FlatnessPredicate& pred, unsigned shards = 1);

inline constexpr std::uint64_t kPublishedPerfectFlat = 25;
inline constexpr std::uint64_t kPublishedOneStepFlat = (std::uint64_t{1} << 12) - 13;
inline constexpr std::uint64_t kThreeStepPossibilities = 6 * 6 * 6;

/// (efa.flat / efa.size) / (free.flat / free.size); throws std::domain_error
/// if free.flat_count is zero.
double likelihood_ratio(const CensusResult& efa, const CensusResult& free);

/// Same ratio from raw counts.
double likelihood_ratio(std::uint64_t efa_flat, std::uint64_t efa_size, std::uint64_t free_flat, std::uint64_t free_size);

/// Groups of one-step symbols that toggle together: symbols sharing the same
/// unordered pair of perfect parents. Indices refer to CensusUniverse::one_step().
std::vector<std::vector<std::size_t>> parent_pair_groups();

struct GroupCensusResult {
    CensusResult census;  // universe_size counts group codes
    std::size_t group_count = 0;
    std::vector<std::size_t> group_sizes;
    bool grouping_respected = true;  // every expanded code toggles whole groups
};

/// Census over group codes only; `grouping` must be "by_parent_pair".
GroupCensusResult efa_group_census(std::string_view grouping, const FlatnessPredicate& pred);

/// Expands a group code to the one-step subset code.
std::uint32_t expand_group_code(std::uint32_t group_code, const std::vector<std::vector<std::size_t>>& groups);

nlohmann::json to_json(const CensusResult& r, bool include_timing = true);

}  // namespace wigner

#pragma once

// Finite set algebra over the 64 counterfactual outcome patterns of a
// two-party, three-setting, click/no-click experiment.

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wigner {

enum class Side { alice, bob };

/// One counterfactual detection pattern (R1a,R2a,R3a;R1b,R2b,R3b).
///
/// Encoded as an integer 0..63 where bit k is position k in the order
/// 1a, 2a, 3a, 1b, 2b, 3b and a set bit means a detection ("+").
class Symbol {
public:
    static constexpr int count = 64;
    static constexpr int positions = 6;

    constexpr Symbol() = default;

    /// Throws std::out_of_range for codes above 63.
    static Symbol from_code(unsigned code);

    /// Accepts "(+--,-++)" with ASCII '-' or U+2212 and ',' or ';' as the
    /// side separator.
    static Symbol parse(std::string_view text);

    constexpr std::uint8_t code() const noexcept { return code_; }

    /// Outcome at bit position 0..5.
    constexpr bool at(int position) const noexcept { return (code_ >> position) & 1u; }

    /// Outcome for `side` at measurement setting 1..3.
    constexpr bool detects(Side side, int setting) const noexcept {
        return at(position_of(side, setting));
    }

    constexpr Symbol flipped(int position) const noexcept {
        return Symbol(static_cast<std::uint8_t>(code_ ^ (1u << position)));
    }

    std::string str() const;

    static constexpr int position_of(Side side, int setting) noexcept {
        return (side == Side::alice ? 0 : 3) + setting - 1;
    }

    friend constexpr auto operator<=>(Symbol, Symbol) = default;

private:
    constexpr explicit Symbol(std::uint8_t code) : code_(code) {}

    std::uint8_t code_ = 0;
};

/// Exact subset of the 64 symbols, stored as a 64-bit membership mask.
class SymbolSet {
public:
    constexpr SymbolSet() = default;
    constexpr explicit SymbolSet(std::uint64_t mask) : mask_(mask) {}
    SymbolSet(std::initializer_list<Symbol> symbols);

    constexpr std::uint64_t mask() const noexcept { return mask_; }
    constexpr int size() const noexcept { return std::popcount(mask_); }
    constexpr bool empty() const noexcept { return mask_ == 0; }
    constexpr bool contains(Symbol s) const noexcept { return (mask_ >> s.code()) & 1u; }

    constexpr void insert(Symbol s) noexcept { mask_ |= std::uint64_t{1} << s.code(); }
    constexpr void erase(Symbol s) noexcept { mask_ &= ~(std::uint64_t{1} << s.code()); }

    /// Members in ascending code order.
    std::vector<Symbol> members() const;

    friend constexpr SymbolSet operator|(SymbolSet a, SymbolSet b) { return SymbolSet(a.mask_ | b.mask_); }
    friend constexpr SymbolSet operator&(SymbolSet a, SymbolSet b) { return SymbolSet(a.mask_ & b.mask_); }
    friend constexpr SymbolSet operator-(SymbolSet a, SymbolSet b) { return SymbolSet(a.mask_ & ~b.mask_); }
    friend constexpr bool operator==(SymbolSet, SymbolSet) = default;

private:
    std::uint64_t mask_ = 0;
};

/// Measurement settings (Alice, Bob), each in 1..3.
class SettingPair {
public:
    /// Throws std::out_of_range if either index is outside 1..3.
    SettingPair(int alice_setting, int bob_setting);

    int alice() const noexcept { return alice_; }
    int bob() const noexcept { return bob_; }

    std::string str() const;

    friend bool operator==(const SettingPair&, const SettingPair&) = default;

private:
    int alice_;
    int bob_;
};

enum class FlipKind { loss, gain };

struct Flip {
    int position;   // 0..5
    Symbol result;
    FlipKind kind;  // loss: + -> -, gain: - -> +
};

SymbolSet all_symbols();

bool is_perfect_anticorrelation(Symbol s);

/// The 8 perfectly anti-correlated symbols.
SymbolSet perfect_symbols();

bool contributes_to_coincidence(Symbol s, const SettingPair& p);

/// Every symbol that gives a coincidence at `p` (always 16 of them).
SymbolSet coincidence_set(const SettingPair& p);

/// Non-perfect contributors at one of (1,3), (1,2), (2,3); throws
/// std::invalid_argument for any other pair.
SymbolSet imperfect_contributors(const SettingPair& p);

/// Bookkeeping for the cancellation that leaves the residual set.
struct ResidualDerivation {
    SymbolSet s13;
    SymbolSet s12;
    SymbolSet s23;
    SymbolSet s12_shared;  // s12 intersected with s13
    SymbolSet s23_shared;  // s23 intersected with s13
    SymbolSet residual;    // s13 - s12_shared - s23_shared
    int terms_total = 0;   // |s13| + |s12_shared| + |s23_shared|
    int terms_canceled = 0;
};

ResidualDerivation derive_residual();
SymbolSet residual_set();

/// The four residual symbols written out by hand, for self-checks.
SymbolSet expected_residual();

std::array<Flip, 6> one_step_flips(Symbol s);
SymbolSet one_step_neighbors(Symbol s);

/// Minimum Hamming distance to a perfect anti-correlation symbol.
int step_distance(Symbol s);

/// The 24 symbols at step distance 1.
SymbolSet one_step_symbols();

}  // namespace wigner

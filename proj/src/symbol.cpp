#include "wigner/symbol.hpp"

#include <algorithm>
#include <stdexcept>

namespace wigner {

namespace {

constexpr std::string_view kUnicodeMinus = "−";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_symbol(std::string_view text, std::string_view why) {
    throw std::invalid_argument("invalid symbol '" + std::string(text) + "': " + std::string(why));
}

}  // namespace

Symbol Symbol::from_code(unsigned code) {
    if (code >= static_cast<unsigned>(count)) {
        throw std::out_of_range("symbol code " + std::to_string(code) + " outside 0..63");
    }
    return Symbol(static_cast<std::uint8_t>(code));
}

Symbol Symbol::parse(std::string_view text) {
    const std::string_view original = text;
    text = trim(text);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
        bad_symbol(original, "expected parentheses");
    }
    text = text.substr(1, text.size() - 2);

    unsigned code = 0;
    int position = 0;
    bool separator_seen = false;
    while (!text.empty()) {
        if (text.front() == '+') {
            if (position >= positions) bad_symbol(original, "too many outcomes");
            code |= 1u << position++;
            text.remove_prefix(1);
        } else if (text.front() == '-') {
            if (position >= positions) bad_symbol(original, "too many outcomes");
            ++position;
            text.remove_prefix(1);
        } else if (text.starts_with(kUnicodeMinus)) {
            if (position >= positions) bad_symbol(original, "too many outcomes");
            ++position;
            text.remove_prefix(kUnicodeMinus.size());
        } else if (text.front() == ',' || text.front() == ';') {
            if (separator_seen || position != 3) bad_symbol(original, "separator must follow three outcomes");
            separator_seen = true;
            text.remove_prefix(1);
        } else {
            bad_symbol(original, "unexpected character");
        }
    }
    if (!separator_seen || position != positions) {
        bad_symbol(original, "expected three outcomes per side");
    }
    return Symbol(static_cast<std::uint8_t>(code));
}

std::string Symbol::str() const {
    std::string out = "(";
    for (int k = 0; k < positions; ++k) {
        if (k == 3) out += ',';
        out += at(k) ? '+' : '-';
    }
    out += ')';
    return out;
}

SymbolSet::SymbolSet(std::initializer_list<Symbol> symbols) {
    for (Symbol s : symbols) insert(s);
}

std::vector<Symbol> SymbolSet::members() const {
    std::vector<Symbol> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
        out.push_back(Symbol::from_code(static_cast<unsigned>(std::countr_zero(m))));
    }
    return out;
}

SettingPair::SettingPair(int alice_setting, int bob_setting)
    : alice_(alice_setting), bob_(bob_setting) {
    if (alice_ < 1 || alice_ > 3 || bob_ < 1 || bob_ > 3) {
        throw std::out_of_range("setting pair (" + std::to_string(alice_) + "," +
                                std::to_string(bob_) + ") outside 1..3");
    }
}

std::string SettingPair::str() const {
    return "(" + std::to_string(alice_) + "," + std::to_string(bob_) + ")";
}

SymbolSet all_symbols() { return SymbolSet(~std::uint64_t{0}); }

bool is_perfect_anticorrelation(Symbol s) {
    for (int i = 1; i <= 3; ++i) {
        if (s.detects(Side::alice, i) == s.detects(Side::bob, i)) return false;
    }
    return true;
}

SymbolSet perfect_symbols() {
    SymbolSet out;
    for (Symbol s : all_symbols().members()) {
        if (is_perfect_anticorrelation(s)) out.insert(s);
    }
    return out;
}

bool contributes_to_coincidence(Symbol s, const SettingPair& p) {
    return s.detects(Side::alice, p.alice()) && s.detects(Side::bob, p.bob());
}

SymbolSet coincidence_set(const SettingPair& p) {
    SymbolSet out;
    for (Symbol s : all_symbols().members()) {
        if (contributes_to_coincidence(s, p)) out.insert(s);
    }
    return out;
}

SymbolSet imperfect_contributors(const SettingPair& p) {
    if (!(p == SettingPair(1, 3) || p == SettingPair(1, 2) || p == SettingPair(2, 3))) {
        throw std::invalid_argument("imperfect contributors are defined only for (1,3), (1,2), (2,3); got " +
                                    p.str());
    }
    return coincidence_set(p) - perfect_symbols();
}

ResidualDerivation derive_residual() {
    ResidualDerivation d;
    d.s13 = imperfect_contributors(SettingPair(1, 3));
    d.s12 = imperfect_contributors(SettingPair(1, 2));
    d.s23 = imperfect_contributors(SettingPair(2, 3));
    d.s12_shared = d.s12 & d.s13;
    d.s23_shared = d.s23 & d.s13;
    d.residual = d.s13 - d.s12_shared - d.s23_shared;
    d.terms_total = d.s13.size() + d.s12_shared.size() + d.s23_shared.size();
    d.terms_canceled = d.terms_total - d.residual.size();
    return d;
}

SymbolSet residual_set() { return derive_residual().residual; }

SymbolSet expected_residual() {
    return SymbolSet{Symbol::parse("(+--,--+)"), Symbol::parse("(+-+,--+)"), Symbol::parse("(+--,+-+)"),
                     Symbol::parse("(+-+,+-+)")};
}

std::array<Flip, 6> one_step_flips(Symbol s) {
    std::array<Flip, 6> out{};
    for (int k = 0; k < Symbol::positions; ++k) {
        out[static_cast<std::size_t>(k)] = Flip{k, s.flipped(k), s.at(k) ? FlipKind::loss : FlipKind::gain};
    }
    return out;
}

SymbolSet one_step_neighbors(Symbol s) {
    SymbolSet out;
    for (const Flip& f : one_step_flips(s)) out.insert(f.result);
    return out;
}

int step_distance(Symbol s) {
    int best = Symbol::positions;
    for (Symbol p : perfect_symbols().members()) {
        best = std::min(best, std::popcount(static_cast<unsigned>(s.code() ^ p.code())));
    }
    return best;
}

SymbolSet one_step_symbols() {
    SymbolSet out;
    for (Symbol s : all_symbols().members()) {
        if (step_distance(s) == 1) out.insert(s);
    }
    return out;
}

}  // namespace wigner

#pragma once

// Test-side reference implementations that work on the text form of a
// symbol, independent of the library's bit encoding.

#include <string>
#include <vector>

namespace oracle {

// All 64 patterns "(abc,def)" in lexicographic order of '+' < '-'.
inline std::vector<std::string> all_texts() {
    std::vector<std::string> out;
    for (int m = 0; m < 64; ++m) {
        std::string s = "(---,---)";
        const int slot[6] = {1, 2, 3, 5, 6, 7};
        for (int k = 0; k < 6; ++k) {
            if ((m >> (5 - k)) & 1) s[static_cast<std::size_t>(slot[k])] = '+';
        }
        out.push_back(s);
    }
    return out;
}

inline char alice(const std::string& s, int setting) { return s[static_cast<std::size_t>(setting)]; }
inline char bob(const std::string& s, int setting) { return s[static_cast<std::size_t>(4 + setting)]; }

inline bool perfect(const std::string& s) {
    for (int k = 1; k <= 3; ++k) {
        if (alice(s, k) == bob(s, k)) return false;
    }
    return true;
}

inline bool contributes(const std::string& s, int a, int b) { return alice(s, a) == '+' && bob(s, b) == '+'; }

inline int hamming(const std::string& x, const std::string& y) {
    int d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
    return d;
}

}  // namespace oracle

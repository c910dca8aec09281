#pragma once

// Test-only oracles for the Z^2 * Z normal form: an exhaustive rewriting
// system and a generator of alternating (*)-form words.  Kept independent
// of the block-based implementation under test.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "vlab/zz.hpp"

namespace vt {

using namespace vlab;

inline const std::string kZZLetters = "aAbBcC";

inline bool zz_is_inverse_pair(char x, char y) {
    return x != y && std::toupper((unsigned char)x) == std::toupper((unsigned char)y);
}
inline bool zz_is_ab(char x) { return x == 'a' || x == 'A' || x == 'b' || x == 'B'; }

// One-step rewrites: free cancellation plus sorting a-letters before
// b-letters inside <a,b> runs.
inline std::vector<std::string> zz_rewrites(const std::string& w) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (zz_is_inverse_pair(w[i], w[i + 1]))
            out.push_back(w.substr(0, i) + w.substr(i + 2));
        else if ((w[i] == 'b' || w[i] == 'B') && (w[i + 1] == 'a' || w[i + 1] == 'A')) {
            std::string v = w;
            std::swap(v[i], v[i + 1]);
            out.push_back(v);
        }
    }
    return out;
}

struct ZZOracle {
    std::map<std::string, std::string> memo;
    bool confluent = true;

    const std::string& normal_form(const std::string& w) {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        auto steps = zz_rewrites(w);
        if (steps.empty()) return memo.emplace(w, w).first->second;
        std::string nf = normal_form(steps[0]);
        for (std::size_t i = 1; i < steps.size(); ++i)
            if (normal_form(steps[i]) != nf) confluent = false;
        return memo.emplace(w, nf).first->second;
    }
};

// Literal block structure of an irreducible letter word.
inline ZZWord zz_blocks_of_irreducible(const std::string& w) {
    std::vector<ZZBlock> out;
    std::size_t i = 0;
    while (i < w.size()) {
        if (zz_is_ab(w[i])) {
            BigInt x = 0, y = 0;
            while (i < w.size() && zz_is_ab(w[i])) {
                if (w[i] == 'a') ++x;
                if (w[i] == 'A') --x;
                if (w[i] == 'b') ++y;
                if (w[i] == 'B') --y;
                ++i;
            }
            out.push_back(ZZBlock::ab(x, y));
        } else {
            BigInt z = 0;
            while (i < w.size() && !zz_is_ab(w[i])) {
                z += (w[i] == 'c') ? 1 : -1;
                ++i;
            }
            out.push_back(ZZBlock::c(z));
        }
    }
    return ZZWord{out};
}

inline ZZWord zz_random_ab(std::mt19937_64& rng, bool may_vanish) {
    std::uniform_int_distribution<int> e(-3, 3);
    BigInt x = e(rng), y = e(rng);
    if (!may_vanish)
        while (x == 0 && y == 0) { x = e(rng); y = e(rng); }
    if (x == 0 && y == 0) return ZZWord{};
    return ZZWord{{ZZBlock::ab(x, y)}};
}

// A random word in form (*): A0 T0 A1 T1 ... An Tn with nontrivial
// syllables except possibly A0 and Tn.
inline ZZWord zz_random_star_form(std::mt19937_64& rng, const ZZWord& t, bool* tn_trivial) {
    std::uniform_int_distribution<int> nd(0, 4), e(-3, 3), coin(0, 1);
    int n = nd(rng);
    ZZWord w;
    for (int p = 0; p <= n; ++p) {
        ZZWord A = zz_random_ab(rng, p == 0 && coin(rng));
        w = zz_mul(w, A);
        int s = e(rng);
        if (p < n) {
            while (!s) s = e(rng);
        } else {
            if (coin(rng)) s = 0;
            if (s == 0 && n == 0 && A.trivial()) s = 1;  // at least one syllable
            *tn_trivial = (s == 0);
        }
        w = zz_mul(w, zz_power(t, s));
    }
    return w;
}

}  // namespace vt

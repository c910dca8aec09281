#pragma once

// Normal forms in Z^2 * Z = < a, b, c | [a,b] > and the nested
// (a,b,c)-commutator calculus.
//
// A word is stored as its unique alternating normal form: blocks
// a^x b^y (with |x|+|y| != 0) and c^z (z != 0), strictly alternating.
// The empty sequence is the identity.  Exponents are arbitrary precision.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "vlab/common.hpp"

namespace vlab {

using BigInt = boost::multiprecision::cpp_int;

struct ZZBlock {
    bool is_c = false;
    BigInt x, y;  // a/b exponents when !is_c
    BigInt z;     // c exponent when is_c

    static ZZBlock ab(BigInt x, BigInt y) { return {false, std::move(x), std::move(y), 0}; }
    static ZZBlock c(BigInt z) { return {true, 0, 0, std::move(z)}; }
    bool trivial() const { return is_c ? z == 0 : (x == 0 && y == 0); }
    bool operator==(const ZZBlock& o) const {
        return is_c == o.is_c && x == o.x && y == o.y && z == o.z;
    }
};

struct ZZWord {
    std::vector<ZZBlock> blocks;  // normal form

    bool trivial() const { return blocks.empty(); }
    bool operator==(const ZZWord& o) const { return blocks == o.blocks; }
    bool operator!=(const ZZWord& o) const { return !(*this == o); }
};

namespace detail {

inline void push_block(std::vector<ZZBlock>& v, const ZZBlock& b) {
    if (b.trivial()) return;
    if (v.empty() || v.back().is_c != b.is_c) {
        v.push_back(b);
        return;
    }
    if (b.is_c) v.back().z += b.z;
    else {
        v.back().x += b.x;
        v.back().y += b.y;
    }
    if (v.back().trivial()) v.pop_back();
}

}  // namespace detail

inline ZZWord zz_mul(const ZZWord& u, const ZZWord& v) {
    std::vector<ZZBlock> out = u.blocks;
    for (const auto& b : v.blocks) detail::push_block(out, b);
    return ZZWord{std::move(out)};
}

inline ZZWord zz_inverse(const ZZWord& u) {
    std::vector<ZZBlock> out;
    for (auto it = u.blocks.rbegin(); it != u.blocks.rend(); ++it) {
        ZZBlock b = *it;
        b.x = -b.x;
        b.y = -b.y;
        b.z = -b.z;
        out.push_back(b);
    }
    return ZZWord{std::move(out)};
}

inline ZZWord zz_power(const ZZWord& u, long long k) {
    ZZWord base = k < 0 ? zz_inverse(u) : u;
    unsigned long long n = k < 0 ? -(unsigned long long)k : (unsigned long long)k;
    ZZWord acc;
    while (n--) acc = zz_mul(acc, base);
    return acc;
}

inline ZZWord zz_conjugate(const ZZWord& u, const ZZWord& v) {
    return zz_mul(zz_mul(zz_inverse(v), u), v);
}

inline ZZWord zz_commutator(const ZZWord& u, const ZZWord& v) {
    return zz_mul(zz_mul(zz_inverse(u), zz_inverse(v)), zz_mul(u, v));
}

inline ZZWord zz_letter(char ch) {
    switch (ch) {
        case 'a': return ZZWord{{ZZBlock::ab(1, 0)}};
        case 'A': return ZZWord{{ZZBlock::ab(-1, 0)}};
        case 'b': return ZZWord{{ZZBlock::ab(0, 1)}};
        case 'B': return ZZWord{{ZZBlock::ab(0, -1)}};
        case 'c': return ZZWord{{ZZBlock::c(1)}};
        case 'C': return ZZWord{{ZZBlock::c(-1)}};
        default: throw ParseError(std::string("bad letter '") + ch + "'");
    }
}

/// Reduce a raw letter sequence (capitals are inverses) to normal form.
inline ZZWord zz_reduce(const std::string& letters) {
    std::vector<ZZBlock> out;
    for (char ch : letters) {
        if (std::isspace((unsigned char)ch)) continue;
        detail::push_block(out, zz_letter(ch).blocks[0]);
    }
    return ZZWord{std::move(out)};
}

// --- text form ---------------------------------------------------------------
// grammar: letters a,b,c,A,B,C; ^ with optional-sign integer; parentheses;
// [u,v] commutator sugar; juxtaposition is multiplication.

namespace detail {

struct ZZParser {
    const std::string& s;
    std::size_t pos = 0;

    explicit ZZParser(const std::string& text) : s(text) {}
    void skip() { while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos; }
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("word parse error at position " + std::to_string(pos) + ": " + what);
    }
    bool done() { skip(); return pos >= s.size(); }

    long long integer() {
        skip();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        if (pos == start || (pos == start + 1 && !std::isdigit((unsigned char)s[start])))
            fail("expected an integer");
        return std::stoll(s.substr(start, pos - start));
    }

    ZZWord atom() {
        skip();
        if (pos >= s.size()) fail("expected a word");
        char ch = s[pos];
        if (ch == '(') {
            ++pos;
            ZZWord w = product(')');
            if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
            ++pos;
            return w;
        }
        if (ch == '[') {
            ++pos;
            ZZWord u = product(',');
            if (pos >= s.size() || s[pos] != ',') fail("expected ','");
            ++pos;
            ZZWord v = product(']');
            if (pos >= s.size() || s[pos] != ']') fail("expected ']'");
            ++pos;
            return zz_commutator(u, v);
        }
        ++pos;
        return zz_letter(ch);
    }

    ZZWord factor() {
        ZZWord w = atom();
        skip();
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            w = zz_power(w, integer());
        }
        return w;
    }

    ZZWord product(char stop) {
        ZZWord w;
        while (true) {
            skip();
            if (pos >= s.size() || s[pos] == stop) return w;
            if (s[pos] == ')' || s[pos] == ']' || s[pos] == ',') return w;
            w = zz_mul(w, factor());
        }
    }
};

}  // namespace detail

inline ZZWord parse_zz(const std::string& text) {
    detail::ZZParser p(text);
    ZZWord w = p.product('\0');
    if (!p.done()) p.fail("trailing input");
    return w;
}

inline std::string format_zz(const ZZWord& w) {
    if (w.trivial()) return "1";
    std::string out;
    auto part = [&](const char* letter, const BigInt& e) {
        if (e == 0) return;
        if (!out.empty()) out += " ";
        out += letter;
        if (e != 1) out += "^" + e.str();
    };
    for (const auto& b : w.blocks) {
        if (b.is_c) part("c", b.z);
        else {
            part("a", b.x);
            part("b", b.y);
        }
    }
    return out;
}

// --- (a,b,c)-commutators ------------------------------------------------------

struct AbcLevel {
    BigInt x, y, z;  // |x|+|y| != 0 and z != 0
};

/// The nested commutator
///   [a^x1 b^y1, [... [a^xn b^yn, c^zn]^{z_{n-1}} ...]^{z1}]
/// always nontrivial in Z^2 * Z.
inline ZZWord abc_commutator(const std::vector<AbcLevel>& levels) {
    if (levels.empty()) throw std::invalid_argument("abc_commutator: need at least one level");
    for (const auto& l : levels) {
        if (l.x == 0 && l.y == 0)
            throw std::invalid_argument("abc_commutator: |x|+|y| must be nonzero");
        if (l.z == 0) throw std::invalid_argument("abc_commutator: z must be nonzero");
    }
    auto big_power = [](const ZZWord& w, const BigInt& k) {
        long long kk = (long long)k;  // exponents stay small in practice
        return zz_power(w, kk);
    };
    // u_n = [a^xn b^yn, c^zn];  u_i = [a^xi b^yi, u_{i+1}^{zi}]
    std::size_t n = levels.size();
    ZZWord ab_last = ZZWord{{ZZBlock::ab(levels[n - 1].x, levels[n - 1].y)}};
    ZZWord w = zz_commutator(ab_last, ZZWord{{ZZBlock::c(levels[n - 1].z)}});
    for (std::size_t i = n - 1; i-- > 0;) {
        ZZWord ab = ZZWord{{ZZBlock::ab(levels[i].x, levels[i].y)}};
        w = zz_commutator(ab, big_power(w, levels[i].z));
    }
    return w;
}

// --- resultant tail forms -----------------------------------------------------

enum class TailForm { none, top, bottom };

/// Matches the end of the normal form of w against
///   top:    c^-k a^{fi} b^{fj} c^k
///   bottom: c^-k a^{-fi} b^{-fj} c^k a^i b^j
/// for some integer f >= 1.
inline TailForm ends_in_form_star_star(const ZZWord& w, const BigInt& i, const BigInt& j,
                                       const BigInt& k) {
    if (i == 0 && j == 0) throw std::invalid_argument("ends_in_form_star_star: |i|+|j| nonzero");
    if (k == 0) throw std::invalid_argument("ends_in_form_star_star: k nonzero");
    auto scaled_by = [&](const BigInt& X, const BigInt& Y) -> BigInt {
        // f with (X, Y) = f * (i, j), or 0 if none
        BigInt f;
        if (i != 0) {
            if (X % i != 0) return 0;
            f = X / i;
            if (f * j != Y) return 0;
        } else {
            if (X != 0 || Y % j != 0) return 0;
            f = Y / j;
        }
        return f > 0 ? f : BigInt(0);
    };
    const auto& b = w.blocks;
    std::size_t n = b.size();
    if (n >= 3 && b[n - 1].is_c && b[n - 1].z == k && !b[n - 2].is_c && b[n - 3].is_c &&
        b[n - 3].z == -k && scaled_by(b[n - 2].x, b[n - 2].y) > 0)
        return TailForm::top;
    if (n >= 4 && !b[n - 1].is_c && b[n - 1].x == i && b[n - 1].y == j && b[n - 2].is_c &&
        b[n - 2].z == k && !b[n - 3].is_c && b[n - 4].is_c && b[n - 4].z == -k &&
        scaled_by(-b[n - 3].x, -b[n - 3].y) > 0)
        return TailForm::bottom;
    return TailForm::none;
}

}  // namespace vlab

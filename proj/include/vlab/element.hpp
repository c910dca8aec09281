#pragma once

// Elements of Thompson's group V as canonical prefix-replacement maps.
//
// An element is a finite bijection between two complete antichains: the
// pair (d -> r) maps the cylinder C_d affinely onto C_r by replacing the
// prefix d with r.  The canonical reduced form (no sibling pair d0->r0,
// d1->r1) is unique, so the word problem is syntactic equality.
// Elements act on the right: compose(u, v) is "u then v".

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vlab/cantor.hpp"
#include "vlab/common.hpp"

namespace vlab {

using TreePair = std::vector<std::pair<Address, Address>>;  // sorted by domain

namespace detail {

inline void sort_pairs(TreePair& p) {
    std::sort(p.begin(), p.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

// Merge sibling pairs (w0 -> v0, w1 -> v1) to (w -> v), to a fixpoint.
inline void reduce_pairs(TreePair& p) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const auto& [d0, r0] = p[i];
            const auto& [d1, r1] = p[i + 1];
            if (d0.empty() || r0.empty()) continue;
            if (d0.back() != '0' || r0.back() != '0') continue;
            if (sibling(d0) != d1 || sibling(r0) != r1) continue;
            p[i] = {d0.substr(0, d0.size() - 1), r0.substr(0, r0.size() - 1)};
            p.erase(p.begin() + i + 1);
            changed = true;
        }
    }
}

/// Throws with a diagnostic if the pairs do not form a valid tree pair.
inline void validate_tree_pair(const TreePair& p) {
    std::vector<Address> dom, ran;
    for (const auto& [d, r] : p) {
        dom.push_back(d);
        ran.push_back(r);
    }
    if (auto why = diagnose_antichain(dom))
        throw std::invalid_argument("domain: " + *why);
    if (auto why = diagnose_antichain(ran))
        throw std::invalid_argument("range: " + *why);
}

}  // namespace detail

struct Element {
    TreePair pairs;  // canonical: sorted by domain, fully reduced

    static Element identity() { return Element{{{Address{}, Address{}}}}; }

    bool is_identity() const {
        return pairs.size() == 1 && pairs[0].first.empty() && pairs[0].second.empty();
    }
    std::size_t leaf_count() const { return pairs.size(); }
    bool operator==(const Element& o) const { return pairs == o.pairs; }
    bool operator!=(const Element& o) const { return pairs != o.pairs; }

    /// Domain leaf whose cylinder contains all extensions of a (or of which
    /// a is an extension); npos if a sits strictly above the domain leaves.
    std::size_t leaf_at(const Address& a) const {
        auto it = std::upper_bound(pairs.begin(), pairs.end(), a,
                                   [](const Address& x, const auto& pr) { return x < pr.first; });
        if (it == pairs.begin()) return pairs.size();
        --it;
        if (is_prefix(it->first, a)) return std::size_t(it - pairs.begin());
        return pairs.size();
    }
};

/// Validates both antichains, sorts, reduces.
inline Element make_element(TreePair pairs) {
    detail::sort_pairs(pairs);
    detail::validate_tree_pair(pairs);
    detail::reduce_pairs(pairs);
    return Element{std::move(pairs)};
}

// --- text form --------------------------------------------------------------
// [ d -> r , d -> r , ... ]   addresses as in cantor.hpp, whitespace free-form

inline std::string format_element(const Element& u) {
    std::string out = "[";
    for (std::size_t i = 0; i < u.pairs.size(); ++i) {
        if (i) out += ", ";
        out += format_address(u.pairs[i].first) + "->" + format_address(u.pairs[i].second);
    }
    return out + "]";
}

inline Element parse_element(const std::string& text) {
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos; };
    auto fail = [&](const std::string& what) -> void {
        throw ParseError("element parse error at position " + std::to_string(pos) + ": " + what);
    };
    auto address = [&]() -> Address {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && (text[pos] == '0' || text[pos] == '1' || text[pos] == 'e')) ++pos;
        if (pos == start) fail("expected an address");
        std::string tok = text.substr(start, pos - start);
        if (tok == "e") return Address{};
        if (!is_bit_word(tok)) fail("bad address '" + tok + "'");
        return tok;
    };
    skip_ws();
    if (pos >= text.size() || text[pos] != '[') fail("expected '['");
    ++pos;
    TreePair pairs;
    while (true) {
        Address d = address();
        skip_ws();
        if (text.compare(pos, 2, "->") != 0) fail("expected '->'");
        pos += 2;
        Address r = address();
        pairs.emplace_back(std::move(d), std::move(r));
        skip_ws();
        if (pos >= text.size()) fail("expected ',' or ']'");
        if (text[pos] == ',') { ++pos; continue; }
        if (text[pos] == ']') { ++pos; break; }
        fail("expected ',' or ']'");
    }
    skip_ws();
    if (pos != text.size()) fail("trailing input");
    try {
        return make_element(std::move(pairs));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid element: ") + e.what());
    }
}

// --- group operations -------------------------------------------------------

/// x·compose(u,v) = (x·u)·v for every point x.
inline Element compose(const Element& u, const Element& v) {
    TreePair out;
    for (const auto& [d, r] : u.pairs) {
        std::size_t k = v.leaf_at(r);
        if (k < v.pairs.size()) {
            const auto& [dv, rv] = v.pairs[k];
            out.emplace_back(d, rv + r.substr(dv.size()));
        } else {
            // r sits above v's domain leaves: refine d along their suffixes
            for (const auto& [dv, rv] : v.pairs)
                if (is_prefix(r, dv)) out.emplace_back(d + dv.substr(r.size()), rv);
        }
    }
    detail::sort_pairs(out);
    detail::reduce_pairs(out);
    return Element{std::move(out)};
}

inline Element invert(const Element& u) {
    TreePair out;
    out.reserve(u.pairs.size());
    for (const auto& [d, r] : u.pairs) out.emplace_back(r, d);
    detail::sort_pairs(out);
    return Element{std::move(out)};
}

inline Element power(const Element& u, long long k) {
    Element base = k < 0 ? invert(u) : u;
    unsigned long long n = k < 0 ? -(unsigned long long)k : (unsigned long long)k;
    Element acc = Element::identity();
    while (n) {
        if (n & 1) acc = compose(acc, base);
        base = compose(base, base);
        n >>= 1;
    }
    return acc;
}

/// u^v = v^-1 u v
inline Element conjugate(const Element& u, const Element& v) {
    return compose(compose(invert(v), u), v);
}

/// [u,v] = u^-1 v^-1 u v
inline Element commutator(const Element& u, const Element& v) {
    return compose(compose(compose(invert(u), invert(v)), u), v);
}

inline bool equals(const Element& u, const Element& v) { return u == v; }

// --- the action -------------------------------------------------------------

inline CantorPoint apply(const Element& u, const CantorPoint& x) {
    std::size_t depth = 0;
    for (const auto& [d, r] : u.pairs) depth = std::max(depth, d.size());
    Address head = expand(x, depth);
    std::size_t k = u.leaf_at(head);
    // the domain antichain is complete, so some leaf prefixes the expansion
    const auto& [d, r] = u.pairs[k];
    if (d.size() <= x.pre.size())
        return canonical_point(r + x.pre.substr(d.size()), x.per);
    std::size_t t = (d.size() - x.pre.size()) % x.per.size();
    return canonical_point(r, x.per.substr(t) + x.per.substr(0, t));
}

/// Induced action on nodes: defined for nodes at or below a domain leaf,
/// nullopt for the finitely many nodes that u splits.
inline std::optional<Address> node_image(const Element& u, const Address& n) {
    std::size_t k = u.leaf_at(n);
    if (k == u.pairs.size()) return std::nullopt;
    const auto& [d, r] = u.pairs[k];
    return r + n.substr(d.size());
}

/// Closure of { x : x·u != x }.  For a reduced pair every leaf mapped to a
/// different address moves a dense subset of its cylinder.
inline NodeSet support_closure(const Element& u) {
    std::vector<Address> moved;
    for (const auto& [d, r] : u.pairs)
        if (d != r) moved.push_back(d);
    return NodeSet::of(std::move(moved));
}

namespace detail {

inline void image_rec(const Element& u, const Address& n, std::vector<Address>& out) {
    if (auto m = node_image(u, n)) {
        out.push_back(*m);
        return;
    }
    image_rec(u, n + '0', out);
    image_rec(u, n + '1', out);
}

}  // namespace detail

/// Image of a clopen set, refining split nodes into children as needed.
inline NodeSet image(const NodeSet& s, const Element& u) {
    std::vector<Address> out;
    for (const auto& n : s.nodes) detail::image_rec(u, n, out);
    return NodeSet::of(std::move(out));
}

// --- helpers ----------------------------------------------------------------

/// Copy of u acting inside C_prefix, the identity elsewhere.
inline Element relabel(const Element& u, const Address& prefix) {
    TreePair out;
    for (const auto& [d, r] : u.pairs) out.emplace_back(prefix + d, prefix + r);
    for (const auto& q : copath(prefix)) out.emplace_back(q, q);
    detail::sort_pairs(out);
    detail::reduce_pairs(out);
    return Element{std::move(out)};
}

/// Expand the pair at a domain leaf (inverse of one reduction step).
inline TreePair expand_at(const TreePair& p, std::size_t idx) {
    TreePair out = p;
    auto [d, r] = out[idx];
    out[idx] = {d + '0', r + '0'};
    out.insert(out.begin() + idx + 1, {d + '1', r + '1'});
    return out;
}

// Small stock of named elements used throughout the tests and tools.
inline Element x0() { return make_element({{"0", "00"}, {"10", "01"}, {"11", "1"}}); }
inline Element swap_halves() { return make_element({{"0", "1"}, {"1", "0"}}); }
inline Element g_demo() {
    return make_element({{"0", "110"}, {"100", "10"}, {"101", "0"}, {"11", "111"}});
}

}  // namespace vlab

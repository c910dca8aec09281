#pragma once

// Binary addresses for nodes of the infinite binary tree, complete
// antichains (leaf sets of finite binary trees), eventually periodic
// points of the Cantor set, and finite unions of node cylinders with
// exact set algebra.
//
// An address is a word over {0,1}; the empty word is the root and is
// written `e` in text form.  The cylinder C_n under an address n is the
// set of infinite binary sequences extending n.  C_e is the whole
// Cantor set and C_{n0}, C_{n1} partition C_n.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vlab/common.hpp"

namespace vlab {

using Address = std::string;  // '0'/'1' characters, "" = root

inline bool is_bit_word(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

/// Text form: `e` for the root, otherwise the bit word itself.
inline std::string format_address(const Address& a) { return a.empty() ? "e" : a; }

inline Address parse_address(const std::string& text) {
    if (text == "e") return Address{};
    if (text.empty() || !is_bit_word(text))
        throw ParseError("bad address '" + text + "' (expected 'e' or a nonempty 0/1 word)");
    return text;
}

inline bool is_prefix(const Address& p, const Address& a) {
    return p.size() <= a.size() && std::equal(p.begin(), p.end(), a.begin());
}

/// One of C_a, C_b contains the other iff the addresses are comparable.
inline bool comparable(const Address& a, const Address& b) {
    return is_prefix(a, b) || is_prefix(b, a);
}

inline Address sibling(const Address& a) {
    Address s = a;
    s.back() = (s.back() == '0') ? '1' : '0';
    return s;
}

/// Complement of C_a as an antichain: the off-path siblings from the root to a.
inline std::vector<Address> copath(const Address& a) {
    std::vector<Address> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(a.substr(0, i) + (a[i] == '0' ? '1' : '0'));
    return out;
}

namespace detail {

// Sorted range [lo,hi) of words sharing a common prefix of length `depth`.
// True iff it is the leaf set of a binary tree hanging at that prefix.
inline bool complete_rec(const std::vector<Address>& v, std::size_t lo, std::size_t hi,
                         std::size_t depth) {
    if (hi - lo == 1 && v[lo].size() == depth) return true;
    // a word ending here while others continue would be a proper prefix of them
    if (v[lo].size() == depth) return false;
    std::size_t mid = lo;
    while (mid < hi && v[mid][depth] == '0') ++mid;
    if (mid == lo || mid == hi) return false;  // one child subtree empty
    return complete_rec(v, lo, mid, depth + 1) && complete_rec(v, mid, hi, depth + 1);
}

}  // namespace detail

/// True iff `leaves` is prefix-free and its cylinders cover the whole
/// Cantor set, i.e. it is the leaf set of a finite binary tree.
inline bool is_complete_antichain(std::vector<Address> leaves) {
    if (leaves.empty()) return false;
    std::sort(leaves.begin(), leaves.end());
    if (std::adjacent_find(leaves.begin(), leaves.end()) != leaves.end()) return false;
    return detail::complete_rec(leaves, 0, leaves.size(), 0);
}

/// Diagnose a bad antichain: names the offending address.  Empty result = valid.
inline std::optional<std::string> diagnose_antichain(std::vector<Address> leaves) {
    if (leaves.empty()) return "empty antichain";
    std::sort(leaves.begin(), leaves.end());
    for (std::size_t i = 0; i + 1 < leaves.size(); ++i) {
        if (leaves[i] == leaves[i + 1])
            return "duplicate address '" + format_address(leaves[i]) + "'";
        if (is_prefix(leaves[i], leaves[i + 1]))
            return "'" + format_address(leaves[i]) + "' is a prefix of '" +
                   format_address(leaves[i + 1]) + "'";
    }
    // prefix-free; find an uncovered address if any
    struct Walk {
        const std::vector<Address>& v;
        std::optional<Address> missing;
        void rec(std::size_t lo, std::size_t hi, const Address& at) {
            if (missing) return;
            if (hi - lo == 1 && v[lo].size() == at.size()) return;
            std::size_t mid = lo;
            while (mid < hi && v[mid][at.size()] == '0') ++mid;
            if (mid == lo) { missing = at + '0'; return; }
            if (mid == hi) { missing = at + '1'; return; }
            rec(lo, mid, at + '0');
            rec(mid, hi, at + '1');
        }
    } w{leaves, {}};
    w.rec(0, leaves.size(), Address{});
    if (w.missing)
        return "incomplete: nothing covers '" + format_address(*w.missing) + "'";
    return std::nullopt;
}

/// Minimal complete antichain containing the given prefix-free set:
/// every missing sibling along the paths becomes a leaf.
inline std::vector<Address> complete_antichain_over(const std::vector<Address>& nodes) {
    if (nodes.empty()) return {Address{}};
    std::vector<Address> interior;  // proper prefixes of members
    for (const auto& n : nodes)
        for (std::size_t i = 0; i < n.size(); ++i) interior.push_back(n.substr(0, i));
    std::sort(interior.begin(), interior.end());
    interior.erase(std::unique(interior.begin(), interior.end()), interior.end());
    auto is_interior = [&](const Address& a) {
        return std::binary_search(interior.begin(), interior.end(), a);
    };
    std::vector<Address> leaves(nodes);
    for (const auto& p : interior)
        for (char c : {'0', '1'}) {
            Address child = p + c;
            if (!is_interior(child) &&
                std::find(nodes.begin(), nodes.end(), child) == nodes.end())
                leaves.push_back(child);
        }
    std::sort(leaves.begin(), leaves.end());
    return leaves;
}

// ---------------------------------------------------------------------------
// Eventually periodic points
// ---------------------------------------------------------------------------

/// A point of the Cantor set of the form pre · per^inf, stored canonically:
/// the period is primitive and the preperiod is shortest.  All periodic and
/// fixed points of elements of V are of this shape.
struct CantorPoint {
    Address pre;
    Address per;  // nonempty

    bool operator==(const CantorPoint& o) const { return pre == o.pre && per == o.per; }
    bool operator<(const CantorPoint& o) const {
        return pre != o.pre ? pre < o.pre : per < o.per;
    }
};

/// Shortest word w with per = w^k.
inline Address primitive_root(const Address& per) {
    std::size_t n = per.size();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = per[i] == per[i - d];
        if (ok) return per.substr(0, d);
    }
    return per;
}

/// Canonical form: reduce the period to its primitive root, then absorb
/// trailing preperiod symbols into rotations of the period.
inline CantorPoint canonical_point(Address pre, Address per) {
    if (per.empty()) throw std::invalid_argument("canonical_point: empty period");
    per = primitive_root(per);
    while (!pre.empty() && pre.back() == per.back()) {
        pre.pop_back();
        per = per.back() + per.substr(0, per.size() - 1);
    }
    return CantorPoint{pre, per};
}

/// First n symbols of the expansion pre · per^inf.
inline Address expand(const CantorPoint& p, std::size_t n) {
    Address out = p.pre.substr(0, std::min(n, p.pre.size()));
    while (out.size() < n) out += p.per[(out.size() - p.pre.size()) % p.per.size()];
    return out;
}

/// Text form pre(per); the root preperiod prints as nothing: `(1)` is 111...
inline std::string format_point(const CantorPoint& p) { return p.pre + "(" + p.per + ")"; }

inline CantorPoint parse_point(const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw ParseError("bad point '" + text + "' (expected pre(per))");
    std::string pre = text.substr(0, open);
    std::string per = text.substr(open + 1, text.size() - open - 2);
    if (per.empty() || !is_bit_word(pre) || !is_bit_word(per))
        throw ParseError("bad point '" + text + "'");
    return canonical_point(pre, per);
}

// ---------------------------------------------------------------------------
// Clopen sets as canonical node unions
// ---------------------------------------------------------------------------

/// A finite union of cylinders, canonicalized so equal sets have equal
/// representations: prefix-free, and no two siblings both present.
struct NodeSet {
    std::vector<Address> nodes;  // sorted

    static NodeSet of(std::vector<Address> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        // drop nodes below another node
        std::vector<Address> kept;
        for (const auto& a : v) {
            if (!kept.empty() && is_prefix(kept.back(), a)) continue;
            kept.push_back(a);
        }
        // merge sibling pairs to their parent, to a fixpoint
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
                const Address& a = kept[i];
                const Address& b = kept[i + 1];
                if (!a.empty() && a.size() == b.size() && a.back() == '0' &&
                    sibling(a) == b) {
                    kept[i] = a.substr(0, a.size() - 1);
                    kept.erase(kept.begin() + i + 1);
                    changed = true;
                }
            }
        }
        return NodeSet{std::move(kept)};
    }

    static NodeSet whole() { return NodeSet{{Address{}}}; }

    bool empty() const { return nodes.empty(); }
    std::size_t max_depth() const {
        std::size_t d = 0;
        for (const auto& n : nodes) d = std::max(d, n.size());
        return d;
    }
    bool operator==(const NodeSet& o) const { return nodes == o.nodes; }
    bool operator!=(const NodeSet& o) const { return nodes != o.nodes; }
};

inline NodeSet node_union(const NodeSet& a, const NodeSet& b) {
    std::vector<Address> v(a.nodes);
    v.insert(v.end(), b.nodes.begin(), b.nodes.end());
    return NodeSet::of(std::move(v));
}

inline NodeSet node_intersection(const NodeSet& a, const NodeSet& b) {
    std::vector<Address> v;
    for (const auto& x : a.nodes)
        for (const auto& y : b.nodes) {
            if (is_prefix(x, y)) v.push_back(y);
            else if (is_prefix(y, x)) v.push_back(x);
        }
    return NodeSet::of(std::move(v));
}

namespace detail {

inline void subtract_rec(const Address& n, const NodeSet& b, std::vector<Address>& out) {
    bool covered = false, touched = false;
    for (const auto& y : b.nodes) {
        if (is_prefix(y, n)) { covered = true; break; }
        if (is_prefix(n, y)) touched = true;
    }
    if (covered) return;
    if (!touched) { out.push_back(n); return; }
    subtract_rec(n + '0', b, out);
    subtract_rec(n + '1', b, out);
}

}  // namespace detail

inline NodeSet node_difference(const NodeSet& a, const NodeSet& b) {
    std::vector<Address> out;
    for (const auto& n : a.nodes) detail::subtract_rec(n, b, out);
    return NodeSet::of(std::move(out));
}

inline bool disjoint(const NodeSet& a, const NodeSet& b) {
    for (const auto& x : a.nodes)
        for (const auto& y : b.nodes)
            if (comparable(x, y)) return false;
    return true;
}

/// C_n fully contained in the set.
inline bool contains_node(const NodeSet& s, const Address& n) {
    return node_difference(NodeSet{{n}}, s).empty();
}

inline bool subset_of(const NodeSet& a, const NodeSet& b) {
    return node_difference(a, b).empty();
}

inline bool contains_point(const NodeSet& s, const CantorPoint& p) {
    Address x = expand(p, s.max_depth());
    for (const auto& n : s.nodes)
        if (is_prefix(n, x)) return true;
    return false;
}

inline std::string format_nodeset(const NodeSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        if (i) out += ",";
        out += format_address(s.nodes[i]);
    }
    return out + "}";
}

inline NodeSet parse_nodeset(const std::string& text) {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        throw ParseError("bad node set '" + text + "' (expected {n1,n2,...})");
    std::vector<Address> v;
    std::string body = text.substr(1, text.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        std::size_t a = tok.find_first_not_of(" \t");
        std::size_t b = tok.find_last_not_of(" \t");
        if (a == std::string::npos) throw ParseError("bad node set: empty entry");
        v.push_back(parse_address(tok.substr(a, b - a + 1)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
        if (pos >= body.size()) throw ParseError("bad node set: trailing comma");
    }
    return NodeSet::of(std::move(v));
}

}  // namespace vlab

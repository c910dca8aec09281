#pragma once

// Revealing pairs and the dynamics they expose: repelling/attracting
// basins, important (fixed) points, source-sink chains, the flow graph
// and its components of support, and common powers of commuting elements.
//
// For a tree pair (D, R) let C = D ∩ R.  Each leaf of C is neutral
// (a leaf of both trees), the root of a component of D\R, or the root of
// a component of R\D.  The pair is revealing when every D\R component has
// a leaf iterating through neutral leaves back onto its own root (the
// repeller), and every R\D component root iterates through neutral leaves
// onto one of its own leaves (the attractor).  Every element has revealing
// representatives; they are found here by unrolling a non-revealing pair
// along the offending orbit until the checker is satisfied.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vlab/common.hpp"
#include "vlab/element.hpp"

namespace vlab {

struct RepComponent {
    Address root;                 // leaf of C, interior in D
    std::vector<Address> leaves;  // domain leaves below root
    Address repeller;
    int return_length = 0;        // steps from repeller back to root
};

struct AttComponent {
    Address root;                 // leaf of C, interior in R
    std::vector<Address> leaves;  // range leaves below root
    Address attractor;
    int return_length = 0;        // steps from root down to attractor
};

struct Chain {
    Address source;                 // non-repeller leaf of a rep component
    std::vector<Address> neutrals;  // intermediate neutral leaves, possibly empty
    Address sink;                   // non-attractor leaf of an att component
};

struct RevealingPair {
    Element element;               // the canonical element represented
    TreePair pairs;                // the (possibly unreduced) revealing expansion
    std::vector<Address> common_leaves;  // leaves of C = D ∩ R
    std::vector<Address> neutral;
    std::vector<RepComponent> rep_components;
    std::vector<AttComponent> att_components;
    std::vector<Chain> chains;
};

namespace detail {

struct PairView {
    std::vector<Address> dom, ran;
    std::map<Address, Address> fwd, bwd;  // the leaf bijection and its inverse
    std::set<Address> dom_interior, ran_interior;
    std::set<Address> dom_leaves, ran_leaves;

    explicit PairView(const TreePair& pairs) {
        for (const auto& [d, r] : pairs) {
            dom.push_back(d);
            ran.push_back(r);
            fwd[d] = r;
            bwd[r] = d;
            dom_leaves.insert(d);
            ran_leaves.insert(r);
            for (std::size_t i = 0; i < d.size(); ++i) dom_interior.insert(d.substr(0, i));
            for (std::size_t i = 0; i < r.size(); ++i) ran_interior.insert(r.substr(0, i));
        }
    }
    bool in_dom_tree(const Address& a) const {
        return dom_interior.count(a) || dom_leaves.count(a);
    }
    bool in_ran_tree(const Address& a) const {
        return ran_interior.count(a) || ran_leaves.count(a);
    }
};

// A non-revealing walk: the component whose condition failed plus the
// edge of the orbit along which to unroll the pair one step.
struct Violation {
    Address expand_leaf;              // domain leaf whose pair gets expanded
    std::vector<Address> shape;       // suffixes of the subtree to attach
};

struct Analysis {
    std::vector<Address> common_leaves, neutral;
    std::vector<RepComponent> reps;
    std::vector<AttComponent> atts;
    std::vector<Chain> chains;
    std::optional<Violation> violation;
};

inline Analysis analyze_pairs(const TreePair& pairs) {
    Analysis out;
    PairView v(pairs);
    std::set<Address> neutral_set;

    // classify the leaves of C
    std::set<Address> cnodes;
    for (const auto& d : v.dom)
        for (std::size_t i = 0; i <= d.size(); ++i) {
            Address a = d.substr(0, i);
            if (v.in_ran_tree(a)) cnodes.insert(a);
        }
    for (const auto& r : v.ran)
        for (std::size_t i = 0; i <= r.size(); ++i) {
            Address a = r.substr(0, i);
            if (v.in_dom_tree(a)) cnodes.insert(a);
        }
    for (const auto& a : cnodes) {
        bool dl = v.dom_leaves.count(a), rl = v.ran_leaves.count(a);
        if (!dl && !rl) continue;  // interior in both
        out.common_leaves.push_back(a);
        if (dl && rl) {
            out.neutral.push_back(a);
            neutral_set.insert(a);
        } else if (rl) {
            RepComponent c;
            c.root = a;
            for (const auto& d : v.dom)
                if (is_prefix(a, d) && d != a) c.leaves.push_back(d);
            out.reps.push_back(std::move(c));
        } else {
            AttComponent c;
            c.root = a;
            for (const auto& r : v.ran)
                if (is_prefix(a, r) && r != a) c.leaves.push_back(r);
            out.atts.push_back(std::move(c));
        }
    }

    auto subtree_suffixes = [](const std::vector<Address>& leaves, const Address& root) {
        std::vector<Address> s;
        for (const auto& l : leaves) s.push_back(l.substr(root.size()));
        return s;
    };

    // repeller condition: walking backwards from each rep root through
    // neutral leaves must end on a leaf of the same component
    for (auto& c : out.reps) {
        Address cur = v.bwd.at(c.root);
        int steps = 1;
        while (neutral_set.count(cur)) {
            cur = v.bwd.at(cur);
            ++steps;
        }
        if (is_prefix(c.root, cur)) {
            c.repeller = cur;
            c.return_length = steps;
        } else {
            out.violation = Violation{v.bwd.at(c.root), subtree_suffixes(c.leaves, c.root)};
            return out;
        }
    }

    // attractor condition: walking forwards from each att root
    for (auto& c : out.atts) {
        Address cur = v.fwd.at(c.root);
        int steps = 1;
        while (neutral_set.count(cur)) {
            cur = v.fwd.at(cur);
            ++steps;
        }
        if (is_prefix(c.root, cur)) {
            c.attractor = cur;
            c.return_length = steps;
        } else {
            out.violation = Violation{c.root, subtree_suffixes(c.leaves, c.root)};
            return out;
        }
    }

    // source-sink chains
    for (const auto& c : out.reps)
        for (const auto& s : c.leaves) {
            if (s == c.repeller) continue;
            Chain ch;
            ch.source = s;
            Address cur = v.fwd.at(s);
            while (neutral_set.count(cur)) {
                ch.neutrals.push_back(cur);
                cur = v.fwd.at(cur);
            }
            ch.sink = cur;
            out.chains.push_back(std::move(ch));
        }
    return out;
}

// Attach the given subtree shape along the pair at `leaf`.
inline TreePair unroll(const TreePair& pairs, const Violation& vio) {
    TreePair out;
    for (const auto& [d, r] : pairs) {
        if (d == vio.expand_leaf) {
            for (const auto& w : vio.shape) out.emplace_back(d + w, r + w);
        } else {
            out.emplace_back(d, r);
        }
    }
    sort_pairs(out);
    return out;
}

}  // namespace detail

inline bool verify_revealing(const RevealingPair& p, std::string* why = nullptr);

/// Find a revealing pair for u by unrolling violations one orbit step at a
/// time.  Termination is enforced by the global iteration cap.
inline RevealingPair make_revealing(const Element& u) {
    TreePair pairs = u.pairs;
    long cap = max_iters();
    for (long iter = 0; iter < cap; ++iter) {
        detail::Analysis a = detail::analyze_pairs(pairs);
        if (!a.violation) {
            RevealingPair p{u,
                            pairs,
                            std::move(a.common_leaves),
                            std::move(a.neutral),
                            std::move(a.reps),
                            std::move(a.atts),
                            std::move(a.chains)};
            std::string why;
            if (!verify_revealing(p, &why))
                throw std::logic_error("make_revealing produced an invalid pair: " + why);
            return p;
        }
        pairs = detail::unroll(pairs, *a.violation);
    }
    throw CapError("make_revealing: iteration cap exceeded on " + format_element(u));
}

/// Structural checker, independent of the walks the constructor performs:
/// re-derives the leaf classification from the raw trees and follows every
/// claimed orbit through node_image of the canonical element.
inline bool verify_revealing(const RevealingPair& p, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    try {
        if (make_element(p.pairs) != p.element) return fail("expansion represents a different element");
    } catch (const std::invalid_argument& e) {
        return fail(std::string("invalid tree pair: ") + e.what());
    }

    detail::PairView v(p.pairs);
    std::set<Address> neutral_set(p.neutral.begin(), p.neutral.end());

    // classification must match the claimed lists exactly
    std::vector<Address> cl, nl;
    std::vector<Address> rep_roots, att_roots;
    for (const auto& d : v.dom)
        for (std::size_t i = 0; i <= d.size(); ++i) {
            Address a = d.substr(0, i);
            if (!v.in_ran_tree(a)) continue;
            bool dl = v.dom_leaves.count(a), rl = v.ran_leaves.count(a);
            if (!dl && !rl) continue;
            if (std::find(cl.begin(), cl.end(), a) != cl.end()) continue;
            cl.push_back(a);
            if (dl && rl) nl.push_back(a);
            else if (rl) rep_roots.push_back(a);
            else att_roots.push_back(a);
        }
    std::sort(cl.begin(), cl.end());
    std::sort(nl.begin(), nl.end());
    std::sort(rep_roots.begin(), rep_roots.end());
    std::sort(att_roots.begin(), att_roots.end());
    auto sorted = [](std::vector<Address> x) { std::sort(x.begin(), x.end()); return x; };
    if (sorted(p.common_leaves) != cl) return fail("common tree leaves mismatch");
    if (sorted(p.neutral) != nl) return fail("neutral leaves mismatch");
    std::vector<Address> claimed_rep, claimed_att;
    for (const auto& c : p.rep_components) claimed_rep.push_back(c.root);
    for (const auto& c : p.att_components) claimed_att.push_back(c.root);
    if (sorted(claimed_rep) != rep_roots) return fail("repelling basin roots mismatch");
    if (sorted(claimed_att) != att_roots) return fail("attracting basin roots mismatch");

    auto step = [&](const Address& n) { return node_image(p.element, n); };

    std::set<Address> sinks_seen;
    for (const auto& c : p.rep_components) {
        std::vector<Address> expect;
        for (const auto& d : v.dom)
            if (is_prefix(c.root, d) && d != c.root) expect.push_back(d);
        if (sorted(c.leaves) != sorted(expect)) return fail("rep component leaves mismatch");
        if (std::find(c.leaves.begin(), c.leaves.end(), c.repeller) == c.leaves.end())
            return fail("repeller not a component leaf");
        if (c.return_length < 1) return fail("bad return length");
        Address cur = c.repeller;
        for (int i = 0; i < c.return_length; ++i) {
            auto nxt = step(cur);
            if (!nxt) return fail("repeller orbit splits");
            cur = *nxt;
            if (i + 1 < c.return_length && !neutral_set.count(cur))
                return fail("repeller orbit leaves the neutral leaves");
        }
        if (cur != c.root) return fail("repeller does not return to its root");
    }
    for (const auto& c : p.att_components) {
        std::vector<Address> expect;
        for (const auto& r : v.ran)
            if (is_prefix(c.root, r) && r != c.root) expect.push_back(r);
        if (sorted(c.leaves) != sorted(expect)) return fail("att component leaves mismatch");
        if (std::find(c.leaves.begin(), c.leaves.end(), c.attractor) == c.leaves.end())
            return fail("attractor not a component leaf");
        if (c.return_length < 1) return fail("bad return length");
        Address cur = c.root;
        for (int i = 0; i < c.return_length; ++i) {
            auto nxt = step(cur);
            if (!nxt) return fail("attractor orbit splits");
            cur = *nxt;
            if (i + 1 < c.return_length && !neutral_set.count(cur))
                return fail("attractor orbit leaves the neutral leaves");
        }
        if (cur != c.attractor) return fail("root does not reach the attractor");
    }

    // chains: exactly the non-repeller rep leaves, ending at non-attractor
    // att leaves, with distinct sinks
    std::vector<Address> sources_expected, sources_claimed;
    for (const auto& c : p.rep_components)
        for (const auto& l : c.leaves)
            if (l != c.repeller) sources_expected.push_back(l);
    for (const auto& ch : p.chains) sources_claimed.push_back(ch.source);
    if (sorted(sources_expected) != sorted(sources_claimed)) return fail("chain sources mismatch");
    for (const auto& ch : p.chains) {
        Address cur = ch.source;
        for (const auto& n : ch.neutrals) {
            auto nxt = step(cur);
            if (!nxt || *nxt != n) return fail("chain walk mismatch");
            if (!neutral_set.count(n)) return fail("chain passes a non-neutral leaf");
            cur = n;
        }
        auto last = step(cur);
        if (!last || *last != ch.sink) return fail("chain sink mismatch");
        bool ok = false;
        for (const auto& c : p.att_components)
            if (std::find(c.leaves.begin(), c.leaves.end(), ch.sink) != c.leaves.end())
                ok = ch.sink != c.attractor;
        if (!ok) return fail("sink is not a non-attractor att leaf");
        if (!sinks_seen.insert(ch.sink).second) return fail("duplicate sink");
    }
    return true;
}

// ---------------------------------------------------------------------------
// Finite orbits
// ---------------------------------------------------------------------------

/// Cycles of the leaf bijection among neutral leaves not visited by any
/// return path or chain.  A cycle of length one is an identity leaf.
inline std::vector<std::vector<Address>> neutral_cycles(const RevealingPair& p) {
    detail::PairView v(p.pairs);
    std::set<Address> visited;
    for (const auto& c : p.rep_components) {
        Address cur = c.repeller;
        for (int i = 0; i + 1 < c.return_length; ++i) {
            cur = v.fwd.at(cur);
            visited.insert(cur);
        }
    }
    for (const auto& c : p.att_components) {
        Address cur = c.root;
        for (int i = 0; i + 1 < c.return_length; ++i) {
            cur = v.fwd.at(cur);
            visited.insert(cur);
        }
    }
    for (const auto& ch : p.chains)
        for (const auto& n : ch.neutrals) visited.insert(n);

    std::vector<std::vector<Address>> cycles;
    for (const auto& n : p.neutral) {
        if (visited.count(n)) continue;
        std::vector<Address> cyc;
        Address cur = n;
        do {
            cyc.push_back(cur);
            visited.insert(cur);
            cur = v.fwd.at(cur);
        } while (cur != n);
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

inline bool has_nontrivial_finite_orbits(const RevealingPair& p) {
    for (const auto& c : p.rep_components)
        if (c.return_length >= 2) return true;
    for (const auto& c : p.att_components)
        if (c.return_length >= 2) return true;
    for (const auto& cyc : neutral_cycles(p))
        if (cyc.size() >= 2) return true;
    return false;
}

inline bool has_nontrivial_finite_orbits(const Element& u) {
    return has_nontrivial_finite_orbits(make_revealing(u));
}

/// Describes one nontrivial finite orbit, for diagnostics.
inline std::string describe_finite_orbit(const RevealingPair& p) {
    for (const auto& c : p.rep_components)
        if (c.return_length >= 2)
            return "repeller return path of length " + std::to_string(c.return_length) +
                   " at " + format_address(c.root);
    for (const auto& c : p.att_components)
        if (c.return_length >= 2)
            return "attractor return path of length " + std::to_string(c.return_length) +
                   " at " + format_address(c.root);
    for (const auto& cyc : neutral_cycles(p))
        if (cyc.size() >= 2) {
            std::string s = "neutral cycle";
            for (const auto& n : cyc) s += " " + format_address(n);
            return s;
        }
    return "none";
}

/// Minimal k >= 1 with u^k free of nontrivial finite orbits.  All finite
/// orbit lengths are cycle lengths or return lengths of a revealing pair,
/// so the lcm works; smaller divisors are re-checked anyway.
inline std::pair<long long, Element> kill_finite_orbits(const Element& u) {
    RevealingPair p = make_revealing(u);
    long long k = 1;
    for (const auto& c : p.rep_components) k = std::lcm(k, (long long)c.return_length);
    for (const auto& c : p.att_components) k = std::lcm(k, (long long)c.return_length);
    for (const auto& cyc : neutral_cycles(p)) k = std::lcm(k, (long long)cyc.size());
    std::vector<long long> divisors;
    for (long long d = 1; d * d <= k; ++d)
        if (k % d == 0) {
            divisors.push_back(d);
            if (d != k / d) divisors.push_back(k / d);
        }
    std::sort(divisors.begin(), divisors.end());
    for (long long d : divisors) {
        Element w = power(u, d);
        if (!has_nontrivial_finite_orbits(w)) return {d, w};
    }
    throw std::logic_error("kill_finite_orbits: no power of the lcm candidate works");
}

/// Finite order, or nullopt for infinite.  An element is torsion exactly
/// when a revealing pair for it has no complementary components.
inline std::optional<long long> order_of(const Element& u) {
    RevealingPair p = make_revealing(u);
    if (!p.rep_components.empty() || !p.att_components.empty()) return std::nullopt;
    long long k = 1;
    for (const auto& cyc : neutral_cycles(p)) k = std::lcm(k, (long long)cyc.size());
    if (power(u, k) != Element::identity())
        throw std::logic_error("order_of: lcm of cycle lengths is not the order");
    for (long long q = 2; q <= k; ++q)
        if (k % q == 0 && power(u, k / q) == Element::identity())
            throw std::logic_error("order_of: order is not minimal");
    return k;
}

// ---------------------------------------------------------------------------
// Important points
// ---------------------------------------------------------------------------

enum class PointKind { repelling, attracting };

struct ImportantPoint {
    CantorPoint point;
    PointKind kind;
    Address basin;  // root of the component carrying the point
    long long log2_slope;  // of u near the point; positive iff repelling
};

namespace detail {

inline void require_no_finite_orbits(const RevealingPair& p, const char* who) {
    if (has_nontrivial_finite_orbits(p))
        throw std::invalid_argument(std::string(who) + ": element admits a nontrivial finite orbit (" +
                                    describe_finite_orbit(p) + ")");
}

}  // namespace detail

inline std::vector<ImportantPoint> important_points(const RevealingPair& p) {
    detail::require_no_finite_orbits(p, "important_points");
    std::vector<ImportantPoint> out;
    for (const auto& c : p.rep_components) {
        // return length 1: the repeller maps straight onto the root
        Address w = c.repeller.substr(c.root.size());
        out.push_back({canonical_point(c.root, w), PointKind::repelling, c.root,
                       (long long)(c.repeller.size() - c.root.size())});
    }
    for (const auto& c : p.att_components) {
        Address w = c.attractor.substr(c.root.size());
        out.push_back({canonical_point(c.root, w), PointKind::attracting, c.root,
                       -(long long)(c.attractor.size() - c.root.size())});
    }
    std::sort(out.begin(), out.end(),
              [](const ImportantPoint& a, const ImportantPoint& b) { return a.point < b.point; });
    return out;
}

inline std::vector<ImportantPoint> important_points(const Element& u) {
    return important_points(make_revealing(u));
}

inline std::vector<CantorPoint> important_point_set(const Element& u) {
    std::vector<CantorPoint> out;
    for (const auto& ip : important_points(u)) out.push_back(ip.point);
    return out;
}

// ---------------------------------------------------------------------------
// Flow graph
// ---------------------------------------------------------------------------

struct FlowGraph {
    std::vector<Address> rep_basins, att_basins;  // sorted component roots
    struct Edge {
        std::size_t rep, att;  // indices into the basin lists
        Chain chain;
    };
    std::vector<Edge> edges;
    struct Part {
        std::vector<Address> rep_basins, att_basins;
        NodeSet support;
    };
    std::vector<Part> components;  // connected components, sorted by least basin
};

inline FlowGraph flow_graph(const RevealingPair& p) {
    detail::require_no_finite_orbits(p, "flow_graph");
    FlowGraph g;
    for (const auto& c : p.rep_components) g.rep_basins.push_back(c.root);
    for (const auto& c : p.att_components) g.att_basins.push_back(c.root);
    std::sort(g.rep_basins.begin(), g.rep_basins.end());
    std::sort(g.att_basins.begin(), g.att_basins.end());

    auto rep_of = [&](const Address& source) {
        for (std::size_t i = 0; i < p.rep_components.size(); ++i) {
            const auto& l = p.rep_components[i].leaves;
            if (std::find(l.begin(), l.end(), source) != l.end())
                return std::size_t(std::find(g.rep_basins.begin(), g.rep_basins.end(),
                                             p.rep_components[i].root) -
                                   g.rep_basins.begin());
        }
        throw std::logic_error("flow_graph: orphan source");
    };
    auto att_of = [&](const Address& sink) {
        for (std::size_t i = 0; i < p.att_components.size(); ++i) {
            const auto& l = p.att_components[i].leaves;
            if (std::find(l.begin(), l.end(), sink) != l.end())
                return std::size_t(std::find(g.att_basins.begin(), g.att_basins.end(),
                                             p.att_components[i].root) -
                                   g.att_basins.begin());
        }
        throw std::logic_error("flow_graph: orphan sink");
    };
    for (const auto& ch : p.chains) g.edges.push_back({rep_of(ch.source), att_of(ch.sink), ch});
    std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
        return a.chain.source < b.chain.source;
    });

    // connected components via union-find over rep ∪ att vertices
    std::size_t n = g.rep_basins.size() + g.att_basins.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : g.edges) {
        std::size_t a = find(e.rep), b = find(g.rep_basins.size() + e.att);
        parent[a] = b;
    }
    std::map<std::size_t, FlowGraph::Part> parts;
    std::map<std::size_t, std::vector<Address>> extra;  // chain neutrals per part
    for (std::size_t i = 0; i < g.rep_basins.size(); ++i)
        parts[find(i)].rep_basins.push_back(g.rep_basins[i]);
    for (std::size_t j = 0; j < g.att_basins.size(); ++j)
        parts[find(g.rep_basins.size() + j)].att_basins.push_back(g.att_basins[j]);
    for (const auto& e : g.edges) {
        auto& x = extra[find(e.rep)];
        x.insert(x.end(), e.chain.neutrals.begin(), e.chain.neutrals.end());
    }
    for (auto& [root, part] : parts) {
        std::vector<Address> nodes = part.rep_basins;
        nodes.insert(nodes.end(), part.att_basins.begin(), part.att_basins.end());
        auto& x = extra[root];
        nodes.insert(nodes.end(), x.begin(), x.end());
        part.support = NodeSet::of(std::move(nodes));
        g.components.push_back(std::move(part));
    }
    std::sort(g.components.begin(), g.components.end(), [](const auto& a, const auto& b) {
        return a.support.nodes < b.support.nodes;
    });
    return g;
}

inline FlowGraph flow_graph(const Element& u) { return flow_graph(make_revealing(u)); }

inline std::vector<NodeSet> components_of_support(const Element& u) {
    std::vector<NodeSet> out;
    for (const auto& part : flow_graph(u).components) out.push_back(part.support);
    return out;
}

/// Deterministic DOT rendering of the flow graph.
inline std::string flow_dot(const FlowGraph& g) {
    std::string out = "digraph flow {\n  rankdir=LR;\n";
    for (const auto& b : g.rep_basins)
        out += "  \"R:" + format_address(b) + "\" [shape=box,label=\"" + format_address(b) + "\"];\n";
    for (const auto& b : g.att_basins)
        out += "  \"A:" + format_address(b) + "\" [shape=oval,label=\"" + format_address(b) + "\"];\n";
    for (const auto& e : g.edges) {
        std::string label = format_address(e.chain.source);
        for (const auto& n : e.chain.neutrals) label += ">" + format_address(n);
        label += ">" + format_address(e.chain.sink);
        out += "  \"R:" + format_address(g.rep_basins[e.rep]) + "\" -> \"A:" +
               format_address(g.att_basins[e.att]) + "\" [label=\"" + label + "\"];\n";
    }
    return out + "}\n";
}

// ---------------------------------------------------------------------------
// Commuting dynamics
// ---------------------------------------------------------------------------

/// A node containing the shared important point p on which the commutator
/// [g,h] acts as the identity, inside both component supports.
inline Address shared_fixed_node(const Element& g, const Element& h, const CantorPoint& p) {
    auto ig = important_point_set(g);
    auto ih = important_point_set(h);
    if (std::find(ig.begin(), ig.end(), p) == ig.end() ||
        std::find(ih.begin(), ih.end(), p) == ih.end())
        throw std::invalid_argument("shared_fixed_node: point is not important for both elements");
    NodeSet cg = support_closure(g), ch = support_closure(h);
    NodeSet comm = support_closure(commutator(g, h));
    std::size_t depth_cap = p.pre.size() + p.per.size() * 40 + 8;
    for (std::size_t k = 0; k <= depth_cap; ++k) {
        Address n = expand(p, k);
        if (contains_node(cg, n) && contains_node(ch, n) && disjoint(comm, NodeSet{{n}}))
            return n;
    }
    throw std::invalid_argument("shared_fixed_node: no node found (preconditions violated?)");
}

/// Minimal nonzero (m, n) with g^m = h^n over the common component X,
/// read off the slopes at a shared important point and then verified.
inline std::pair<long long, long long> common_powers(const Element& g, const Element& h,
                                                     const NodeSet& X) {
    if (commutator(g, h) != Element::identity())
        throw std::invalid_argument("common_powers: elements do not commute");
    auto ig = important_points(g);
    auto ih = important_points(h);
    for (const auto& pg : ig) {
        if (!contains_point(X, pg.point)) continue;
        for (const auto& ph : ih) {
            if (!(ph.point == pg.point)) continue;
            long long d = std::gcd(pg.log2_slope < 0 ? -pg.log2_slope : pg.log2_slope,
                                   ph.log2_slope < 0 ? -ph.log2_slope : ph.log2_slope);
            long long m = ph.log2_slope / d;
            long long n = pg.log2_slope / d;
            if (m < 0) { m = -m; n = -n; }
            Element w = compose(power(g, m), power(h, -n));
            if (disjoint(support_closure(w), X)) return {m, n};
            throw std::invalid_argument("common_powers: slope-matched powers do not agree over X");
        }
    }
    throw std::invalid_argument("common_powers: X is not a common component of support");
}

}  // namespace vlab

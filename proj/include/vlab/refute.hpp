#pragma once

// The improvement algorithm: given commuting alpha, beta and an arbitrary
// gamma in V, produce a word that is nontrivial in Z^2 * Z = <a,b,c | [a,b]>
// yet maps to a torsion element of order dividing six (or dies outright
// along the way).  Either outcome certifies that (alpha, beta | gamma)
// does not generate a copy of Z^2 * Z, and since the steps apply to any
// candidate embedding, no copy exists.
//
// Every transformation of the triple is mirrored on shadow words in
// a, b, c; evaluating a shadow on the original triple must reproduce the
// current element exactly, and that coherence is asserted after every
// step.

#include <json.hpp>

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vlab/common.hpp"
#include "vlab/revealing.hpp"
#include "vlab/zz.hpp"

namespace vlab {

struct Triple {
    Element alpha, beta, gamma;
    ZZWord sa, sb, sc;               // shadows of the current elements
    Element alpha0, beta0, gamma0;   // the original instance

    // cached from step 1 (alpha and beta are fixed afterwards)
    std::vector<NodeSet> alpha_only, beta_only, common;
    std::vector<std::pair<long long, long long>> common_pq;  // alpha^p beta^q = 1 over common[k]
    std::vector<CantorPoint> ab_important;                   // I(alpha) ∪ I(beta)
};

struct StepRecord {
    std::string op;
    std::string detail;
    std::string shadow_c;
    std::size_t gamma_leaves = 0;
    long cleared = -1;  // important points of alpha/beta cleared so far

    nlohmann::json to_json() const {
        nlohmann::json j{{"op", op},
                         {"detail", detail},
                         {"shadow_c", shadow_c},
                         {"gamma_leaves", gamma_leaves}};
        if (cleared >= 0) j["cleared_points"] = cleared;
        return j;
    }
};

struct RefutationCertificate {
    std::string kind;  // "omega" or "trivialized"
    int stage = 0;     // step that produced the witness (4 = omega stage)
    ZZWord witness_word;
    Element witness_element;
    long long order = 0;  // order of the witness element (1 when trivialized)
    std::vector<StepRecord> transcript;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema"] = 1;
        j["kind"] = kind;
        j["stage"] = stage;
        j["witness_word"] = format_zz(witness_word);
        j["witness_element"] = format_element(witness_element);
        j["order"] = order;
        j["transcript"] = nlohmann::json::array();
        for (const auto& s : transcript) j["transcript"].push_back(s.to_json());
        return j;
    }
};

namespace detail {

inline long long small_exp(const BigInt& e, const char* who) {
    if (e > std::numeric_limits<long long>::max() || e < std::numeric_limits<long long>::min())
        throw CapError(std::string(who) + ": shadow exponent out of range");
    return (long long)e;
}

inline Element eval_word(const ZZWord& w, const Element& a, const Element& b,
                         const Element& c) {
    Element out = Element::identity();
    for (const auto& blk : w.blocks) {
        if (blk.is_c) {
            out = compose(out, power(c, small_exp(blk.z, "eval")));
        } else {
            out = compose(out, power(a, small_exp(blk.x, "eval")));
            out = compose(out, power(b, small_exp(blk.y, "eval")));
        }
    }
    return out;
}

inline void assert_coherent(const Triple& t, const char* where) {
    if (eval_word(t.sa, t.alpha0, t.beta0, t.gamma0) != t.alpha ||
        eval_word(t.sb, t.alpha0, t.beta0, t.gamma0) != t.beta ||
        eval_word(t.sc, t.alpha0, t.beta0, t.gamma0) != t.gamma)
        throw std::logic_error(std::string("shadow words lost coherence at ") + where);
}

inline std::vector<CantorPoint> union_points(std::vector<CantorPoint> a,
                                             const std::vector<CantorPoint>& b) {
    for (const auto& p : b)
        if (std::find(a.begin(), a.end(), p) == a.end()) a.push_back(p);
    std::sort(a.begin(), a.end());
    return a;
}

// points of I(alpha) ∪ I(beta) over which gamma currently acts as the
// identity on a neighborhood
inline std::vector<CantorPoint> cleared_points(const Triple& t) {
    std::vector<CantorPoint> out;
    NodeSet cs = support_closure(t.gamma);
    for (const auto& p : t.ab_important)
        if (!contains_point(cs, p)) out.push_back(p);
    return out;
}

inline bool subset_points(const std::vector<CantorPoint>& a,
                          const std::vector<CantorPoint>& b) {
    for (const auto& p : a)
        if (std::find(b.begin(), b.end(), p) == b.end()) return false;
    return true;
}

inline RefutationCertificate trivialized(const Triple& t, int stage,
                                         std::vector<StepRecord> transcript) {
    if (t.sc.trivial())
        throw std::logic_error("refute: shadow of a trivialized gamma reduced to 1");
    RefutationCertificate cert;
    cert.kind = "trivialized";
    cert.stage = stage;
    cert.witness_word = t.sc;
    cert.witness_element = t.gamma;  // the identity
    cert.order = 1;
    cert.transcript = std::move(transcript);
    return cert;
}

// gamma <- gamma^k with k minimal killing finite orbits; true if gamma died
inline bool rekill_gamma(Triple& t, std::vector<StepRecord>& transcript) {
    auto [k, w] = kill_finite_orbits(t.gamma);
    if (k != 1) {
        t.gamma = w;
        t.sc = zz_power(t.sc, k);
        transcript.push_back({"rekill", "gamma raised to power " + std::to_string(k),
                              format_zz(t.sc), t.gamma.leaf_count()});
    }
    assert_coherent(t, "rekill");
    return t.gamma.is_identity();
}

}  // namespace detail

/// Step 1: raise alpha, beta, gamma to their minimal finite-orbit-free
/// powers and cache the component bookkeeping for alpha and beta.
inline std::optional<RefutationCertificate> step1_kill_orbits(
    Triple& t, std::vector<StepRecord>& transcript) {
    auto [ka, wa] = kill_finite_orbits(t.alpha);
    auto [kb, wb] = kill_finite_orbits(t.beta);
    auto [kc, wc] = kill_finite_orbits(t.gamma);
    t.alpha = wa;
    t.beta = wb;
    t.gamma = wc;
    t.sa = zz_power(t.sa, ka);
    t.sb = zz_power(t.sb, kb);
    t.sc = zz_power(t.sc, kc);
    transcript.push_back({"kill_orbits",
                          "exponents (" + std::to_string(ka) + "," + std::to_string(kb) +
                              "," + std::to_string(kc) + ")",
                          format_zz(t.sc), t.gamma.leaf_count()});
    detail::assert_coherent(t, "step1");

    if (t.gamma.is_identity()) return detail::trivialized(t, 1, transcript);

    // components of support of alpha and beta: common ones coincide, the
    // rest are disjoint from the other support entirely
    auto ca = components_of_support(t.alpha);
    auto cb = components_of_support(t.beta);
    NodeSet cs_a = support_closure(t.alpha), cs_b = support_closure(t.beta);
    for (const auto& X : ca) {
        if (std::find(cb.begin(), cb.end(), X) != cb.end()) {
            t.common.push_back(X);
        } else {
            if (!disjoint(X, cs_b))
                throw std::logic_error("step1: component neither shared nor disjoint");
            t.alpha_only.push_back(X);
        }
    }
    for (const auto& Y : cb)
        if (std::find(ca.begin(), ca.end(), Y) == ca.end()) {
            if (!disjoint(Y, cs_a))
                throw std::logic_error("step1: component neither shared nor disjoint");
            t.beta_only.push_back(Y);
        }
    for (const auto& X : t.common) {
        auto [m, n] = common_powers(t.alpha, t.beta, X);
        t.common_pq.emplace_back(m, -n);  // alpha^m beta^{-n} trivial over X
    }
    t.ab_important =
        detail::union_points(important_point_set(t.alpha), important_point_set(t.beta));
    return std::nullopt;
}

/// Step 2: replace gamma by [alpha·beta, gamma] until gamma's important
/// points avoid those of alpha and beta.  Cleared points never return;
/// that monotonicity is asserted on every pass.
inline std::optional<RefutationCertificate> step2_separate_important(
    Triple& t, std::vector<StepRecord>& transcript) {
    long cap = (long)t.ab_important.size() + 4;
    for (long iter = 0; iter <= cap; ++iter) {
        std::vector<CantorPoint> overlap;
        for (const auto& p : important_point_set(t.gamma))
            if (std::find(t.ab_important.begin(), t.ab_important.end(), p) !=
                t.ab_important.end())
                overlap.push_back(p);
        if (overlap.empty()) return std::nullopt;
        if (iter == cap) break;

        auto cleared_before = detail::cleared_points(t);
        t.gamma = commutator(compose(t.alpha, t.beta), t.gamma);
        t.sc = zz_commutator(zz_mul(t.sa, t.sb), t.sc);
        detail::assert_coherent(t, "step2");
        std::string snap_shadow = format_zz(t.sc);
        std::size_t snap_leaves = t.gamma.leaf_count();
        std::size_t pos = transcript.size();
        bool died = t.gamma.is_identity();
        if (!died) died = detail::rekill_gamma(t, transcript);
        auto cleared_after = detail::cleared_points(t);
        transcript.insert(transcript.begin() + pos,
                          {"separate",
                           std::to_string(overlap.size()) + " shared important points",
                           snap_shadow, snap_leaves, (long)cleared_after.size()});
        if (died) return detail::trivialized(t, 2, transcript);
        if (!detail::subset_points(cleared_before, cleared_after))
            throw std::logic_error("step2: a cleared important point re-entered the support");
        if (!detail::subset_points(overlap, cleared_after))
            throw std::logic_error("step2: the shared important points were not cleared");
    }
    throw CapError("step2: iteration cap exceeded");
}

/// Step 3: drive the important points of alpha and beta out of the support
/// of gamma with targeted commutators, shrinking the overlap by at least
/// one point per pass.
inline std::optional<RefutationCertificate> step3_clear_supports(
    Triple& t, std::vector<StepRecord>& transcript) {
    auto overlap = [&] {
        std::vector<CantorPoint> v;
        for (const auto& p : t.ab_important)
            if (apply(t.gamma, p) != p) v.push_back(p);
        return v;
    };
    long cap = (long)t.ab_important.size() + 4;
    for (long iter = 0; iter <= cap; ++iter) {
        auto live = overlap();
        if (live.empty()) {
            // the csupp form of the goal, equivalent after step 2
            NodeSet cs = support_closure(t.gamma);
            for (const auto& p : t.ab_important)
                if (contains_point(cs, p))
                    throw std::logic_error("step3: fixed important point still in csupp");
            return std::nullopt;
        }
        if (iter == cap) break;

        CantorPoint x = live.front();
        CantorPoint y = apply(invert(t.gamma), x);
        long long p = 0, q = 0;
        std::string branch;
        if (!contains_point(support_closure(t.alpha), y)) {
            p = 1;
            q = 0;
            branch = "y off Supp(alpha)";
        } else {
            bool found = false;
            for (std::size_t k = 0; k < t.common.size() && !found; ++k)
                if (contains_point(t.common[k], y)) {
                    p = t.common_pq[k].first;
                    q = t.common_pq[k].second;
                    branch = "y in common component " + format_nodeset(t.common[k]);
                    found = true;
                }
            for (std::size_t k = 0; k < t.alpha_only.size() && !found; ++k)
                if (contains_point(t.alpha_only[k], y)) {
                    p = 0;
                    q = 1;
                    branch = "y in alpha-only component";
                    found = true;
                }
            if (!found) throw std::logic_error("step3: y in csupp(alpha) but in no component");
        }
        Element mover = compose(power(t.alpha, p), power(t.beta, q));
        t.gamma = commutator(mover, t.gamma);
        t.sc = zz_commutator(zz_mul(zz_power(t.sa, p), zz_power(t.sb, q)), t.sc);
        detail::assert_coherent(t, "step3");
        std::string snap_shadow = format_zz(t.sc);
        std::size_t snap_leaves = t.gamma.leaf_count();
        std::size_t pos = transcript.size();
        bool died = t.gamma.is_identity();
        if (!died) died = detail::rekill_gamma(t, transcript);
        transcript.insert(transcript.begin() + pos,
                          {"clear_support",
                           branch + ", (p,q)=(" + std::to_string(p) + "," + std::to_string(q) +
                               "), x=" + format_point(x),
                           snap_shadow, snap_leaves,
                           (long)detail::cleared_points(t).size()});
        if (died) return detail::trivialized(t, 3, transcript);

        if (auto cert = step2_separate_important(t, transcript)) return cert;
        auto after = overlap();
        if (after.size() >= live.size())
            throw std::logic_error("step3: overlap with the important points did not shrink");
    }
    throw CapError("step3: iteration cap exceeded");
}

/// Nonzero (x, y) with alpha^x beta^y throwing the support of gamma off
/// itself inside the supports of alpha and beta.
inline std::pair<long long, long long> find_displacing_pair(const Triple& t) {
    NodeSet cs_g = support_closure(t.gamma);
    NodeSet ab = node_union(support_closure(t.alpha), support_closure(t.beta));
    if (disjoint(cs_g, ab)) return {1, 1};

    // a small (i,j), both nonzero, with alpha^i beta^j nontrivial over
    // every common component
    long long bi = 0, bj = 0;
    for (long long s = 2; s <= 8 && !bi; ++s)
        for (long long i = 1; i < s && !bi; ++i)
            for (long long j : {s - i, i - s}) {
                Element w = compose(power(t.alpha, i), power(t.beta, j));
                bool ok = true;
                for (const auto& X : t.common) ok &= !disjoint(support_closure(w), X);
                if (ok) {
                    bi = i;
                    bj = j;
                    break;
                }
            }
    if (!bi) throw CapError("find_displacing_pair: no nondegenerate direction");

    Element step = compose(power(t.alpha, bi), power(t.beta, bj));
    Element mover = Element::identity();
    long scan_cap = max_iters();
    for (long n = 1; n <= scan_cap; ++n) {
        mover = compose(mover, step);
        NodeSet thrown = image(cs_g, mover);
        if (disjoint(node_intersection(thrown, cs_g), ab)) return {n * bi, n * bj};
    }
    throw CapError("find_displacing_pair: scan cap exceeded");
}

/// omega = [gamma, gamma^{alpha^x beta^y}] with its shadow word.
inline std::pair<Element, ZZWord> build_omega(const Triple& t, long long x, long long y) {
    Element mover = compose(power(t.alpha, x), power(t.beta, y));
    Element theta = conjugate(t.gamma, mover);
    Element omega = commutator(t.gamma, theta);
    ZZWord wmove = zz_mul(zz_power(t.sa, x), zz_power(t.sb, y));
    ZZWord somega = zz_commutator(t.sc, zz_conjugate(t.sc, wmove));
    if (somega.trivial()) throw std::logic_error("build_omega: omega shadow reduced to 1");
    // the support of omega stays inside the two gamma copies
    if (!subset_of(support_closure(omega),
                   node_union(support_closure(t.gamma), image(support_closure(t.gamma), mover))))
        throw std::logic_error("build_omega: support escaped the gamma copies");
    return {omega, somega};
}

/// Run the whole pipeline.  The certificate always carries a word that is
/// nontrivial in Z^2 * Z whose image has order dividing six.
inline RefutationCertificate run_refutation(const Element& alpha, const Element& beta,
                                            const Element& gamma) {
    if (commutator(alpha, beta) != Element::identity())
        throw std::invalid_argument("run_refutation: alpha and beta must commute");
    Triple t;
    t.alpha = t.alpha0 = alpha;
    t.beta = t.beta0 = beta;
    t.gamma = t.gamma0 = gamma;
    t.sa = parse_zz("a");
    t.sb = parse_zz("b");
    t.sc = parse_zz("c");
    std::vector<StepRecord> transcript;

    if (auto cert = step1_kill_orbits(t, transcript)) return *cert;
    if (auto cert = step2_separate_important(t, transcript)) return *cert;
    if (auto cert = step3_clear_supports(t, transcript)) return *cert;

    auto [x, y] = find_displacing_pair(t);
    transcript.push_back({"displace", "(x,y)=(" + std::to_string(x) + "," + std::to_string(y) + ")",
                          format_zz(t.sc), t.gamma.leaf_count()});
    auto [omega, somega] = build_omega(t, x, y);

    RefutationCertificate cert;
    cert.kind = "omega";
    cert.stage = 4;
    cert.witness_word = somega;
    cert.witness_element = omega;
    cert.transcript = std::move(transcript);
    if (detail::eval_word(somega, t.alpha0, t.beta0, t.gamma0) != omega)
        throw std::logic_error("run_refutation: omega shadow lost coherence");
    if (power(omega, 6) != Element::identity())
        throw std::logic_error("run_refutation: omega^6 is not the identity");
    auto ord = order_of(omega);
    if (!ord || (*ord != 1 && *ord != 2 && *ord != 3 && *ord != 6))
        throw std::logic_error("run_refutation: omega order does not divide six");
    cert.order = *ord;
    cert.transcript.push_back({"omega", "order " + std::to_string(*ord),
                               format_zz(somega), omega.leaf_count()});
    return cert;
}

/// Deterministic instance family for tests and the CLI seed mode.
inline std::tuple<Element, Element, Element> refutation_instance(unsigned seed) {
    Element a0 = relabel(x0(), "0");
    Element b1 = relabel(x0(), "1");
    Element gd = g_demo();
    switch (seed % 14) {
        case 0: return {a0, b1, gd};                                     // shared I points
        case 1: return {a0, b1, swap_halves()};                          // torsion gamma
        case 2: return {x0(), power(x0(), 2), power(x0(), 3)};           // abelian triple
        case 3: return {a0, b1, x0()};                                   // gamma across both
        case 4: return {compose(a0, b1), power(relabel(x0(), "0"), 2),   // shared component
                        relabel(gd, "1")};
        case 5: return {x0(), Element::identity(), gd};                  // empty beta
        case 6: return {a0, b1, Element::identity()};                    // trivial gamma
        case 7: return {compose(a0, relabel(gd, "10")), relabel(x0(), "11"), power(gd, 2)};
        case 8: return {a0, power(a0, -2), relabel(swap_halves(), "1")}; // torsion gamma off supp
        case 9: return {relabel(x0(), "00"), relabel(x0(), "01"), gd};  // gamma spills outside
        case 10: return {relabel(x0(), "00"), relabel(x0(), "01"),
                         compose(gd, relabel(x0(), "1"))};
        case 11: {
            // gamma rides a scattered copy of g_demo through alpha's
            // support, producing a genuinely torsion omega
            Element psi = make_element({{"0000", "0000"},
                                        {"00010", "10"},
                                        {"00011", "00011"},
                                        {"001", "001"},
                                        {"01", "01"},
                                        {"10", "00010"},
                                        {"11", "11"}});
            return {relabel(x0(), "000"), relabel(x0(), "001"),
                    conjugate(relabel(gd, "1"), psi)};
        }
        case 12: {
            // two common components with different power ratios; gamma's
            // transient chain region covers a fixed point of alpha, so the
            // support-clearing step must take the common-component branch
            Element phi = make_element({{"000", "111"},
                                        {"111", "000"},
                                        {"001", "001"},
                                        {"01", "01"},
                                        {"10", "10"},
                                        {"110", "110"}});
            return {compose(relabel(x0(), "0"), relabel(x0(), "1")),
                    compose(relabel(power(x0(), 2), "0"), relabel(power(x0(), 3), "1")),
                    conjugate(relabel(conjugate(gd, swap_halves()), "11"), phi)};
        }
        default: {
            std::mt19937_64 rng(1000 + seed);
            std::uniform_int_distribution<int> e(-2, 2);
            Element g = Element::identity();
            for (const Address& p : {Address("00"), Address("01"), Address("1")}) {
                int k = e(rng);
                g = compose(g, relabel(power(x0(), k), p));
            }
            std::vector<Address> leaves{"0", "10", "11"};
            std::shuffle(leaves.begin(), leaves.end(), rng);
            TreePair tp;
            std::vector<Address> sorted{"0", "10", "11"};
            for (int i = 0; i < 3; ++i) tp.emplace_back(sorted[i], leaves[i]);
            Element gamma = compose(g, make_element(tp));
            return {a0, b1, gamma};
        }
    }
}

}  // namespace vlab

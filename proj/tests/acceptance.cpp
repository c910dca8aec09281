// Acceptance suite: one pass/fail line per criterion, exit = number of
// failed criteria.  Every check is exact; a single mismatch fails the
// criterion.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "cli_harness.hpp"
#include "test_support.hpp"
#include "vlab/demonstrative.hpp"
#include "vlab/refute.hpp"
#include "zz_oracle.hpp"

using namespace vlab;

namespace {

struct Checker {
    long checks = 0;
    std::string first_failure;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (!ok && first_failure.empty()) first_failure = what;
    }
};

void criterion1_group_arithmetic(Checker& c) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 1000; ++i) {
        Element a = vt::random_element(rng, 12);
        Element b = vt::random_element(rng, 12);
        Element d = vt::random_element(rng, 12);
        c.require(compose(compose(a, b), d) == compose(a, compose(b, d)), "associativity");
        c.require(compose(a, Element::identity()) == a, "right identity");
        c.require(compose(Element::identity(), a) == a, "left identity");
        c.require(compose(a, invert(a)) == Element::identity(), "right inverse");
        c.require(compose(invert(a), a) == Element::identity(), "left inverse");
        TreePair p = a.pairs;
        for (int j = 0; j < 5; ++j) {
            std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
            p = expand_at(p, pick(rng));
        }
        c.require(make_element(p) == a, "canonical-form confluence");
    }
}

void criterion2_action(Checker& c) {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 500; ++i) {
        Element u = vt::random_element(rng, 12);
        Element v = vt::random_element(rng, 12);
        CantorPoint x = vt::random_point(rng);
        c.require(apply(compose(u, v), x) == apply(v, apply(u, x)), "action compatibility");
        c.require(support_closure(conjugate(u, v)) == image(support_closure(u), v),
                  "support transport");
    }
}

void criterion3_revealing(Checker& c) {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 200; ++i) {
        Element u = vt::random_element(rng, 12);
        RevealingPair p = make_revealing(u);
        std::string why;
        c.require(verify_revealing(p, &why), "verify_revealing: " + why);

        auto [k, w] = kill_finite_orbits(u);
        c.require(!has_nontrivial_finite_orbits(w), "killed power admits finite orbits");
        for (long long d = 1; d < k; ++d)
            if (k % d == 0)
                c.require(has_nontrivial_finite_orbits(power(u, d)),
                          "kill exponent not minimal");

        if (i % 4 == 0) {
            auto pts = important_points(w);
            for (const auto& ip : pts) {
                c.require(apply(w, ip.point) == ip.point, "important point not fixed");
                c.require((ip.kind == PointKind::repelling) == (ip.log2_slope > 0),
                          "slope sign convention");
                c.require(ip.log2_slope != 0, "slope one at an important point");
            }
        }
    }
}

void criterion4_commuting(Checker& c) {
    std::mt19937_64 rng(404);
    auto isect = [](const std::vector<CantorPoint>& a, const std::vector<CantorPoint>& b) {
        std::vector<CantorPoint> out;
        for (const auto& p : a)
            if (std::find(b.begin(), b.end(), p) != b.end()) out.push_back(p);
        std::sort(out.begin(), out.end());
        return out;
    };
    for (int i = 0; i < 100; ++i) {
        auto [g, h] = vt::commuting_pair(rng, i);
        c.require(commutator(g, h) == Element::identity(), "generator pair fails to commute");
        auto ig = important_point_set(g), ih = important_point_set(h);
        NodeSet cg = support_closure(g), ch = support_closure(h);
        auto shared = isect(ig, ih);
        std::vector<CantorPoint> g_in_h, h_in_g;
        for (const auto& p : ig)
            if (contains_point(ch, p)) g_in_h.push_back(p);
        for (const auto& p : ih)
            if (contains_point(cg, p)) h_in_g.push_back(p);
        std::sort(g_in_h.begin(), g_in_h.end());
        std::sort(h_in_g.begin(), h_in_g.end());
        c.require(g_in_h == shared && h_in_g == shared, "important point identity");

        auto compg = components_of_support(g), comph = components_of_support(h);
        NodeSet shared_union;
        for (const auto& X : compg)
            for (const auto& Y : comph) {
                bool equal = X == Y, disj = disjoint(X, Y);
                c.require(equal || disj, "component neither equal nor disjoint");
                if (equal) shared_union = node_union(shared_union, X);
            }
        c.require(node_intersection(cg, ch) == shared_union,
                  "csupp intersection is not the shared-component union");

        for (const auto& X : compg) {
            if (std::find(comph.begin(), comph.end(), X) == comph.end()) continue;
            bool have_point = false;
            for (const auto& p : shared) have_point |= contains_point(X, p);
            if (!have_point) continue;
            auto [m, n] = common_powers(g, h, X);
            c.require(m != 0 && n != 0, "common powers degenerate");
            c.require(disjoint(support_closure(compose(power(g, m), power(h, -n))), X),
                      "common powers do not agree over the component");
        }
    }
}

void criterion5_demonstrative(Checker& c) {
    for (long long k : {2, 3, 5})
        c.require(check_demonstrative(make_cyclic(k)).ok, "cyclic group fails the check");
    c.require(check_demonstrative(make_cyclic_infinite()).ok, "Z fails the check");
    for (int n : {1, 2, 3, 4})
        c.require(check_demonstrative(make_symmetric(n)).ok, "symmetric group fails");

    auto z2 = make_cyclic(2);
    auto zi = make_cyclic_infinite();
    c.require(check_demonstrative(direct_product(z2, z2)).ok, "Z2 x Z2 fails");
    c.require(check_demonstrative(direct_product(make_symmetric(2), zi)).ok, "S2 x Z fails");
    c.require(check_demonstrative(move_node(make_cyclic(3), "1")).ok, "moved Z3 fails");
    c.require(check_demonstrative(move_node(zi, "1")).ok, "moved Z fails");

    auto e1 = free_product_embed(make_cyclic(3), make_cyclic(2));
    c.require(e1.cert.verdict && e1.cert.sampled_words >= 500, "Z3 * Z2 certificate");
    auto e2 = free_product_embed(zi, make_cyclic_infinite());
    c.require(e2.cert.verdict && e2.cert.sampled_words >= 500, "Z * Z certificate");
    auto e3 = free_product_embed(make_symmetric(3), zi);
    c.require(e3.cert.verdict && e3.cert.sampled_words >= 500, "S3 * Z certificate");

    auto [g, h] = z2_star_z2_example();
    c.require(power(g, 2) == Element::identity() && !g.is_identity(), "first involution");
    c.require(power(h, 2) == Element::identity() && !h.is_identity(), "second involution");
    Element prod = compose(g, h);
    c.require(!make_revealing(prod).rep_components.empty(), "product lacks a repeller");
    for (int k = 1; k <= 12; ++k)
        c.require(power(prod, k) != Element::identity(), "product power trivial");
}

void criterion6_zz(Checker& c) {
    vt::ZZOracle oracle;
    std::vector<std::string> frontier{""};
    for (int len = 1; len <= 6; ++len) {
        std::vector<std::string> next;
        for (const auto& w : frontier)
            for (char ch : vt::kZZLetters) next.push_back(w + ch);
        for (const auto& w : next)
            c.require(zz_reduce(w) == vt::zz_blocks_of_irreducible(oracle.normal_form(w)),
                      "reduction disagrees with the oracle on " + w);
        frontier = std::move(next);
    }
    c.require(oracle.confluent, "rewriting oracle not confluent");

    std::mt19937_64 rng(606);
    std::uniform_int_distribution<int> e3(-3, 3), e2(-2, 2), depth(1, 3);
    for (int trial = 0; trial < 200; ++trial) {
        // depth one: nontriviality plus the resultant tail forms
        BigInt i = e3(rng), j = e3(rng), k = e3(rng);
        while (i == 0 && j == 0) { i = e3(rng); j = e3(rng); }
        while (k == 0) k = e3(rng);
        ZZWord t = abc_commutator({{i, j, k}});
        bool tn_trivial = false;
        ZZWord w = vt::zz_random_star_form(rng, t, &tn_trivial);
        c.require(!w.trivial(), "alternating word reduced to 1");
        if (!tn_trivial)
            c.require(ends_in_form_star_star(w, i, j, k) != TailForm::none,
                      "tail does not match the resultant forms");

        // deeper commutators: nontriviality
        std::vector<AbcLevel> levels(depth(rng));
        for (auto& l : levels) {
            do { l.x = e2(rng); l.y = e2(rng); } while (l.x == 0 && l.y == 0);
            do { l.z = e2(rng); } while (l.z == 0);
        }
        ZZWord td = abc_commutator(levels);
        bool deep_trivial = false;
        ZZWord wd = vt::zz_random_star_form(rng, td, &deep_trivial);
        c.require(!wd.trivial(), "alternating word over a deep commutator reduced to 1");
    }
}

void criterion7_refutation(Checker& c) {
    for (unsigned seed = 0; seed < 28; ++seed) {
        auto [a, b, g] = refutation_instance(seed);
        c.require(commutator(a, b) == Element::identity(), "instance does not commute");
        auto cert = run_refutation(a, b, g);  // progress/coherence asserts live inside
        c.require(!cert.witness_word.trivial(), "witness word trivial");
        c.require(power(cert.witness_element, 6) == Element::identity(),
                  "witness element to the sixth is not the identity");
        c.require(cert.order == 1 || cert.order == 2 || cert.order == 3 || cert.order == 6,
                  "witness order does not divide six");
        c.require(detail::eval_word(cert.witness_word, a, b, g) == cert.witness_element,
                  "witness word does not evaluate to the witness element");
    }
}

void criterion8_cli(Checker& c) {
    struct Row {
        std::vector<std::string> args;
        const char* file;
    };
    const char* x0lit = "[0->00,10->01,11->1]";
    const char* gdemolit = "[0->110,100->10,101->0,11->111]";
    std::vector<Row> rows = {
        {{"reduce", "[0->0, 10->10, 11->11]"}, "reduce_identity.txt"},
        {{"mul", x0lit, x0lit}, "mul_x0_x0.txt"},
        {{"inv", x0lit}, "inv_x0.txt"},
        {{"pow", x0lit, "-2"}, "pow_x0_m2.txt"},
        {{"order", x0lit}, "order_x0.txt"},
        {{"order", "[0->1,1->0]"}, "order_swap.txt"},
        {{"apply", x0lit, "(10)"}, "apply_x0.txt"},
        {{"reveal", x0lit}, "reveal_x0.txt"},
        {{"reveal", gdemolit}, "reveal_gdemo.txt"},
        {{"important", x0lit}, "important_x0.txt"},
        {{"flow", x0lit, "--dot"}, "flow_x0.dot"},
        {{"flow", gdemolit, "--dot"}, "flow_gdemo.dot"},
        {{"support", "[00->01,01->00,1->1]"}, "support_leftswap.txt"},
        {{"zz", "reduce", "abAB"}, "zz_reduce_rel.txt"},
        {{"zz", "reduce", "[ab,c]"}, "zz_reduce_comm.txt"},
        {{"zz", "commutator", "1,0,1;0,1,1"}, "zz_commutator.txt"},
        {{"zz", "tail", "[ab,c]", "1", "1", "1"}, "zz_tail_top.txt"},
        {{"refute", "--seed", "2"}, "refute_seed2.txt"},
        {{"refute", "--seed", "11"}, "refute_seed11.txt"},
        {{"make", "cyclic", "2"}, "make_cyclic2.json"},
        {{"make", "sym", "2"}, "make_sym2.json"},
    };
    for (const auto& row : rows) {
        auto r = vt::run_cli(row.args);
        c.require(r.code == 0, std::string("nonzero exit for golden ") + row.file);
        c.require(r.out == vt::golden(row.file), std::string("golden mismatch: ") + row.file);
    }
    c.require(vt::run_cli({"eq", "[0->1,1->0]", "[e->e]"}).code == 1, "false verdict exit");
    c.require(vt::run_cli({"reduce", "[0->00]"}).code == 2, "input error exit");
    c.require(vt::run_cli({"nonsense"}).code == 2, "unknown command exit");
    c.require(vt::run_cli({"order", "[0->1,10->01,11->00]"}, "VLAB_MAX_ITERS=0").code == 3,
              "cap diagnostic exit");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Checker&)> run;
    };
    std::vector<Criterion> criteria = {
        {1, "group arithmetic (1000 random triples, exact)", criterion1_group_arithmetic},
        {2, "action and support transport (500 random triples)", criterion2_action},
        {3, "revealing pairs, orbit elimination, important points (200 random)",
         criterion3_revealing},
        {4, "commuting dynamics on 100 constructed pairs", criterion4_commuting},
        {5, "demonstrative groups and free products", criterion5_demonstrative},
        {6, "Z^2*Z words: exhaustive oracle and alternating forms", criterion6_zz},
        {7, "refutation pipeline on 28 instances", criterion7_refutation},
        {8, "CLI contract and golden files", criterion8_cli},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        Checker c;
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            crit.run(c);
        } catch (const std::exception& e) {
            error = e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        bool ok = error.empty() && c.first_failure.empty();
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  " << crit.id << ". " << crit.name << "  ["
             << c.checks << " checks, " << ms << " ms]";
        if (!ok) line << "  -- " << (error.empty() ? c.first_failure : error);
        std::cout << line.str() << std::endl;
        if (!ok) ++failures;
    }
    if (failures == 0) std::cout << "all criteria passed" << std::endl;
    return failures;
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vlab/cantor.hpp"

using namespace vlab;

namespace {

NodeSet random_nodeset(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(0, 4), len(0, 5), bit(0, 1);
    std::vector<Address> v;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        Address a;
        int l = len(rng);
        for (int j = 0; j < l; ++j) a += char('0' + bit(rng));
        v.push_back(a);
    }
    return NodeSet::of(std::move(v));
}

std::vector<Address> random_antichain(std::mt19937_64& rng, int leaves) {
    std::vector<Address> v{Address{}};
    std::uniform_int_distribution<std::size_t> pick;
    for (int i = 1; i < leaves; ++i) {
        std::size_t k = pick(rng) % v.size();
        Address a = v[k];
        v.erase(v.begin() + k);
        v.push_back(a + '0');
        v.push_back(a + '1');
    }
    return v;
}

}  // namespace

TEST_CASE("complete antichain check", "[cantor]") {
    CHECK(is_complete_antichain({Address{}}));
    CHECK(is_complete_antichain({"0", "10", "11"}));
    CHECK_FALSE(is_complete_antichain({"0", "1", "11"}));
    CHECK_FALSE(is_complete_antichain({"00", "1"}));
    CHECK_FALSE(is_complete_antichain({}));
    CHECK_FALSE(is_complete_antichain({"0", "0", "1"}));

    auto why = diagnose_antichain({"0", "1", "11"});
    REQUIRE(why.has_value());
    CHECK(why->find("'1'") != std::string::npos);
    why = diagnose_antichain({"00", "1"});
    REQUIRE(why.has_value());
    CHECK(why->find("01") != std::string::npos);
    CHECK_FALSE(diagnose_antichain({"00", "01", "1"}).has_value());
}

TEST_CASE("complete antichain agrees with brute force cover counting", "[cantor]") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> leaves(1, 10);
    for (int trial = 0; trial < 200; ++trial) {
        auto L = random_antichain(rng, leaves(rng));
        if (trial % 3 == 1 && !L.empty()) L.pop_back();              // break completeness
        if (trial % 3 == 2) L.push_back(L.front() + Address("0"));   // break prefix-freeness
        std::size_t depth = 0;
        for (auto& a : L) depth = std::max(depth, a.size());
        // every word of max depth must have exactly one prefix in L
        bool brute = !L.empty();
        for (std::size_t w = 0; w < (std::size_t{1} << depth) && brute; ++w) {
            Address word;
            for (std::size_t i = 0; i < depth; ++i) word += char('0' + ((w >> i) & 1));
            int hits = 0;
            for (const auto& a : L)
                if (is_prefix(a, word)) ++hits;
            if (hits != 1) brute = false;
        }
        CHECK(is_complete_antichain(L) == brute);
    }
}

TEST_CASE("point canonicalization", "[cantor]") {
    CHECK(canonical_point("", "11") == CantorPoint{"", "1"});
    CHECK(canonical_point("0", "0") == CantorPoint{"", "0"});
    CHECK(canonical_point("011", "01") == canonical_point("01", "10"));

    // the absorption rule must preserve the expansion
    auto p = canonical_point("01", "10");
    CHECK(expand(p, 40) == expand(CantorPoint{"01", "10"}, 40));

    CHECK(parse_point("1101(10)") == canonical_point("1101", "10"));
    CHECK(parse_point("(1)") == CantorPoint{"", "1"});
    CHECK_THROWS_AS(parse_point("01()"), ParseError);
    CHECK_THROWS_AS(canonical_point("0", ""), std::invalid_argument);
}

TEST_CASE("point canonicalization is idempotent and expansion-preserving", "[cantor]") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> len(0, 6), plen(1, 4), bit(0, 1);
    for (int trial = 0; trial < 500; ++trial) {
        Address pre, per;
        int a = len(rng), b = plen(rng);
        for (int i = 0; i < a; ++i) pre += char('0' + bit(rng));
        for (int i = 0; i < b; ++i) per += char('0' + bit(rng));
        auto p = canonical_point(pre, per);
        CHECK(canonical_point(p.pre, p.per) == p);
        CHECK(expand(p, 60) == expand(CantorPoint{pre, per}, 60));
        // canonical forms decide equality of expansions
        auto q = canonical_point(pre + per, per);
        CHECK(q == p);
    }
}

TEST_CASE("node set canonical form and algebra", "[cantor]") {
    CHECK(NodeSet::of({"00", "01"}) == NodeSet{{"0"}});
    CHECK(NodeSet::of({"0", "00"}) == NodeSet{{"0"}});
    CHECK(NodeSet::of({"00", "01", "1"}) == NodeSet::whole());
    CHECK(NodeSet::of({}).empty());

    CHECK(node_union(NodeSet{{"00"}}, NodeSet{{"01"}}) == NodeSet{{"0"}});
    CHECK(node_intersection(NodeSet{{"0"}}, NodeSet::of({"01", "1"})) == NodeSet{{"01"}});
    CHECK(node_difference(NodeSet{{"0"}}, NodeSet{{"01"}}) == NodeSet{{"00"}});
    CHECK(disjoint(NodeSet{{"00"}}, NodeSet{{"1"}}));
    CHECK_FALSE(disjoint(NodeSet{{"0"}}, NodeSet{{"01"}}));

    CHECK(contains_point(NodeSet{{"10"}}, canonical_point("1", "0")));
    CHECK_FALSE(contains_point(NodeSet{{"10"}}, canonical_point("", "1")));
    CHECK(contains_node(NodeSet::of({"00", "01"}), "0"));
    CHECK_FALSE(contains_node(NodeSet{{"00"}}, "0"));

    CHECK(format_nodeset(NodeSet::whole()) == "{e}");
    CHECK(parse_nodeset("{00, 01}") == NodeSet{{"0"}});
    CHECK(parse_nodeset("{}").empty());
    CHECK_THROWS_AS(parse_nodeset("{0,}"), ParseError);
}

TEST_CASE("node set algebra laws on random sets", "[cantor]") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        NodeSet a = random_nodeset(rng), b = random_nodeset(rng), c = random_nodeset(rng);
        CHECK(node_union(a, b) == node_union(b, a));
        CHECK(node_intersection(a, b) == node_intersection(b, a));
        CHECK(node_union(node_union(a, b), c) == node_union(a, node_union(b, c)));
        CHECK(node_intersection(node_intersection(a, b), c) ==
              node_intersection(a, node_intersection(b, c)));
        // a = (a ∩ b) ∪ (a \ b), disjointly
        auto inter = node_intersection(a, b);
        auto diff = node_difference(a, b);
        CHECK(node_union(inter, diff) == a);
        CHECK(disjoint(inter, diff));
        CHECK(disjoint(a, b) == node_intersection(a, b).empty());
    }
}

TEST_CASE("completion of a prefix-free set", "[cantor]") {
    auto t = complete_antichain_over({"0", "110"});
    CHECK(t == std::vector<Address>{"0", "10", "110", "111"});
    CHECK(is_complete_antichain(t));
    CHECK(complete_antichain_over({}) == std::vector<Address>{Address{}});
}

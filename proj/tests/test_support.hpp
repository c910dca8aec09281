#pragma once

// Shared generators for the property tests.

#include <random>
#include <vector>

#include "vlab/element.hpp"

namespace vt {

using namespace vlab;

inline std::vector<Address> random_antichain(std::mt19937_64& rng, int leaves) {
    std::vector<Address> v{Address{}};
    std::uniform_int_distribution<std::size_t> pick;
    for (int i = 1; i < leaves; ++i) {
        std::size_t k = pick(rng) % v.size();
        Address a = v[k];
        v.erase(v.begin() + k);
        v.push_back(a + '0');
        v.push_back(a + '1');
    }
    std::sort(v.begin(), v.end());
    return v;
}

inline Element random_element(std::mt19937_64& rng, int max_leaves) {
    std::uniform_int_distribution<int> leaves(1, max_leaves);
    int n = leaves(rng);
    auto dom = random_antichain(rng, n);
    auto ran = random_antichain(rng, n);
    std::shuffle(ran.begin(), ran.end(), rng);
    TreePair pairs;
    for (int i = 0; i < n; ++i) pairs.emplace_back(dom[i], ran[i]);
    return make_element(std::move(pairs));
}

inline CantorPoint random_point(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> plen(0, 4), qlen(1, 3), bit(0, 1);
    Address pre, per;
    int a = plen(rng), b = qlen(rng);
    for (int i = 0; i < a; ++i) pre += char('0' + bit(rng));
    for (int i = 0; i < b; ++i) per += char('0' + bit(rng));
    return canonical_point(pre, per);
}

}  // namespace vt

#include "vlab/revealing.hpp"

namespace vt {

// Commuting pairs without nontrivial finite orbits: powers of a common
// element, disjoint supports, and per-prefix mixtures of both.
inline std::pair<Element, Element> commuting_pair(std::mt19937_64& rng, int family) {
    std::uniform_int_distribution<int> exp(-3, 3), small(-2, 2), pick(0, 2);
    auto base = [&](int which) {
        switch (which) {
            case 0: return x0();
            case 1: return g_demo();
            default: {
                Element u = kill_finite_orbits(random_element(rng, 8)).second;
                return u.is_identity() ? x0() : u;
            }
        }
    };
    switch (family % 3) {
        case 0: {  // powers of one element
            Element u = base(pick(rng));
            int i = 0, j = 0;
            while (!i) i = exp(rng);
            while (!j) j = exp(rng);
            return {power(u, i), power(u, j)};
        }
        case 1: {  // fully disjoint supports
            return {relabel(base(pick(rng)), "0"), relabel(base(pick(rng)), "1")};
        }
        default: {  // shared bases under the four depth-two prefixes
            Element g = Element::identity(), h = Element::identity();
            for (const Address& p : {Address("00"), Address("01"), Address("10"), Address("11")}) {
                Element u = base(pick(rng));
                g = compose(g, relabel(power(u, small(rng)), p));
                h = compose(h, relabel(power(u, small(rng)), p));
            }
            return {g, h};
        }
    }
}

}  // namespace vt

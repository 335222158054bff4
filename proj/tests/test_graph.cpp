#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "testutil.hpp"

using namespace gidag;

namespace {

// Running example: 1->2, 1->3, 2->4, 3->4 (1-based), stored 0-based.
Dag diamond_dag() { return Dag::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

Bitset bits(int n, std::initializer_list<int> xs) { return Bitset(n, xs); }

}  // namespace

TEST_CASE("acyclicity") {
    CHECK(is_acyclic(Dag(3)));
    CHECK_FALSE(is_acyclic(Digraph::from_edges(3, {{0, 1}, {1, 2}, {2, 0}})));
    CHECK(is_acyclic(diamond_dag()));

    CHECK(is_acyclic(std::vector<std::vector<int>>{{0, 1}, {0, 0}}));
    CHECK_THROWS_AS(is_acyclic(std::vector<std::vector<int>>{{0, 1}}), GraphError);
    CHECK_THROWS_AS(is_acyclic(std::vector<std::vector<int>>{{1, 0}, {0, 0}}), GraphError);
    CHECK_THROWS_AS(is_acyclic(std::vector<std::vector<int>>{{0, 2}, {0, 0}}), GraphError);
}

TEST_CASE("parents and family") {
    const Dag d = diamond_dag();
    CHECK(d.parents(3) == bits(4, {1, 2}));
    CHECK(d.family(3) == bits(4, {1, 2, 3}));

    const Dag empty(3);
    CHECK(empty.parents(0) == bits(3, {}));
    CHECK(empty.family(0) == bits(3, {0}));

    const Dag complete = Dag::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(complete.parents(2) == bits(3, {0, 1}));

    CHECK_THROWS_AS((void)d.parents(4), QueryError);
}

TEST_CASE("skeleton") {
    const auto single = skeleton(Dag::from_edges(2, {{0, 1}}));
    CHECK(single[0] == bits(2, {1}));
    CHECK(single[1] == bits(2, {0}));

    const auto s = skeleton(diamond_dag());
    CHECK(s[0] == bits(4, {1, 2}));
    CHECK(s[3] == bits(4, {1, 2}));
    CHECK_FALSE(s[1].test(2));

    for (const auto& row : skeleton(Dag(3))) CHECK(row.none());
}

TEST_CASE("v-structures") {
    const auto collider = v_structures(Dag::from_edges(3, {{0, 2}, {1, 2}}));
    REQUIRE(collider.size() == 1);
    CHECK(collider[0] == VStructure{0, 2, 1});

    CHECK(v_structures(Dag::from_edges(3, {{0, 1}, {1, 2}})).empty());

    const auto diamond = v_structures(diamond_dag());
    REQUIRE(diamond.size() == 1);
    CHECK(diamond[0] == VStructure{1, 3, 2});
}

TEST_CASE("v-structures invariant under relabeling round-trip") {
    Rng rng(91, 7);
    for (int rep = 0; rep < 50; ++rep) {
        const int q = 2 + rng.next_int(4);
        const CausalPair s = testutil::random_state(q, 1, 1000 + rep);
        std::vector<int> perm(q);
        for (int i = 0; i < q; ++i) perm[i] = i;
        rng.shuffle(perm);

        Dag relabeled(q);
        for (auto [u, v] : s.dag.edges()) relabeled.add_edge(perm[u], perm[v]);

        std::vector<VStructure> mapped_back;
        std::vector<int> inv(q);
        for (int i = 0; i < q; ++i) inv[perm[i]] = i;
        for (const auto& vs : v_structures(relabeled)) {
            int a = inv[vs.a], b = inv[vs.b];
            if (a > b) std::swap(a, b);
            mapped_back.push_back({a, inv[vs.collider], b});
        }
        std::sort(mapped_back.begin(), mapped_back.end());
        CHECK(mapped_back == v_structures(s.dag));
    }
}

TEST_CASE("d-separation basics") {
    const Dag chain = Dag::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(d_separated(chain, bits(3, {0}), bits(3, {2}), bits(3, {1})));
    CHECK_FALSE(d_separated(chain, bits(3, {0}), bits(3, {2}), bits(3, {})));

    const Dag collider = Dag::from_edges(3, {{0, 2}, {1, 2}});
    CHECK_FALSE(d_separated(collider, bits(3, {0}), bits(3, {1}), bits(3, {2})));
    CHECK(d_separated(collider, bits(3, {0}), bits(3, {1}), bits(3, {})));

    CHECK(d_separated(diamond_dag(), bits(4, {0}), bits(4, {3}), bits(4, {1, 2})));

    CHECK_THROWS_AS(d_separated(chain, bits(3, {0}), bits(3, {0}), bits(3, {})), QueryError);
    CHECK_THROWS_AS(d_separated(chain, bits(3, {}), bits(3, {1}), bits(3, {})), QueryError);
}

TEST_CASE("d-separation agrees with the path enumerator exhaustively") {
    for (int q = 2; q <= 4; ++q) {
        for (const Dag& d : testutil::all_dags(q)) {
            for (int a = 0; a < q; ++a) {
                for (int b = 0; b < q; ++b) {
                    if (b == a) continue;
                    for (int c = 0; c < q; ++c) {
                        if (c == a || c == b) continue;
                        const Bitset sa = bits(q, {a});
                        const Bitset sb = bits(q, {b});
                        const Bitset sc = bits(q, {c});
                        REQUIRE(d_separated(d, sa, sb, sc) == testutil::dsep_bruteforce(d, sa, sb, sc));
                        const Bitset empty(q);
                        REQUIRE(d_separated(d, sa, sb, empty) ==
                                testutil::dsep_bruteforce(d, sa, sb, empty));
                    }
                }
            }
        }
    }
}

TEST_CASE("d-separation agrees with the path enumerator on q = 5" * doctest::timeout(300)) {
    int checked = 0;
    for (const Dag& d : testutil::all_dags(5)) {
        for (int a = 0; a < 5; ++a) {
            for (int b = a + 1; b < 5; ++b) {
                for (int c = 0; c < 5; ++c) {
                    if (c == a || c == b) continue;
                    const Bitset sa = bits(5, {a});
                    const Bitset sb = bits(5, {b});
                    const Bitset sc = bits(5, {c});
                    if (d_separated(d, sa, sb, sc) != testutil::dsep_bruteforce(d, sa, sb, sc)) {
                        ++checked;
                        REQUIRE(false);
                    }
                }
            }
        }
    }
    CHECK(checked == 0);
}

TEST_CASE("sets in d-separation queries") {
    // Multi-vertex sets against the brute-force oracle on random graphs.
    Rng rng(5, 11);
    for (int rep = 0; rep < 200; ++rep) {
        const int q = 4;
        const CausalPair s = testutil::random_state(q, 1, 400 + rep);
        Bitset a(q), b(q), c(q);
        for (int v = 0; v < q; ++v) {
            switch (rng.next_int(4)) {
                case 0: a.set(v); break;
                case 1: b.set(v); break;
                case 2: c.set(v); break;
                default: break;
            }
        }
        if (a.none() || b.none()) continue;
        CHECK(d_separated(s.dag, a, b, c) == testutil::dsep_bruteforce(s.dag, a, b, c));
    }
}

TEST_CASE("topological order is consistent and deterministic") {
    const auto order = topological_order(diamond_dag());
    CHECK(order == std::vector<int>{0, 1, 2, 3});
    for (int rep = 0; rep < 40; ++rep) {
        const CausalPair s = testutil::random_state(5, 1, 7000 + rep);
        const auto ord = topological_order(s.dag);
        std::vector<int> pos(5);
        for (int i = 0; i < 5; ++i) pos[ord[i]] = i;
        for (auto [u, v] : s.dag.edges()) CHECK(pos[u] < pos[v]);
    }
    CHECK_THROWS_AS(topological_order(Digraph::from_edges(2, {{0, 1}, {1, 0}})), GraphError);
}

TEST_CASE("covered edges") {
    CHECK(is_covered(Dag::from_edges(2, {{0, 1}}), 0, 1));
    CHECK_FALSE(is_covered(diamond_dag(), 1, 3));
    CHECK(is_covered(diamond_dag(), 0, 2));
    CHECK_THROWS_AS(is_covered(diamond_dag(), 3, 0), QueryError);
}

TEST_CASE("Markov equivalence: skeleton+v-structures matches d-separation sets (q <= 4)") {
    for (int q = 2; q <= 4; ++q) {
        std::map<std::string, std::string> graphical_to_semantic;
        for (const Dag& d : testutil::all_dags(q)) {
            const CausalPair p{d, InterventionCollection(1, q)};
            const std::string g = graphical_signature(p);
            const std::string s = semantic_signature(p);
            const auto it = graphical_to_semantic.find(g);
            if (it == graphical_to_semantic.end()) {
                graphical_to_semantic.emplace(g, s);
            } else {
                REQUIRE(it->second == s);
            }
        }
        // Injectivity in the other direction: distinct graphical keys must
        // induce distinct semantic keys.
        std::set<std::string> semantic_keys;
        for (const auto& [g, s] : graphical_to_semantic) semantic_keys.insert(s);
        REQUIRE(semantic_keys.size() == graphical_to_semantic.size());
    }
}

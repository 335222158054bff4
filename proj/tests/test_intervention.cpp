#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace gidag;

namespace {

Dag diamond_dag() { return Dag::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

ContextIntervention make_context(int k, int q,
                                 std::vector<std::pair<int, std::vector<int>>> targets) {
    ContextIntervention c(k, q);
    for (auto& [j, parents] : targets) c.set_target(j, Bitset::from_vector(q, parents));
    return c;
}

}  // namespace

TEST_CASE("post-intervention graph replaces target parents") {
    const Dag d = diamond_dag();

    // T = {3}, P_3 = {2} (1-based): 1->2, 2->3, 2->4, 3->4.
    const auto c = make_context(2, 4, {{2, {1}}});
    const Digraph g = post_intervention_graph(d, c);
    CHECK(g == Digraph::from_edges(4, {{0, 1}, {1, 2}, {1, 3}, {2, 3}}));

    const ContextIntervention empty(2, 4);
    CHECK(post_intervention_graph(d, empty) == d);

    // D_3 of the validity figure: the same intervention creates a cycle.
    const Dag d3 = Dag::from_edges(4, {{0, 1}, {2, 0}, {1, 3}, {2, 3}});
    const Digraph g3 = post_intervention_graph(d3, c);
    CHECK(g3.has_edge(1, 2));
    CHECK_FALSE(is_acyclic(g3));
}

TEST_CASE("validity") {
    const Dag d = diamond_dag();
    const auto c = make_context(2, 4, {{2, {1}}});
    CHECK(is_valid(d, c));

    const Dag d3 = Dag::from_edges(4, {{0, 1}, {2, 0}, {1, 3}, {2, 3}});
    CHECK_FALSE(is_valid(d3, c));

    CHECK(is_valid(d3, ContextIntervention(2, 4)));
}

TEST_CASE("validity agrees with independent cycle detection") {
    for (int rep = 0; rep < 200; ++rep) {
        const CausalPair s = testutil::random_state(4, 2, 900 + rep);
        const auto& c = s.interventions.context(2);
        const Digraph g = post_intervention_graph(s.dag, c);
        bool cyclic_by_sort = false;
        try {
            (void)topological_order(g);
        } catch (const GraphError&) {
            cyclic_by_sort = true;
        }
        CHECK(is_valid(s.dag, c) == !cyclic_by_sort);
    }
}

TEST_CASE("augment") {
    const Dag d = diamond_dag();

    // T^(2) = {3}, P^(2) = {1,2}: edges {1->2, 1->3, 2->3, 2->4, 3->4, z->3}.
    const auto c2 = make_context(2, 4, {{2, {0, 1}}});
    const Digraph i2 = augment(d, c2);
    CHECK(i2 == Digraph::from_edges(5, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {4, 2}}));

    // T^(3) = {4}, P^(3) = {1,2,3}: edges {1->2, 1->3, 1->4, 2->4, 3->4, z->4}.
    const auto c3 = make_context(3, 4, {{3, {0, 1, 2}}});
    const Digraph i3 = augment(d, c3);
    CHECK(i3 == Digraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}, {4, 3}}));

    // Observational context: the DAG plus an isolated zeta.
    const Digraph i1 = augment(d, ContextIntervention(1, 4));
    CHECK(i1.parents(4).none());
    CHECK(i1.children(4).none());
    for (auto [u, v] : d.edges()) CHECK(i1.has_edge(u, v));

    // Invalid interventions refuse to augment.
    const Dag d3 = Dag::from_edges(4, {{0, 1}, {2, 0}, {1, 3}, {2, 3}});
    CHECK_THROWS_AS(augment(d3, make_context(2, 4, {{2, {1}}})), ValidityError);
}

TEST_CASE("recover_intervention round trip") {
    const Dag d = diamond_dag();
    const auto c = make_context(2, 4, {{2, {1}}});
    CHECK(recover_intervention(d, augment(d, c), 2) == c);

    // Isolated zeta recovers the empty intervention.
    Digraph idag(5);
    for (auto [u, v] : d.edges()) idag.add_edge(u, v);
    const auto rec = recover_intervention(d, idag, 2);
    CHECK(rec.targets.none());

    const auto c3 = make_context(3, 4, {{3, {0, 1, 2}}});
    const auto rec3 = recover_intervention(d, augment(d, c3), 3);
    CHECK(rec3.targets == Bitset(4, {3}));
    CHECK(rec3.induced_parents[3] == Bitset(4, {0, 1, 2}));

    // Corrupted I-DAG: non-target parents differ from the DAG.
    Digraph bad(5);
    bad.add_edge(1, 0);
    CHECK_THROWS_AS(recover_intervention(d, bad, 2), ValidityError);
}

TEST_CASE("augment/recover round trip exhaustively (q <= 4)") {
    for (int q = 2; q <= 4; ++q) {
        long long checked = 0;
        for (const Dag& d : testutil::all_dags(q)) {
            for (const auto& c : enumerate_context_interventions(d, 2)) {
                const Digraph idag = augment(d, c);
                // zeta's children are exactly the targets.
                Bitset targets_ext(q + 1);
                c.targets.for_each([&](int j) { targets_ext.set(j); });
                CHECK(idag.children(q) == targets_ext);
                CHECK(recover_intervention(d, idag, 2) == c);
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("simultaneously covered edges") {
    const Dag d = diamond_dag();

    // K = 1 reduces to plain coveredness on every edge, q <= 4 exhaustively.
    for (int q = 2; q <= 4; ++q) {
        for (const Dag& dag : testutil::all_dags(q)) {
            const InterventionCollection iv(1, q);
            for (auto [u, v] : dag.edges()) {
                CHECK(is_simultaneously_covered(dag, iv, u, v) == is_covered(dag, u, v));
            }
        }
    }

    // T^(2) = {1,3} with P_1 = {3}: edge 1->3 is simultaneously covered via
    // the both-targets clause, edge 1->2 is not.
    InterventionCollection iv(2, 4);
    iv.context(2) = make_context(2, 4, {{0, {2}}, {2, {}}});
    CHECK(is_simultaneously_covered(d, iv, 0, 2));
    CHECK_FALSE(is_simultaneously_covered(d, iv, 0, 1));

    CHECK_THROWS_AS(is_simultaneously_covered(d, iv, 3, 0), QueryError);
}

TEST_CASE("context intervention invariants") {
    ContextIntervention c(1, 3);
    c.targets.set(0);
    CHECK_THROWS_AS(c.validate(), ValidityError);

    ContextIntervention c2(2, 3);
    CHECK_THROWS_AS(c2.set_target(1, Bitset(3, {1})), ValidityError);

    InterventionCollection iv(2, 3);
    iv.contexts[1].context = 3;  // break contiguity
    CHECK_THROWS_AS(iv.validate(), ValidityError);
}

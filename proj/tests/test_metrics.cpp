#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gidag/metrics.hpp"
#include "testutil.hpp"

using namespace gidag;

namespace {

// Random partially directed graph: each unordered pair none/forward/
// backward/undirected.
Digraph random_pdag(int q, Rng& rng) {
    Digraph g(q);
    for (int u = 0; u < q; ++u) {
        for (int v = u + 1; v < q; ++v) {
            switch (rng.next_int(4)) {
                case 1: g.add_edge(u, v); break;
                case 2: g.add_edge(v, u); break;
                case 3:
                    g.add_edge(u, v);
                    g.add_edge(v, u);
                    break;
                default: break;
            }
        }
    }
    return g;
}

}  // namespace

TEST_CASE("shd basics") {
    const Digraph a = Digraph::from_edges(3, {{0, 1}, {1, 2}});
    CHECK(shd(a, a) == 0);

    Digraph extra = a;
    extra.add_edge(0, 2);
    CHECK(shd(a, extra) == 1);

    const Digraph flipped = Digraph::from_edges(3, {{1, 0}, {1, 2}});
    CHECK(shd(a, flipped) == 1);

    // Directed against undirected on the same skeleton counts one.
    Digraph undirected(3);
    undirected.add_edge(0, 1);
    undirected.add_edge(1, 0);
    undirected.add_edge(1, 2);
    CHECK(shd(a, undirected) == 1);

    CHECK_THROWS_AS(shd(a, Digraph(4)), QueryError);
}

TEST_CASE("shd is a metric on labeled graphs") {
    Rng rng(19, 3);
    for (int rep = 0; rep < 200; ++rep) {
        const Digraph x = random_pdag(4, rng);
        const Digraph y = random_pdag(4, rng);
        const Digraph z = random_pdag(4, rng);
        CHECK(shd(x, y) == shd(y, x));
        CHECK(shd(x, z) <= shd(x, y) + shd(y, z));
        CHECK(shd(x, x) == 0);
    }
}

TEST_CASE("target errors") {
    std::vector<Bitset> truth{Bitset(5, {0, 1})};
    std::vector<Bitset> exact{Bitset(5, {0, 1})};
    CHECK(target_errors(truth, exact) == 0);

    std::vector<Bitset> off_by_two{Bitset(5, {0, 2})};
    CHECK(target_errors(truth, off_by_two) == 2);

    // Disjoint sets of sizes 2 and 3.
    std::vector<Bitset> disjoint{Bitset(5, {2, 3, 4})};
    CHECK(target_errors(truth, disjoint) == 5);

    // Summed across contexts via the collection overload.
    InterventionCollection iv_true(3, 5), iv_est(3, 5);
    iv_true.context(2).set_target(0, Bitset(5, {}));
    iv_est.context(3).set_target(1, Bitset(5, {}));
    CHECK(target_errors(iv_true, iv_est) == 2);
}

TEST_CASE("difference-graph errors") {
    const Digraph g = Digraph::from_edges(4, {{0, 1}, {2, 1}});
    CHECK(diff_graph_errors(g, g) == 0);

    Digraph extra = g;
    extra.add_edge(3, 1);
    CHECK(diff_graph_errors(g, extra) == 1);

    const Digraph other = Digraph::from_edges(4, {{0, 2}, {1, 2}, {3, 2}});
    CHECK(diff_graph_errors(g, other) == 5);
}

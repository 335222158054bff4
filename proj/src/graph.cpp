#include "gidag/graph.hpp"

#include <algorithm>
#include <deque>

namespace gidag {

Digraph Digraph::from_adjacency(const std::vector<std::vector<int>>& adj) {
    const std::size_t q = adj.size();
    if (q == 0) throw GraphError("empty adjacency matrix");
    Digraph g(static_cast<int>(q));
    for (std::size_t i = 0; i < q; ++i) {
        if (adj[i].size() != q) throw GraphError("adjacency matrix is not square");
        for (std::size_t j = 0; j < q; ++j) {
            const int cell = adj[i][j];
            if (cell != 0 && cell != 1) throw GraphError("adjacency entries must be 0/1");
            if (cell == 1) {
                if (i == j) throw GraphError("nonzero diagonal in adjacency matrix");
                g.add_edge(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return g;
}

bool is_acyclic(const Digraph& g) {
    const int q = g.vertex_count();
    std::vector<int> indeg(static_cast<std::size_t>(q));
    std::deque<int> ready;
    for (int v = 0; v < q; ++v) {
        indeg[static_cast<std::size_t>(v)] = g.parents(v).count();
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    int removed = 0;
    while (!ready.empty()) {
        const int u = ready.front();
        ready.pop_front();
        ++removed;
        for (int v = 0; v < q; ++v) {
            if (g.parents(v).test(u) && --indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
        }
    }
    return removed == q;
}

bool is_acyclic(const std::vector<std::vector<int>>& adj) {
    return is_acyclic(Digraph::from_adjacency(adj));
}

std::vector<int> topological_order(const Digraph& g) {
    const int q = g.vertex_count();
    std::vector<int> indeg(static_cast<std::size_t>(q));
    Bitset pending(q);
    for (int v = 0; v < q; ++v) {
        indeg[static_cast<std::size_t>(v)] = g.parents(v).count();
        pending.set(v);
    }
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(q));
    while (static_cast<int>(order.size()) < q) {
        int next = -1;
        for (int v = 0; v < q; ++v) {
            if (pending.test(v) && indeg[static_cast<std::size_t>(v)] == 0) {
                next = v;
                break;
            }
        }
        if (next < 0) throw GraphError("graph contains a directed cycle");
        pending.reset(next);
        order.push_back(next);
        for (int v = 0; v < q; ++v) {
            if (pending.test(v) && g.parents(v).test(next)) --indeg[static_cast<std::size_t>(v)];
        }
    }
    return order;
}

std::vector<Bitset> skeleton(const Digraph& g) {
    const int q = g.vertex_count();
    std::vector<Bitset> s(static_cast<std::size_t>(q), Bitset(q));
    for (int v = 0; v < q; ++v) {
        g.parents(v).for_each([&](int u) {
            s[static_cast<std::size_t>(u)].set(v);
            s[static_cast<std::size_t>(v)].set(u);
        });
    }
    return s;
}

std::vector<VStructure> v_structures(const Digraph& g) {
    const int q = g.vertex_count();
    const auto skel = skeleton(g);
    std::vector<VStructure> out;
    for (int k = 0; k < q; ++k) {
        const auto ps = g.parents(k).to_vector();
        for (std::size_t x = 0; x < ps.size(); ++x) {
            for (std::size_t y = x + 1; y < ps.size(); ++y) {
                const int i = ps[x];
                const int j = ps[y];
                if (!skel[static_cast<std::size_t>(i)].test(j)) out.push_back({i, k, j});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool d_separated(const Digraph& g, const Bitset& a, const Bitset& b, const Bitset& c) {
    if (a.none() || b.none()) throw QueryError("d-separation query needs nonempty A and B");
    if (a.intersects(b) || a.intersects(c) || b.intersects(c)) {
        throw QueryError("d-separation query sets must be disjoint");
    }
    const int q = g.vertex_count();

    // Vertices with a descendant in C (including C itself); colliders on
    // active paths must lie in this set.
    Bitset anc_c = c;
    {
        std::deque<int> frontier;
        c.for_each([&](int v) { frontier.push_back(v); });
        while (!frontier.empty()) {
            const int v = frontier.front();
            frontier.pop_front();
            g.parents(v).for_each([&](int p) {
                if (!anc_c.test(p)) {
                    anc_c.set(p);
                    frontier.push_back(p);
                }
            });
        }
    }

    // State (vertex, direction): kHead means the trail entered along an edge
    // pointing into the vertex, kTail means along an edge leaving it.
    enum Dir { kTail = 0, kHead = 1 };
    std::vector<std::array<bool, 2>> seen(static_cast<std::size_t>(q), {false, false});
    std::deque<std::pair<int, Dir>> queue;

    auto push = [&](int v, Dir d) {
        if (!seen[static_cast<std::size_t>(v)][d]) {
            seen[static_cast<std::size_t>(v)][d] = true;
            if (b.test(v)) return true;
            queue.emplace_back(v, d);
        }
        return false;
    };

    // Source vertices may leave along any incident edge.
    bool connected = false;
    a.for_each([&](int s) {
        if (connected) return;
        g.parents(s).for_each([&](int p) { connected = connected || push(p, kTail); });
        if (connected) return;
        g.children(s).for_each([&](int ch) { connected = connected || push(ch, kHead); });
    });

    while (!connected && !queue.empty()) {
        const auto [v, dir] = queue.front();
        queue.pop_front();
        if (dir == kTail) {
            // v is a non-collider on any continuation; blocked if v in C.
            if (c.test(v)) continue;
            g.parents(v).for_each([&](int p) { connected = connected || push(p, kTail); });
            if (connected) break;
            g.children(v).for_each([&](int ch) { connected = connected || push(ch, kHead); });
        } else {
            // Entering via an edge into v: continuing to a child keeps v a
            // non-collider; continuing to a parent makes v a collider.
            if (!c.test(v)) {
                g.children(v).for_each([&](int ch) { connected = connected || push(ch, kHead); });
            }
            if (!connected && anc_c.test(v)) {
                g.parents(v).for_each([&](int p) { connected = connected || push(p, kTail); });
            }
        }
    }
    return !connected;
}

Bitset descendants(const Digraph& g, int v) {
    Bitset out(g.vertex_count());
    out.set(v);
    std::deque<int> frontier{v};
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop_front();
        g.children(u).for_each([&](int ch) {
            if (!out.test(ch)) {
                out.set(ch);
                frontier.push_back(ch);
            }
        });
    }
    return out;
}

bool is_covered(const Digraph& g, int u, int v) {
    if (!g.has_edge(u, v)) throw QueryError("is_covered: edge not present");
    return g.family(u) == g.parents(v);
}

}  // namespace gidag

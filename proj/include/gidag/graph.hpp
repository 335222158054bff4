#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "gidag/bitset.hpp"
#include "gidag/error.hpp"

namespace gidag {

// Directed graph over vertices {0, ..., q-1}, stored as one parent set per
// vertex. Cycles are representable: post-intervention graphs are built with
// this class and only later checked for acyclicity. Values used as causal
// DAGs are acyclic by contract, enforced at construction boundaries and by
// the validity checks of the intervention and mcmc modules.
class Digraph {
public:
    Digraph() = default;

    explicit Digraph(int q) : q_(q), parents_(static_cast<std::size_t>(q), Bitset(q)) {
        if (q < 1) throw GraphError("vertex count must be >= 1");
    }

    static Digraph from_edges(int q, const std::vector<std::pair<int, int>>& edges) {
        Digraph g(q);
        for (auto [u, v] : edges) g.add_edge(u, v);
        return g;
    }

    // Validates shape: square, 0/1 entries, zero diagonal.
    static Digraph from_adjacency(const std::vector<std::vector<int>>& adj);

    int vertex_count() const { return q_; }

    bool has_edge(int u, int v) const {
        check_vertex(u);
        return parents_[static_cast<std::size_t>(check_vertex(v))].test(u);
    }

    void add_edge(int u, int v) {
        check_vertex(u);
        check_vertex(v);
        if (u == v) throw GraphError("self-loops are not allowed");
        parents_[static_cast<std::size_t>(v)].set(u);
    }

    void remove_edge(int u, int v) {
        check_vertex(u);
        parents_[static_cast<std::size_t>(check_vertex(v))].reset(u);
    }

    const Bitset& parents(int v) const { return parents_[static_cast<std::size_t>(check_vertex(v))]; }

    void set_parents(int v, const Bitset& p) {
        check_vertex(v);
        if (p.test(v)) throw GraphError("vertex cannot parent itself");
        parents_[static_cast<std::size_t>(v)] = p;
    }

    Bitset family(int v) const {
        Bitset f = parents(v);
        f.set(v);
        return f;
    }

    Bitset children(int u) const {
        check_vertex(u);
        Bitset c(q_);
        for (int v = 0; v < q_; ++v) {
            if (v != u && parents_[static_cast<std::size_t>(v)].test(u)) c.set(v);
        }
        return c;
    }

    int edge_count() const {
        int m = 0;
        for (const auto& p : parents_) m += p.count();
        return m;
    }

    // Edges in (u, v) lexicographic order.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(static_cast<std::size_t>(edge_count()));
        for (int u = 0; u < q_; ++u) {
            for (int v = 0; v < q_; ++v) {
                if (v != u && parents_[static_cast<std::size_t>(v)].test(u)) out.emplace_back(u, v);
            }
        }
        return out;
    }

    bool operator==(const Digraph& o) const { return q_ == o.q_ && parents_ == o.parents_; }
    bool operator!=(const Digraph& o) const { return !(*this == o); }

private:
    int check_vertex(int v) const {
        if (v < 0 || v >= q_) throw QueryError("vertex index out of range");
        return v;
    }

    int q_ = 0;
    std::vector<Bitset> parents_;
};

// A value of this alias is an acyclic Digraph by contract.
using Dag = Digraph;

bool is_acyclic(const Digraph& g);

// Shape-validating entry point for raw adjacency input.
bool is_acyclic(const std::vector<std::vector<int>>& adj);

// Kahn's algorithm with ties broken by ascending vertex index, so the order
// is unique and Find-Edge is deterministic. Throws GraphError on a cycle.
std::vector<int> topological_order(const Digraph& g);

// Undirected neighbour sets: s[i] contains j iff i->j or j->i.
std::vector<Bitset> skeleton(const Digraph& g);

// Triple (i, k, j) with i -> k <- j, i and j nonadjacent, canonical i < j.
struct VStructure {
    int a;
    int collider;
    int b;
    bool operator==(const VStructure&) const = default;
    bool operator<(const VStructure& o) const {
        return std::array<int, 3>{a, collider, b} < std::array<int, 3>{o.a, o.collider, o.b};
    }
};

std::vector<VStructure> v_structures(const Digraph& g);

// True iff every path between A and B is blocked by C, via two-state
// (vertex, travel direction) reachability. Throws QueryError when the sets
// overlap or A/B are empty.
bool d_separated(const Digraph& g, const Bitset& a, const Bitset& b, const Bitset& c);

// Descendants of v, including v itself.
Bitset descendants(const Digraph& g, int v);

// Edge u->v is covered iff family(u) == parents(v). Throws QueryError when
// the edge is absent.
bool is_covered(const Digraph& g, int u, int v);

}  // namespace gidag

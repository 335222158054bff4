#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gidag/intervention.hpp"

namespace gidag {

// One covered-edge reversal; context == 1 reverses an observational edge
// (propagating into every context through non-target parent sets), context
// k >= 2 reverses an edge between two targets inside that I-DAG.
struct Reversal {
    int context;
    int u;
    int v;
    bool operator==(const Reversal&) const = default;
};

// Graphical criterion: for every k, the I-DAGs of the two pairs have equal
// skeletons and equal v-structure sets (zeta participates in both).
bool i_markov_equivalent(const CausalPair& p1, const CausalPair& p2);

// Definitional oracle: equality of all d-separation statements within each
// post-intervention DAG plus all (A, C) pairs with A d-separated from
// zeta_k in each I-DAG. Exponential in q; refuses q > 6.
bool semantic_equivalent_oracle(const CausalPair& p1, const CausalPair& p2);

// Byte strings that are equal exactly when the corresponding equivalence
// criterion holds; used to partition large state collections without
// quadratic pair testing.
std::string graphical_signature(const CausalPair& p);
std::string semantic_signature(const CausalPair& p, int max_q = 6);

// Chickering's Find-Edge on two same-skeleton DAGs: v is the first vertex in
// d1's topological order (ties by index) with some oppositely oriented
// incoming edge, u the latest such parent. Throws QueryError when the
// skeletons differ or no edge is reversed.
std::pair<int, int> find_edge(const Digraph& d1, const Digraph& d2);

// Constructive sequence of covered reversals turning p1 into p2: first each
// I-DAG is morphed onto p2's induced parent sets, then the observational DAG
// is morphed by simultaneously covered reversals. Throws QueryError when the
// pairs are not I-Markov equivalent.
std::vector<Reversal> transform_sequence(const CausalPair& p1, const CausalPair& p2);

// All single-reversal moves that stay inside the I-Markov equivalence class:
// simultaneously covered observational edges and covered target-target edges
// of each I-DAG, with the resulting state validity-checked.
std::vector<Reversal> class_moves(const CausalPair& p);

CausalPair apply_reversal(const CausalPair& p, const Reversal& r);

struct EquivalenceClass {
    std::vector<CausalPair> members;
    // Per-context partially directed representative on the q observed
    // vertices: a directed edge is oriented identically in every member, an
    // undirected edge (encoded as a 2-cycle) is reversible within the class.
    std::vector<Digraph> representatives;
};

// Breadth-first closure of class_moves starting from p. Throws CapacityError
// (reporting the partial count) when the class exceeds max_members.
EquivalenceClass enumerate_class(const CausalPair& p, std::size_t max_members = 1000000);

// Canonical text encoding of a state, shared by class deduplication, the
// exact-posterior table and chain state tallies.
std::string encode_state(const CausalPair& p);

}  // namespace gidag

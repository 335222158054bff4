#pragma once

#include <vector>

#include "gidag/graph.hpp"

namespace gidag {

// Targets and induced parent sets of one experimental context. Context 1 is
// observational and has no targets. Entries of induced_parents are
// maintained empty for non-target vertices so states compare canonically.
struct ContextIntervention {
    int context = 1;  // 1-based
    Bitset targets;
    std::vector<Bitset> induced_parents;  // indexed by vertex, meaningful for targets

    ContextIntervention() = default;

    ContextIntervention(int k, int q)
        : context(k), targets(q), induced_parents(static_cast<std::size_t>(q), Bitset(q)) {}

    int vertex_count() const { return targets.size(); }
    bool is_target(int j) const { return targets.test(j); }

    void set_target(int j, const Bitset& parents) {
        if (parents.test(j)) throw ValidityError("induced parent set contains the target itself");
        targets.set(j);
        induced_parents[static_cast<std::size_t>(j)] = parents;
    }

    void unset_target(int j) {
        targets.reset(j);
        induced_parents[static_cast<std::size_t>(j)].clear();
    }

    void validate() const;

    bool operator==(const ContextIntervention&) const = default;
};

// The full collection I = (T, P) across K contexts; element 0 is the
// observational context k = 1.
struct InterventionCollection {
    std::vector<ContextIntervention> contexts;

    InterventionCollection() = default;

    // K contexts over q vertices, all initially empty.
    InterventionCollection(int K, int q) {
        contexts.reserve(static_cast<std::size_t>(K));
        for (int k = 1; k <= K; ++k) contexts.emplace_back(k, q);
    }

    int context_count() const { return static_cast<int>(contexts.size()); }
    int vertex_count() const { return contexts.empty() ? 0 : contexts.front().vertex_count(); }

    const ContextIntervention& context(int k) const {
        if (k < 1 || k > context_count()) throw QueryError("context index out of range");
        return contexts[static_cast<std::size_t>(k - 1)];
    }
    ContextIntervention& context(int k) {
        if (k < 1 || k > context_count()) throw QueryError("context index out of range");
        return contexts[static_cast<std::size_t>(k - 1)];
    }

    void validate() const;

    bool operator==(const InterventionCollection&) const = default;
};

// A DAG together with an intervention collection: the (D, I) pair whose
// posterior the sampler explores.
struct CausalPair {
    Dag dag;
    InterventionCollection interventions;

    bool operator==(const CausalPair&) const = default;
};

// Parent sets of the post-intervention graph D_k: targets use their induced
// parents, all other vertices reference the base DAG.
class ContextView {
public:
    ContextView(const Dag& d, const ContextIntervention& c) : d_(&d), c_(&c) {
        if (d.vertex_count() != c.vertex_count()) {
            throw QueryError("DAG and intervention dimension mismatch");
        }
    }

    int vertex_count() const { return d_->vertex_count(); }

    const Bitset& parents(int j) const {
        return c_->is_target(j) ? c_->induced_parents[static_cast<std::size_t>(j)] : d_->parents(j);
    }

private:
    const Dag* d_;
    const ContextIntervention* c_;
};

// The post-intervention graph D_{T,P}; may contain cycles, acyclicity is
// checked separately by is_valid.
Digraph post_intervention_graph(const Dag& d, const ContextIntervention& c);

bool is_valid(const Dag& d, const ContextIntervention& c);
bool is_valid(const Dag& d, const InterventionCollection& iv);
bool is_valid(const CausalPair& p);

// I-DAG on q+1 vertices: the post-intervention DAG augmented with the
// context vertex zeta_k stored at index q, with edges zeta_k -> j for all
// targets j. Throws ValidityError when the intervention is invalid.
Digraph augment(const Dag& d, const ContextIntervention& c);

// Inverse of augment: reads (T, P) back off an I-DAG. Throws ValidityError
// when the I-DAG is inconsistent with d (zeta with parents, or a non-target
// whose parents differ from the base DAG).
ContextIntervention recover_intervention(const Dag& d, const Digraph& idag, int k);

// Covered test for edge u->v inside the context's I-DAG, with zeta taking
// part in the family/parent-set comparison. False when the edge is absent
// from the post-intervention graph.
bool is_covered_in_idag(const Dag& d, const ContextIntervention& c, int u, int v);

// Edge u->v of d is simultaneously covered iff it is covered in d and, for
// every context k >= 2, it is covered in the I-DAG (zeta included in the
// parent-set comparison) or both endpoints are targets of k.
bool is_simultaneously_covered(const Dag& d, const InterventionCollection& iv, int u, int v);

}  // namespace gidag

#include "gidag/intervention.hpp"

namespace gidag {

void ContextIntervention::validate() const {
    const int q = vertex_count();
    if (context < 1) throw ValidityError("context indices are 1-based");
    if (static_cast<int>(induced_parents.size()) != q) {
        throw ValidityError("induced parent table has wrong size");
    }
    if (context == 1 && targets.any()) {
        throw ValidityError("context 1 is observational and must have no targets");
    }
    for (int j = 0; j < q; ++j) {
        const auto& p = induced_parents[static_cast<std::size_t>(j)];
        if (p.size() != q) throw ValidityError("induced parent set has wrong universe");
        if (!targets.test(j) && p.any()) {
            throw ValidityError("non-target vertex carries an induced parent set");
        }
        if (p.test(j)) throw ValidityError("induced parent set contains the target itself");
    }
}

void InterventionCollection::validate() const {
    if (contexts.empty()) throw ValidityError("intervention collection has no contexts");
    const int q = vertex_count();
    for (int k = 1; k <= context_count(); ++k) {
        const auto& c = context(k);
        if (c.context != k) throw ValidityError("context indices must be contiguous from 1");
        if (c.vertex_count() != q) throw ValidityError("contexts disagree on vertex count");
        c.validate();
    }
}

Digraph post_intervention_graph(const Dag& d, const ContextIntervention& c) {
    ContextView view(d, c);
    const int q = d.vertex_count();
    Digraph g(q);
    for (int j = 0; j < q; ++j) g.set_parents(j, view.parents(j));
    return g;
}

bool is_valid(const Dag& d, const ContextIntervention& c) {
    return is_acyclic(post_intervention_graph(d, c));
}

bool is_valid(const Dag& d, const InterventionCollection& iv) {
    if (d.vertex_count() != iv.vertex_count()) {
        throw QueryError("DAG and intervention dimension mismatch");
    }
    for (const auto& c : iv.contexts) {
        if (!is_valid(d, c)) return false;
    }
    return true;
}

bool is_valid(const CausalPair& p) { return is_valid(p.dag, p.interventions); }

Digraph augment(const Dag& d, const ContextIntervention& c) {
    if (!is_valid(d, c)) throw ValidityError("intervention is not valid for this DAG");
    const int q = d.vertex_count();
    ContextView view(d, c);
    Digraph g(q + 1);
    for (int j = 0; j < q; ++j) {
        view.parents(j).for_each([&](int u) { g.add_edge(u, j); });
        if (c.is_target(j)) g.add_edge(q, j);  // zeta_k -> j
    }
    return g;
}

ContextIntervention recover_intervention(const Dag& d, const Digraph& idag, int k) {
    const int q = d.vertex_count();
    if (idag.vertex_count() != q + 1) throw QueryError("I-DAG must have q+1 vertices");
    const int zeta = q;
    if (idag.parents(zeta).any()) throw ValidityError("corrupted I-DAG: zeta has parents");

    ContextIntervention c(k, q);
    const Bitset targets_ext = idag.children(zeta);
    for (int j = 0; j < q; ++j) {
        Bitset p(q);
        idag.parents(j).for_each([&](int u) {
            if (u != zeta) p.set(u);
        });
        if (targets_ext.test(j)) {
            c.set_target(j, p);
        } else if (p != d.parents(j)) {
            throw ValidityError("corrupted I-DAG: non-target parents differ from the DAG");
        }
    }
    if (k == 1 && c.targets.any()) {
        throw ValidityError("context 1 cannot carry targets");
    }
    return c;
}

// Covered test on the I-DAG without materializing it: zeta is a parent of
// exactly the targets, so its component of the comparison fa(u) == pa(v)
// reduces to equal target membership.
bool is_covered_in_idag(const Dag& d, const ContextIntervention& c, int u, int v) {
    ContextView view(d, c);
    if (!view.parents(v).test(u)) return false;  // edge absent in D_k
    if (c.is_target(u) != c.is_target(v)) return false;
    Bitset fam_u = view.parents(u);
    fam_u.set(u);
    return fam_u == view.parents(v);
}

bool is_simultaneously_covered(const Dag& d, const InterventionCollection& iv, int u, int v) {
    if (!d.has_edge(u, v)) throw QueryError("is_simultaneously_covered: edge not present");
    if (!is_covered(d, u, v)) return false;
    for (int k = 2; k <= iv.context_count(); ++k) {
        const auto& c = iv.context(k);
        const bool both_targets = c.is_target(u) && c.is_target(v);
        if (!both_targets && !is_covered_in_idag(d, c, u, v)) return false;
    }
    return true;
}

}  // namespace gidag

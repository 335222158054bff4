#include "gidag/metrics.hpp"

namespace gidag {

namespace {

enum class EdgeKind { kNone, kForward, kBackward, kUndirected };

EdgeKind classify(const Digraph& g, int u, int v) {
    const bool fwd = g.has_edge(u, v);
    const bool bwd = g.has_edge(v, u);
    if (fwd && bwd) return EdgeKind::kUndirected;
    if (fwd) return EdgeKind::kForward;
    if (bwd) return EdgeKind::kBackward;
    return EdgeKind::kNone;
}

}  // namespace

int shd(const Digraph& g1, const Digraph& g2) {
    const int q = g1.vertex_count();
    if (g2.vertex_count() != q) throw QueryError("shd: graphs differ in size");
    int dist = 0;
    for (int u = 0; u < q; ++u) {
        for (int v = u + 1; v < q; ++v) {
            const EdgeKind a = classify(g1, u, v);
            const EdgeKind b = classify(g2, u, v);
            if (a != b) ++dist;
        }
    }
    return dist;
}

int target_errors(const std::vector<Bitset>& t_true, const std::vector<Bitset>& t_est) {
    if (t_true.size() != t_est.size()) throw QueryError("target lists differ in length");
    int errors = 0;
    for (std::size_t i = 0; i < t_true.size(); ++i) {
        Bitset sym = t_true[i];
        Bitset both = t_true[i];
        sym |= t_est[i];
        both &= t_est[i];
        sym.subtract(both);
        errors += sym.count();
    }
    return errors;
}

int target_errors(const InterventionCollection& iv_true, const InterventionCollection& iv_est) {
    if (iv_true.context_count() != iv_est.context_count()) {
        throw QueryError("collections differ in context count");
    }
    std::vector<Bitset> a, b;
    for (int k = 2; k <= iv_true.context_count(); ++k) {
        a.push_back(iv_true.context(k).targets);
        b.push_back(iv_est.context(k).targets);
    }
    return target_errors(a, b);
}

int diff_graph_errors(const Digraph& g_true, const Digraph& g_est) {
    const int q = g_true.vertex_count();
    if (g_est.vertex_count() != q) throw QueryError("difference graphs differ in size");
    int errors = 0;
    for (int u = 0; u < q; ++u) {
        for (int v = 0; v < q; ++v) {
            if (u != v && g_true.has_edge(u, v) != g_est.has_edge(u, v)) ++errors;
        }
    }
    return errors;
}

}  // namespace gidag

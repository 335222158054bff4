#include "gidag/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace gidag {

namespace {

void check_dimensions(const CausalPair& p1, const CausalPair& p2) {
    if (p1.dag.vertex_count() != p2.dag.vertex_count() ||
        p1.interventions.context_count() != p2.interventions.context_count()) {
        throw QueryError("pairs disagree on vertex or context count");
    }
}

std::string skeleton_vstructure_key(const Digraph& g) {
    std::ostringstream out;
    const auto skel = skeleton(g);
    for (int i = 0; i < g.vertex_count(); ++i) {
        for (int j = i + 1; j < g.vertex_count(); ++j) {
            out << (skel[static_cast<std::size_t>(i)].test(j) ? '1' : '0');
        }
    }
    out << '/';
    for (const auto& vs : v_structures(g)) {
        out << vs.a << ',' << vs.collider << ',' << vs.b << ';';
    }
    return out.str();
}

}  // namespace

bool i_markov_equivalent(const CausalPair& p1, const CausalPair& p2) {
    check_dimensions(p1, p2);
    const int K = p1.interventions.context_count();
    for (int k = 1; k <= K; ++k) {
        const Digraph a = augment(p1.dag, p1.interventions.context(k));
        const Digraph b = augment(p2.dag, p2.interventions.context(k));
        if (skeleton(a) != skeleton(b)) return false;
        if (v_structures(a) != v_structures(b)) return false;
    }
    return true;
}

std::string graphical_signature(const CausalPair& p) {
    std::ostringstream out;
    for (int k = 1; k <= p.interventions.context_count(); ++k) {
        out << skeleton_vstructure_key(augment(p.dag, p.interventions.context(k))) << '#';
    }
    return out.str();
}

std::string semantic_signature(const CausalPair& p, int max_q) {
    const int q = p.dag.vertex_count();
    if (q > max_q) throw CapacityError("semantic signature enumeration limited to q <= " + std::to_string(max_q));
    const int K = p.interventions.context_count();

    std::string sig;
    // One base-4 code per vertex: 0 skip, 1 in A, 2 in B, 3 in C.
    long long n_codes4 = 1;
    for (int i = 0; i < q; ++i) n_codes4 *= 4;
    long long n_codes3 = 1;
    for (int i = 0; i < q; ++i) n_codes3 *= 3;

    for (int k = 1; k <= K; ++k) {
        const Digraph dk = post_intervention_graph(p.dag, p.interventions.context(k));
        for (long long code = 0; code < n_codes4; ++code) {
            Bitset a(q), b(q), c(q);
            long long rest = code;
            for (int i = 0; i < q; ++i) {
                switch (rest % 4) {
                    case 1: a.set(i); break;
                    case 2: b.set(i); break;
                    case 3: c.set(i); break;
                    default: break;
                }
                rest /= 4;
            }
            if (a.none() || b.none()) continue;
            sig.push_back(d_separated(dk, a, b, c) ? '1' : '0');
        }

        // Invariance statements: A d-separated from zeta_k given C.
        const Digraph idag = augment(p.dag, p.interventions.context(k));
        Bitset zeta(q + 1);
        zeta.set(q);
        for (long long code = 0; code < n_codes3; ++code) {
            Bitset a(q + 1), c(q + 1);
            long long rest = code;
            for (int i = 0; i < q; ++i) {
                switch (rest % 3) {
                    case 1: a.set(i); break;
                    case 2: c.set(i); break;
                    default: break;
                }
                rest /= 3;
            }
            if (a.none()) continue;
            sig.push_back(d_separated(idag, a, zeta, c) ? '1' : '0');
        }
        sig.push_back('#');
    }
    return sig;
}

bool semantic_equivalent_oracle(const CausalPair& p1, const CausalPair& p2) {
    check_dimensions(p1, p2);
    return semantic_signature(p1) == semantic_signature(p2);
}

std::pair<int, int> find_edge(const Digraph& d1, const Digraph& d2) {
    if (d1.vertex_count() != d2.vertex_count()) throw QueryError("find_edge: size mismatch");
    if (skeleton(d1) != skeleton(d2)) throw QueryError("find_edge: skeletons differ");
    const int q = d1.vertex_count();
    const auto order = topological_order(d1);
    std::vector<int> rank(static_cast<std::size_t>(q));
    for (int pos = 0; pos < q; ++pos) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos;

    for (int pos = 0; pos < q; ++pos) {
        const int v = order[static_cast<std::size_t>(pos)];
        int best_u = -1;
        d1.parents(v).for_each([&](int u) {
            if (d2.has_edge(v, u)) {
                if (best_u < 0 || rank[static_cast<std::size_t>(u)] > rank[static_cast<std::size_t>(best_u)]) {
                    best_u = u;
                }
            }
        });
        if (best_u >= 0) return {best_u, v};
    }
    throw QueryError("find_edge: no oppositely oriented edge");
}

CausalPair apply_reversal(const CausalPair& p, const Reversal& r) {
    CausalPair out = p;
    if (r.context == 1) {
        if (!out.dag.has_edge(r.u, r.v)) throw QueryError("reversal edge not present in DAG");
        out.dag.remove_edge(r.u, r.v);
        out.dag.add_edge(r.v, r.u);
    } else {
        auto& c = out.interventions.context(r.context);
        if (!c.is_target(r.u) || !c.is_target(r.v)) {
            throw ValidityError("I-DAG reversal requires both endpoints to be targets");
        }
        auto& pv = c.induced_parents[static_cast<std::size_t>(r.v)];
        auto& pu = c.induced_parents[static_cast<std::size_t>(r.u)];
        if (!pv.test(r.u)) throw QueryError("reversal edge not present in I-DAG");
        pv.reset(r.u);
        pu.set(r.v);
    }
    return out;
}

std::vector<Reversal> class_moves(const CausalPair& p) {
    std::vector<Reversal> moves;
    for (auto [u, v] : p.dag.edges()) {
        if (!is_simultaneously_covered(p.dag, p.interventions, u, v)) continue;
        const CausalPair next = apply_reversal(p, {1, u, v});
        if (is_valid(next)) moves.push_back({1, u, v});
    }
    for (int k = 2; k <= p.interventions.context_count(); ++k) {
        const auto& c = p.interventions.context(k);
        c.targets.for_each([&](int v) {
            c.induced_parents[static_cast<std::size_t>(v)].for_each([&](int u) {
                if (!c.is_target(u)) return;
                if (!is_covered_in_idag(p.dag, c, u, v)) return;
                const CausalPair next = apply_reversal(p, {k, u, v});
                if (is_valid(next)) moves.push_back({k, u, v});
            });
        });
    }
    return moves;
}

std::vector<Reversal> transform_sequence(const CausalPair& p1, const CausalPair& p2) {
    if (!i_markov_equivalent(p1, p2)) throw QueryError("pairs are not I-Markov equivalent");

    std::vector<Reversal> seq;
    CausalPair cur = p1;
    const int K = cur.interventions.context_count();

    // Phase 1: morph each context's induced parent sets onto p2's while the
    // observational DAG stays fixed. All reversed edges join two targets.
    for (int k = 2; k <= K; ++k) {
        const Digraph goal = augment(cur.dag, p2.interventions.context(k));
        while (true) {
            const Digraph now = augment(cur.dag, cur.interventions.context(k));
            if (now == goal) break;
            const auto [u, v] = find_edge(now, goal);
            cur = apply_reversal(cur, {k, u, v});
            seq.push_back({k, u, v});
        }
    }

    // Phase 2: morph the observational DAG by simultaneously covered
    // reversals; non-target parent sets follow automatically.
    while (cur.dag != p2.dag) {
        const auto [u, v] = find_edge(cur.dag, p2.dag);
        cur = apply_reversal(cur, {1, u, v});
        seq.push_back({1, u, v});
    }

    if (!(cur == p2)) throw ValidityError("transformation did not reach the target pair");
    return seq;
}

std::string encode_state(const CausalPair& p) {
    std::ostringstream out;
    for (auto [u, v] : p.dag.edges()) out << u << '>' << v << ';';
    for (int k = 2; k <= p.interventions.context_count(); ++k) {
        const auto& c = p.interventions.context(k);
        out << '#';
        c.targets.for_each([&](int j) {
            out << j << ':';
            c.induced_parents[static_cast<std::size_t>(j)].for_each([&](int u) { out << u << ','; });
            out << '|';
        });
    }
    return out.str();
}

EquivalenceClass enumerate_class(const CausalPair& p, std::size_t max_members) {
    if (!is_valid(p)) throw ValidityError("enumerate_class: seed pair is not valid");

    std::unordered_set<std::string> seen;
    std::deque<CausalPair> frontier;
    std::vector<CausalPair> members;

    seen.insert(encode_state(p));
    frontier.push_back(p);
    members.push_back(p);

    while (!frontier.empty()) {
        const CausalPair cur = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& mv : class_moves(cur)) {
            CausalPair next = apply_reversal(cur, mv);
            std::string key = encode_state(next);
            if (seen.insert(std::move(key)).second) {
                if (members.size() >= max_members) {
                    throw CapacityError("equivalence class exceeds cap; partial count " +
                                        std::to_string(members.size()));
                }
                members.push_back(next);
                frontier.push_back(std::move(next));
            }
        }
    }

    std::sort(members.begin(), members.end(), [](const CausalPair& a, const CausalPair& b) {
        return encode_state(a) < encode_state(b);
    });

    EquivalenceClass cls;
    const int q = p.dag.vertex_count();
    const int K = p.interventions.context_count();
    for (int k = 1; k <= K; ++k) {
        Digraph rep(q);
        std::vector<std::vector<int>> cnt(static_cast<std::size_t>(q), std::vector<int>(static_cast<std::size_t>(q), 0));
        for (const auto& m : members) {
            const Digraph dk = post_intervention_graph(m.dag, m.interventions.context(k));
            for (auto [u, v] : dk.edges()) ++cnt[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
        }
        const int n = static_cast<int>(members.size());
        for (int u = 0; u < q; ++u) {
            for (int v = 0; v < q; ++v) {
                if (u == v) continue;
                const int c = cnt[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
                if (c == n) {
                    rep.add_edge(u, v);
                } else if (c > 0) {
                    // Reversible within the class: encode as undirected.
                    rep.add_edge(u, v);
                    rep.add_edge(v, u);
                }
            }
        }
        cls.representatives.push_back(std::move(rep));
    }
    cls.members = std::move(members);
    return cls;
}

}  // namespace gidag

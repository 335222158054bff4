#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "gidag/equivalence.hpp"
#include "gidag/mcmc.hpp"
#include "gidag/posterior.hpp"
#include "gidag/rng.hpp"

// Independent oracles used to freeze expected values. These deliberately
// avoid the implementation paths they check.
namespace testutil {

using namespace gidag;

// Brute-force d-separation: enumerate every simple trail between a vertex of
// A and a vertex of B and apply the blocking rules directly. A trail is
// active given C iff every collider has a descendant in C (itself included)
// and every non-collider lies outside C.
inline bool dsep_bruteforce(const Digraph& g, const Bitset& a, const Bitset& b, const Bitset& c) {
    const int q = g.vertex_count();

    // Vertices with a descendant in C, including C.
    Bitset anc_c = c;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int v = 0; v < q; ++v) {
            if (anc_c.test(v)) continue;
            bool child_in = false;
            g.children(v).for_each([&](int ch) { child_in = child_in || anc_c.test(ch); });
            if (child_in) {
                anc_c.set(v);
                grew = true;
            }
        }
    }

    // path: vertices; dirs[i] true when edge i points forward (path[i] -> path[i+1]).
    std::vector<int> path;
    std::vector<bool> dirs;
    Bitset on_path(q);
    bool connected = false;

    auto blocked_at = [&](std::size_t i) {
        // Internal vertex path[i] with incoming edge dirs[i-1], outgoing dirs[i].
        const int v = path[i];
        const bool collider = dirs[i - 1] && !dirs[i];
        return collider ? !anc_c.test(v) : c.test(v);
    };

    std::function<void(int)> extend = [&](int v) {
        if (connected) return;
        if (b.test(v)) {
            bool active = true;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                if (blocked_at(i)) {
                    active = false;
                    break;
                }
            }
            if (active) connected = true;
            return;
        }
        for (int w = 0; w < q && !connected; ++w) {
            if (on_path.test(w)) continue;
            const bool fwd = g.has_edge(v, w);
            const bool bwd = g.has_edge(w, v);
            for (int use_fwd = 0; use_fwd < 2 && !connected; ++use_fwd) {
                if (use_fwd == 1 && !fwd) continue;
                if (use_fwd == 0 && !bwd) continue;
                path.push_back(w);
                dirs.push_back(use_fwd == 1);
                on_path.set(w);
                // Check the trail is not already dead at the new internal vertex.
                bool dead = false;
                if (path.size() >= 3) dead = blocked_at(path.size() - 2) && !b.test(w);
                // The final vertex check happens on arrival in the b-branch,
                // so only prune strictly internal vertices here.
                if (!dead || b.test(w)) extend(w);
                on_path.reset(w);
                path.pop_back();
                dirs.pop_back();
            }
        }
    };

    a.for_each([&](int s) {
        if (connected) return;
        path.assign(1, s);
        dirs.clear();
        on_path.clear();
        on_path.set(s);
        extend(s);
    });
    return !connected;
}

// All DAGs on q vertices as bit masks over ordered pairs; thin wrapper over
// the library enumeration used where tests want the list locally.
inline std::vector<Dag> all_dags(int q) { return enumerate_dags(q); }

// Brute-force observational operator set: every syntactically possible
// Insert/Delete/Reverse, applied and kept when all K context graphs remain
// acyclic. Deletions are always kept, matching the algorithm.
inline std::vector<Operator> brute_force_obs_ops(const CausalPair& state) {
    const int q = state.dag.vertex_count();
    std::vector<Operator> out;
    for (int u = 0; u < q; ++u) {
        for (int v = 0; v < q; ++v) {
            if (u == v) continue;
            if (state.dag.has_edge(u, v)) {
                out.push_back({OpKind::kDelete, u, v});
                const CausalPair next = apply_operator(state, 1, {OpKind::kReverse, u, v});
                if (is_valid(next)) out.push_back({OpKind::kReverse, u, v});
            } else if (!state.dag.has_edge(v, u)) {
                const CausalPair next = apply_operator(state, 1, {OpKind::kInsert, u, v});
                if (is_valid(next)) out.push_back({OpKind::kInsert, u, v});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Brute-force interventional operator set for context k: the operator
// vocabulary of the sampler (target insertion/removal with its guard,
// parent edits, target-target reversals) filtered by direct apply-and-test
// acyclicity instead of the non-descendant shortcut.
inline std::vector<Operator> brute_force_int_ops(const CausalPair& state, int k) {
    const int q = state.dag.vertex_count();
    const auto& c = state.interventions.context(k);
    std::vector<Operator> out;
    for (int v = 0; v < q; ++v) {
        if (!c.is_target(v)) {
            out.push_back({OpKind::kInsert, kZeta, v});
            continue;
        }
        if (c.induced_parents[static_cast<std::size_t>(v)] == state.dag.parents(v)) {
            out.push_back({OpKind::kDelete, kZeta, v});
        }
        for (int u = 0; u < q; ++u) {
            if (u == v) continue;
            if (c.induced_parents[static_cast<std::size_t>(v)].test(u)) {
                out.push_back({OpKind::kDelete, u, v});
                if (c.is_target(u)) {
                    const CausalPair next = apply_operator(state, k, {OpKind::kReverse, u, v});
                    if (is_valid(next)) out.push_back({OpKind::kReverse, u, v});
                }
            } else {
                const CausalPair next = apply_operator(state, k, {OpKind::kInsert, u, v});
                if (is_valid(next)) out.push_back({OpKind::kInsert, u, v});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Random valid state over q vertices and K contexts, drawn by a short
// proposal-only walk from the empty state.
inline CausalPair random_state(int q, int K, std::uint64_t seed, int walk_steps = 30) {
    CausalPair init{Dag(q), InterventionCollection(K, q)};
    const auto trace = proposal_chain_walk(init, walk_steps, seed);
    return trace.back();
}

// Monte-Carlo estimate of the marginal data distribution
//   p(X) = E_{Omega ~ W_q(a, U)} prod_i N(x_i | 0, Omega^{-1})
// by plain prior sampling (Bartlett decomposition; integer degrees of
// freedom). Returns the estimate and its standard error.
struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

inline McEstimate wishart_marginal_mc(const Eigen::MatrixXd& x, double a, const Eigen::MatrixXd& u,
                                      long long n_draws, std::uint64_t seed) {
    const int q = static_cast<int>(u.rows());
    const int dof = static_cast<int>(a);
    if (static_cast<double>(dof) != a || dof < q) throw std::invalid_argument("integer dof >= q required");

    // W_q(a, U) has density proportional to |W|^{(a-q-1)/2} exp(-tr(UW)/2),
    // i.e. the standard Wishart with scale S = U^{-1}.
    const Eigen::MatrixXd s = u.inverse();
    const Eigen::LLT<Eigen::MatrixXd> llt(s);
    const Eigen::MatrixXd l = llt.matrixL();

    Rng rng(seed, 0x3dc5u);
    const double log2pi = std::log(2.0 * 3.14159265358979323846);

    std::vector<double> loglik(static_cast<std::size_t>(n_draws));
    double max_ll = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd bart(q, q);
    for (long long it = 0; it < n_draws; ++it) {
        bart.setZero();
        for (int i = 0; i < q; ++i) {
            double chi2 = 0.0;
            for (int r = 0; r < dof - i; ++r) {
                const double z = rng.next_gaussian();
                chi2 += z * z;
            }
            bart(i, i) = std::sqrt(chi2);
            for (int j = 0; j < i; ++j) bart(i, j) = rng.next_gaussian();
        }
        const Eigen::MatrixXd lb = l * bart;
        const Eigen::MatrixXd omega = lb * lb.transpose();

        double logdet = 0.0;
        for (int i = 0; i < q; ++i) logdet += 2.0 * std::log(lb(i, i));
        double ll = 0.0;
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            const Eigen::VectorXd xi = x.row(r);
            ll += -0.5 * q * log2pi + 0.5 * logdet - 0.5 * xi.dot(omega * xi);
        }
        loglik[static_cast<std::size_t>(it)] = ll;
        max_ll = std::max(max_ll, ll);
    }

    double mean_w = 0.0;
    for (double ll : loglik) mean_w += std::exp(ll - max_ll);
    mean_w /= static_cast<double>(n_draws);
    double var_w = 0.0;
    for (double ll : loglik) {
        const double d = std::exp(ll - max_ll) - mean_w;
        var_w += d * d;
    }
    var_w /= static_cast<double>(n_draws - 1);

    McEstimate est;
    est.value = std::exp(max_ll) * mean_w;
    est.stderr_ = std::exp(max_ll) * std::sqrt(var_w / static_cast<double>(n_draws));
    return est;
}

// Simpson-rule integral of pi^x (1-pi)^(m-x) Beta(pi | a, b) over [0, 1].
inline double beta_binomial_quadrature(double a, double b, int x, int m, int panels = 20000) {
    const double log_beta_ab = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    auto f = [&](double p) {
        if (p <= 0.0 || p >= 1.0) {
            // Integrand endpoints: finite only when exponents keep them
            // bounded; Simpson weights handle the limit as 0 contribution
            // for the parameter ranges exercised in tests (a, b >= 1).
            const double ea = a + x - 1.0;
            const double eb = b + (m - x) - 1.0;
            if (p <= 0.0) return ea > 0.0 ? 0.0 : (ea == 0.0 ? std::exp(-log_beta_ab) : 0.0);
            return eb > 0.0 ? 0.0 : (eb == 0.0 ? std::exp(-log_beta_ab) : 0.0);
        }
        return std::exp((a + x - 1.0) * std::log(p) + (b + (m - x) - 1.0) * std::log1p(-p) -
                        log_beta_ab);
    };
    const double h = 1.0 / panels;
    double acc = f(0.0) + f(1.0);
    for (int i = 1; i < panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
    return acc * h / 3.0;
}

}  // namespace testutil

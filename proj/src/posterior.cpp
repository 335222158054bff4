#include "gidag/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace gidag {

Tallies::Tallies(int q_in, int K_in)
    : q(q_in),
      K(K_in),
      edge_counts(static_cast<std::size_t>(K_in), Eigen::MatrixXd::Zero(q_in, q_in)),
      target_counts(Eigen::MatrixXd::Zero(q_in, K_in)),
      diff_counts(static_cast<std::size_t>(K_in > 0 ? K_in - 1 : 0), Eigen::MatrixXd::Zero(q_in, q_in)) {}

void Tallies::accumulate(const CausalPair& state) {
    if (state.dag.vertex_count() != q || state.interventions.context_count() != K) {
        throw QueryError("tally dimensions disagree with the state");
    }
    ++s_eff;
    for (int k = 1; k <= K; ++k) {
        const auto& c = state.interventions.context(k);
        const Digraph dk = post_intervention_graph(state.dag, c);
        auto& counts = edge_counts[static_cast<std::size_t>(k - 1)];
        for (auto [u, v] : dk.edges()) counts(u, v) += 1.0;
        if (k >= 2) {
            c.targets.for_each([&](int j) { target_counts(j, k - 1) += 1.0; });
            const Digraph g = difference_graph(state.dag, dk, c.targets);
            auto& dcounts = diff_counts[static_cast<std::size_t>(k - 2)];
            for (auto [u, v] : g.edges()) dcounts(u, v) += 1.0;
        }
    }
}

void Tallies::add(const Tallies& other) {
    if (other.q != q || other.K != K) throw QueryError("cannot pool tallies of different shapes");
    s_eff += other.s_eff;
    for (std::size_t k = 0; k < edge_counts.size(); ++k) edge_counts[k] += other.edge_counts[k];
    target_counts += other.target_counts;
    for (std::size_t k = 0; k < diff_counts.size(); ++k) diff_counts[k] += other.diff_counts[k];
}

bool Tallies::operator==(const Tallies& o) const {
    if (q != o.q || K != o.K || s_eff != o.s_eff) return false;
    for (std::size_t k = 0; k < edge_counts.size(); ++k) {
        if (edge_counts[k] != o.edge_counts[k]) return false;
    }
    if (target_counts != o.target_counts) return false;
    for (std::size_t k = 0; k < diff_counts.size(); ++k) {
        if (diff_counts[k] != o.diff_counts[k]) return false;
    }
    return true;
}

namespace {

void require_samples(const Tallies& t) {
    if (t.s_eff <= 0) throw QueryError("no post-burn-in samples to summarize");
}

}  // namespace

std::vector<Eigen::MatrixXd> edge_ppi(const Tallies& t) {
    require_samples(t);
    std::vector<Eigen::MatrixXd> out;
    out.reserve(t.edge_counts.size());
    for (const auto& m : t.edge_counts) out.push_back(m / static_cast<double>(t.s_eff));
    return out;
}

Eigen::MatrixXd target_probability(const Tallies& t) {
    require_samples(t);
    Eigen::MatrixXd out = t.target_counts / static_cast<double>(t.s_eff);
    out.col(0).setZero();
    return out;
}

std::vector<Eigen::MatrixXd> diff_ppi(const Tallies& t) {
    require_samples(t);
    std::vector<Eigen::MatrixXd> out;
    out.reserve(t.diff_counts.size());
    for (const auto& m : t.diff_counts) out.push_back(m / static_cast<double>(t.s_eff));
    return out;
}

Digraph mpm_graph(const Eigen::MatrixXd& ppi) {
    const int q = static_cast<int>(ppi.rows());
    Digraph g(q);
    for (int u = 0; u < q; ++u) {
        for (int v = 0; v < q; ++v) {
            if (u != v && ppi(u, v) > 0.5) g.add_edge(u, v);
        }
    }
    return g;
}

Bitset mpm_targets(const Eigen::VectorXd& probs) {
    Bitset t(static_cast<int>(probs.size()));
    for (int j = 0; j < probs.size(); ++j) {
        if (probs(j) >= 0.5) t.set(j);
    }
    return t;
}

Digraph difference_graph(const Dag& d1, const Digraph& dk, const Bitset& targets_k) {
    const int q = d1.vertex_count();
    Digraph g(q);
    targets_k.for_each([&](int v) {
        Bitset pa = d1.parents(v);
        pa |= dk.parents(v);
        pa.for_each([&](int u) { g.add_edge(u, v); });
    });
    return g;
}

PosteriorSummary summarize(const Tallies& t) {
    PosteriorSummary s;
    s.edge_ppi = edge_ppi(t);
    s.target_prob = target_probability(t);
    s.diff_ppi = diff_ppi(t);
    for (int k = 1; k <= t.K; ++k) {
        Digraph g = mpm_graph(s.edge_ppi[static_cast<std::size_t>(k - 1)]);
        s.mpm_acyclic.push_back(is_acyclic(g));
        s.mpm.push_back(std::move(g));
        if (k >= 2) {
            s.mpm_target_sets.push_back(mpm_targets(s.target_prob.col(k - 1)));
            s.diff_graphs.push_back(mpm_graph(s.diff_ppi[static_cast<std::size_t>(k - 2)]));
        }
    }
    return s;
}

std::vector<Dag> enumerate_dags(int q) {
    if (q < 1 || q > 5) throw CapacityError("DAG enumeration supported for 1 <= q <= 5");
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < q; ++u) {
        for (int v = 0; v < q; ++v) {
            if (u != v) slots.emplace_back(u, v);
        }
    }
    std::vector<Dag> out;
    const std::uint64_t limit = std::uint64_t{1} << slots.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        // Skip masks with any 2-cycle early.
        Dag d(q);
        bool two_cycle = false;
        for (std::size_t i = 0; i < slots.size() && !two_cycle; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                auto [u, v] = slots[i];
                if (d.has_edge(v, u)) {
                    two_cycle = true;
                } else {
                    d.add_edge(u, v);
                }
            }
        }
        if (!two_cycle && is_acyclic(d)) out.push_back(std::move(d));
    }
    return out;
}

std::vector<ContextIntervention> enumerate_context_interventions(const Dag& d, int k) {
    if (k < 2) throw QueryError("context 1 is observational");
    const int q = d.vertex_count();
    std::vector<ContextIntervention> out;

    for (std::uint64_t tmask = 0; tmask < (std::uint64_t{1} << q); ++tmask) {
        std::vector<int> targets;
        for (int j = 0; j < q; ++j) {
            if (tmask & (std::uint64_t{1} << j)) targets.push_back(j);
        }
        // Odometer over each target's parent-set choices.
        std::vector<std::uint64_t> pmask(targets.size(), 0);
        const std::uint64_t pmax = std::uint64_t{1} << (q - 1);
        while (true) {
            ContextIntervention c(k, q);
            for (std::size_t ti = 0; ti < targets.size(); ++ti) {
                const int j = targets[ti];
                Bitset parents(q);
                int bit = 0;
                for (int u = 0; u < q; ++u) {
                    if (u == j) continue;
                    if (pmask[ti] & (std::uint64_t{1} << bit)) parents.set(u);
                    ++bit;
                }
                c.set_target(j, parents);
            }
            if (is_valid(d, c)) out.push_back(std::move(c));

            std::size_t pos = 0;
            while (pos < targets.size()) {
                if (++pmask[pos] < pmax) break;
                pmask[pos] = 0;
                ++pos;
            }
            if (targets.empty() || pos == targets.size()) break;
        }
    }
    return out;
}

ExactPosterior exact_posterior(const MultiEnvDataset& data, const Hyperparams& h,
                               const PriorHyper& priors, std::size_t max_states) {
    priors.validate();
    const int q = data.q();
    const int K = data.context_count();
    const ScoreEvaluator evaluator(data, h);

    ExactPosterior out;
    std::vector<double> log_weights;

    for (const Dag& d : enumerate_dags(q)) {
        // Per-context valid intervention options, combined by odometer.
        std::vector<std::vector<ContextIntervention>> options;
        for (int k = 2; k <= K; ++k) options.push_back(enumerate_context_interventions(d, k));

        std::vector<std::size_t> pick(options.size(), 0);
        while (true) {
            CausalPair state{d, InterventionCollection(K, q)};
            for (std::size_t i = 0; i < options.size(); ++i) {
                state.interventions.contexts[i + 1] = options[i][pick[i]];
            }
            if (out.states.size() >= max_states) {
                throw CapacityError("exact posterior state space exceeds cap");
            }
            const double lw = evaluator.log_marginal_likelihood(d, state.interventions) +
                              log_prior_joint(d, state.interventions, priors);
            log_weights.push_back(lw);
            out.states.emplace_back(std::move(state), 0.0);

            std::size_t pos = 0;
            while (pos < pick.size()) {
                if (++pick[pos] < options[pos].size()) break;
                pick[pos] = 0;
                ++pos;
            }
            if (pick.empty() || pos == pick.size()) break;
        }
    }

    // Normalize via log-sum-exp.
    double max_lw = -std::numeric_limits<double>::infinity();
    for (double lw : log_weights) max_lw = std::max(max_lw, lw);
    double sum = 0.0;
    for (double lw : log_weights) sum += std::exp(lw - max_lw);
    out.log_normalizer = max_lw + std::log(sum);

    for (std::size_t i = 0; i < out.states.size(); ++i) {
        const double p = std::exp(log_weights[i] - out.log_normalizer);
        out.states[i].second = p;
        out.by_key.emplace(encode_state(out.states[i].first), p);
    }
    return out;
}

double total_variation(const std::map<std::string, long long>& counts, long long total,
                       const ExactPosterior& exact) {
    if (total <= 0) throw QueryError("empty chain in total-variation comparison");
    double tv = 0.0;
    for (const auto& [key, p] : exact.by_key) {
        const auto it = counts.find(key);
        const double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
        tv += std::abs(emp - p);
    }
    for (const auto& [key, cnt] : counts) {
        (void)cnt;
        if (exact.by_key.find(key) == exact.by_key.end()) {
            throw ValidityError("chain visited a state outside the exact table: " + key);
        }
    }
    return 0.5 * tv;
}

}  // namespace gidag

#include "gidag/mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace gidag {

namespace {

// Materialized context graphs D_1..D_K (D_1 is the DAG itself).
std::vector<Digraph> context_graphs(const CausalPair& state) {
    std::vector<Digraph> out;
    out.reserve(static_cast<std::size_t>(state.interventions.context_count()));
    for (int k = 1; k <= state.interventions.context_count(); ++k) {
        out.push_back(post_intervention_graph(state.dag, state.interventions.context(k)));
    }
    return out;
}

bool reverse_edge_valid_everywhere(const CausalPair& state, const std::vector<Digraph>& graphs,
                                   int u, int v) {
    for (int k = 1; k <= state.interventions.context_count(); ++k) {
        const auto& c = state.interventions.context(k);
        const bool v_owned = c.is_target(v);
        const bool u_owned = c.is_target(u);
        if (v_owned && u_owned) continue;  // context graph unaffected
        Digraph g = graphs[static_cast<std::size_t>(k - 1)];
        if (!v_owned) g.remove_edge(u, v);
        if (!u_owned) g.add_edge(v, u);
        if (!is_acyclic(g)) return false;
    }
    return true;
}

}  // namespace

CausalPair apply_operator(const CausalPair& state, int scope, const Operator& op) {
    CausalPair out = state;
    if (scope == 1) {
        if (op.u == kZeta || op.v == kZeta) throw QueryError("zeta operator in observational scope");
        switch (op.kind) {
            case OpKind::kInsert:
                out.dag.add_edge(op.u, op.v);
                break;
            case OpKind::kDelete:
                if (!out.dag.has_edge(op.u, op.v)) throw QueryError("deleting a missing edge");
                out.dag.remove_edge(op.u, op.v);
                break;
            case OpKind::kReverse:
                if (!out.dag.has_edge(op.u, op.v)) throw QueryError("reversing a missing edge");
                out.dag.remove_edge(op.u, op.v);
                out.dag.add_edge(op.v, op.u);
                break;
        }
        return out;
    }

    auto& c = out.interventions.context(scope);
    if (op.u == kZeta) {
        if (op.kind == OpKind::kInsert) {
            if (c.is_target(op.v)) throw QueryError("vertex is already a target");
            c.set_target(op.v, out.dag.parents(op.v));
        } else if (op.kind == OpKind::kDelete) {
            if (!c.is_target(op.v)) throw QueryError("vertex is not a target");
            if (c.induced_parents[static_cast<std::size_t>(op.v)] != out.dag.parents(op.v)) {
                throw QueryError("target deletion requires parents to match the DAG");
            }
            c.unset_target(op.v);
        } else {
            throw QueryError("zeta edges cannot be reversed");
        }
        return out;
    }

    if (!c.is_target(op.v)) throw QueryError("parent edits apply to targets only");
    auto& pv = c.induced_parents[static_cast<std::size_t>(op.v)];
    switch (op.kind) {
        case OpKind::kInsert:
            if (pv.test(op.u)) throw QueryError("induced parent already present");
            pv.set(op.u);
            break;
        case OpKind::kDelete:
            if (!pv.test(op.u)) throw QueryError("induced parent not present");
            pv.reset(op.u);
            break;
        case OpKind::kReverse: {
            if (!c.is_target(op.u)) throw QueryError("I-DAG reversal requires two targets");
            if (!pv.test(op.u)) throw QueryError("induced parent not present");
            pv.reset(op.u);
            c.induced_parents[static_cast<std::size_t>(op.u)].set(op.v);
            break;
        }
    }
    return out;
}

std::vector<Operator> build_operator_set_obs(const CausalPair& state) {
    const int q = state.dag.vertex_count();
    const int K = state.interventions.context_count();
    const auto graphs = context_graphs(state);

    // Descendant sets per context and vertex: Insert(u, v) keeps context k
    // acyclic iff u is not a descendant of v in D_k, and contexts with v
    // targeted are unaffected by the insertion.
    std::vector<std::vector<Bitset>> desc(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        desc[static_cast<std::size_t>(k)].reserve(static_cast<std::size_t>(q));
        for (int v = 0; v < q; ++v) {
            desc[static_cast<std::size_t>(k)].push_back(descendants(graphs[static_cast<std::size_t>(k)], v));
        }
    }

    std::vector<Operator> ops;
    for (int u = 0; u < q; ++u) {
        for (int v = 0; v < q; ++v) {
            if (u == v) continue;
            if (state.dag.has_edge(u, v)) {
                ops.push_back({OpKind::kDelete, u, v});
                if (reverse_edge_valid_everywhere(state, graphs, u, v)) {
                    ops.push_back({OpKind::kReverse, u, v});
                }
            } else if (!state.dag.has_edge(v, u)) {
                bool ok = true;
                for (int k = 1; k <= K && ok; ++k) {
                    if (state.interventions.context(k).is_target(v)) continue;
                    if (desc[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(v)].test(u)) ok = false;
                }
                if (ok) ops.push_back({OpKind::kInsert, u, v});
            }
        }
    }
    return ops;
}

std::vector<Operator> build_operator_set_int(const CausalPair& state, int k) {
    if (k < 2 || k > state.interventions.context_count()) {
        throw QueryError("interventional operators exist for contexts 2..K only");
    }
    const int q = state.dag.vertex_count();
    const auto& c = state.interventions.context(k);
    const Digraph dk = post_intervention_graph(state.dag, c);

    std::vector<Operator> ops;
    for (int v = 0; v < q; ++v) {
        if (!c.is_target(v)) {
            ops.push_back({OpKind::kInsert, kZeta, v});
            continue;
        }
        const Bitset desc_v = descendants(dk, v);
        const Bitset& pv = c.induced_parents[static_cast<std::size_t>(v)];
        for (int u = 0; u < q; ++u) {
            if (u == v || desc_v.test(u)) continue;
            if (pv.test(u)) {
                ops.push_back({OpKind::kDelete, u, v});
                if (c.is_target(u)) {
                    Digraph g = dk;
                    g.remove_edge(u, v);
                    g.add_edge(v, u);
                    if (is_acyclic(g)) ops.push_back({OpKind::kReverse, u, v});
                }
            } else {
                ops.push_back({OpKind::kInsert, u, v});
            }
        }
        if (pv == state.dag.parents(v)) ops.push_back({OpKind::kDelete, kZeta, v});
    }
    return ops;
}

void ChainSettings::validate() const {
    if (iterations < 0) throw ConfigError("iteration count must be nonnegative");
    if (burn_in < 0 || burn_in > iterations) throw ConfigError("burn-in must lie in [0, iterations]");
    if (thin < 1) throw ConfigError("thinning interval must be >= 1");
}

Sampler::Sampler(const ScoreEvaluator& score, const PriorTables& priors, CausalPair init, Rng rng)
    : score_(&score), priors_(&priors), state_(std::move(init)), rng_(rng) {
    state_.interventions.validate();
    if (!is_acyclic(state_.dag)) throw ValidityError("initial DAG contains a cycle");
    if (!is_valid(state_)) throw ValidityError("initial state has an invalid intervention");
    const int q = state_.dag.vertex_count();
    const int K = state_.interventions.context_count();
    node_scores_.resize(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        node_scores_[static_cast<std::size_t>(j)] = score_->node_log_score(state_.dag, state_.interventions, j);
    }
    log_prior_ = priors_->joint(state_.dag, state_.interventions);
    proposals_.assign(static_cast<std::size_t>(K), 0);
    accepts_.assign(static_cast<std::size_t>(K), 0);
    scope_order_.resize(static_cast<std::size_t>(K));
    std::iota(scope_order_.begin(), scope_order_.end(), 1);
}

double Sampler::cached_log_score() const {
    double total = 0.0;
    for (double s : node_scores_) total += s;
    return total;
}

double Sampler::recompute_log_score() const {
    return score_->log_marginal_likelihood(state_.dag, state_.interventions);
}

bool Sampler::mh_step(int scope) {
    const auto ops = scope == 1 ? build_operator_set_obs(state_) : build_operator_set_int(state_, scope);
    if (ops.empty()) return false;  // q = 1 observational scope has no moves
    ++proposals_[static_cast<std::size_t>(scope - 1)];

    const Operator op = ops[static_cast<std::size_t>(rng_.next_int(static_cast<int>(ops.size())))];
    CausalPair proposed = apply_operator(state_, scope, op);
    const auto ops_proposed =
        scope == 1 ? build_operator_set_obs(proposed) : build_operator_set_int(proposed, scope);

    // Node-local score difference: an edit touches v's summand, and u's as
    // well for reversals.
    std::vector<int> affected{op.v};
    if (op.kind == OpKind::kReverse) affected.push_back(op.u);

    double delta_score = 0.0;
    std::vector<double> fresh(affected.size());
    for (std::size_t i = 0; i < affected.size(); ++i) {
        fresh[i] = score_->node_log_score(proposed.dag, proposed.interventions, affected[i]);
        delta_score += fresh[i] - node_scores_[static_cast<std::size_t>(affected[i])];
    }
    const double proposed_prior = priors_->joint(proposed.dag, proposed.interventions);
    const double log_alpha = delta_score + (proposed_prior - log_prior_) +
                             std::log(static_cast<double>(ops.size())) -
                             std::log(static_cast<double>(ops_proposed.size()));

    const double u = rng_.next_double();
    if (!(std::log(u) < log_alpha)) return false;

    state_ = std::move(proposed);
    for (std::size_t i = 0; i < affected.size(); ++i) {
        node_scores_[static_cast<std::size_t>(affected[i])] = fresh[i];
    }
    log_prior_ = proposed_prior;
    ++accepts_[static_cast<std::size_t>(scope - 1)];
    return true;
}

void Sampler::sweep() {
    rng_.shuffle(scope_order_);
    for (int scope : scope_order_) mh_step(scope);
}

ChainOutput run_chain(const MultiEnvDataset& data, const Hyperparams& h, const PriorHyper& priors,
                      const ChainSettings& settings, const CausalPair* init) {
    settings.validate();
    priors.validate();
    const int q = data.q();
    const int K = data.context_count();

    CausalPair start;
    if (init != nullptr) {
        start = *init;
    } else {
        start = CausalPair{Dag(q), InterventionCollection(K, q)};
    }

    const ScoreEvaluator evaluator(data, h);
    const PriorTables tables(q, priors);
    Sampler sampler(evaluator, tables, std::move(start), Rng(settings.seed, settings.stream));

    ChainOutput out;
    out.settings = settings;
    out.tallies = Tallies(q, K);

    for (long long s = 1; s <= settings.iterations; ++s) {
        sampler.sweep();
        if (settings.check_invariants) {
            const double cached = sampler.cached_log_score();
            const double fresh = sampler.recompute_log_score();
            if (std::abs(cached - fresh) > 1e-9) {
                throw NumericError("cached score drifted from full recomputation");
            }
        }
        if (s <= settings.burn_in) continue;
        out.tallies.accumulate(sampler.state());
        if (settings.track_states) ++out.state_counts[encode_state(sampler.state())];
        if (settings.store_samples && (s - settings.burn_in) % settings.thin == 0) {
            out.samples.push_back({s, sampler.state()});
        }
    }

    out.proposals = sampler.proposals();
    out.accepts = sampler.accepts();
    out.final_state = sampler.state();
    return out;
}

std::vector<ChainOutput> run_chains(const MultiEnvDataset& data, const Hyperparams& h,
                                    const PriorHyper& priors, const ChainSettings& settings,
                                    int n_chains, int n_threads) {
    if (n_chains < 1) throw ConfigError("need at least one chain");
    if (n_threads < 1) n_threads = 1;

    std::vector<ChainOutput> outputs(static_cast<std::size_t>(n_chains));
    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int c = next.fetch_add(1);
            if (c >= n_chains) break;
            ChainSettings cs = settings;
            cs.stream = static_cast<std::uint64_t>(c);
            outputs[static_cast<std::size_t>(c)] = run_chain(data, h, priors, cs);
        }
    };

    const int workers = std::min(n_threads, n_chains);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return outputs;
}

Tallies pool_tallies(const std::vector<ChainOutput>& outputs) {
    if (outputs.empty()) throw QueryError("no chain outputs to pool");
    Tallies pooled = outputs.front().tallies;
    for (std::size_t i = 1; i < outputs.size(); ++i) pooled.add(outputs[i].tallies);
    return pooled;
}

std::map<std::string, long long> pool_state_counts(const std::vector<ChainOutput>& outputs) {
    std::map<std::string, long long> pooled;
    for (const auto& o : outputs) {
        for (const auto& [key, cnt] : o.state_counts) pooled[key] += cnt;
    }
    return pooled;
}

std::vector<CausalPair> proposal_chain_walk(const CausalPair& init, long long steps,
                                            std::uint64_t seed) {
    if (!is_valid(init)) throw ValidityError("initial state has an invalid intervention");
    Rng rng(seed, 0x9a1fu);
    const int K = init.interventions.context_count();
    std::vector<int> order(static_cast<std::size_t>(K));
    std::iota(order.begin(), order.end(), 1);

    std::vector<CausalPair> trace{init};
    CausalPair cur = init;
    for (long long s = 0; s < steps; ++s) {
        rng.shuffle(order);
        for (int scope : order) {
            const auto ops = scope == 1 ? build_operator_set_obs(cur) : build_operator_set_int(cur, scope);
            if (ops.empty()) continue;
            const Operator op = ops[static_cast<std::size_t>(rng.next_int(static_cast<int>(ops.size())))];
            cur = apply_operator(cur, scope, op);
            trace.push_back(cur);
        }
    }
    return trace;
}

}  // namespace gidag

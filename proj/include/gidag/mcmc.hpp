#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gidag/posterior.hpp"
#include "gidag/rng.hpp"

namespace gidag {

enum class OpKind { kInsert, kDelete, kReverse };

// Sentinel endpoint for the context vertex zeta_k.
inline constexpr int kZeta = -1;

struct Operator {
    OpKind kind;
    int u;
    int v;
    bool operator==(const Operator&) const = default;
    bool operator<(const Operator& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (u != o.u) return u < o.u;
        return v < o.v;
    }
};

// Scope 1 edits the observational DAG (propagating into every context's
// graph through non-target parent sets); scope k >= 2 edits (T, P) of that
// context. Insert(zeta, v) initializes the induced parents to pa_D(v), the
// unique choice making Delete(zeta, v)'s guard its exact inverse.
CausalPair apply_operator(const CausalPair& state, int scope, const Operator& op);

// All valid observational operators: every deletion, plus reversals and
// insertions that keep all K context graphs acyclic.
std::vector<Operator> build_operator_set_obs(const CausalPair& state);

// All valid context-k operators: target insertion for non-targets; for each
// target, deletions, non-descendant insertions and valid target-target
// reversals of its induced parents; target deletion when the induced
// parents coincide with the DAG parents. The target-deletion operator is
// emitted once per target so the proposal stays uniform over operators.
std::vector<Operator> build_operator_set_int(const CausalPair& state, int k);

struct ChainSettings {
    long long iterations = 0;
    long long burn_in = 0;
    long long thin = 1;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;  // chain index; distinct streams are independent
    bool store_samples = false;
    bool track_states = false;
    bool check_invariants = false;  // re-verify cached score after every sweep

    void validate() const;
};

struct StoredSample {
    long long iteration = 0;
    CausalPair state;
};

struct ChainOutput {
    Tallies tallies;
    std::map<std::string, long long> state_counts;
    std::vector<StoredSample> samples;
    std::vector<long long> proposals;  // per scope
    std::vector<long long> accepts;
    CausalPair final_state;
    ChainSettings settings;
};

// Random-scan Metropolis-Hastings over (D, T, P) with cached node-local
// score summands.
class Sampler {
public:
    Sampler(const ScoreEvaluator& score, const PriorTables& priors, CausalPair init, Rng rng);

    // One MH update of the given scope; true iff the proposal was accepted.
    bool mh_step(int scope);

    // One iteration of the chain: every scope once, in random order.
    void sweep();

    const CausalPair& state() const { return state_; }
    double cached_log_score() const;
    double cached_log_prior() const { return log_prior_; }
    double recompute_log_score() const;

    const std::vector<long long>& proposals() const { return proposals_; }
    const std::vector<long long>& accepts() const { return accepts_; }

private:
    const ScoreEvaluator* score_;
    const PriorTables* priors_;
    CausalPair state_;
    Rng rng_;
    std::vector<double> node_scores_;
    double log_prior_ = 0.0;
    std::vector<long long> proposals_;
    std::vector<long long> accepts_;
    std::vector<int> scope_order_;
};

ChainOutput run_chain(const MultiEnvDataset& data, const Hyperparams& h, const PriorHyper& priors,
                      const ChainSettings& settings, const CausalPair* init = nullptr);

// n_chains independent chains on streams 0..n-1, executed on at most
// n_threads workers; outputs are indexed by chain and independent of the
// schedule.
std::vector<ChainOutput> run_chains(const MultiEnvDataset& data, const Hyperparams& h,
                                    const PriorHyper& priors, const ChainSettings& settings,
                                    int n_chains, int n_threads);

Tallies pool_tallies(const std::vector<ChainOutput>& outputs);
std::map<std::string, long long> pool_state_counts(const std::vector<ChainOutput>& outputs);

// Proposal-only dynamics (every proposal accepted); returns the visited
// states including the initial one. Used to probe irreducibility.
std::vector<CausalPair> proposal_chain_walk(const CausalPair& init, long long steps,
                                            std::uint64_t seed);

}  // namespace gidag

#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gidag/equivalence.hpp"
#include "gidag/model_prior.hpp"
#include "gidag/score.hpp"

namespace gidag {

// Running inclusion counts over post-burn-in states. Counts are doubles
// (exact up to 2^53) so they divide straight into Eigen probability
// matrices.
struct Tallies {
    int q = 0;
    int K = 0;
    long long s_eff = 0;
    std::vector<Eigen::MatrixXd> edge_counts;  // per context, q x q
    Eigen::MatrixXd target_counts;             // q x K
    std::vector<Eigen::MatrixXd> diff_counts;  // contexts 2..K, q x q

    Tallies() = default;
    Tallies(int q, int K);

    void accumulate(const CausalPair& state);
    void add(const Tallies& other);

    bool operator==(const Tallies&) const;
};

// J^(k): per-context marginal posterior probabilities of edge inclusion.
std::vector<Eigen::MatrixXd> edge_ppi(const Tallies& t);

// q x K matrix of target-inclusion probabilities; column 1 is zero by
// definition.
Eigen::MatrixXd target_probability(const Tallies& t);

std::vector<Eigen::MatrixXd> diff_ppi(const Tallies& t);

// Median probability model: edges strictly above 0.5, targets at or above
// 0.5 (thresholds as printed in the source material, note the asymmetry).
Digraph mpm_graph(const Eigen::MatrixXd& ppi);
Bitset mpm_targets(const Eigen::VectorXd& probs);

// G^(k): u -> v included iff v is a target and u parents v in at least one
// of the two graphs.
Digraph difference_graph(const Dag& d1, const Digraph& dk, const Bitset& targets_k);

struct PosteriorSummary {
    std::vector<Eigen::MatrixXd> edge_ppi;  // K
    Eigen::MatrixXd target_prob;            // q x K
    std::vector<Digraph> mpm;               // K graphs (may be cyclic)
    std::vector<bool> mpm_acyclic;          // K flags
    std::vector<Bitset> mpm_target_sets;    // contexts 2..K
    std::vector<Eigen::MatrixXd> diff_ppi;  // contexts 2..K
    std::vector<Digraph> diff_graphs;       // contexts 2..K, thresholded > 0.5
};

PosteriorSummary summarize(const Tallies& t);

// All DAGs on q vertices; enumeration capped at q <= 5.
std::vector<Dag> enumerate_dags(int q);

// All valid (T, P) configurations of context k for a fixed DAG.
std::vector<ContextIntervention> enumerate_context_interventions(const Dag& d, int k);

struct ExactPosterior {
    std::vector<std::pair<CausalPair, double>> states;
    std::map<std::string, double> by_key;  // encode_state -> probability
    double log_normalizer = 0.0;
};

// Exhaustive normalized posterior over every valid (D, I) state; the oracle
// for sampler exactness. Throws CapacityError past max_states.
ExactPosterior exact_posterior(const MultiEnvDataset& data, const Hyperparams& h,
                               const PriorHyper& priors, std::size_t max_states = 10000000);

// Total variation between empirical state frequencies and the exact table.
// Counts with keys outside the table indicate a corrupted chain and throw.
double total_variation(const std::map<std::string, long long>& counts, long long total,
                       const ExactPosterior& exact);

}  // namespace gidag

#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gidag/intervention.hpp"

namespace gidag {

// Wishart prior on the precision of the complete Gaussian DAG model:
// Omega ~ W_q(a, U) with expectation a * U^{-1}, a > q - 1, U s.p.d.
struct Hyperparams {
    double wishart_a = 0.0;
    Eigen::MatrixXd wishart_u;

    Hyperparams() = default;
    Hyperparams(double a, Eigen::MatrixXd u);

    // Protocol defaults: a = q, U = I_q.
    static Hyperparams defaults(int q);

    int q() const { return static_cast<int>(wishart_u.rows()); }
};

// K blocks of observations sharing q columns; block 1 is observational.
struct MultiEnvDataset {
    std::vector<Eigen::MatrixXd> blocks;

    MultiEnvDataset() = default;
    explicit MultiEnvDataset(std::vector<Eigen::MatrixXd> b);

    int context_count() const { return static_cast<int>(blocks.size()); }
    int q() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().cols()); }
    long long rows(int k) const { return blocks[static_cast<std::size_t>(k - 1)].rows(); }
    long long total_rows() const;
};

// A(j) = {k : j not in T^(k)}; always contains context 1.
Bitset contexts_not_intervened(const InterventionCollection& iv, int j);

// log of the multivariate gamma function Gamma_p(x).
double log_multigamma(int p, double x);

// Marginal data distribution of the columns B of a row slice under the
// complete-DAG Wishart prior:
//   pi^{-n|B|/2} * |U_BB|^{(a-|Bc|)/2} / |Utilde_BB|^{(a-|Bc|+n)/2}
//     * Gamma_{|B|}((a-|Bc|+n)/2) / Gamma_{|B|}((a-|Bc|)/2)
// with Bc = [q] \ B and Utilde = U + X^T X, evaluated in log space.
// B empty or n = 0 gives 0.
double log_marginal_data(const Eigen::MatrixXd& rows, const Bitset& cols, const Hyperparams& h);

// Memo table from (column set, context subset) to the log marginal data
// value. Values are required to be bit-identical to recomputation, so warm
// and cold caches score identically; instances are chain-local.
class ScoreCache {
public:
    std::optional<double> lookup(const Bitset& cols, const Bitset& ctxs) const {
        const auto it = map_.find(Key{cols, ctxs});
        return it == map_.end() ? std::nullopt : std::optional<double>(it->second);
    }

    void insert(const Bitset& cols, const Bitset& ctxs, double value) {
        map_.emplace(Key{cols, ctxs}, value);
    }

    std::size_t size() const { return map_.size(); }
    void clear() { map_.clear(); }

private:
    struct Key {
        Bitset cols;
        Bitset ctxs;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return k.cols.hash() * 1000003u ^ k.ctxs.hash(); }
    };
    std::unordered_map<Key, double, KeyHash> map_;
};

// Evaluates the decomposable interventional marginal likelihood of
// Proposition 2. Per-context Gram matrices are precomputed once; pooled
// Grams per context subset are built on demand and reused across nodes.
class ScoreEvaluator {
public:
    ScoreEvaluator(const MultiEnvDataset& data, Hyperparams h);

    // log p(X_{.B}^{S}) for a context subset S (bits over 0..K-1) pooled in
    // ascending context order; memoized through the cache.
    double log_marginal_data_pooled(const Bitset& ctxs, const Bitset& cols) const;

    // One node's summand of the log marginal likelihood.
    double node_log_score(const Dag& d, const InterventionCollection& iv, int j) const;

    double log_marginal_likelihood(const Dag& d, const InterventionCollection& iv) const;

    const Hyperparams& hyper() const { return hyper_; }
    const MultiEnvDataset& data() const { return *data_; }
    ScoreCache& cache() const { return cache_; }

private:
    struct Pool {
        Eigen::MatrixXd gram;
        long long n = 0;
    };
    const Pool& pool_for(const Bitset& ctxs) const;

    const MultiEnvDataset* data_;
    Hyperparams hyper_;
    std::vector<Eigen::MatrixXd> block_grams_;
    mutable std::map<Bitset, Pool> pools_;
    mutable ScoreCache cache_;
};

// Spec-shaped convenience wrapper around ScoreEvaluator::log_marginal_likelihood.
double log_marginal_likelihood(const Dag& d, const InterventionCollection& iv,
                               const MultiEnvDataset& data, const Hyperparams& h);

}  // namespace gidag

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gidag/rng.hpp"
#include "gidag/score.hpp"

namespace gidag {

// Linear Gaussian SEM parameters across contexts. coef[k-1](l, j) is nonzero
// only when l is a parent of j in D_k; untargeted nodes share the
// observational column and variance across contexts (invariance).
struct SemParams {
    std::vector<Eigen::MatrixXd> coef;
    std::vector<Eigen::VectorXd> cond_var;

    int q() const { return coef.empty() ? 0 : static_cast<int>(coef.front().rows()); }
    int context_count() const { return static_cast<int>(coef.size()); }
};

struct GroundTruth {
    Dag dag;
    InterventionCollection interventions;
    SemParams params;
};

// Simulation protocol: sparse DAG with edge probability 3/(2q-2) on the
// identity topological order, targets included with probability 0.2,
// induced parent sets drawn as the parent set of a fresh DAG sharing the
// same topological order (so validity holds by construction), distinct
// coefficients uniform on [-1,-0.1] u [0.1,1], all conditional variances 1.
GroundTruth gen_truth(int q, int K, std::uint64_t seed);

// Sigma_k = (I - B_k)^{-T} D_k (I - B_k)^{-1}; the joint covariance of
// context k. Context is 1-based.
Eigen::MatrixXd sigma_from(const SemParams& params, int context);

// Ancestral sampling of n rows through the context's SEM.
Eigen::MatrixXd sample_block(const SemParams& params, int context, long long n, std::uint64_t seed);

// One block per context with the given sample sizes; block k uses the seed
// stream (seed, k).
MultiEnvDataset simulate_dataset(const GroundTruth& truth, const std::vector<long long>& n_per_context,
                                 std::uint64_t seed);

}  // namespace gidag

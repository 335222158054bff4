#include "gidag/simulate.hpp"

#include <cmath>

namespace gidag {

namespace {

// Coefficient magnitude in [0.1, 1], random sign.
double draw_coefficient(Rng& rng) {
    const double mag = 0.1 + 0.9 * rng.next_double();
    return rng.next_bernoulli(0.5) ? mag : -mag;
}

// Upper-triangular DAG on the identity order with the protocol edge
// probability.
Dag draw_ordered_dag(int q, double edge_prob, Rng& rng) {
    Dag d(q);
    for (int i = 0; i < q; ++i) {
        for (int j = i + 1; j < q; ++j) {
            if (rng.next_bernoulli(edge_prob)) d.add_edge(i, j);
        }
    }
    return d;
}

}  // namespace

GroundTruth gen_truth(int q, int K, std::uint64_t seed) {
    if (q < 2) throw QueryError("gen_truth needs q >= 2");
    if (K < 1) throw QueryError("gen_truth needs K >= 1");
    Rng rng(seed, 0xd1a6u);

    const double edge_prob = 3.0 / (2.0 * q - 2.0);
    GroundTruth truth;
    truth.dag = draw_ordered_dag(q, edge_prob, rng);
    truth.interventions = InterventionCollection(K, q);

    constexpr double kTargetProb = 0.2;
    for (int k = 2; k <= K; ++k) {
        auto& c = truth.interventions.context(k);
        for (int j = 0; j < q; ++j) {
            if (!rng.next_bernoulli(kTargetProb)) continue;
            // Parent set of j in a freshly drawn DAG on the same ordering;
            // acyclicity of the post-intervention graph is automatic.
            const Dag fresh = draw_ordered_dag(q, edge_prob, rng);
            c.set_target(j, fresh.parents(j));
        }
        if (!is_valid(truth.dag, c)) {
            throw ValidityError("generated intervention is invalid; ordering invariant broken");
        }
    }

    auto& params = truth.params;
    params.coef.assign(static_cast<std::size_t>(K), Eigen::MatrixXd::Zero(q, q));
    params.cond_var.assign(static_cast<std::size_t>(K), Eigen::VectorXd::Ones(q));

    Eigen::MatrixXd base = Eigen::MatrixXd::Zero(q, q);
    for (auto [u, v] : truth.dag.edges()) base(u, v) = draw_coefficient(rng);
    params.coef[0] = base;
    for (int k = 2; k <= K; ++k) {
        const auto& c = truth.interventions.context(k);
        Eigen::MatrixXd bk = base;
        c.targets.for_each([&](int j) {
            bk.col(j).setZero();
            c.induced_parents[static_cast<std::size_t>(j)].for_each(
                [&](int l) { bk(l, j) = draw_coefficient(rng); });
        });
        params.coef[static_cast<std::size_t>(k - 1)] = bk;
    }
    return truth;
}

Eigen::MatrixXd sigma_from(const SemParams& params, int context) {
    const int q = params.q();
    const Eigen::MatrixXd& b = params.coef.at(static_cast<std::size_t>(context - 1));
    const Eigen::VectorXd& dv = params.cond_var.at(static_cast<std::size_t>(context - 1));
    const Eigen::MatrixXd ib = Eigen::MatrixXd::Identity(q, q) - b;
    const Eigen::MatrixXd inv = ib.inverse();
    if (!inv.allFinite()) throw NumericError("I - B is singular");
    return inv.transpose() * dv.asDiagonal() * inv;
}

Eigen::MatrixXd sample_block(const SemParams& params, int context, long long n, std::uint64_t seed) {
    const int q = params.q();
    if (n < 0) throw QueryError("sample size must be nonnegative");
    const Eigen::MatrixXd& b = params.coef.at(static_cast<std::size_t>(context - 1));
    const Eigen::VectorXd& dv = params.cond_var.at(static_cast<std::size_t>(context - 1));

    // Recover a topological order of the context's graph from the
    // coefficient support.
    Digraph g(q);
    for (int l = 0; l < q; ++l) {
        for (int j = 0; j < q; ++j) {
            if (l != j && b(l, j) != 0.0) g.add_edge(l, j);
        }
    }
    const auto order = topological_order(g);

    Rng rng(seed, 0x5a3eu + static_cast<std::uint64_t>(context));
    Eigen::MatrixXd x(n, q);
    Eigen::VectorXd row(q);
    for (long long i = 0; i < n; ++i) {
        for (int pos = 0; pos < q; ++pos) {
            const int j = order[static_cast<std::size_t>(pos)];
            double value = std::sqrt(dv(j)) * rng.next_gaussian();
            g.parents(j).for_each([&](int l) { value += b(l, j) * row(l); });
            row(j) = value;
        }
        x.row(i) = row;
    }
    return x;
}

MultiEnvDataset simulate_dataset(const GroundTruth& truth, const std::vector<long long>& n_per_context,
                                 std::uint64_t seed) {
    const int K = truth.params.context_count();
    if (static_cast<int>(n_per_context.size()) != K) {
        throw QueryError("one sample size per context required");
    }
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        blocks.push_back(sample_block(truth.params, k, n_per_context[static_cast<std::size_t>(k - 1)],
                                      seed + static_cast<std::uint64_t>(k)));
    }
    return MultiEnvDataset(std::move(blocks));
}

}  // namespace gidag

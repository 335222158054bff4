#include "gidag/score.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace gidag {

namespace {

constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kEigFallbackTol = 1e-10;

// log|M| of a symmetric positive definite matrix via Cholesky, with a
// symmetric-eigenvalue fallback before declaring numeric failure.
double logdet_spd(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
        double ld = 0.0;
        const auto& l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < m.rows(); ++i) ld += std::log(l(i, i));
        return 2.0 * ld;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue factorization failed");
    double ld = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev <= kEigFallbackTol) throw NumericError("matrix is not positive definite");
        ld += std::log(ev);
    }
    return ld;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    Eigen::MatrixXd out(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(idx[r], idx[c]);
        }
    }
    return out;
}

double log_marginal_from_grams(const Eigen::MatrixXd& u_bb, const Eigen::MatrixXd& gram_bb,
                               long long n, int q, const Hyperparams& h) {
    const int p = static_cast<int>(u_bb.rows());
    if (p == 0) return 0.0;
    const int comp = q - p;  // |Bc|
    const double shape0 = 0.5 * (h.wishart_a - comp);
    if (shape0 <= 0.5 * (p - 1)) {
        throw HyperparamError("Wishart degrees of freedom too small for this column set");
    }
    if (n == 0) return 0.0;
    const Eigen::MatrixXd u_post = u_bb + gram_bb;
    const double n_half = 0.5 * static_cast<double>(n);
    return -n_half * p * kLogPi + shape0 * logdet_spd(u_bb) - (shape0 + n_half) * logdet_spd(u_post) +
           log_multigamma(p, shape0 + n_half) - log_multigamma(p, shape0);
}

}  // namespace

Hyperparams::Hyperparams(double a, Eigen::MatrixXd u) : wishart_a(a), wishart_u(std::move(u)) {
    const int q = static_cast<int>(wishart_u.rows());
    if (q < 1 || wishart_u.cols() != q) throw HyperparamError("Wishart scale must be square");
    if (!wishart_u.isApprox(wishart_u.transpose(), 1e-12)) {
        throw HyperparamError("Wishart scale must be symmetric");
    }
    if (!(wishart_a > q - 1)) throw HyperparamError("Wishart dof must exceed q - 1");
    Eigen::LLT<Eigen::MatrixXd> llt(wishart_u);
    if (llt.info() != Eigen::Success) throw HyperparamError("Wishart scale must be positive definite");
}

Hyperparams Hyperparams::defaults(int q) {
    return Hyperparams(static_cast<double>(q), Eigen::MatrixXd::Identity(q, q));
}

MultiEnvDataset::MultiEnvDataset(std::vector<Eigen::MatrixXd> b) : blocks(std::move(b)) {
    if (blocks.empty()) throw DataError("dataset needs at least the observational block");
    const Eigen::Index q = blocks.front().cols();
    if (q < 1) throw DataError("dataset has no variables");
    for (const auto& blk : blocks) {
        if (blk.cols() != q) throw DataError("blocks disagree on the number of variables");
    }
}

long long MultiEnvDataset::total_rows() const {
    long long n = 0;
    for (const auto& blk : blocks) n += blk.rows();
    return n;
}

Bitset contexts_not_intervened(const InterventionCollection& iv, int j) {
    const int K = iv.context_count();
    Bitset out(K);
    for (int k = 1; k <= K; ++k) {
        if (!iv.context(k).is_target(j)) out.set(k - 1);
    }
    return out;
}

double log_multigamma(int p, double x) {
    double out = 0.25 * p * (p - 1) * kLogPi;
    for (int i = 1; i <= p; ++i) out += std::lgamma(x + 0.5 * (1 - i));
    return out;
}

double log_marginal_data(const Eigen::MatrixXd& rows, const Bitset& cols, const Hyperparams& h) {
    const int q = h.q();
    if (cols.size() != q) throw QueryError("column set universe disagrees with hyperparameters");
    if (rows.rows() > 0 && rows.cols() != q) throw DataError("data slice must cover all q columns");
    const auto idx = cols.to_vector();
    if (idx.empty()) return 0.0;
    Eigen::MatrixXd x_b(rows.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) x_b.col(static_cast<Eigen::Index>(c)) = rows.col(idx[c]);
    return log_marginal_from_grams(submatrix(h.wishart_u, idx), x_b.transpose() * x_b, rows.rows(), q, h);
}

ScoreEvaluator::ScoreEvaluator(const MultiEnvDataset& data, Hyperparams h)
    : data_(&data), hyper_(std::move(h)) {
    if (hyper_.q() != data.q()) throw QueryError("hyperparameters and data disagree on q");
    block_grams_.reserve(data.blocks.size());
    for (const auto& blk : data.blocks) block_grams_.push_back(blk.transpose() * blk);
}

const ScoreEvaluator::Pool& ScoreEvaluator::pool_for(const Bitset& ctxs) const {
    auto it = pools_.find(ctxs);
    if (it != pools_.end()) return it->second;
    Pool pool;
    pool.gram = Eigen::MatrixXd::Zero(data_->q(), data_->q());
    ctxs.for_each([&](int k0) {
        pool.gram += block_grams_[static_cast<std::size_t>(k0)];
        pool.n += data_->blocks[static_cast<std::size_t>(k0)].rows();
    });
    return pools_.emplace(ctxs, std::move(pool)).first->second;
}

double ScoreEvaluator::log_marginal_data_pooled(const Bitset& ctxs, const Bitset& cols) const {
    if (cols.none()) return 0.0;
    if (const auto hit = cache_.lookup(cols, ctxs)) return *hit;
    const auto& pool = pool_for(ctxs);
    const auto idx = cols.to_vector();
    const double value = log_marginal_from_grams(submatrix(hyper_.wishart_u, idx),
                                                 submatrix(pool.gram, idx), pool.n,
                                                 hyper_.q(), hyper_);
    cache_.insert(cols, ctxs, value);
    return value;
}

double ScoreEvaluator::node_log_score(const Dag& d, const InterventionCollection& iv, int j) const {
    const Bitset pooled_ctxs = contexts_not_intervened(iv, j);
    const Bitset pa = d.parents(j);
    Bitset fa = pa;
    fa.set(j);
    double total = log_marginal_data_pooled(pooled_ctxs, fa) - log_marginal_data_pooled(pooled_ctxs, pa);

    const int K = iv.context_count();
    for (int k = 2; k <= K; ++k) {
        const auto& c = iv.context(k);
        if (!c.is_target(j)) continue;
        Bitset single(K);
        single.set(k - 1);
        const Bitset& pa_k = c.induced_parents[static_cast<std::size_t>(j)];
        Bitset fa_k = pa_k;
        fa_k.set(j);
        total += log_marginal_data_pooled(single, fa_k) - log_marginal_data_pooled(single, pa_k);
    }
    return total;
}

double ScoreEvaluator::log_marginal_likelihood(const Dag& d, const InterventionCollection& iv) const {
    if (d.vertex_count() != data_->q()) throw QueryError("DAG and data disagree on q");
    if (iv.context_count() != data_->context_count()) {
        throw QueryError("interventions and data disagree on K");
    }
    double total = 0.0;
    for (int j = 0; j < d.vertex_count(); ++j) total += node_log_score(d, iv, j);
    return total;
}

double log_marginal_likelihood(const Dag& d, const InterventionCollection& iv,
                               const MultiEnvDataset& data, const Hyperparams& h) {
    return ScoreEvaluator(data, h).log_marginal_likelihood(d, iv);
}

}  // namespace gidag

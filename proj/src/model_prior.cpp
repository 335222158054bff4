#include "gidag/model_prior.hpp"

#include <cmath>

namespace gidag {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace

void PriorHyper::validate() const {
    for (double v : {a_phi, b_phi, a_eta, b_eta, a_d, b_d}) {
        if (!(v > 0.0)) throw HyperparamError("Beta hyperparameters must be strictly positive");
    }
}

double log_beta_binomial_ratio(double a, double b, int x, int m) {
    return log_beta(a + x, b + (m - x)) - log_beta(a, b);
}

double log_prior_dag(const Dag& d, const PriorHyper& h) {
    const int q = d.vertex_count();
    return log_beta_binomial_ratio(h.a_d, h.b_d, d.edge_count(), q * (q - 1) / 2);
}

double log_prior_targets(const ContextIntervention& c, int q, const PriorHyper& h) {
    if (c.context == 1) return 0.0;
    return log_beta_binomial_ratio(h.a_eta, h.b_eta, c.targets.count(), q);
}

double log_prior_parent_matrix(const ContextIntervention& c, const Dag& d, int q,
                               const PriorHyper& h) {
    if (!is_valid(d, c)) throw ValidityError("intervention is not valid for this DAG");
    double total = 0.0;
    c.targets.for_each([&](int j) {
        const int sz = c.induced_parents[static_cast<std::size_t>(j)].count();
        total += log_beta_binomial_ratio(h.a_phi, h.b_phi, sz, q);
    });
    return total;
}

double log_prior_joint(const Dag& d, const InterventionCollection& iv, const PriorHyper& h) {
    const int q = d.vertex_count();
    double total = log_prior_dag(d, h);
    for (int k = 2; k <= iv.context_count(); ++k) {
        const auto& c = iv.context(k);
        total += log_prior_targets(c, q, h);
        total += log_prior_parent_matrix(c, d, q, h);
    }
    return total;
}

PriorTables::PriorTables(int q, const PriorHyper& h) {
    h.validate();
    const int max_edges = q * (q - 1) / 2;
    dag_.resize(static_cast<std::size_t>(max_edges) + 1);
    for (int m = 0; m <= max_edges; ++m) dag_[static_cast<std::size_t>(m)] = log_beta_binomial_ratio(h.a_d, h.b_d, m, max_edges);
    targets_.resize(static_cast<std::size_t>(q) + 1);
    parents_.resize(static_cast<std::size_t>(q) + 1);
    for (int t = 0; t <= q; ++t) {
        targets_[static_cast<std::size_t>(t)] = log_beta_binomial_ratio(h.a_eta, h.b_eta, t, q);
        parents_[static_cast<std::size_t>(t)] = log_beta_binomial_ratio(h.a_phi, h.b_phi, t, q);
    }
}

double PriorTables::joint(const Dag& d, const InterventionCollection& iv) const {
    double total = dag(d.edge_count());
    for (int k = 2; k <= iv.context_count(); ++k) {
        const auto& c = iv.context(k);
        total += targets(c.targets.count());
        c.targets.for_each([&](int j) {
            total += parents(c.induced_parents[static_cast<std::size_t>(j)].count());
        });
    }
    return total;
}

}  // namespace gidag

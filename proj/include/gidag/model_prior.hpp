#pragma once

#include <vector>

#include "gidag/intervention.hpp"

namespace gidag {

// Beta hyperparameters of the integrated hierarchical priors on induced
// parent matrices (phi), targets (eta) and the DAG skeleton (d).
struct PriorHyper {
    double a_phi = 1.0, b_phi = 1.0;
    double a_eta = 1.0, b_eta = 1.0;
    double a_d = 1.0, b_d = 1.0;

    void validate() const;
};

// log B(a + x, b + m - x) - log B(a, b): the integrated Beta-Bernoulli mass
// of x successes out of m slots.
double log_beta_binomial_ratio(double a, double b, int x, int m);

// log p(S^D) up to the constant over the DAG space, which cancels in every
// Metropolis-Hastings ratio.
double log_prior_dag(const Dag& d, const PriorHyper& h);

// log p(T^(k)); context 1 carries a degenerate empty target and scores 0.
double log_prior_targets(const ContextIntervention& c, int q, const PriorHyper& h);

// log of the Beta-binomial factor of p(P^(k) | T^(k), D). The second Beta
// argument uses q as printed in the integrated form. Throws ValidityError
// when the intervention is invalid for d.
double log_prior_parent_matrix(const ContextIntervention& c, const Dag& d, int q,
                               const PriorHyper& h);

double log_prior_joint(const Dag& d, const InterventionCollection& iv, const PriorHyper& h);

// Lookup tables of the three ratio families for one problem size; the MCMC
// inner loop evaluates priors through these instead of repeated lgamma.
class PriorTables {
public:
    PriorTables(int q, const PriorHyper& h);

    double dag(int edge_count) const { return dag_[static_cast<std::size_t>(edge_count)]; }
    double targets(int t) const { return targets_[static_cast<std::size_t>(t)]; }
    double parents(int p) const { return parents_[static_cast<std::size_t>(p)]; }

    double joint(const Dag& d, const InterventionCollection& iv) const;

private:
    std::vector<double> dag_;
    std::vector<double> targets_;
    std::vector<double> parents_;
};

}  // namespace gidag

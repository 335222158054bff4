#pragma once

#include <vector>

#include "gidag/intervention.hpp"

namespace gidag {

// Structural Hamming distance between two possibly partially directed
// graphs (an undirected edge is encoded as a mutual pair u->v, v->u): one
// unit per skeleton difference, one per orientation mismatch on a shared
// skeleton edge, orientations being {->, <-, undirected}.
int shd(const Digraph& g1, const Digraph& g2);

// Sum over contexts k >= 2 of |T_true^(k) symmetric-difference T_est^(k)|.
int target_errors(const std::vector<Bitset>& t_true, const std::vector<Bitset>& t_est);
int target_errors(const InterventionCollection& iv_true, const InterventionCollection& iv_est);

// Symmetric difference of the directed edge sets of two difference graphs.
int diff_graph_errors(const Digraph& g_true, const Digraph& g_est);

struct EvalReport {
    std::vector<int> shd_mpm;           // per context, raw MPM graphs
    std::vector<int> shd_representative;  // per context, class representatives
    std::vector<int> target_errors;     // per context 2..K
    std::vector<int> diff_errors;       // per context 2..K
    bool estimate_valid = false;        // MPM pair admitted a class enumeration
};

}  // namespace gidag

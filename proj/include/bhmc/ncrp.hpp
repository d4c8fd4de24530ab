#pragma once

#include <span>
#include <vector>

#include "bhmc/hierarchy.hpp"
#include "bhmc/rng.hpp"

namespace bhmc {

// A sampled root-to-leaf path, held as decisions so the tree it was drawn
// against stays untouched until the caller attaches it. log_q is the product
// of the CRP predictive probabilities of each decision.
struct PathProposal {
    std::vector<PathDecision> decisions;
    double log_q = 0.0;
};

// CRP predictive over (#children + 1) outcomes: N_i/(n+alpha) for each
// existing child, alpha/(n+alpha) for a new one.
std::vector<double> crp_predictive(std::span<const int> child_counts, double alpha);

// L sequential CRP draws from the root. The tree must already exclude the
// observation being resampled.
PathProposal sample_path(const Hierarchy& h, double alpha, Rng& rng);

// log of the product of CRP predictive probabilities for the given decisions
// against the current counts. Bit-identical to the log_q of a proposal
// evaluated on the same tree.
double path_log_density(const Hierarchy& h, std::span<const PathDecision> decisions,
                        double alpha);

// Same, for a path given by node ids: live children count as "existing",
// ids absent from the tree as "new". An id that exists but is not a child of
// the previous node is an error.
double path_log_density(const Hierarchy& h, std::span<const NodeId> path, double alpha);

// Translates a realized path into decisions against the given tree, mapping
// pruned (absent) nodes to fresh decisions.
std::vector<PathDecision> decisions_for_path(const Hierarchy& h, std::span<const NodeId> path);

}  // namespace bhmc

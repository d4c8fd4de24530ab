#pragma once

#include <span>
#include <vector>

#include "bhmc/hierarchy.hpp"
#include "bhmc/model.hpp"
#include "bhmc/rng.hpp"

namespace bhmc {

// Draws a fresh node's mixing weights from DP(gamma, parent). The root is
// initialized by GEM or Dirichlet instead and is rejected here.
void init_node_weights(Hierarchy& h, NodeId id, double gamma, Rng& rng);

// After a new global component is created: the root breaks one more stick
// piece with u ~ Beta(1, gamma0); every other node follows top-down with
// u ~ Beta(gamma * parent_new_weight, gamma * parent_rest). Also grows the
// per-node component count vectors.
void extend_for_new_component(Hierarchy& h, double gamma0, double gamma, Rng& rng);

// Removes components whose total (root) count is zero, folding their weight
// at every node into that node's remainder. Relabels assignments and shrinks
// the book. Returns the old-index -> new-index table (-1 for dropped).
std::vector<int> drop_empty_components(SamplerState& s);

// Posterior redraw of every node's weights: empties dropped first, the root
// from Dir(counts, gamma0), then children top-down from
// Dir(counts + gamma * parent_weights, gamma * parent_rest). With finite_k
// components the symmetric-prior forms without a remainder are used instead.
void resample_all_weights(SamplerState& s, Rng& rng, int finite_k = 0);

// log p(B | V, gamma0, gamma): truncated-GEM density at the root plus a
// Dirichlet density per edge (finite mode: symmetric Dirichlet at the root).
double mixing_log_prior(const Hierarchy& h, double gamma0, double gamma, int finite_k = 0);

}  // namespace bhmc

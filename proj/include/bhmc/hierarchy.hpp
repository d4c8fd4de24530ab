#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "bhmc/distributions.hpp"

namespace bhmc {

using NodeId = std::uint64_t;
inline constexpr NodeId kNoNode = ~std::uint64_t{0};

struct Node {
    NodeId id = kNoNode;
    NodeId parent = kNoNode;            // kNoNode for the root
    std::vector<NodeId> children;       // creation order
    int depth = 0;
    int n_thru = 0;                     // observations whose path contains this node
    std::vector<int> comp_counts;       // per-component counts in this subtree
    StickWeights mixing;
};

// One step of a root-to-leaf path: either a live child or a fresh node.
struct PathDecision {
    NodeId child = kNoNode;

    bool is_new() const { return child == kNoNode; }
    static PathDecision existing(NodeId id) { return PathDecision{id}; }
    static PathDecision fresh() { return PathDecision{}; }
};

// Record of one detach, sufficient to undo it exactly (pruned nodes are
// reinstated with their original ids, weights and child positions).
struct DetachRecord {
    std::vector<NodeId> path;
    std::vector<Node> pruned;           // shallow-to-deep chain, copies
    std::size_t pruned_child_index = 0; // index of pruned[0] in its parent's children
};

// The tree H with per-node traversal and component counts. Depth is fixed per
// run; every attached path runs from the root to depth `levels`. Node ids are
// never reused within a run.
class Hierarchy {
public:
    explicit Hierarchy(int levels);

    int levels() const { return levels_; }
    NodeId root() const { return root_; }
    bool contains(NodeId id) const { return nodes_.count(id) != 0; }
    std::size_t node_count() const { return nodes_.size(); }
    int component_slots() const { return component_slots_; }

    const Node& node(NodeId id) const;
    Node& node(NodeId id);

    // Walks the decisions from the root, creating fresh nodes on demand, and
    // increments n_thru along the realized path. Fresh nodes carry empty
    // mixing weights; the caller fills them in top-down.
    std::vector<NodeId> attach_path(std::span<const PathDecision> decisions);

    // Decrements n_thru (and comp_counts[component] when component >= 0)
    // along the path and prunes any node whose count reaches zero.
    DetachRecord detach_path(std::span<const NodeId> path, int component = -1);

    // Undoes a detach structurally: pruned nodes come back exactly as stored
    // and n_thru is re-incremented. Component counts are not restored; the
    // caller reassigns the component afterwards.
    void restore_path(const DetachRecord& record);

    void add_component_count(std::span<const NodeId> path, int component, int delta);

    // Grows/shrinks the per-node component count vectors as the global book
    // changes size. keep[k] gives the new index of component k or -1.
    void append_component_slot();
    void remap_component_slots(std::span<const int> new_index, int new_count);

    // log p of the tree under the nested CRP with concentration alpha.
    double tree_log_prior(double alpha) const;

    // Breadth-first ids, root first; parents always precede children.
    std::vector<NodeId> topdown_order() const;

private:
    NodeId new_node(NodeId parent, int depth);

    std::unordered_map<NodeId, Node> nodes_;
    NodeId root_ = kNoNode;
    NodeId next_id_ = 0;
    int levels_ = 0;
    int component_slots_ = 0;
};

}  // namespace bhmc

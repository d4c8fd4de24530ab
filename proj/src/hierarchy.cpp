#include "bhmc/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bhmc {

Hierarchy::Hierarchy(int levels) : levels_(levels) {
    if (levels < 1) throw std::invalid_argument("Hierarchy: levels must be >= 1");
    root_ = new_node(kNoNode, 0);
}

const Node& Hierarchy::node(NodeId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw std::invalid_argument("Hierarchy: unknown node id");
    return it->second;
}

Node& Hierarchy::node(NodeId id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw std::invalid_argument("Hierarchy: unknown node id");
    return it->second;
}

NodeId Hierarchy::new_node(NodeId parent, int depth) {
    Node n;
    n.id = next_id_++;
    n.parent = parent;
    n.depth = depth;
    n.comp_counts.assign(static_cast<std::size_t>(component_slots_), 0);
    n.mixing = StickWeights{};
    const NodeId id = n.id;
    nodes_.emplace(id, std::move(n));
    return id;
}

std::vector<NodeId> Hierarchy::attach_path(std::span<const PathDecision> decisions) {
    if (static_cast<int>(decisions.size()) != levels_)
        throw std::invalid_argument("attach_path: expected one decision per level");
    std::vector<NodeId> path;
    path.reserve(decisions.size() + 1);
    path.push_back(root_);
    NodeId cur = root_;
    for (std::size_t l = 0; l < decisions.size(); ++l) {
        NodeId next;
        if (decisions[l].is_new()) {
            next = new_node(cur, static_cast<int>(l) + 1);
            nodes_.at(cur).children.push_back(next);
        } else {
            next = decisions[l].child;
            const auto& kids = node(cur).children;
            if (std::find(kids.begin(), kids.end(), next) == kids.end())
                throw std::invalid_argument("attach_path: decision references a non-child node");
        }
        path.push_back(next);
        cur = next;
    }
    for (NodeId id : path) nodes_.at(id).n_thru += 1;
    return path;
}

DetachRecord Hierarchy::detach_path(std::span<const NodeId> path, int component) {
    if (path.empty() || path.front() != root_)
        throw std::invalid_argument("detach_path: path must start at the root");
    DetachRecord record;
    record.path.assign(path.begin(), path.end());
    for (NodeId id : path) {
        Node& n = node(id);
        n.n_thru -= 1;
        if (n.n_thru < 0) throw std::logic_error("detach_path: n_thru below zero");
        if (component >= 0) {
            if (component >= static_cast<int>(n.comp_counts.size()) ||
                n.comp_counts[component] <= 0)
                throw std::logic_error("detach_path: component count below zero");
            n.comp_counts[component] -= 1;
        }
    }
    // Counts are non-increasing with depth, so emptied nodes form a suffix of
    // the path; remove the whole chain below the shallowest empty node.
    std::size_t first_empty = path.size();
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (nodes_.at(path[i]).n_thru == 0) {
            first_empty = i;
            break;
        }
    }
    if (first_empty < path.size()) {
        Node& parent = nodes_.at(path[first_empty - 1]);
        auto it = std::find(parent.children.begin(), parent.children.end(), path[first_empty]);
        if (it == parent.children.end())
            throw std::logic_error("detach_path: broken parent/child link");
        record.pruned_child_index = static_cast<std::size_t>(it - parent.children.begin());
        parent.children.erase(it);
        for (std::size_t i = first_empty; i < path.size(); ++i) {
            Node& dead = nodes_.at(path[i]);
            for (int c : dead.comp_counts)
                if (c != 0) throw std::logic_error("detach_path: pruning node with live counts");
            record.pruned.push_back(std::move(dead));
            nodes_.erase(path[i]);
        }
    }
    return record;
}

void Hierarchy::restore_path(const DetachRecord& record) {
    if (!record.pruned.empty()) {
        Node& parent = nodes_.at(record.pruned.front().parent);
        if (record.pruned_child_index > parent.children.size())
            throw std::logic_error("restore_path: stale child index");
        parent.children.insert(parent.children.begin() + record.pruned_child_index,
                               record.pruned.front().id);
        for (const Node& n : record.pruned) nodes_.emplace(n.id, n);
    }
    for (NodeId id : record.path) nodes_.at(id).n_thru += 1;
}

void Hierarchy::add_component_count(std::span<const NodeId> path, int component, int delta) {
    for (NodeId id : path) {
        Node& n = node(id);
        if (component < 0 || component >= static_cast<int>(n.comp_counts.size()))
            throw std::invalid_argument("add_component_count: component out of range");
        n.comp_counts[component] += delta;
        if (n.comp_counts[component] < 0)
            throw std::logic_error("add_component_count: count below zero");
    }
}

void Hierarchy::append_component_slot() {
    component_slots_ += 1;
    for (auto& [id, n] : nodes_) n.comp_counts.push_back(0);
}

void Hierarchy::remap_component_slots(std::span<const int> new_index, int new_count) {
    if (static_cast<int>(new_index.size()) != component_slots_)
        throw std::invalid_argument("remap_component_slots: remap size mismatch");
    for (auto& [id, n] : nodes_) {
        std::vector<int> counts(static_cast<std::size_t>(new_count), 0);
        for (std::size_t k = 0; k < new_index.size(); ++k) {
            if (new_index[k] >= 0)
                counts[new_index[k]] = n.comp_counts[k];
            else if (n.comp_counts[k] != 0)
                throw std::logic_error("remap_component_slots: dropping non-empty component");
        }
        n.comp_counts = std::move(counts);
    }
    component_slots_ = new_count;
}

double Hierarchy::tree_log_prior(double alpha) const {
    if (alpha <= 0.0) throw std::invalid_argument("tree_log_prior: alpha must be > 0");
    double log_p = 0.0;
    for (NodeId id : topdown_order()) {
        const Node& n = nodes_.at(id);
        if (n.children.empty()) continue;
        log_p += std::lgamma(alpha);
        log_p += static_cast<double>(n.children.size()) * std::log(alpha);
        log_p -= std::lgamma(static_cast<double>(n.n_thru) + alpha);
        for (NodeId child : n.children)
            log_p += std::lgamma(static_cast<double>(nodes_.at(child).n_thru));
    }
    return log_p;
}

std::vector<NodeId> Hierarchy::topdown_order() const {
    std::vector<NodeId> order;
    order.reserve(nodes_.size());
    order.push_back(root_);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Node& n = nodes_.at(order[i]);
        order.insert(order.end(), n.children.begin(), n.children.end());
    }
    return order;
}

}  // namespace bhmc

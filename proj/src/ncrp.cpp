#include "bhmc/ncrp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bhmc {

namespace {

std::vector<double> predictive_at(const Hierarchy& h, NodeId id, double alpha) {
    const Node& n = h.node(id);
    std::vector<int> counts;
    counts.reserve(n.children.size());
    for (NodeId child : n.children) counts.push_back(h.node(child).n_thru);
    return crp_predictive(counts, alpha);
}

}  // namespace

std::vector<double> crp_predictive(std::span<const int> child_counts, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("crp_predictive: alpha must be > 0");
    int n = 0;
    for (int c : child_counts) {
        if (c < 1) throw std::invalid_argument("crp_predictive: counts must be >= 1");
        n += c;
    }
    std::vector<double> probs(child_counts.size() + 1);
    const double denom = static_cast<double>(n) + alpha;
    for (std::size_t i = 0; i < child_counts.size(); ++i)
        probs[i] = static_cast<double>(child_counts[i]) / denom;
    probs.back() = alpha / denom;
    return probs;
}

PathProposal sample_path(const Hierarchy& h, double alpha, Rng& rng) {
    PathProposal prop;
    prop.decisions.reserve(static_cast<std::size_t>(h.levels()));
    NodeId cur = h.root();
    bool virtual_branch = false;  // below a fresh node every step is fresh with prob 1
    for (int l = 0; l < h.levels(); ++l) {
        if (virtual_branch) {
            prop.decisions.push_back(PathDecision::fresh());
            continue;
        }
        const Node& n = h.node(cur);
        const std::vector<double> probs = predictive_at(h, cur, alpha);
        const std::size_t pick = sample_categorical(probs, rng);
        prop.log_q += std::log(probs[pick]);
        if (pick == n.children.size()) {
            prop.decisions.push_back(PathDecision::fresh());
            virtual_branch = true;
        } else {
            cur = n.children[pick];
            prop.decisions.push_back(PathDecision::existing(cur));
        }
    }
    return prop;
}

double path_log_density(const Hierarchy& h, std::span<const PathDecision> decisions,
                        double alpha) {
    if (static_cast<int>(decisions.size()) != h.levels())
        throw std::invalid_argument("path_log_density: expected one decision per level");
    double log_q = 0.0;
    NodeId cur = h.root();
    bool virtual_branch = false;
    for (const PathDecision& d : decisions) {
        if (virtual_branch) {
            if (!d.is_new())
                throw std::invalid_argument("path_log_density: existing child below a fresh node");
            continue;  // forced choice, probability 1
        }
        const Node& n = h.node(cur);
        const std::vector<double> probs = predictive_at(h, cur, alpha);
        if (d.is_new()) {
            log_q += std::log(probs.back());
            virtual_branch = true;
        } else {
            const auto& kids = n.children;
            auto it = std::find(kids.begin(), kids.end(), d.child);
            if (it == kids.end())
                throw std::invalid_argument("path_log_density: decision references a non-child");
            log_q += std::log(probs[static_cast<std::size_t>(it - kids.begin())]);
            cur = d.child;
        }
    }
    return log_q;
}

std::vector<PathDecision> decisions_for_path(const Hierarchy& h, std::span<const NodeId> path) {
    if (path.empty() || path.front() != h.root())
        throw std::invalid_argument("decisions_for_path: path must start at the root");
    std::vector<PathDecision> decisions;
    decisions.reserve(path.size() - 1);
    NodeId cur = h.root();
    bool virtual_branch = false;
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (virtual_branch || !h.contains(path[i])) {
            decisions.push_back(PathDecision::fresh());
            virtual_branch = true;
            continue;
        }
        const auto& kids = h.node(cur).children;
        if (std::find(kids.begin(), kids.end(), path[i]) == kids.end())
            throw std::invalid_argument("decisions_for_path: node exists but is not a child");
        decisions.push_back(PathDecision::existing(path[i]));
        cur = path[i];
    }
    return decisions;
}

double path_log_density(const Hierarchy& h, std::span<const NodeId> path, double alpha) {
    const std::vector<PathDecision> decisions = decisions_for_path(h, path);
    return path_log_density(h, std::span<const PathDecision>(decisions), alpha);
}

}  // namespace bhmc

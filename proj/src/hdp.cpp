#include "bhmc/hdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bhmc {

namespace {

double log_clamped(double x) { return std::log(std::max(x, 1e-300)); }

// Dirichlet log density with the zero-parameter point-mass convention:
// coordinates with parameter 0 must carry value 0 and contribute nothing.
double dirichlet_log_density(std::span<const double> value, std::span<const double> params) {
    double sum_params = 0.0;
    double ld = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i] == 0.0) {
            if (value[i] != 0.0) return -std::numeric_limits<double>::infinity();
            continue;
        }
        sum_params += params[i];
        ld += (params[i] - 1.0) * log_clamped(value[i]) - std::lgamma(params[i]);
    }
    if (sum_params <= 0.0) return 0.0;  // pure point mass
    return ld + std::lgamma(sum_params);
}

}  // namespace

void init_node_weights(Hierarchy& h, NodeId id, double gamma, Rng& rng) {
    Node& n = h.node(id);
    if (n.parent == kNoNode)
        throw std::invalid_argument("init_node_weights: root uses GEM/Dirichlet init");
    n.mixing = dp_child_weights(h.node(n.parent).mixing, gamma, rng);
}

void extend_for_new_component(Hierarchy& h, double gamma0, double gamma, Rng& rng) {
    for (NodeId id : h.topdown_order()) {
        Node& n = h.node(id);
        double u;
        if (n.parent == kNoNode) {
            u = sample_beta(1.0, gamma0, rng);
        } else {
            const StickWeights& parent = h.node(n.parent).mixing;
            const double a = gamma * parent.weights.back();
            const double b = gamma * parent.rest;
            u = (a == 0.0 && b == 0.0) ? 0.0 : sample_beta(a, b, rng);
        }
        append_broken_piece(n.mixing, u);
    }
    h.append_component_slot();
}

std::vector<int> drop_empty_components(SamplerState& s) {
    const int k = s.n_components();
    const std::vector<int>& root_counts = s.tree.node(s.tree.root()).comp_counts;
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (int i = 0; i < k; ++i)
        if (root_counts[static_cast<std::size_t>(i)] > 0) remap[static_cast<std::size_t>(i)] = next++;
    if (next == k) return remap;  // nothing to drop

    for (NodeId id : s.tree.topdown_order()) {
        Node& n = s.tree.node(id);
        std::vector<double> weights(static_cast<std::size_t>(next), 0.0);
        for (int i = 0; i < k; ++i) {
            const double w = n.mixing.weights[static_cast<std::size_t>(i)];
            if (remap[static_cast<std::size_t>(i)] >= 0)
                weights[static_cast<std::size_t>(remap[static_cast<std::size_t>(i)])] = w;
            else
                n.mixing.rest += w;  // dropped mass joins the remainder
        }
        n.mixing.weights = std::move(weights);
    }
    s.tree.remap_component_slots(remap, next);

    std::vector<std::vector<double>> means(static_cast<std::size_t>(next));
    for (int i = 0; i < k; ++i)
        if (remap[static_cast<std::size_t>(i)] >= 0)
            means[static_cast<std::size_t>(remap[static_cast<std::size_t>(i)])] =
                std::move(s.book.means[static_cast<std::size_t>(i)]);
    s.book.means = std::move(means);

    for (PathAssignment& a : s.assign) {
        if (a.component == kUnassigned) continue;
        const int mapped = remap[static_cast<std::size_t>(a.component)];
        if (mapped < 0) throw std::logic_error("drop_empty_components: live assignment dropped");
        a.component = mapped;
    }
    return remap;
}

void resample_all_weights(SamplerState& s, Rng& rng, int finite_k) {
    if (finite_k == 0) drop_empty_components(s);
    const int k = s.n_components();

    for (NodeId id : s.tree.topdown_order()) {
        Node& n = s.tree.node(id);
        std::vector<double> params(static_cast<std::size_t>(k) + 1, 0.0);
        if (n.parent == kNoNode) {
            for (int i = 0; i < k; ++i)
                params[static_cast<std::size_t>(i)] =
                    finite_k > 0 ? n.comp_counts[static_cast<std::size_t>(i)] + s.hp.gamma0 / k
                                 : static_cast<double>(n.comp_counts[static_cast<std::size_t>(i)]);
            params.back() = finite_k > 0 ? 0.0 : s.hp.gamma0;
        } else {
            const StickWeights& parent = s.tree.node(n.parent).mixing;
            for (int i = 0; i < k; ++i)
                params[static_cast<std::size_t>(i)] =
                    n.comp_counts[static_cast<std::size_t>(i)] +
                    s.hp.gamma * parent.weights[static_cast<std::size_t>(i)];
            params.back() = s.hp.gamma * parent.rest;
        }
        std::vector<double> draw = sample_dirichlet(params, rng);
        n.mixing.rest = draw.back();
        draw.pop_back();
        n.mixing.weights = std::move(draw);
    }
}

double mixing_log_prior(const Hierarchy& h, double gamma0, double gamma, int finite_k) {
    double ld = 0.0;
    for (NodeId id : h.topdown_order()) {
        const Node& n = h.node(id);
        const StickWeights& mix = n.mixing;
        if (n.parent == kNoNode) {
            if (finite_k > 0) {
                std::vector<double> params(mix.size(), gamma0 / static_cast<double>(finite_k));
                ld += dirichlet_log_density(mix.weights, params);
            } else {
                // truncated GEM: u_k ~ Beta(1, gamma0) stick fractions,
                // including the change of variables to the weights
                double remaining = 1.0;
                for (double w : mix.weights) {
                    ld += std::log(gamma0) - log_clamped(remaining);
                    const double next = remaining - w;
                    ld += (gamma0 - 1.0) * (log_clamped(next) - log_clamped(remaining));
                    remaining = next;
                }
            }
            continue;
        }
        const StickWeights& parent = h.node(n.parent).mixing;
        std::vector<double> value = mix.weights;
        value.push_back(mix.rest);
        std::vector<double> params(parent.size() + 1);
        for (std::size_t i = 0; i < parent.size(); ++i) params[i] = gamma * parent.weights[i];
        params.back() = gamma * parent.rest;
        ld += dirichlet_log_density(value, params);
    }
    return ld;
}

}  // namespace bhmc

#include "bhmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "bhmc/hdp.hpp"
#include "bhmc/ncrp.hpp"

namespace bhmc {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

void Hyperparams::resize_dim(std::size_t d) {
    if (mu0.size() != d) mu0.assign(d, mu0.size() == 1 ? mu0[0] : 0.0);
    if (sigma0_diag.size() != d)
        sigma0_diag.assign(d, sigma0_diag.size() == 1 ? sigma0_diag[0] : 1.0);
}

void Hyperparams::validate() const {
    if (alpha <= 0.0) throw std::invalid_argument("hyperparams: alpha must be > 0");
    if (gamma0 <= 0.0) throw std::invalid_argument("hyperparams: gamma0 must be > 0");
    if (gamma <= 0.0) throw std::invalid_argument("hyperparams: gamma must be > 0");
    if (sigma2 <= 0.0) throw std::invalid_argument("hyperparams: sigma2 must be > 0");
    if (levels < 1) throw std::invalid_argument("hyperparams: levels must be >= 1");
    if (epsilon <= 0.0 || epsilon > 1.0)
        throw std::invalid_argument("hyperparams: epsilon must be in (0, 1]");
    if (mu0.size() != sigma0_diag.size())
        throw std::invalid_argument("hyperparams: mu0 and sigma0 dimension mismatch");
    for (double v : sigma0_diag)
        if (v <= 0.0) throw std::invalid_argument("hyperparams: sigma0 must be > 0");
}

double log_sum_exp(std::span<const double> v) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - mx);
    return mx + std::log(sum);
}

double component_log_density(std::span<const double> x, int k, const ComponentBook& book,
                             const Hyperparams& hp) {
    if (k < 0 || k >= book.size())
        throw std::invalid_argument("component_log_density: component out of range");
    const std::vector<double>& mu = book.means[static_cast<std::size_t>(k)];
    if (mu.size() != x.size())
        throw std::invalid_argument("component_log_density: dimension mismatch");
    double ld = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double diff = x[d] - mu[d];
        ld += -0.5 * (kLog2Pi + std::log(hp.sigma2) + diff * diff / hp.sigma2);
    }
    return ld;
}

double new_component_log_density(std::span<const double> x, const Hyperparams& hp) {
    if (x.size() != hp.dim())
        throw std::invalid_argument("new_component_log_density: dimension mismatch");
    double ld = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double var = hp.sigma0_diag[d] + hp.sigma2;
        const double diff = x[d] - hp.mu0[d];
        ld += -0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
    }
    return ld;
}

double leaf_log_likelihood(std::span<const double> x, const StickWeights& mixing,
                           const ComponentBook& book, const Hyperparams& hp) {
    std::vector<double> terms;
    terms.reserve(mixing.size() + 1);
    for (std::size_t k = 0; k < mixing.size(); ++k) {
        if (mixing.weights[k] <= 0.0) continue;
        terms.push_back(std::log(mixing.weights[k]) +
                        component_log_density(x, static_cast<int>(k), book, hp));
    }
    if (mixing.rest > 0.0)
        terms.push_back(std::log(mixing.rest) + new_component_log_density(x, hp));
    return log_sum_exp(terms);
}

double leaf_log_likelihood(std::span<const double> x, NodeId leaf, const Hierarchy& h,
                           const ComponentBook& book, const Hyperparams& hp) {
    return leaf_log_likelihood(x, h.node(leaf).mixing, book, hp);
}

double complete_data_log_likelihood(const SamplerState& s) {
    double ll = s.tree.tree_log_prior(s.hp.alpha);
    for (std::size_t n = 0; n < s.assign.size(); ++n) {
        const PathAssignment& a = s.assign[n];
        if (a.component == kUnassigned)
            throw std::invalid_argument("complete_data_log_likelihood: unassigned component");
        const StickWeights& mixing = s.tree.node(a.path.back()).mixing;
        const double beta = mixing.weights[static_cast<std::size_t>(a.component)];
        ll += std::log(beta);
        ll += component_log_density(s.x().row(n), a.component, s.book, s.hp);
    }
    return ll;
}

GenerateResult generate(std::size_t n_obs, const Hyperparams& hp, GenerateMode mode,
                        int finite_k, Rng& rng) {
    hp.validate();
    if (n_obs < 1) throw std::invalid_argument("generate: n_obs must be >= 1");
    if (mode == GenerateMode::finite && finite_k < 1)
        throw std::invalid_argument("generate: finite mode needs k >= 1");
    const std::size_t dim = hp.dim();
    if (dim == 0) throw std::invalid_argument("generate: hyperparams carry no dimension");

    GenerateResult out(hp.levels);
    Node& root = out.tree.node(out.tree.root());
    if (mode == GenerateMode::infinite) {
        root.mixing = gem_stick_breaking(hp.gamma0, hp.epsilon, rng);
    } else {
        const std::vector<double> params(static_cast<std::size_t>(finite_k),
                                         hp.gamma0 / finite_k);
        root.mixing.weights = sample_dirichlet(params, rng);
        root.mixing.rest = 0.0;
    }
    for (std::size_t k = 0; k < root.mixing.size(); ++k) {
        out.book.means.push_back(sample_gaussian_diag(hp.mu0, hp.sigma0_diag, rng));
        out.tree.append_component_slot();
    }

    out.data = Matrix(n_obs, dim);
    out.assign.resize(n_obs);
    for (std::size_t n = 0; n < n_obs; ++n) {
        const PathProposal prop = sample_path(out.tree, hp.alpha, rng);
        const std::vector<NodeId> path = out.tree.attach_path(prop.decisions);
        for (std::size_t l = 1; l < path.size(); ++l) {
            if (prop.decisions[l - 1].is_new())
                init_node_weights(out.tree, path[l], hp.gamma, rng);
        }
        const StickWeights& leaf = out.tree.node(path.back()).mixing;
        std::vector<double> probs = leaf.weights;
        probs.push_back(leaf.rest);
        std::size_t pick = sample_categorical(probs, rng);
        if (pick == leaf.size()) {
            // remainder mass: a fresh global component is born
            out.book.means.push_back(sample_gaussian_diag(hp.mu0, hp.sigma0_diag, rng));
            extend_for_new_component(out.tree, hp.gamma0, hp.gamma, rng);
            pick = leaf.size() - 1;
        }
        out.assign[n].path = path;
        out.assign[n].component = static_cast<int>(pick);
        out.tree.add_component_count(path, static_cast<int>(pick), +1);

        const std::vector<double>& mu = out.book.means[pick];
        const std::vector<double> var(dim, hp.sigma2);
        const std::vector<double> x = sample_gaussian_diag(mu, var, rng);
        std::copy(x.begin(), x.end(), out.data.values.begin() + n * dim);
    }
    return out;
}

void check_state_consistency(const SamplerState& s, double simplex_tol) {
    const int k = s.n_components();
    if (s.tree.component_slots() != k)
        throw std::logic_error("state check: component slots disagree with book");

    std::unordered_map<NodeId, int> thru;
    std::unordered_map<NodeId, std::vector<int>> comp;
    for (const PathAssignment& a : s.assign) {
        if (a.path.empty() || a.path.front() != s.tree.root())
            throw std::logic_error("state check: path does not start at root");
        if (static_cast<int>(a.path.size()) != s.hp.levels + 1)
            throw std::logic_error("state check: path length mismatch");
        for (std::size_t l = 0; l < a.path.size(); ++l) {
            const NodeId id = a.path[l];
            const Node& node = s.tree.node(id);
            if (node.depth != static_cast<int>(l))
                throw std::logic_error("state check: node depth disagrees with path position");
            if (l > 0 && node.parent != a.path[l - 1])
                throw std::logic_error("state check: path is not a root-to-leaf chain");
            thru[id] += 1;
            if (a.component != kUnassigned) {
                auto& counts = comp[id];
                counts.resize(static_cast<std::size_t>(k), 0);
                counts[static_cast<std::size_t>(a.component)] += 1;
            }
        }
    }
    const std::vector<NodeId> order = s.tree.topdown_order();
    if (order.size() != s.tree.node_count())
        throw std::logic_error("state check: unreachable nodes present");
    for (NodeId id : order) {
        const Node& node = s.tree.node(id);
        if (node.n_thru != thru[id])
            throw std::logic_error("state check: n_thru disagrees with recount");
        if (id != s.tree.root() && node.n_thru == 0)
            throw std::logic_error("state check: empty non-root node");
        std::vector<int> expected(static_cast<std::size_t>(k), 0);
        if (auto it = comp.find(id); it != comp.end()) expected = it->second;
        if (node.comp_counts != expected)
            throw std::logic_error("state check: comp_counts disagree with recount");
        if (static_cast<int>(node.mixing.size()) != k)
            throw std::logic_error("state check: mixing length disagrees with book");
        double sum = node.mixing.rest;
        if (node.mixing.rest < 0.0) throw std::logic_error("state check: negative remainder");
        for (double w : node.mixing.weights) {
            if (w < 0.0) throw std::logic_error("state check: negative weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > simplex_tol)
            throw std::logic_error("state check: node weights do not sum to one");
    }
}

}  // namespace bhmc

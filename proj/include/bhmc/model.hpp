#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bhmc/hierarchy.hpp"
#include "bhmc/rng.hpp"

namespace bhmc {

// Dense row-major matrix; rows are observations.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * cols, cols};
    }
    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

struct Hyperparams {
    double alpha = 0.4;    // nCRP concentration
    double gamma0 = 1.0;   // root DP concentration
    double gamma = 0.5;    // child DP concentration
    double sigma2 = 1.0;   // component covariance sigma^2 * I
    std::vector<double> mu0;          // base mean, one entry per dimension
    std::vector<double> sigma0_diag;  // base covariance diagonal
    int levels = 4;
    double epsilon = 1e-3;            // root stick truncation threshold
    std::uint64_t seed = 1;

    std::size_t dim() const { return mu0.size(); }
    void resize_dim(std::size_t d);   // broadcasts defaults mu0=0, sigma0=1
    void validate() const;
};

// Global component parameters (Gaussian means) shared by every node.
struct ComponentBook {
    std::vector<std::vector<double>> means;

    int size() const { return static_cast<int>(means.size()); }
};

inline constexpr int kUnassigned = -1;

struct PathAssignment {
    std::vector<NodeId> path;  // root ... leaf, length levels+1
    int component = kUnassigned;
};

// Everything one chain mutates: data handle, tree, components, assignments.
struct SamplerState {
    const Matrix* data = nullptr;  // not owned
    Hyperparams hp;
    Hierarchy tree;
    ComponentBook book;
    std::vector<PathAssignment> assign;
    std::uint64_t iteration = 0;

    SamplerState(const Matrix& x, const Hyperparams& h) : data(&x), hp(h), tree(h.levels) {}

    const Matrix& x() const { return *data; }
    int n_components() const { return book.size(); }
};

// log N(x; theta_k, sigma^2 I)
double component_log_density(std::span<const double> x, int k, const ComponentBook& book,
                             const Hyperparams& hp);

// log of f*(x), the prior predictive of a fresh component:
// N(x; mu0, Sigma0 + sigma^2 I).
double new_component_log_density(std::span<const double> x, const Hyperparams& hp);

// log( sum_k beta_k f(x;theta_k) + beta* f*(x) ) at the given leaf.
double leaf_log_likelihood(std::span<const double> x, NodeId leaf, const Hierarchy& h,
                           const ComponentBook& book, const Hyperparams& hp);

double leaf_log_likelihood(std::span<const double> x, const StickWeights& mixing,
                           const ComponentBook& book, const Hyperparams& hp);

// log p(X, c, V | B, theta) = sum_n [ log beta_{leaf,c_n} + log f(x_n;theta_{c_n}) ]
// plus the nCRP tree prior.
double complete_data_log_likelihood(const SamplerState& s);

enum class GenerateMode { infinite, finite };

struct GenerateResult {
    Matrix data;
    Hierarchy tree;
    ComponentBook book;
    std::vector<PathAssignment> assign;

    GenerateResult(int levels) : tree(levels) {}
};

// Forward draw of the full generative process. Infinite mode truncates the
// root stick at hp.epsilon and lets the leaf remainder spawn components;
// finite mode uses symmetric Dirichlets over exactly finite_k components.
GenerateResult generate(std::size_t n_obs, const Hyperparams& hp, GenerateMode mode,
                        int finite_k, Rng& rng);

// Recomputes every n_thru/comp_counts from the assignments and checks them,
// plus simplex validity of every node. Throws std::logic_error on mismatch.
void check_state_consistency(const SamplerState& s, double simplex_tol = 1e-12);

double log_sum_exp(std::span<const double> v);

}  // namespace bhmc

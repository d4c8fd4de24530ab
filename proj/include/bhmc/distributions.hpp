#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bhmc/rng.hpp"

namespace bhmc {

// Mixing proportions of one node: one weight per global component plus the
// remaining stick mass for components not yet instantiated.
struct StickWeights {
    std::vector<double> weights;
    double rest = 1.0;

    std::size_t size() const { return weights.size(); }
    double total() const;
};

// Breaks one more piece off the stick: appends rest*u and shrinks rest.
void append_broken_piece(StickWeights& stick, double u);

// Dirichlet draw via normalized gammas. A parameter of exactly zero yields an
// exactly zero coordinate (point-mass convention). Throws if all are zero.
std::vector<double> sample_dirichlet(std::span<const double> params, Rng& rng);

// Beta draw with the degenerate conventions Beta(a,0) = 1 and Beta(0,b) = 0
// held exactly. Throws if a = b = 0.
double sample_beta(double a, double b, Rng& rng);

// GEM(gamma0) stick-breaking, truncated as soon as the remainder is <= epsilon.
StickWeights gem_stick_breaking(double gamma0, double epsilon, Rng& rng);

// One DP(gamma, parent) draw expressed over the parent's component book:
// u_k ~ Beta(gamma*parent_k, gamma*(mass of parent beyond k)).
StickWeights dp_child_weights(const StickWeights& parent, double gamma, Rng& rng);

// Independent per-coordinate Gaussian draws.
std::vector<double> sample_gaussian_diag(std::span<const double> mean,
                                         std::span<const double> variances, Rng& rng);

// Index draw proportional to the given non-negative weights.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

namespace detail {

// Stick-breaking loop with an injectable break-fraction source; the public
// gem_stick_breaking wires in Beta(1, gamma0) draws.
template <typename NextU>
StickWeights gem_with(double epsilon, NextU&& next_u) {
    StickWeights stick;
    while (stick.rest > epsilon) {
        append_broken_piece(stick, next_u());
    }
    return stick;
}

}  // namespace detail

}  // namespace bhmc

#include "bhmc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bhmc {

double StickWeights::total() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0) + rest;
}

void append_broken_piece(StickWeights& stick, double u) {
    const double piece = stick.rest * u;
    stick.weights.push_back(piece);
    stick.rest -= piece;
    if (stick.rest < 0.0) stick.rest = 0.0;
}

std::vector<double> sample_dirichlet(std::span<const double> params, Rng& rng) {
    if (params.empty()) throw std::invalid_argument("sample_dirichlet: no parameters");
    std::vector<double> out(params.size(), 0.0);
    double sum = 0.0;
    bool any_positive = false;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i] < 0.0) throw std::invalid_argument("sample_dirichlet: negative parameter");
        if (params[i] == 0.0) continue;
        any_positive = true;
        out[i] = rng.gamma(params[i]);
        sum += out[i];
    }
    if (!any_positive) throw std::invalid_argument("sample_dirichlet: all parameters zero");
    if (sum <= 0.0) {
        // Gamma draws for very small shapes can all underflow to zero; fall
        // back to a one-hot draw proportional to the parameters.
        std::size_t i = sample_categorical(params, rng);
        std::fill(out.begin(), out.end(), 0.0);
        out[i] = 1.0;
        return out;
    }
    for (double& v : out) v /= sum;
    return out;
}

double sample_beta(double a, double b, Rng& rng) {
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("sample_beta: negative parameter");
    if (a == 0.0 && b == 0.0) throw std::invalid_argument("sample_beta: both parameters zero");
    if (b == 0.0) return 1.0;
    if (a == 0.0) return 0.0;
    const double ga = rng.gamma(a);
    const double gb = rng.gamma(b);
    const double sum = ga + gb;
    if (sum <= 0.0) return rng.uniform() < a / (a + b) ? 1.0 : 0.0;
    return ga / sum;
}

StickWeights gem_stick_breaking(double gamma0, double epsilon, Rng& rng) {
    if (gamma0 <= 0.0) throw std::invalid_argument("gem_stick_breaking: gamma0 must be > 0");
    if (epsilon <= 0.0 || epsilon > 1.0)
        throw std::invalid_argument("gem_stick_breaking: epsilon must be in (0, 1]");
    return detail::gem_with(epsilon, [&] { return sample_beta(1.0, gamma0, rng); });
}

StickWeights dp_child_weights(const StickWeights& parent, double gamma, Rng& rng) {
    if (gamma <= 0.0) throw std::invalid_argument("dp_child_weights: gamma must be > 0");
    StickWeights child;
    child.weights.reserve(parent.size());
    // Mass of the parent stick beyond position k, ending at the remainder.
    double beyond = parent.rest;
    for (std::size_t i = parent.size(); i-- > 0;) beyond += parent.weights[i];
    for (std::size_t k = 0; k < parent.size(); ++k) {
        beyond -= parent.weights[k];
        const double a = gamma * parent.weights[k];
        const double b = gamma * std::max(beyond, 0.0);
        const double u = (a == 0.0 && b == 0.0) ? 0.0 : sample_beta(a, b, rng);
        append_broken_piece(child, u);
    }
    return child;
}

std::vector<double> sample_gaussian_diag(std::span<const double> mean,
                                         std::span<const double> variances, Rng& rng) {
    if (mean.size() != variances.size())
        throw std::invalid_argument("sample_gaussian_diag: dimension mismatch");
    std::vector<double> out(mean.size());
    for (std::size_t d = 0; d < mean.size(); ++d) {
        if (variances[d] <= 0.0)
            throw std::invalid_argument("sample_gaussian_diag: variance must be > 0");
        out[d] = rng.normal(mean[d], std::sqrt(variances[d]));
    }
    return out;
}

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("sample_categorical: negative weight");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("sample_categorical: weights sum to zero");
    const double target = rng.uniform() * sum;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    // Rounding can leave target == sum; return the last positive weight.
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return i;
    return weights.size() - 1;
}

}  // namespace bhmc

#include "abcmc/simulate.hpp"

#include "abcmc/distributions.hpp"

#include <stdexcept>

namespace abcmc {

namespace {

void check_model_index(int model_index) {
    if (model_index != 1 && model_index != 2)
        throw std::invalid_argument("model_index must be 1 or 2");
}

} // namespace

std::vector<double> sample_prior(const ModelPairSpec& pair, int model_index, RngStream& rng) {
    check_model_index(model_index);
    pair.validate();
    if (pair.is_count_pair()) {
        return {model_index == 1 ? sample_exponential(rng, 1.0)
                                 : sample_uniform(rng, 0.0, 1.0)};
    }
    return {sample_normal(rng, 0.0, pair.prior_scale_a)};
}

Dataset simulate_dataset(const ModelPairSpec& pair, int model_index,
                         std::span<const double> theta, std::size_t n, RngStream& rng) {
    check_model_index(model_index);
    pair.validate();
    if (n == 0) throw std::invalid_argument("simulate_dataset: n must be >= 1");
    if (theta.size() != 1) throw std::invalid_argument("simulate_dataset: theta must have dimension 1");

    Dataset data;
    data.values.resize(n);
    if (pair.is_count_pair()) {
        if (model_index == 1) {
            for (double& v : data.values) v = sample_poisson(rng, theta[0]);
        } else {
            for (double& v : data.values) v = sample_geometric(rng, theta[0]);
        }
    } else {
        const double sigma = (model_index == 1) ? pair.sigma1 : pair.sigma2;
        for (double& v : data.values) v = sample_normal(rng, theta[0], sigma);
    }
    return data;
}

} // namespace abcmc

#pragma once

#include "abcmc/data.hpp"
#include "abcmc/rng.hpp"

#include <span>
#include <vector>

namespace abcmc {

// Draw theta from the prior of the indexed model. Both built-in pairs have
// a scalar parameter (lambda, p, or mu), returned as a 1-vector.
std::vector<double> sample_prior(const ModelPairSpec& pair, int model_index, RngStream& rng);

// n i.i.d. draws from the indexed likelihood at theta.
Dataset simulate_dataset(const ModelPairSpec& pair, int model_index,
                         std::span<const double> theta, std::size_t n, RngStream& rng);

} // namespace abcmc

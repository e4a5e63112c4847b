#include "abcmc/data.hpp"

#include <cmath>
#include <stdexcept>

namespace abcmc {

ModelPairSpec ModelPairSpec::poisson_geometric() {
    return ModelPairSpec{PairKind::PoissonGeometric, 0.0, 0.0, 0.0};
}

ModelPairSpec ModelPairSpec::normal_normal(double sigma1, double sigma2, double prior_scale_a) {
    ModelPairSpec pair{PairKind::NormalNormal, sigma1, sigma2, prior_scale_a};
    pair.validate();
    return pair;
}

std::string ModelPairSpec::name() const {
    return is_count_pair() ? "pois-geo" : "normal";
}

void ModelPairSpec::validate() const {
    if (kind == PairKind::NormalNormal) {
        if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !(prior_scale_a > 0.0))
            throw std::invalid_argument("ModelPairSpec: normal pair needs sigma1, sigma2, a > 0");
    }
}

bool Dataset::is_count_data() const {
    for (double v : values)
        if (!(v >= 0.0) || std::floor(v) != v) return false;
    return true;
}

void Dataset::validate_for(const ModelPairSpec& pair) const {
    if (values.empty()) throw std::invalid_argument("Dataset: empty (n must be >= 1)");
    if (pair.is_count_pair() && !is_count_data())
        throw std::invalid_argument("Dataset: count pair requires non-negative integer values");
}

ModelPrior ModelPrior::of(double p1) {
    ModelPrior prior{p1, 1.0 - p1};
    prior.validate();
    return prior;
}

void ModelPrior::validate() const {
    if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0) || std::fabs(p1 + p2 - 1.0) > 1e-12)
        throw std::invalid_argument("ModelPrior: weights must lie in [0,1] and sum to 1");
}

} // namespace abcmc

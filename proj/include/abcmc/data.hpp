#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace abcmc {

// One of the two built-in two-model comparisons.
//
// PoissonGeometric: model 1 is Poisson(lambda) with lambda ~ Exponential(1);
// model 2 is Geometric(p) with pmf p(1-p)^y on {0,1,2,...} and p ~ U(0,1).
// The support convention matters: with it, the sum of n observations under
// model 2 is negative binomial NB(n, p), which every closed form below
// relies on. A shifted geometric would silently invalidate them all.
//
// NormalNormal: model i is i.i.d. Normal(mu, sigma_i^2) with the shared
// prior mu ~ Normal(0, a^2).
enum class PairKind { PoissonGeometric, NormalNormal };

struct ModelPairSpec {
    PairKind kind = PairKind::PoissonGeometric;
    double sigma1 = 0.0;        // NormalNormal only
    double sigma2 = 0.0;        // NormalNormal only
    double prior_scale_a = 0.0; // NormalNormal only

    static ModelPairSpec poisson_geometric();
    static ModelPairSpec normal_normal(double sigma1, double sigma2, double prior_scale_a);

    bool is_count_pair() const { return kind == PairKind::PoissonGeometric; }
    std::string name() const;
    void validate() const;
};

struct Dataset {
    std::vector<double> values;

    std::size_t n() const { return values.size(); }
    bool is_count_data() const; // all values integral and >= 0
    void validate_for(const ModelPairSpec& pair) const;
};

// Prior weights on the two model indices. Degenerate weights (0 or 1) are
// accepted so a reference table can be forced to a single model.
struct ModelPrior {
    double p1 = 0.5;
    double p2 = 0.5;

    static ModelPrior uniform() { return {0.5, 0.5}; }
    static ModelPrior of(double p1);
    void validate() const;
};

} // namespace abcmc

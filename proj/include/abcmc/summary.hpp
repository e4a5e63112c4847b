#pragma once

#include "abcmc/data.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace abcmc {

// Summary statistics. Every statistic is exactly invariant under
// permutation of the dataset: the implementation accumulates over a sorted
// copy of the values, so even floating-point round-off cannot break the
// invariance.
enum class StatId {
    Sum,               // (S) with S = sum of counts
    SumAndLogFactProd, // (S, sum_i log y_i!)
    Mean,              // (ybar)
    MeanAndSumSq,      // (ybar, S^2) with S^2 = sum (y_i - ybar)^2
    Identity,          // values sorted ascending
};

struct SummaryStatistic {
    StatId id = StatId::Sum;

    std::size_t output_dim(std::size_t n) const;
    bool needs_count_data() const { return id == StatId::Sum || id == StatId::SumAndLogFactProd; }
    std::string name() const;
    static SummaryStatistic from_name(const std::string& name);
};

std::vector<double> summarize(SummaryStatistic stat, const Dataset& data);

// Canonical (sorted-order) accumulations shared by the summaries and the
// analytic marginal likelihoods, so quantities that must cancel in the
// factorization identity are computed from bit-identical intermediates.
double sum_of(const Dataset& data);
double sum_log_factorials(const Dataset& data); // sum_i lgamma(y_i + 1)
void mean_and_sumsq(const Dataset& data, double& mean, double& sumsq);

} // namespace abcmc

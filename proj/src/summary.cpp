#include "abcmc/summary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abcmc {

std::size_t SummaryStatistic::output_dim(std::size_t n) const {
    switch (id) {
        case StatId::Sum: return 1;
        case StatId::SumAndLogFactProd: return 2;
        case StatId::Mean: return 1;
        case StatId::MeanAndSumSq: return 2;
        case StatId::Identity: return n;
    }
    throw std::invalid_argument("SummaryStatistic: unknown id");
}

std::string SummaryStatistic::name() const {
    switch (id) {
        case StatId::Sum: return "sum";
        case StatId::SumAndLogFactProd: return "sum-logfact";
        case StatId::Mean: return "mean";
        case StatId::MeanAndSumSq: return "mean-ss";
        case StatId::Identity: return "identity";
    }
    throw std::invalid_argument("SummaryStatistic: unknown id");
}

SummaryStatistic SummaryStatistic::from_name(const std::string& name) {
    if (name == "sum") return {StatId::Sum};
    if (name == "sum-logfact") return {StatId::SumAndLogFactProd};
    if (name == "mean") return {StatId::Mean};
    if (name == "mean-ss") return {StatId::MeanAndSumSq};
    if (name == "identity") return {StatId::Identity};
    throw std::invalid_argument("SummaryStatistic: unknown name '" + name + "'");
}

namespace {

std::vector<double> sorted_values(const Dataset& data) {
    std::vector<double> v = data.values;
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

double sum_of(const Dataset& data) {
    double total = 0.0;
    for (double v : sorted_values(data)) total += v;
    return total;
}

double sum_log_factorials(const Dataset& data) {
    double total = 0.0;
    for (double v : sorted_values(data)) total += std::lgamma(v + 1.0);
    return total;
}

void mean_and_sumsq(const Dataset& data, double& mean, double& sumsq) {
    const std::vector<double> v = sorted_values(data);
    double total = 0.0;
    for (double x : v) total += x;
    mean = total / static_cast<double>(v.size());
    sumsq = 0.0;
    for (double x : v) sumsq += (x - mean) * (x - mean);
}

std::vector<double> summarize(SummaryStatistic stat, const Dataset& data) {
    if (data.n() == 0) throw std::invalid_argument("summarize: empty dataset");
    if (stat.needs_count_data() && !data.is_count_data())
        throw std::invalid_argument("summarize: count statistic applied to non-count data");

    switch (stat.id) {
        case StatId::Sum:
            return {sum_of(data)};
        case StatId::SumAndLogFactProd:
            return {sum_of(data), sum_log_factorials(data)};
        case StatId::Mean: {
            double mean, ss;
            mean_and_sumsq(data, mean, ss);
            return {mean};
        }
        case StatId::MeanAndSumSq: {
            double mean, ss;
            mean_and_sumsq(data, mean, ss);
            return {mean, ss};
        }
        case StatId::Identity:
            return sorted_values(data);
    }
    throw std::invalid_argument("summarize: unknown statistic");
}

} // namespace abcmc

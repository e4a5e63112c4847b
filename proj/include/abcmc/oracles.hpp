#pragma once

#include "abcmc/data.hpp"

#include <span>

namespace abcmc {

// Natural log of a positive quantity. Every oracle below works purely in
// the log domain; probability-scale overflow is not permitted anywhere.
struct LogValue {
    double log_value = 0.0;
};

// Exact log marginal likelihood w_m(y) of the full dataset.
//
// Count pair:   model 1: S! / ((n+1)^(S+1) prod_i y_i!)
//               model 2: n! S! / (n+S+1)!
// Normal pair:  (2 pi)^(-n/2) sigma^(-(n-1)) (sigma^2+n a^2)^(-1/2)
//               * exp{ -S^2/(2 sigma^2) - n ybar^2 / (2 (sigma^2+n a^2)) }
LogValue log_marginal_full(const ModelPairSpec& pair, int model_index, const Dataset& data);

// log B12(y) = log w1(y) - log w2(y).
LogValue log_bayes_factor_full(const ModelPairSpec& pair, const Dataset& data);

// Exact log marginal density of the summary statistic alone: the sum S for
// the count pair (Poisson(n lambda) mixed over Exp(1), and negative
// binomial NB(n,p) mixed over U(0,1)), the mean for the normal pair
// (N(0, a^2 + sigma^2/n) density at ybar). eta must be 1-dimensional.
LogValue log_marginal_eta(const ModelPairSpec& pair, int model_index,
                          std::span<const double> eta, std::size_t n);

// log B^eta_12(y), the Bayes factor based on the sole value of the
// statistic: Sum for the count pair, Mean for the normal pair.
LogValue log_bayes_factor_eta(const ModelPairSpec& pair, const Dataset& data);

// log g1(y)/g2(y), the data-dependent factor linking the two Bayes
// factors: B12 = (g1/g2) * B^eta exactly.
//
// Count pair:   C(n+S-1,S) S! n^(-S) / prod_i y_i!
// Normal pair:  (sigma2/sigma1)^(n-1)
//               * exp{ (sigma2^-2 - sigma1^-2)/2 * S^2 },
// where S^2 is the full sum of squared deviations about the mean (the
// (n-1)-term form collapses to it because the deviations sum to zero).
LogValue log_discrepancy_ratio(const ModelPairSpec& pair, const Dataset& data);

// Large-n limit of B^eta_12 for the count pair when the data are i.i.d.
// with mean theta0: (theta0+1)^2 exp(-theta0), returned as a log.
// Derivation from the statistic marginals above, with S/n -> theta0:
//   B^eta(S,n) = (n/(n+1))^S (n+S)(n+S+1) / (n(n+1))
//             -> exp(-theta0) (1+theta0)^2.
LogValue count_pair_eta_bf_limit(double theta0);

// P(M=1|y) from a log Bayes factor and prior model weights, computed
// without leaving the log domain until the final logistic map.
double posterior_prob_from_log_bf(LogValue log_bf, const ModelPrior& prior);

} // namespace abcmc

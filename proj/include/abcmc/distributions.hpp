#pragma once

#include "abcmc/rng.hpp"

namespace abcmc {

// Primitive samplers. All draw exclusively from the given stream, so a
// fixed (master_seed, stream_index) replays the same values. Parameter
// domain violations throw std::invalid_argument.

double sample_uniform(RngStream& rng, double a, double b);      // a < b
double sample_exponential(RngStream& rng, double rate);         // rate > 0
double sample_normal(RngStream& rng, double mu, double sigma);  // sigma > 0
double sample_poisson(RngStream& rng, double lambda);           // lambda >= 0
// Failures-before-first-success convention: support {0,1,2,...} with
// pmf p(1-p)^y. Requires 0 < p <= 1.
double sample_geometric(RngStream& rng, double p);

// Inverse standard normal CDF (Wichura 1988, algorithm AS 241, PPND16
// variant). u must lie in (0,1).
double standard_normal_quantile(double u);

struct PrimitiveDist {
    enum class Kind { Poisson, Geometric, Normal, Exponential, Uniform };
    Kind kind;
    double a = 0.0; // lambda / p / mu / rate / lower bound
    double b = 0.0; // sigma / upper bound

    static PrimitiveDist poisson(double lambda) { return {Kind::Poisson, lambda, 0.0}; }
    static PrimitiveDist geometric(double p) { return {Kind::Geometric, p, 0.0}; }
    static PrimitiveDist normal(double mu, double sigma) { return {Kind::Normal, mu, sigma}; }
    static PrimitiveDist exponential(double rate) { return {Kind::Exponential, rate, 0.0}; }
    static PrimitiveDist uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
};

double sample_primitive(const PrimitiveDist& dist, RngStream& rng);

} // namespace abcmc

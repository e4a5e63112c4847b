#include "abcmc/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace abcmc {

double sample_uniform(RngStream& rng, double a, double b) {
    if (!(a < b)) throw std::invalid_argument("sample_uniform: requires a < b");
    return a + rng.next_double() * (b - a);
}

double sample_exponential(RngStream& rng, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("sample_exponential: requires rate > 0");
    return -std::log(rng.next_double()) / rate;
}

double standard_normal_quantile(double u) {
    // Wichura (1988), AS 241, PPND16. Accurate to ~1e-16 relative over (0,1).
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("standard_normal_quantile: u outside (0,1)");

    static const double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,  1.9715909503065514427e3,
        1.3731693765509461125e4,  4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static const double b[8] = {
        1.0,                      4.2313330701600911252e1,  6.8718700749205790830e2,
        5.3941960214247511077e3,  2.1213794301586595867e4,  3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static const double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
        3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[8] = {
        1.0,                      2.05319162663775882187e0, 1.67638483018380384940e0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static const double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[8] = {
        1.0,                      5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto poly = [](const double* p, double x) {
        return ((((((p[7] * x + p[6]) * x + p[5]) * x + p[4]) * x + p[3]) * x + p[2]) * x + p[1]) * x + p[0];
    };

    const double q = u - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = (q < 0.0) ? u : 1.0 - u;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        z = poly(e, r) / poly(f, r);
    }
    return (q < 0.0) ? -z : z;
}

double sample_normal(RngStream& rng, double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sample_normal: requires sigma > 0");
    return mu + sigma * standard_normal_quantile(rng.next_double());
}

namespace {

// Knuth-style inversion by multiplication; expected lambda+1 uniforms.
double poisson_small(RngStream& rng, double lambda) {
    const double limit = std::exp(-lambda);
    double product = rng.next_double();
    double k = 0.0;
    while (product > limit) {
        product *= rng.next_double();
        k += 1.0;
    }
    return k;
}

// Hoermann (1993), transformed rejection with squeeze (PTRS). Valid for
// lambda >= 10, two uniforms per trial, acceptance rate near 1.
double poisson_ptrs(RngStream& rng, double lambda) {
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double U = rng.next_double() - 0.5;
        const double V = rng.next_double();
        const double us = 0.5 - std::fabs(U);
        const double k = std::floor((2.0 * a / us + b) * U + lambda + 0.43);
        if (us >= 0.07 && V <= v_r) return k;
        if (k < 0.0 || (us < 0.013 && V > us)) continue;
        if (std::log(V) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -lambda + k * loglam - std::lgamma(k + 1.0))
            return k;
    }
}

} // namespace

double sample_poisson(RngStream& rng, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("sample_poisson: requires lambda >= 0");
    if (lambda == 0.0) return 0.0;
    return (lambda < 10.0) ? poisson_small(rng, lambda) : poisson_ptrs(rng, lambda);
}

double sample_geometric(RngStream& rng, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("sample_geometric: requires 0 < p <= 1");
    if (p == 1.0) return 0.0;
    // Inversion: floor(log U / log(1-p)) has pmf p(1-p)^y on {0,1,2,...}.
    return std::floor(std::log(rng.next_double()) / std::log1p(-p));
}

double sample_primitive(const PrimitiveDist& dist, RngStream& rng) {
    using Kind = PrimitiveDist::Kind;
    switch (dist.kind) {
        case Kind::Poisson: return sample_poisson(rng, dist.a);
        case Kind::Geometric: return sample_geometric(rng, dist.a);
        case Kind::Normal: return sample_normal(rng, dist.a, dist.b);
        case Kind::Exponential: return sample_exponential(rng, dist.a);
        case Kind::Uniform: return sample_uniform(rng, dist.a, dist.b);
    }
    throw std::invalid_argument("sample_primitive: unknown distribution kind");
}

} // namespace abcmc

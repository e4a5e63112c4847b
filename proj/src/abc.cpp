#include "abcmc/abc.hpp"

#include "abcmc/csv.hpp"
#include "abcmc/parallel.hpp"
#include "abcmc/rng.hpp"
#include "abcmc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace abcmc {

std::string metric_name(DistanceMetric metric) {
    return metric == DistanceMetric::Euclidean ? "euclidean" : "normalized-euclidean";
}

AcceptanceRule AcceptanceRule::fixed_tolerance(double epsilon) {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("AcceptanceRule: tolerance must be >= 0");
    return {Mode::FixedTolerance, epsilon, 0};
}

AcceptanceRule AcceptanceRule::k_nearest(std::size_t k) {
    if (k == 0) throw std::invalid_argument("AcceptanceRule: k must be >= 1");
    return {Mode::KNearest, 0.0, k};
}

AcceptanceRule AcceptanceRule::from_name(const std::string& name) {
    if (name.rfind("eps:", 0) == 0) {
        const std::string value = name.substr(4);
        return fixed_tolerance(value == "inf" ? std::numeric_limits<double>::infinity()
                                              : std::stod(value));
    }
    if (name.rfind("knn:", 0) == 0)
        return k_nearest(static_cast<std::size_t>(std::stoull(name.substr(4))));
    throw std::invalid_argument("AcceptanceRule: expected 'eps:<x>' or 'knn:<k>', got '" + name + "'");
}

std::string AcceptanceRule::name() const {
    if (mode == Mode::FixedTolerance)
        return "eps:" + (std::isinf(epsilon) ? std::string("inf") : format_g17(epsilon));
    return "knn:" + std::to_string(k);
}

void AbcConfig::validate() const {
    model_prior.validate();
    if (table_size == 0) throw std::invalid_argument("AbcConfig: table_size must be >= 1");
    if (data_size == 0) throw std::invalid_argument("AbcConfig: data_size must be >= 1");
    if (rule.mode == AcceptanceRule::Mode::KNearest && rule.k > table_size)
        throw std::invalid_argument("AbcConfig: k exceeds table size");
}

ReferenceTable generate_reference_table(const ModelPairSpec& pair, const AbcConfig& config) {
    pair.validate();
    config.validate();
    if (config.statistic.needs_count_data() && !pair.is_count_pair())
        throw std::invalid_argument("generate_reference_table: count statistic on the normal pair");

    const std::size_t T = config.table_size;
    const std::size_t dim = config.statistic.output_dim(config.data_size);

    ReferenceTable table;
    table.pair = pair;
    table.statistic = config.statistic;
    table.data_size = config.data_size;
    table.master_seed = config.master_seed;
    table.summary_dim = dim;
    table.model.resize(T);
    table.theta.resize(T);
    table.summaries.resize(T * dim);

    parallel_for_index(T, config.workers, [&](std::size_t i) {
        RngStream stream(config.master_seed, i);
        const int m = stream.next_double() < config.model_prior.p1 ? 1 : 2;
        const std::vector<double> theta = sample_prior(pair, m, stream);
        const Dataset z = simulate_dataset(pair, m, theta, config.data_size, stream);
        const std::vector<double> eta = summarize(config.statistic, z);
        table.model[i] = m;
        table.theta[i] = theta[0];
        std::copy(eta.begin(), eta.end(), table.summaries.begin() + i * dim);
    });
    return table;
}

void write_reference_table_csv(const ReferenceTable& table, std::ostream& out) {
    out << "# pair: " << table.pair.name() << "\n";
    out << "# statistic: " << table.statistic.name() << "\n";
    out << "# n: " << table.data_size << "\n";
    out << "# T: " << table.size() << "\n";
    out << "# seed: " << table.master_seed << "\n";
    out << "m,theta_1";
    for (std::size_t j = 0; j < table.summary_dim; ++j) out << ",eta_" << (j + 1);
    out << "\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.model[i] << ',' << format_g17(table.theta[i]);
        for (double v : table.summary_row(i)) out << ',' << format_g17(v);
        out << "\n";
    }
}

namespace {

double median_of(std::vector<double>& scratch) {
    const std::size_t n = scratch.size();
    auto mid = scratch.begin() + n / 2;
    std::nth_element(scratch.begin(), mid, scratch.end());
    double hi = *mid;
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(scratch.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace

DistanceResult compute_distances(const ReferenceTable& table, std::span<const double> eta_obs,
                                 DistanceMetric metric) {
    if (eta_obs.size() != table.summary_dim)
        throw std::invalid_argument("compute_distances: observed summary dimension mismatch");

    const std::size_t T = table.size();
    const std::size_t dim = table.summary_dim;

    std::vector<double> inv_scale(dim, 1.0);
    DistanceResult result;
    if (metric == DistanceMetric::NormalizedEuclidean) {
        std::vector<double> column(T);
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t i = 0; i < T; ++i) column[i] = table.summaries[i * dim + j];
            const double med = median_of(column);
            for (std::size_t i = 0; i < T; ++i) column[i] = std::fabs(table.summaries[i * dim + j] - med);
            const double mad = median_of(column);
            if (mad == 0.0) {
                inv_scale[j] = 0.0; // coordinate carries no spread; excluded
                result.dropped_coordinates.push_back(j);
            } else {
                inv_scale[j] = 1.0 / mad;
            }
        }
    }

    result.distances.resize(T);
    for (std::size_t i = 0; i < T; ++i) {
        const double* row = table.summaries.data() + i * dim;
        double sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double delta = (row[j] - eta_obs[j]) * inv_scale[j];
            sq += delta * delta;
        }
        result.distances[i] = std::sqrt(sq);
    }
    return result;
}

AcceptedSet accept(const ReferenceTable& table, std::span<const double> distances,
                   const AcceptanceRule& rule) {
    if (distances.size() != table.size())
        throw std::invalid_argument("accept: distance vector length mismatch");

    AcceptedSet accepted;
    accepted.rule = rule;

    if (rule.mode == AcceptanceRule::Mode::FixedTolerance) {
        for (std::size_t i = 0; i < distances.size(); ++i) {
            if (distances[i] <= rule.epsilon) {
                accepted.indices.push_back(i);
                accepted.distances.push_back(distances[i]);
            }
        }
    } else {
        if (rule.k > table.size()) throw std::invalid_argument("accept: k exceeds table size");
        std::vector<std::size_t> order(table.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        const auto closer = [&](std::size_t a, std::size_t b) {
            if (distances[a] != distances[b]) return distances[a] < distances[b];
            return a < b; // deterministic tie-break at the k-th distance
        };
        std::nth_element(order.begin(), order.begin() + (rule.k - 1), order.end(), closer);
        order.resize(rule.k);
        std::sort(order.begin(), order.end(), closer);
        accepted.indices = std::move(order);
        accepted.distances.reserve(rule.k);
        for (std::size_t i : accepted.indices) accepted.distances.push_back(distances[i]);
    }

    for (std::size_t i : accepted.indices)
        (table.model[i] == 1 ? accepted.n1 : accepted.n2)++;
    return accepted;
}

namespace {

void check_estimation_prior(const ModelPrior& prior) {
    prior.validate();
    if (prior.p1 == 0.0 || prior.p2 == 0.0)
        throw std::invalid_argument("posterior estimation requires a non-degenerate model prior");
}

PosteriorEstimate finish_from_prob1(double prob1, const ModelPrior& prior, const AcceptanceRule& rule,
                                    EstimatorKind estimator, bool separation) {
    PosteriorEstimate est;
    est.prob1 = prob1;
    est.prob2 = 1.0 - prob1;
    est.estimator = estimator;
    est.rule = rule;
    est.separation = separation;
    est.flag = PosteriorEstimate::BfFlag::Finite;
    est.log_bf = std::log(prob1) - std::log1p(-prob1) + std::log(prior.p2) - std::log(prior.p1);
    return est;
}

} // namespace

PosteriorEstimate estimate_posterior_frequency(const AcceptedSet& accepted, const ModelPrior& prior) {
    check_estimation_prior(prior);
    const std::size_t n = accepted.size();
    if (n == 0) throw std::invalid_argument("estimate_posterior_frequency: empty accepted set");

    PosteriorEstimate est;
    est.estimator = EstimatorKind::Frequency;
    est.rule = accepted.rule;
    est.prob1 = static_cast<double>(accepted.n1) / static_cast<double>(n);
    est.prob2 = static_cast<double>(accepted.n2) / static_cast<double>(n);
    if (accepted.n2 == 0) {
        est.flag = PosteriorEstimate::BfFlag::PositiveInfinite;
    } else if (accepted.n1 == 0) {
        est.flag = PosteriorEstimate::BfFlag::NegativeInfinite;
    } else {
        est.flag = PosteriorEstimate::BfFlag::Finite;
        est.log_bf = std::log(prior.p2) - std::log(prior.p1) +
                     std::log(static_cast<double>(accepted.n1)) -
                     std::log(static_cast<double>(accepted.n2));
    }
    return est;
}

LogisticNonConvergence::LogisticNonConvergence(const PosteriorEstimate& estimate)
    : std::runtime_error("logistic IRLS did not converge within the iteration cap"),
      last_iterate(estimate) {}

namespace {

// Dense Cholesky solve of (A + ridge I) x = b for small symmetric A.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t d, double ridge) {
    for (std::size_t i = 0; i < d; ++i) a[i * d + i] += ridge;
    // in-place lower Cholesky
    for (std::size_t j = 0; j < d; ++j) {
        double diag = a[j * d + j];
        for (std::size_t k = 0; k < j; ++k) diag -= a[j * d + k] * a[j * d + k];
        if (diag <= 0.0) throw std::runtime_error("logistic IRLS: normal equations not positive definite");
        diag = std::sqrt(diag);
        a[j * d + j] = diag;
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) v -= a[i * d + k] * a[j * d + k];
            a[i * d + j] = v / diag;
        }
    }
    for (std::size_t i = 0; i < d; ++i) { // forward
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= a[i * d + k] * b[k];
        b[i] = v / a[i * d + i];
    }
    for (std::size_t ii = d; ii-- > 0;) { // backward
        double v = b[ii];
        for (std::size_t k = ii + 1; k < d; ++k) v -= a[k * d + ii] * b[k];
        b[ii] = v / a[ii * d + ii];
    }
    return b;
}

double logistic(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

constexpr double kProbClamp = 1e-6;
constexpr int kIrlsMaxIterations = 50;
constexpr double kIrlsGradientTol = 1e-8;
constexpr double kIrlsRidge = 1e-8;

} // namespace

PosteriorEstimate estimate_posterior_logistic(const AcceptedSet& accepted, const ReferenceTable& table,
                                              std::span<const double> eta_obs, double bandwidth,
                                              const ModelPrior& prior) {
    check_estimation_prior(prior);
    if (eta_obs.size() != table.summary_dim)
        throw std::invalid_argument("estimate_posterior_logistic: observed summary dimension mismatch");
    const std::size_t n = accepted.size();
    if (n < table.summary_dim + 2)
        throw std::invalid_argument("estimate_posterior_logistic: needs at least dim(eta)+2 accepted rows");
    if (!(bandwidth >= 0.0))
        throw std::invalid_argument("estimate_posterior_logistic: bandwidth must be >= 0");

    // Epanechnikov weights on the acceptance window. A zero bandwidth (all
    // distances zero) or an all-boundary window degenerates to uniform.
    std::vector<double> weight(n, 1.0);
    if (bandwidth > 0.0) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = accepted.distances[i] / bandwidth;
            weight[i] = std::max(0.0, 1.0 - r * r);
            total += weight[i];
        }
        if (total == 0.0) std::fill(weight.begin(), weight.end(), 1.0);
    }

    if (accepted.n1 == 0 || accepted.n2 == 0) {
        const double prob1 = accepted.n1 == 0 ? kProbClamp : 1.0 - kProbClamp;
        return finish_from_prob1(prob1, prior, accepted.rule, EstimatorKind::LocalLogistic, true);
    }

    // Centered covariates; columns without spread carry no local
    // information and would make the fit underdetermined away from the
    // data, so they are excluded (the intercept-only fit then reduces to
    // the weighted acceptance frequency).
    const std::size_t dim = table.summary_dim;
    std::vector<std::size_t> kept;
    {
        double wsum = 0.0;
        std::vector<double> mean(dim, 0.0), meansq(dim, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = table.summary_row(accepted.indices[i]);
            wsum += weight[i];
            for (std::size_t j = 0; j < dim; ++j) {
                const double x = row[j] - eta_obs[j];
                mean[j] += weight[i] * x;
                meansq[j] += weight[i] * x * x;
            }
        }
        for (std::size_t j = 0; j < dim; ++j) {
            mean[j] /= wsum;
            meansq[j] /= wsum;
            const double variance = meansq[j] - mean[j] * mean[j];
            if (variance > 1e-12 * (meansq[j] + 1e-300)) kept.push_back(j);
        }
    }

    const std::size_t p = kept.size() + 1; // intercept first
    std::vector<double> design(n * p);
    std::vector<double> response(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = table.summary_row(accepted.indices[i]);
        design[i * p] = 1.0;
        for (std::size_t j = 0; j < kept.size(); ++j)
            design[i * p + 1 + j] = row[kept[j]] - eta_obs[kept[j]];
        response[i] = table.model[accepted.indices[i]] == 1 ? 1.0 : 0.0;
    }

    std::vector<double> beta(p, 0.0);
    std::vector<double> fitted(n);
    bool converged = false;
    for (int iteration = 0; iteration < kIrlsMaxIterations; ++iteration) {
        std::vector<double> gradient(p, 0.0);
        std::vector<double> hessian(p * p, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = design.data() + i * p;
            double t = 0.0;
            for (std::size_t j = 0; j < p; ++j) t += beta[j] * x[j];
            const double pi = logistic(t);
            fitted[i] = pi;
            const double resid = weight[i] * (response[i] - pi);
            const double curv = weight[i] * pi * (1.0 - pi);
            for (std::size_t j = 0; j < p; ++j) {
                gradient[j] += resid * x[j];
                for (std::size_t k = 0; k <= j; ++k) hessian[j * p + k] += curv * x[j] * x[k];
            }
        }
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = j + 1; k < p; ++k) hessian[j * p + k] = hessian[k * p + j];

        double gnorm = 0.0;
        for (double g : gradient) gnorm = std::max(gnorm, std::fabs(g));
        if (gnorm < kIrlsGradientTol) {
            converged = true;
            break;
        }
        const std::vector<double> step = solve_spd(hessian, gradient, p, kIrlsRidge);
        for (std::size_t j = 0; j < p; ++j) beta[j] += step[j];
    }

    const double raw_prob1 = logistic(beta[0]); // covariates are centered at eta_obs
    const double prob1 = std::min(1.0 - kProbClamp, std::max(kProbClamp, raw_prob1));
    const bool clamped = prob1 != raw_prob1;

    if (!converged && !clamped) {
        bool perfect_fit = true;
        for (std::size_t i = 0; i < n && perfect_fit; ++i) {
            if (weight[i] == 0.0) continue;
            const double margin = response[i] == 1.0 ? fitted[i] : 1.0 - fitted[i];
            perfect_fit = margin > 0.999;
        }
        if (!perfect_fit)
            throw LogisticNonConvergence(
                finish_from_prob1(prob1, prior, accepted.rule, EstimatorKind::LocalLogistic, false));
    }

    return finish_from_prob1(prob1, prior, accepted.rule, EstimatorKind::LocalLogistic, clamped);
}

PosteriorEstimate estimate_posterior_logistic(const AcceptedSet& accepted, const ReferenceTable& table,
                                              std::span<const double> eta_obs, const ModelPrior& prior) {
    double d_max = 0.0;
    for (double d : accepted.distances) d_max = std::max(d_max, d);
    return estimate_posterior_logistic(accepted, table, eta_obs, d_max, prior);
}

PosteriorEstimate abc_posterior(const ModelPairSpec& pair, const Dataset& observed,
                                const AbcConfig& config, EstimatorKind estimator) {
    observed.validate_for(pair);
    if (observed.n() != config.data_size)
        throw std::invalid_argument("abc_posterior: observed size differs from config.data_size");

    const ReferenceTable table = generate_reference_table(pair, config);
    const std::vector<double> eta_obs = summarize(config.statistic, observed);
    const DistanceResult dist = compute_distances(table, eta_obs, config.metric);
    const AcceptedSet accepted = accept(table, dist.distances, config.rule);
    if (estimator == EstimatorKind::Frequency)
        return estimate_posterior_frequency(accepted, config.model_prior);
    return estimate_posterior_logistic(accepted, table, eta_obs, config.model_prior);
}

std::vector<double> abc_single_model(const ModelPairSpec& pair, int model_index, const Dataset& observed,
                                     const AbcConfig& config, std::string* warning) {
    if (model_index != 1 && model_index != 2)
        throw std::invalid_argument("abc_single_model: model_index must be 1 or 2");
    observed.validate_for(pair);
    if (observed.n() != config.data_size)
        throw std::invalid_argument("abc_single_model: observed size differs from config.data_size");

    AbcConfig single = config;
    single.model_prior = model_index == 1 ? ModelPrior{1.0, 0.0} : ModelPrior{0.0, 1.0};
    const ReferenceTable table = generate_reference_table(pair, single);
    const std::vector<double> eta_obs = summarize(config.statistic, observed);
    const DistanceResult dist = compute_distances(table, eta_obs, config.metric);
    const AcceptedSet accepted = accept(table, dist.distances, config.rule);

    std::vector<double> draws;
    draws.reserve(accepted.size());
    for (std::size_t i : accepted.indices) draws.push_back(table.theta[i]);
    if (draws.empty() && warning != nullptr)
        *warning = "abc_single_model: no simulations within tolerance " + config.rule.name();
    return draws;
}

} // namespace abcmc

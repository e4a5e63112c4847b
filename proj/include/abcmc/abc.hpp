#pragma once

#include "abcmc/data.hpp"
#include "abcmc/summary.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace abcmc {

enum class DistanceMetric { Euclidean, NormalizedEuclidean };

std::string metric_name(DistanceMetric metric);

// Acceptance: every row within a fixed tolerance, or the k nearest rows.
// Exact-match acceptance for discrete statistics is FixedTolerance(0);
// distance 0 iff equality, so no special casing is needed.
struct AcceptanceRule {
    enum class Mode { FixedTolerance, KNearest };
    Mode mode = Mode::KNearest;
    double epsilon = 0.0;
    std::size_t k = 0;

    static AcceptanceRule fixed_tolerance(double epsilon);
    static AcceptanceRule k_nearest(std::size_t k);
    static AcceptanceRule from_name(const std::string& name); // "eps:<x>" | "knn:<k>"
    std::string name() const;
};

struct AbcConfig {
    SummaryStatistic statistic{StatId::Sum};
    DistanceMetric metric = DistanceMetric::NormalizedEuclidean;
    AcceptanceRule rule = AcceptanceRule::k_nearest(500);
    ModelPrior model_prior = ModelPrior::uniform();
    std::size_t table_size = 0; // T
    std::size_t data_size = 0;  // n
    std::uint64_t master_seed = 0;
    unsigned workers = 1;

    void validate() const;
};

// Simulated (model index, parameter, summary vector) rows from the joint
// prior. Row i is generated entirely from the substream with index i, so
// the table is a pure function of (pair, config) no matter how generation
// was chunked across workers.
struct ReferenceTable {
    ModelPairSpec pair;
    SummaryStatistic statistic{StatId::Sum};
    std::size_t data_size = 0;
    std::uint64_t master_seed = 0;
    std::size_t summary_dim = 0;

    std::vector<int> model;        // T entries, each 1 or 2
    std::vector<double> theta;     // scalar parameter per row
    std::vector<double> summaries; // row-major, T x summary_dim

    std::size_t size() const { return model.size(); }
    std::span<const double> summary_row(std::size_t i) const {
        return {summaries.data() + i * summary_dim, summary_dim};
    }
};

ReferenceTable generate_reference_table(const ModelPairSpec& pair, const AbcConfig& config);

// Header "m,theta_1,eta_1..eta_d" preceded by '#' metadata lines
// (pair, statistic, n, T, seed). 17 significant digits.
void write_reference_table_csv(const ReferenceTable& table, std::ostream& out);

struct DistanceResult {
    std::vector<double> distances;
    // Coordinates with zero median absolute deviation, excluded from the
    // normalized metric. Callers surface these as warnings.
    std::vector<std::size_t> dropped_coordinates;
};

DistanceResult compute_distances(const ReferenceTable& table, std::span<const double> eta_obs,
                                 DistanceMetric metric);

struct AcceptedSet {
    std::vector<std::size_t> indices;
    std::vector<double> distances; // non-decreasing when produced by KNearest
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    AcceptanceRule rule;

    std::size_t size() const { return indices.size(); }
};

AcceptedSet accept(const ReferenceTable& table, std::span<const double> distances,
                   const AcceptanceRule& rule);

enum class EstimatorKind { Frequency, LocalLogistic };

struct PosteriorEstimate {
    double prob1 = 0.0;
    double prob2 = 0.0;
    enum class BfFlag { Finite, PositiveInfinite, NegativeInfinite };
    BfFlag flag = BfFlag::Finite;
    double log_bf = 0.0; // meaningful only when flag == Finite
    EstimatorKind estimator = EstimatorKind::Frequency;
    AcceptanceRule rule;
    bool separation = false;
};

// Acceptance-frequency estimator: prob = (N1/N, N2/N) and
// B12 = (p2 N1) / (p1 N2). A zero count flags the Bayes factor infinite
// rather than applying any continuity correction.
PosteriorEstimate estimate_posterior_frequency(const AcceptedSet& accepted, const ModelPrior& prior);

// Local weighted logistic regression of the model indicator on the
// centered summaries (eta - eta_obs), Epanechnikov weights
// w = 1 - (d/d_max)^2, evaluated at eta_obs. Fitting is IRLS with a 1e-8
// ridge on the normal equations, gradient stop 1e-8, at most 50 passes.
// Complete separation clamps the probability to [1e-6, 1-1e-6] and sets
// the separation flag.
PosteriorEstimate estimate_posterior_logistic(const AcceptedSet& accepted, const ReferenceTable& table,
                                              std::span<const double> eta_obs, double bandwidth,
                                              const ModelPrior& prior);

// Convenience overload: bandwidth = max accepted distance.
PosteriorEstimate estimate_posterior_logistic(const AcceptedSet& accepted, const ReferenceTable& table,
                                              std::span<const double> eta_obs, const ModelPrior& prior);

// Thrown when IRLS fails to converge without a separation signature.
struct LogisticNonConvergence : std::runtime_error {
    PosteriorEstimate last_iterate;
    explicit LogisticNonConvergence(const PosteriorEstimate& estimate);
};

// Full rejection pipeline for one dataset: table, distances, acceptance,
// estimate. Uses config.master_seed for the table.
PosteriorEstimate abc_posterior(const ModelPairSpec& pair, const Dataset& observed,
                                const AbcConfig& config, EstimatorKind estimator);

// Single-model rejection sampler: accepted parameter draws for the indexed
// model (both built-in models have a scalar parameter). Zero acceptances
// under a fixed tolerance yield an empty result, not an error; *warning is
// set when non-null.
std::vector<double> abc_single_model(const ModelPairSpec& pair, int model_index, const Dataset& observed,
                                     const AbcConfig& config, std::string* warning = nullptr);

} // namespace abcmc

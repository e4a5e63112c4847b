#pragma once

#include "abcmc/abc.hpp"
#include "abcmc/data.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace abcmc {

// How a posterior probability of model 1 is produced for a dataset, plus
// the decision threshold. Ties at the threshold decide model 1, so rates
// are reproducible without coin flips. threshold = 0 therefore degenerates
// to "always model 1".
struct DecisionRule {
    enum class Source { ExactFull, ExactEta, AbcFrequency, AbcLogistic };
    Source source = Source::ExactFull;
    double threshold = 0.5;                      // decide model 1 iff prob1 >= threshold
    ModelPrior prior = ModelPrior::uniform();    // used by the exact sources
    AbcConfig abc;                               // used by the ABC sources

    void validate() const;
    bool uses_abc() const { return source == Source::AbcFrequency || source == Source::AbcLogistic; }
};

// prob1 for one dataset under the rule. ABC sources build a fresh
// reference table from abc_seed, so repeated calls with distinct seeds
// expose the Monte Carlo spread of the procedure.
double rule_probability(const ModelPairSpec& pair, const DecisionRule& rule, const Dataset& data,
                        std::uint64_t abc_seed);

struct ReplicateRecord {
    int true_model = 0;
    int decided_model = 0;
    double prob1 = 0.0;
};

struct ConfusionSummary {
    std::size_t replicates_per_model = 0;
    double misallocation_rate_model1 = 0.0;
    double misallocation_rate_model2 = 0.0;
    std::vector<ReplicateRecord> records; // model-1 replicates first, then model-2
};

// Monte Carlo false allocation rates: for each true model, R
// pseudo-observed datasets are drawn from the prior predictive
// (theta from the model prior, then n observations), classified by the
// rule, and misallocations tabulated.
ConfusionSummary false_allocation_rates(const ModelPairSpec& pair, const DecisionRule& rule,
                                        std::size_t R, std::size_t n, std::uint64_t master_seed,
                                        unsigned workers = 1);

void write_confusion_csv(const ConfusionSummary& summary, std::ostream& out);

struct AgreementReport {
    double disagreement_rate = 0.0;
    std::optional<double> correlation; // empty when either sequence is constant
    double mean_absolute_error = 0.0;
    std::size_t count = 0;
};

// Compares two probability sequences: fraction falling on opposite sides
// of the threshold (a value exactly at the threshold agrees only with
// another value exactly at the threshold), Pearson correlation, MAE.
AgreementReport agreement_report(std::span<const std::pair<double, double>> pairs, double threshold);

void write_agreement_csv(const AgreementReport& report,
                         std::span<const std::pair<double, double>> pairs, std::ostream& out);

struct FiveNumberSummary {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

struct StabilitySummary {
    std::size_t repeats = 0;
    std::vector<FiveNumberSummary> per_dataset;
};

// Re-runs the rule K times per dataset, each repeat on its own
// substream-derived table seed, and summarizes the spread of prob1.
// Exact rules are deterministic, so their spread is zero by construction.
StabilitySummary stability_summary(const ModelPairSpec& pair, const DecisionRule& rule,
                                   std::span<const Dataset> datasets, std::size_t K,
                                   std::uint64_t master_seed);

// Same, with caller-chosen per-repeat seeds (repeated seeds force repeated
// estimates, which pins down the determinism contract in tests).
StabilitySummary stability_with_seeds(const ModelPairSpec& pair, const DecisionRule& rule,
                                      std::span<const Dataset> datasets,
                                      std::span<const std::uint64_t> repeat_seeds);

} // namespace abcmc

#include "abcmc/diagnostics.hpp"

#include "abcmc/csv.hpp"
#include "abcmc/oracles.hpp"
#include "abcmc/parallel.hpp"
#include "abcmc/rng.hpp"
#include "abcmc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace abcmc {

namespace {

// Phase tags keeping the data substreams and the ABC table seeds of one
// diagnostic run in unrelated key spaces.
constexpr std::uint64_t kDataPhase = 0xD1A6;
constexpr std::uint64_t kTablePhase = 0xAB7E;

} // namespace

void DecisionRule::validate() const {
    if (!(threshold >= 0.0 && threshold < 1.0))
        throw std::invalid_argument("DecisionRule: threshold must lie in [0,1)");
    prior.validate();
    if (uses_abc()) {
        // data_size is bound per dataset by rule_probability
        AbcConfig bound = abc;
        if (bound.data_size == 0) bound.data_size = 1;
        bound.validate();
    }
}

double rule_probability(const ModelPairSpec& pair, const DecisionRule& rule, const Dataset& data,
                        std::uint64_t abc_seed) {
    switch (rule.source) {
        case DecisionRule::Source::ExactFull:
            return posterior_prob_from_log_bf(log_bayes_factor_full(pair, data), rule.prior);
        case DecisionRule::Source::ExactEta:
            return posterior_prob_from_log_bf(log_bayes_factor_eta(pair, data), rule.prior);
        case DecisionRule::Source::AbcFrequency:
        case DecisionRule::Source::AbcLogistic: {
            AbcConfig config = rule.abc;
            config.master_seed = abc_seed;
            config.data_size = data.n();
            const EstimatorKind estimator = rule.source == DecisionRule::Source::AbcFrequency
                                                ? EstimatorKind::Frequency
                                                : EstimatorKind::LocalLogistic;
            return abc_posterior(pair, data, config, estimator).prob1;
        }
    }
    throw std::invalid_argument("rule_probability: unknown source");
}

ConfusionSummary false_allocation_rates(const ModelPairSpec& pair, const DecisionRule& rule,
                                        std::size_t R, std::size_t n, std::uint64_t master_seed,
                                        unsigned workers) {
    if (R == 0) throw std::invalid_argument("false_allocation_rates: R must be >= 1");
    rule.validate();

    ConfusionSummary summary;
    summary.replicates_per_model = R;
    summary.records.resize(2 * R);

    const std::uint64_t data_master = derive_seed(master_seed, kDataPhase);
    const std::uint64_t table_master = derive_seed(master_seed, kTablePhase);

    parallel_for_index(2 * R, workers, [&](std::size_t task) {
        const int true_model = task < R ? 1 : 2;
        RngStream stream(data_master, task);
        const std::vector<double> theta = sample_prior(pair, true_model, stream);
        const Dataset data = simulate_dataset(pair, true_model, theta, n, stream);
        const double prob1 = rule_probability(pair, rule, data, derive_seed(table_master, task));
        const int decided = prob1 >= rule.threshold ? 1 : 2;
        summary.records[task] = {true_model, decided, prob1};
    });

    std::size_t wrong1 = 0, wrong2 = 0;
    for (const auto& record : summary.records) {
        if (record.decided_model != record.true_model)
            (record.true_model == 1 ? wrong1 : wrong2)++;
    }
    summary.misallocation_rate_model1 = static_cast<double>(wrong1) / static_cast<double>(R);
    summary.misallocation_rate_model2 = static_cast<double>(wrong2) / static_cast<double>(R);
    return summary;
}

void write_confusion_csv(const ConfusionSummary& summary, std::ostream& out) {
    out << "true_model,decided_model,prob1\n";
    for (const auto& record : summary.records)
        out << record.true_model << ',' << record.decided_model << ',' << format_g17(record.prob1)
            << "\n";
    out << "# misallocation_rate_model1 = " << format_g17(summary.misallocation_rate_model1) << "\n";
    out << "# misallocation_rate_model2 = " << format_g17(summary.misallocation_rate_model2) << "\n";
}

AgreementReport agreement_report(std::span<const std::pair<double, double>> pairs, double threshold) {
    if (pairs.size() < 2)
        throw std::invalid_argument("agreement_report: needs at least 2 pairs for a correlation");

    AgreementReport report;
    report.count = pairs.size();

    std::size_t disagreements = 0;
    double mae = 0.0;
    double mean_a = 0.0, mean_b = 0.0;
    for (const auto& [a, b] : pairs) {
        const bool agree = (a > threshold && b > threshold) || (a < threshold && b < threshold) ||
                           (a == threshold && b == threshold);
        if (!agree) ++disagreements;
        mae += std::fabs(a - b);
        mean_a += a;
        mean_b += b;
    }
    const double count = static_cast<double>(pairs.size());
    report.disagreement_rate = static_cast<double>(disagreements) / count;
    report.mean_absolute_error = mae / count;

    mean_a /= count;
    mean_b /= count;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (const auto& [a, b] : pairs) {
        saa += (a - mean_a) * (a - mean_a);
        sbb += (b - mean_b) * (b - mean_b);
        sab += (a - mean_a) * (b - mean_b);
    }
    if (saa > 0.0 && sbb > 0.0) report.correlation = sab / std::sqrt(saa * sbb);
    return report;
}

void write_agreement_csv(const AgreementReport& report,
                         std::span<const std::pair<double, double>> pairs, std::ostream& out) {
    out << "p_exact,p_abc\n";
    for (const auto& [a, b] : pairs) out << format_g17(a) << ',' << format_g17(b) << "\n";
    out << "# disagreement_rate = " << format_g17(report.disagreement_rate) << "\n";
    out << "# correlation = "
        << (report.correlation ? format_g17(*report.correlation) : std::string("undefined")) << "\n";
    out << "# mean_absolute_error = " << format_g17(report.mean_absolute_error) << "\n";
}

namespace {

// Order statistics with linear interpolation between ranks.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

StabilitySummary stability_with_seeds(const ModelPairSpec& pair, const DecisionRule& rule,
                                      std::span<const Dataset> datasets,
                                      std::span<const std::uint64_t> repeat_seeds) {
    if (repeat_seeds.size() < 2) throw std::invalid_argument("stability: needs K >= 2 repeats");
    rule.validate();

    StabilitySummary summary;
    summary.repeats = repeat_seeds.size();
    summary.per_dataset.reserve(datasets.size());

    std::vector<std::vector<double>> probs(datasets.size(),
                                           std::vector<double>(repeat_seeds.size()));
    for (std::size_t k = 0; k < repeat_seeds.size(); ++k)
        for (std::size_t d = 0; d < datasets.size(); ++d)
            probs[d][k] = rule_probability(pair, rule, datasets[d], repeat_seeds[k]);

    for (auto& values : probs) {
        std::sort(values.begin(), values.end());
        summary.per_dataset.push_back({values.front(), quantile_sorted(values, 0.25),
                                       quantile_sorted(values, 0.5), quantile_sorted(values, 0.75),
                                       values.back()});
    }
    return summary;
}

StabilitySummary stability_summary(const ModelPairSpec& pair, const DecisionRule& rule,
                                   std::span<const Dataset> datasets, std::size_t K,
                                   std::uint64_t master_seed) {
    if (K < 2) throw std::invalid_argument("stability_summary: K must be >= 2");
    const std::uint64_t table_master = derive_seed(master_seed, kTablePhase);
    std::vector<std::uint64_t> seeds(K);
    for (std::size_t k = 0; k < K; ++k) seeds[k] = derive_seed(table_master, k);
    return stability_with_seeds(pair, rule, datasets, seeds);
}

} // namespace abcmc

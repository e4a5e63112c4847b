#include "abcmc/diagnostics.hpp"

#include "abcmc/oracles.hpp"
#include "abcmc/parallel.hpp"
#include "abcmc/rng.hpp"
#include "abcmc/simulate.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace abcmc;

namespace {

const ModelPairSpec kCount = ModelPairSpec::poisson_geometric();

DecisionRule exact_rule(DecisionRule::Source source, double threshold = 0.5) {
    DecisionRule rule;
    rule.source = source;
    rule.threshold = threshold;
    return rule;
}

} // namespace

TEST_CASE("threshold zero degenerates to always-model-1") {
    const ConfusionSummary summary = false_allocation_rates(
        kCount, exact_rule(DecisionRule::Source::ExactFull, 0.0), 50, 10, 77);
    CHECK(summary.misallocation_rate_model1 == 0.0);
    CHECK(summary.misallocation_rate_model2 == 1.0);
    for (const auto& record : summary.records) CHECK(record.decided_model == 1);
}

TEST_CASE("exact full-data rule: frozen rates, both below one quarter") {
    const ConfusionSummary summary = false_allocation_rates(
        kCount, exact_rule(DecisionRule::Source::ExactFull), 500, 100, fixtures::kPilotSeed);
    CHECK(summary.misallocation_rate_model1 < 0.25);
    CHECK(summary.misallocation_rate_model2 < 0.25);
    CHECK(std::fabs(summary.misallocation_rate_model1 - fixtures::kExactFullRates[2][0]) <= 0.05);
    CHECK(std::fabs(summary.misallocation_rate_model2 - fixtures::kExactFullRates[2][1]) <= 0.05);

    // rates are misallocated / R exactly
    std::size_t wrong1 = 0, wrong2 = 0;
    for (const auto& record : summary.records)
        if (record.decided_model != record.true_model) (record.true_model == 1 ? wrong1 : wrong2)++;
    CHECK(summary.misallocation_rate_model1 == static_cast<double>(wrong1) / 500.0);
    CHECK(summary.misallocation_rate_model2 == static_cast<double>(wrong2) / 500.0);
}

TEST_CASE("exact full-data rule: rates non-increasing in sample size") {
    // one master seed for all n: replicate r sees prefix-coupled datasets
    const std::size_t grid[3] = {10, 50, 100};
    double previous1 = 1.0, previous2 = 1.0;
    for (int i = 0; i < 3; ++i) {
        const ConfusionSummary summary = false_allocation_rates(
            kCount, exact_rule(DecisionRule::Source::ExactFull), 500, grid[i], fixtures::kPilotSeed);
        CHECK(std::fabs(summary.misallocation_rate_model1 - fixtures::kExactFullRates[i][0]) <= 0.05);
        CHECK(std::fabs(summary.misallocation_rate_model2 - fixtures::kExactFullRates[i][1]) <= 0.05);
        CHECK(summary.misallocation_rate_model1 <= previous1);
        CHECK(summary.misallocation_rate_model2 <= previous2);
        previous1 = summary.misallocation_rate_model1;
        previous2 = summary.misallocation_rate_model2;
    }
}

TEST_CASE("statistic-based rule loses at least as much prior-weighted accuracy") {
    // The full-data rule is the Bayes classifier, so it minimizes the
    // prior-weighted total misallocation. (The per-model rates can move
    // either way: the statistic-based rule over-favors model 1, which
    // lowers its model-1 rate while inflating the model-2 rate.)
    const ConfusionSummary full = false_allocation_rates(
        kCount, exact_rule(DecisionRule::Source::ExactFull), 500, 50, fixtures::kPilotSeed);
    const ConfusionSummary eta = false_allocation_rates(
        kCount, exact_rule(DecisionRule::Source::ExactEta), 500, 50, fixtures::kPilotSeed);
    const double total_full =
        0.5 * (full.misallocation_rate_model1 + full.misallocation_rate_model2);
    const double total_eta = 0.5 * (eta.misallocation_rate_model1 + eta.misallocation_rate_model2);
    CHECK(total_eta >= total_full - 0.02);
    CHECK(std::fabs(eta.misallocation_rate_model1 - fixtures::kExactEtaRates[1][0]) <= 0.05);
    CHECK(std::fabs(eta.misallocation_rate_model2 - fixtures::kExactEtaRates[1][1]) <= 0.05);
}

TEST_CASE("data-blind ABC decisions are coin flips") {
    // A constant statistic makes every table row equidistant from the
    // observation; the k-nearest set is then the first k rows and the
    // decision only reflects the table's own model draws.
    const std::size_t R = 500, T = 1001, k = 101;
    std::size_t wrong1 = 0, wrong2 = 0;
    for (std::size_t task = 0; task < 2 * R; ++task) {
        const int truth = task < R ? 1 : 2;
        AbcConfig config;
        config.statistic = SummaryStatistic{StatId::Sum};
        config.rule = AcceptanceRule::k_nearest(k);
        config.table_size = T;
        config.data_size = 5;
        config.master_seed = derive_seed(424255, task);
        const ReferenceTable table = generate_reference_table(kCount, config);
        const std::vector<double> flat(T, 0.0);
        const AcceptedSet accepted = accept(table, flat, config.rule);
        const PosteriorEstimate est = estimate_posterior_frequency(accepted, ModelPrior::uniform());
        const int decided = est.prob1 >= 0.5 ? 1 : 2;
        if (decided != truth) (truth == 1 ? wrong1 : wrong2)++;
    }
    const double bound = 4.0 * std::sqrt(0.25 / static_cast<double>(R));
    CHECK(std::fabs(static_cast<double>(wrong1) / R - 0.5) < bound);
    CHECK(std::fabs(static_cast<double>(wrong2) / R - 0.5) < bound);
}

TEST_CASE("ABC-backed decision rules run end to end") {
    DecisionRule rule;
    rule.source = DecisionRule::Source::AbcLogistic;
    rule.abc.statistic = SummaryStatistic{StatId::SumAndLogFactProd};
    rule.abc.metric = DistanceMetric::NormalizedEuclidean;
    rule.abc.rule = AcceptanceRule::k_nearest(200);
    rule.abc.table_size = 2000;

    const ConfusionSummary summary = false_allocation_rates(kCount, rule, 10, 10, 808, 4);
    const ConfusionSummary again = false_allocation_rates(kCount, rule, 10, 10, 808);
    REQUIRE(summary.records.size() == 20);
    for (const auto& record : summary.records) {
        CHECK(record.prob1 >= 0.0);
        CHECK(record.prob1 <= 1.0);
    }
    for (std::size_t i = 0; i < summary.records.size(); ++i)
        CHECK(summary.records[i].prob1 == again.records[i].prob1);
}

TEST_CASE("agreement report") {
    SUBCASE("identical sequences") {
        const std::vector<std::pair<double, double>> pairs = {{0.1, 0.1}, {0.9, 0.9}, {0.4, 0.4}};
        const AgreementReport report = agreement_report(pairs, 0.5);
        CHECK(report.disagreement_rate == 0.0);
        CHECK(report.correlation.value() == doctest::Approx(1.0));
        CHECK(report.mean_absolute_error == 0.0);
    }
    SUBCASE("mirrored sequences") {
        const std::vector<std::pair<double, double>> pairs = {{0.1, 0.9}, {0.9, 0.1}, {0.3, 0.7}};
        const AgreementReport report = agreement_report(pairs, 0.5);
        CHECK(report.disagreement_rate == 1.0);
        CHECK(report.correlation.value() == doctest::Approx(-1.0));
    }
    SUBCASE("hand-counted disagreement") {
        const std::vector<std::pair<double, double>> pairs = {{0.9, 0.6}, {0.4, 0.6}, {0.2, 0.1}};
        CHECK(agreement_report(pairs, 0.5).disagreement_rate == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("disagreement and correlation are symmetric in the sequences") {
        const std::vector<std::pair<double, double>> pairs = {
            {0.9, 0.6}, {0.4, 0.6}, {0.2, 0.1}, {0.7, 0.2}};
        std::vector<std::pair<double, double>> swapped;
        for (auto [a, b] : pairs) swapped.emplace_back(b, a);
        const AgreementReport forward = agreement_report(pairs, 0.5);
        const AgreementReport backward = agreement_report(swapped, 0.5);
        CHECK(forward.disagreement_rate == backward.disagreement_rate);
        CHECK(forward.correlation.value() == doctest::Approx(backward.correlation.value()));
        CHECK(forward.mean_absolute_error == backward.mean_absolute_error);
    }
    SUBCASE("boundary values agree only with each other") {
        const std::vector<std::pair<double, double>> pairs = {{0.5, 0.5}, {0.5, 0.7}};
        CHECK(agreement_report(pairs, 0.5).disagreement_rate == doctest::Approx(0.5));
    }
    SUBCASE("degenerate variance flags the correlation undefined") {
        const std::vector<std::pair<double, double>> pairs = {{0.5, 0.1}, {0.5, 0.9}};
        const AgreementReport report = agreement_report(pairs, 0.5);
        CHECK_FALSE(report.correlation.has_value());
    }
    SUBCASE("needs two pairs") {
        const std::vector<std::pair<double, double>> one = {{0.5, 0.5}};
        CHECK_THROWS_AS(agreement_report(one, 0.5), std::invalid_argument);
    }
}

TEST_CASE("decisions by the statistic factor diverge from the full factor") {
    const std::uint64_t data_master = derive_seed(fixtures::kPilotSeed, 0xD1CE);
    std::vector<std::pair<double, double>> probs(200);
    for (std::size_t task = 0; task < probs.size(); ++task) {
        const int m = task < probs.size() / 2 ? 1 : 2;
        RngStream stream(data_master, task);
        const auto theta = sample_prior(kCount, m, stream);
        const Dataset y = simulate_dataset(kCount, m, theta, 50, stream);
        probs[task] = {
            posterior_prob_from_log_bf(log_bayes_factor_full(kCount, y), ModelPrior::uniform()),
            posterior_prob_from_log_bf(log_bayes_factor_eta(kCount, y), ModelPrior::uniform())};
    }
    CHECK(agreement_report(probs, 0.5).disagreement_rate > 0.0);
}

TEST_CASE("stability summaries") {
    RngStream stream(derive_seed(fixtures::kPilotSeed, 0x57AB), 0);
    const auto theta = sample_prior(kCount, 1, stream);
    const std::vector<Dataset> datasets = {simulate_dataset(kCount, 1, theta, 50, stream)};

    SUBCASE("deterministic rules have zero spread") {
        const StabilitySummary summary =
            stability_summary(kCount, exact_rule(DecisionRule::Source::ExactFull), datasets, 5, 99);
        CHECK(summary.per_dataset[0].min == summary.per_dataset[0].max);
    }
    SUBCASE("forcing identical repeat seeds forces zero spread") {
        DecisionRule rule = exact_rule(DecisionRule::Source::AbcFrequency);
        rule.abc.statistic = SummaryStatistic{StatId::Sum};
        rule.abc.rule = AcceptanceRule::k_nearest(100);
        rule.abc.table_size = 2000;
        rule.abc.data_size = 50;
        const std::vector<std::uint64_t> same_seed(4, 12345);
        const StabilitySummary summary = stability_with_seeds(kCount, rule, datasets, same_seed);
        CHECK(summary.per_dataset[0].min == summary.per_dataset[0].max);
    }
    SUBCASE("ABC repeat spread at the pilot configuration stays tight") {
        DecisionRule rule = exact_rule(DecisionRule::Source::AbcFrequency);
        rule.abc.statistic = SummaryStatistic{StatId::Sum};
        rule.abc.metric = DistanceMetric::NormalizedEuclidean;
        rule.abc.rule = AcceptanceRule::k_nearest(500);
        rule.abc.table_size = 100000;
        rule.abc.data_size = 50;
        const StabilitySummary summary =
            stability_summary(kCount, rule, datasets, 10, fixtures::kPilotSeed);
        const FiveNumberSummary& f = summary.per_dataset[0];
        CHECK(f.min <= f.q1);
        CHECK(f.q1 <= f.median);
        CHECK(f.median <= f.q3);
        CHECK(f.q3 <= f.max);
        const double iqr = f.q3 - f.q1;
        CHECK(iqr < 0.1);
        CHECK(std::fabs(iqr - fixtures::kStabilityObservedIqr) <= 0.05);
    }
    SUBCASE("K below two is rejected") {
        CHECK_THROWS_AS(
            stability_summary(kCount, exact_rule(DecisionRule::Source::ExactFull), datasets, 1, 7),
            std::invalid_argument);
    }
}

TEST_CASE("confusion records serialize deterministically") {
    const ConfusionSummary summary = false_allocation_rates(
        kCount, exact_rule(DecisionRule::Source::ExactEta), 40, 20, 4242);
    const ConfusionSummary again = false_allocation_rates(
        kCount, exact_rule(DecisionRule::Source::ExactEta), 40, 20, 4242);

    std::ostringstream a, b;
    write_confusion_csv(summary, a);
    write_confusion_csv(again, b);
    CHECK(a.str() == b.str());
    CHECK(summary.records.size() == 80);
    CHECK(a.str().find("true_model,decided_model,prob1\n") == 0);
    CHECK(a.str().find("# misallocation_rate_model1 = ") != std::string::npos);

    // workers must not change the records
    const ConfusionSummary threaded = false_allocation_rates(
        kCount, exact_rule(DecisionRule::Source::ExactEta), 40, 20, 4242, 4);
    std::ostringstream c;
    write_confusion_csv(threaded, c);
    CHECK(a.str() == c.str());
}

TEST_CASE("agreement CSV carries records and summary lines") {
    const std::vector<std::pair<double, double>> pairs = {{0.9, 0.6}, {0.4, 0.6}, {0.2, 0.1}};
    const AgreementReport report = agreement_report(pairs, 0.5);
    std::ostringstream out;
    write_agreement_csv(report, pairs, out);
    const std::string text = out.str();
    CHECK(text.find("p_exact,p_abc\n") == 0);
    CHECK(text.find("# disagreement_rate = ") != std::string::npos);
    CHECK(text.find("# correlation = ") != std::string::npos);
    CHECK(text.find("# mean_absolute_error = ") != std::string::npos);
}

TEST_CASE("decision rule validation") {
    DecisionRule rule = exact_rule(DecisionRule::Source::ExactFull, 1.0);
    CHECK_THROWS_AS(rule.validate(), std::invalid_argument);
    rule.threshold = -0.1;
    CHECK_THROWS_AS(rule.validate(), std::invalid_argument);
    rule.threshold = 0.0; // degenerate but allowed: always decide model 1
    CHECK_NOTHROW(rule.validate());

    DecisionRule abc = exact_rule(DecisionRule::Source::AbcFrequency);
    abc.abc.table_size = 0;
    CHECK_THROWS_AS(abc.validate(), std::invalid_argument);
}

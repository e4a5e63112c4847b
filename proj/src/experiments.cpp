#include "abcmc/experiments.hpp"

#include "abcmc/csv.hpp"
#include "abcmc/diagnostics.hpp"
#include "abcmc/distributions.hpp"
#include "abcmc/oracles.hpp"
#include "abcmc/parallel.hpp"
#include "abcmc/rng.hpp"
#include "abcmc/simulate.hpp"
#include "abcmc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace abcmc {

namespace {

constexpr std::uint64_t kDataPhase = 0xDA7A;
constexpr std::uint64_t kTablePhase = 0x7AB1;

double sample_sd(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double max_abs(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

double median(std::vector<double> values) {
    const std::size_t n = values.size();
    auto mid = values.begin() + n / 2;
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    return 0.5 * (*std::max_element(values.begin(), mid) + hi);
}

std::vector<double> column_values(const ExperimentReport& report, const std::string& column,
                                  const std::string& filter_column = "", double filter_value = 0.0) {
    const std::size_t c = report.column_index(column);
    if (c == std::size_t(-1)) throw std::invalid_argument("missing column " + column);
    std::size_t f = std::size_t(-1);
    if (!filter_column.empty()) f = report.column_index(filter_column);
    std::vector<double> out;
    for (const auto& row : report.rows) {
        if (f != std::size_t(-1) && row[f] != filter_value) continue;
        out.push_back(row[c]);
    }
    return out;
}

void base_metadata(ExperimentReport& report, const ExperimentSpec& spec) {
    report.metadata.emplace_back("experiment", spec.experiment);
    report.metadata.emplace_back("pair", spec.pair.name());
    if (!spec.pair.is_count_pair()) {
        report.metadata.emplace_back("sigma1", format_g17(spec.pair.sigma1));
        report.metadata.emplace_back("sigma2", format_g17(spec.pair.sigma2));
        report.metadata.emplace_back("a", format_g17(spec.pair.prior_scale_a));
    }
    report.metadata.emplace_back("seed", std::to_string(spec.master_seed));
}

} // namespace

ExperimentSpec ExperimentSpec::defaults(const std::string& experiment) {
    ExperimentSpec spec;
    spec.experiment = experiment;
    spec.workers = default_workers();
    if (experiment == "fig1") {
        spec.pair = ModelPairSpec::poisson_geometric();
        spec.replicates = 10000;
        spec.n = 50;
    } else if (experiment == "lemma-convergence") {
        spec.pair = ModelPairSpec::poisson_geometric();
        spec.replicates = 10;
        spec.theta0_grid = {0.5, 1.0, 2.0};
        spec.n_grid = {100, 1000, 10000, 100000};
    } else if (experiment == "normal-discrepancy") {
        spec.pair = ModelPairSpec::normal_normal(0.1, 10.0, 1.0);
        spec.replicates = 10000;
        spec.n = 15;
    } else if (experiment == "abc-vs-exact") {
        spec.pair = ModelPairSpec::poisson_geometric();
        spec.replicates = 100;
        spec.n = 5;
        spec.table_size = 100000;
        spec.statistic = SummaryStatistic{StatId::Sum};
        spec.metric = DistanceMetric::NormalizedEuclidean;
        spec.rule = AcceptanceRule::k_nearest(500);
    } else if (experiment == "false-alloc") {
        spec.pair = ModelPairSpec::poisson_geometric();
        spec.replicates = 500;
        spec.n = 100;
    } else {
        throw std::invalid_argument("unknown experiment '" + experiment + "'");
    }
    return spec;
}

std::size_t ExperimentReport::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    return std::size_t(-1);
}

double ExperimentReport::aggregate(const std::string& name) const {
    for (const auto& [key, value] : aggregates)
        if (key == name) return value;
    throw std::invalid_argument("missing aggregate " + name);
}

ExperimentReport run_fig1(const ExperimentSpec& spec) {
    if (!spec.pair.is_count_pair())
        throw std::invalid_argument("fig1: count pair only");
    if (spec.replicates == 0 || spec.n == 0)
        throw std::invalid_argument("fig1: replicates and n must be >= 1");

    ExperimentReport report;
    report.experiment = spec.experiment;
    base_metadata(report, spec);
    report.metadata.emplace_back("n", std::to_string(spec.n));
    report.metadata.emplace_back("replicates_per_model", std::to_string(spec.replicates));
    report.columns = {"replicate", "gen_model", "log_b12", "log_b_eta", "log_g"};

    const std::size_t R = spec.replicates;
    report.rows.assign(2 * R, {});
    const std::uint64_t data_master = derive_seed(spec.master_seed, kDataPhase);
    parallel_for_index(2 * R, spec.workers, [&](std::size_t task) {
        const int m = task < R ? 1 : 2;
        RngStream stream(data_master, task);
        const std::vector<double> theta = sample_prior(spec.pair, m, stream);
        const Dataset y = simulate_dataset(spec.pair, m, theta, spec.n, stream);
        report.rows[task] = {static_cast<double>(task % R), static_cast<double>(m),
                             log_bayes_factor_full(spec.pair, y).log_value,
                             log_bayes_factor_eta(spec.pair, y).log_value,
                             log_discrepancy_ratio(spec.pair, y).log_value};
    });

    for (int m = 1; m <= 2; ++m) {
        const std::string suffix = "_model" + std::to_string(m);
        const auto b12 = column_values(report, "log_b12", "gen_model", m);
        const auto beta = column_values(report, "log_b_eta", "gen_model", m);
        const double sd12 = sample_sd(b12), sdeta = sample_sd(beta);
        report.aggregates.emplace_back("sd_log_b12" + suffix, sd12);
        report.aggregates.emplace_back("sd_log_b_eta" + suffix, sdeta);
        report.aggregates.emplace_back("sd_ratio" + suffix, sdeta / sd12);
        report.aggregates.emplace_back("max_abs_log_b12" + suffix, max_abs(b12));
        report.aggregates.emplace_back("max_abs_log_b_eta" + suffix, max_abs(beta));
    }
    return report;
}

ExperimentReport run_lemma_convergence(const ExperimentSpec& spec) {
    if (spec.replicates == 0) throw std::invalid_argument("lemma-convergence: needs seeds >= 1");
    if (spec.n_grid.empty()) throw std::invalid_argument("lemma-convergence: empty n grid");
    for (std::size_t i = 1; i < spec.n_grid.size(); ++i)
        if (spec.n_grid[i] <= spec.n_grid[i - 1])
            throw std::invalid_argument("lemma-convergence: n grid must be increasing");
    const bool count = spec.pair.is_count_pair();
    if (count && spec.theta0_grid.empty())
        throw std::invalid_argument("lemma-convergence: count pair needs a theta0 grid");

    ExperimentReport report;
    report.experiment = spec.experiment;
    base_metadata(report, spec);
    report.metadata.emplace_back("seeds", std::to_string(spec.replicates));
    if (count)
        report.columns = {"seed", "n", "theta0", "b_eta", "limit", "gap", "log_b12", "log_b_eta", "log_g"};
    else
        report.columns = {"seed", "n", "b_eta", "limit", "gap", "log_b12", "log_b_eta", "log_g"};

    const std::size_t cells = (count ? spec.theta0_grid.size() : 1) * spec.n_grid.size();
    const std::size_t tasks = cells * spec.replicates;
    report.rows.assign(tasks, {});
    const std::uint64_t data_master = derive_seed(spec.master_seed, kDataPhase);

    parallel_for_index(tasks, spec.workers, [&](std::size_t task) {
        const std::size_t seed_id = task % spec.replicates;
        const std::size_t cell = task / spec.replicates;
        const std::size_t n_id = cell % spec.n_grid.size();
        const std::size_t t_id = cell / spec.n_grid.size();
        const std::size_t n = spec.n_grid[n_id];

        RngStream stream(data_master, task);
        Dataset y;
        y.values.resize(n);
        double limit_log;
        if (count) {
            const double theta0 = spec.theta0_grid[t_id];
            for (double& v : y.values) v = sample_poisson(stream, theta0);
            limit_log = count_pair_eta_bf_limit(theta0).log_value;
        } else {
            // i.i.d. data with finite mean and variance from neither model
            for (double& v : y.values) v = sample_uniform(stream, 0.0, 1.0);
            limit_log = 0.0;
        }
        const double log_beta = log_bayes_factor_eta(spec.pair, y).log_value;
        const double b_eta = std::exp(log_beta);
        const double limit = std::exp(limit_log);
        std::vector<double> row = {static_cast<double>(seed_id), static_cast<double>(n)};
        if (count) row.push_back(spec.theta0_grid[t_id]);
        row.insert(row.end(), {b_eta, limit, std::fabs(b_eta - limit),
                               log_bayes_factor_full(spec.pair, y).log_value, log_beta,
                               log_discrepancy_ratio(spec.pair, y).log_value});
        report.rows[task] = std::move(row);
    });

    for (std::size_t t_id = 0; t_id < (count ? spec.theta0_grid.size() : 1); ++t_id) {
        for (std::size_t n_id = 0; n_id < spec.n_grid.size(); ++n_id) {
            std::vector<double> gaps;
            const std::size_t cell = t_id * spec.n_grid.size() + n_id;
            for (std::size_t s = 0; s < spec.replicates; ++s)
                gaps.push_back(report.rows[cell * spec.replicates + s][count ? 5 : 4]);
            std::string key = "median_gap[";
            if (count) key += "theta0=" + format_g17(spec.theta0_grid[t_id]) + ",";
            key += "n=" + std::to_string(spec.n_grid[n_id]) + "]";
            report.aggregates.emplace_back(key, median(std::move(gaps)));
        }
    }
    return report;
}

ExperimentReport run_normal_discrepancy(const ExperimentSpec& spec) {
    if (spec.pair.is_count_pair())
        throw std::invalid_argument("normal-discrepancy: normal pair only");
    if (spec.replicates == 0 || spec.n == 0)
        throw std::invalid_argument("normal-discrepancy: replicates and n must be >= 1");

    ExperimentReport report;
    report.experiment = spec.experiment;
    base_metadata(report, spec);
    report.metadata.emplace_back("n", std::to_string(spec.n));
    report.metadata.emplace_back("replicates_per_model", std::to_string(spec.replicates));
    report.columns = {"replicate", "gen_model", "log_b12", "log_b_eta", "log_g"};

    const std::size_t R = spec.replicates;
    report.rows.assign(2 * R, {});
    const std::uint64_t data_master = derive_seed(spec.master_seed, kDataPhase);
    parallel_for_index(2 * R, spec.workers, [&](std::size_t task) {
        const int m = task < R ? 1 : 2;
        RngStream stream(data_master, task);
        // mu = 0: the discrepancy ratio does not involve the mean.
        const double theta[1] = {0.0};
        const Dataset y = simulate_dataset(spec.pair, m, theta, spec.n, stream);
        report.rows[task] = {static_cast<double>(task % R), static_cast<double>(m),
                             log_bayes_factor_full(spec.pair, y).log_value,
                             log_bayes_factor_eta(spec.pair, y).log_value,
                             log_discrepancy_ratio(spec.pair, y).log_value};
    });

    for (int m = 1; m <= 2; ++m) {
        const std::string suffix = "_model" + std::to_string(m);
        const auto logg = column_values(report, "log_g", "gen_model", m);
        report.aggregates.emplace_back("min_log_g" + suffix, *std::min_element(logg.begin(), logg.end()));
        report.aggregates.emplace_back("max_log_g" + suffix, *std::max_element(logg.begin(), logg.end()));
        double above20 = 0.0, below1000 = 0.0;
        for (double v : logg) {
            if (v > 20.0) above20 += 1.0;
            if (v < -1000.0) below1000 += 1.0;
        }
        report.aggregates.emplace_back("frac_log_g_above_20" + suffix, above20 / static_cast<double>(logg.size()));
        report.aggregates.emplace_back("frac_log_g_below_-1000" + suffix, below1000 / static_cast<double>(logg.size()));
    }
    return report;
}

ExperimentReport run_abc_vs_exact(const ExperimentSpec& spec) {
    if (!spec.pair.is_count_pair())
        throw std::invalid_argument("abc-vs-exact: count pair only");
    if (spec.replicates == 0 || spec.n == 0 || spec.table_size == 0)
        throw std::invalid_argument("abc-vs-exact: needs replicates >= 1, n >= 1, table_size >= 1");

    ExperimentReport report;
    report.experiment = spec.experiment;
    base_metadata(report, spec);
    report.metadata.emplace_back("n", std::to_string(spec.n));
    report.metadata.emplace_back("replicates", std::to_string(spec.replicates));
    report.metadata.emplace_back("table_size", std::to_string(spec.table_size));
    report.metadata.emplace_back("statistic", spec.statistic.name());
    report.metadata.emplace_back("metric", metric_name(spec.metric));
    report.metadata.emplace_back("rule", spec.rule.name());
    report.columns = {"replicate",     "gen_model",        "prob_exact_full", "prob_exact_eta",
                      "prob_abc_freq", "prob_abc_logistic", "log_b12",         "log_b_eta",
                      "log_g"};

    const std::size_t R = spec.replicates;
    report.rows.assign(R, {});
    const std::uint64_t data_master = derive_seed(spec.master_seed, kDataPhase);
    const std::uint64_t table_master = derive_seed(spec.master_seed, kTablePhase);
    const ModelPrior prior = ModelPrior::uniform();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    parallel_for_index(R, spec.workers, [&](std::size_t task) {
        const int m = task < R / 2 ? 1 : 2;
        RngStream stream(data_master, task);
        const std::vector<double> theta = sample_prior(spec.pair, m, stream);
        const Dataset y = simulate_dataset(spec.pair, m, theta, spec.n, stream);

        const double log_b12 = log_bayes_factor_full(spec.pair, y).log_value;
        const double log_beta = log_bayes_factor_eta(spec.pair, y).log_value;
        const double p_full = posterior_prob_from_log_bf({log_b12}, prior);
        const double p_eta = posterior_prob_from_log_bf({log_beta}, prior);

        AbcConfig config;
        config.statistic = spec.statistic;
        config.metric = spec.metric;
        config.rule = spec.rule;
        config.model_prior = prior;
        config.table_size = spec.table_size;
        config.data_size = spec.n;
        config.master_seed = derive_seed(table_master, task);
        config.workers = 1; // parallelism lives at the replicate level

        const ReferenceTable table = generate_reference_table(spec.pair, config);
        const std::vector<double> eta_obs = summarize(config.statistic, y);
        const DistanceResult dist = compute_distances(table, eta_obs, config.metric);
        const AcceptedSet accepted = accept(table, dist.distances, config.rule);

        // Replicates whose acceptance region is too thin for an estimator
        // are recorded as NaN and excluded from the aggregates.
        double p_freq = nan, p_logi = nan;
        if (accepted.size() >= 1)
            p_freq = estimate_posterior_frequency(accepted, prior).prob1;
        if (accepted.size() >= table.summary_dim + 2) {
            try {
                p_logi = estimate_posterior_logistic(accepted, table, eta_obs, prior).prob1;
            } catch (const LogisticNonConvergence& error) {
                p_logi = error.last_iterate.prob1;
            }
        }
        report.rows[task] = {static_cast<double>(task), static_cast<double>(m), p_full, p_eta,
                             p_freq, p_logi, log_b12, log_beta,
                             log_discrepancy_ratio(spec.pair, y).log_value};
    });

    const auto compare = [&](const std::string& abc_column, const std::string& exact_column,
                             const std::string& tag) {
        std::vector<std::pair<double, double>> pairs;
        const std::size_t ce = report.column_index(exact_column);
        const std::size_t ca = report.column_index(abc_column);
        for (const auto& row : report.rows)
            if (std::isfinite(row[ca])) pairs.emplace_back(row[ce], row[ca]);
        if (pairs.size() >= 2) {
            const AgreementReport agreement = agreement_report(pairs, 0.5);
            report.aggregates.emplace_back("correlation[" + tag + "]",
                                           agreement.correlation ? *agreement.correlation
                                                                 : std::numeric_limits<double>::quiet_NaN());
            report.aggregates.emplace_back("disagreement[" + tag + "]", agreement.disagreement_rate);
        }
        report.aggregates.emplace_back("n_used[" + tag + "]", static_cast<double>(pairs.size()));
    };
    compare("prob_abc_freq", "prob_exact_full", "freq-vs-full");
    compare("prob_abc_freq", "prob_exact_eta", "freq-vs-eta");
    compare("prob_abc_logistic", "prob_exact_full", "logistic-vs-full");
    compare("prob_abc_logistic", "prob_exact_eta", "logistic-vs-eta");
    return report;
}

ExperimentReport run_false_alloc(const ExperimentSpec& spec) {
    if (spec.replicates == 0 || spec.n == 0)
        throw std::invalid_argument("false-alloc: replicates and n must be >= 1");

    ExperimentReport report;
    report.experiment = spec.experiment;
    base_metadata(report, spec);
    report.metadata.emplace_back("n", std::to_string(spec.n));
    report.metadata.emplace_back("replicates_per_model", std::to_string(spec.replicates));
    report.columns = {"rule", "true_model", "decided_model", "prob1"};

    const std::vector<std::pair<std::string, DecisionRule::Source>> rules = {
        {"exact-full", DecisionRule::Source::ExactFull},
        {"exact-eta", DecisionRule::Source::ExactEta},
    };
    for (std::size_t r = 0; r < rules.size(); ++r) {
        DecisionRule rule;
        rule.source = rules[r].second;
        // Same master for every rule: both classifiers see the same
        // pseudo-observed datasets.
        const ConfusionSummary confusion = false_allocation_rates(
            spec.pair, rule, spec.replicates, spec.n, spec.master_seed, spec.workers);
        for (const auto& record : confusion.records)
            report.rows.push_back({static_cast<double>(r), static_cast<double>(record.true_model),
                                   static_cast<double>(record.decided_model), record.prob1});
        report.aggregates.emplace_back("misallocation_rate[rule=" + rules[r].first + ",model=1]",
                                       confusion.misallocation_rate_model1);
        report.aggregates.emplace_back("misallocation_rate[rule=" + rules[r].first + ",model=2]",
                                       confusion.misallocation_rate_model2);
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.experiment == "fig1") return run_fig1(spec);
    if (spec.experiment == "lemma-convergence") return run_lemma_convergence(spec);
    if (spec.experiment == "normal-discrepancy") return run_normal_discrepancy(spec);
    if (spec.experiment == "abc-vs-exact") return run_abc_vs_exact(spec);
    if (spec.experiment == "false-alloc") return run_false_alloc(spec);
    throw std::invalid_argument("unknown experiment '" + spec.experiment + "'");
}

namespace {

void emit_plots(const ExperimentReport& report, const ExperimentSpec& spec,
                const std::filesystem::path& dir, EmitResult& result) {
    const auto write = [&](const std::string& filename, auto&& writer) {
        const std::filesystem::path path = dir / filename;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        writer(out);
        result.files.push_back(path.string());
    };

    if (spec.experiment == "fig1" || spec.experiment == "normal-discrepancy") {
        for (int m = 1; m <= 2; ++m) {
            const std::string tag = "_model" + std::to_string(m);
            if (spec.experiment == "fig1") {
                const auto x = column_values(report, "log_b12", "gen_model", m);
                const auto y = column_values(report, "log_b_eta", "gen_model", m);
                write(spec.experiment + tag + ".svg", [&](std::ostream& out) {
                    write_svg_scatter(out, x, y, "log Bayes factor, full data",
                                      "log Bayes factor, sum statistic",
                                      "Bayes factors under generating model " + std::to_string(m) +
                                          " (natural log scale)");
                });
            } else {
                const auto v = column_values(report, "log_g", "gen_model", m);
                write(spec.experiment + tag + ".svg", [&](std::ostream& out) {
                    write_svg_histogram(out, v, 40, "log discrepancy ratio",
                                        "Log discrepancy under generating model " + std::to_string(m));
                });
            }
        }
    } else if (spec.experiment == "lemma-convergence") {
        auto n_values = column_values(report, "n");
        for (double& v : n_values) v = std::log10(v);
        const auto gaps = column_values(report, "gap");
        write(spec.experiment + ".svg", [&](std::ostream& out) {
            write_svg_scatter(out, n_values, gaps, "log10 sample size",
                              "|statistic Bayes factor - limit|",
                              "Convergence of the summary-statistic Bayes factor");
        });
    } else if (spec.experiment == "abc-vs-exact") {
        for (const std::string estimator : {"freq", "logistic"}) {
            const auto x = column_values(report, "prob_exact_full");
            const auto y = column_values(report, "prob_abc_" + estimator);
            write(spec.experiment + "_" + estimator + ".svg", [&](std::ostream& out) {
                write_svg_scatter(out, x, y, "exact posterior P(M=1|y)",
                                  "ABC estimate (" + estimator + ")",
                                  "ABC vs exact posterior probability of model 1");
            });
        }
    } else if (spec.experiment == "false-alloc") {
        for (int m = 1; m <= 2; ++m) {
            const auto v = column_values(report, "prob1", "true_model", m);
            write(spec.experiment + "_model" + std::to_string(m) + ".svg", [&](std::ostream& out) {
                write_svg_histogram(out, v, 40, "P(M=1|y)",
                                    "Posterior probabilities, true model " + std::to_string(m));
            });
        }
    }
}

} // namespace

EmitResult emit_outputs(const ExperimentReport& report, const ExperimentSpec& spec) {
    EmitResult result;
    const std::filesystem::path dir(spec.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    const std::filesystem::path csv_path = dir / (report.experiment + ".csv");
    {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("cannot open " + csv_path.string() + " for writing");

        for (const auto& [key, value] : report.metadata) out << "# " << key << ": " << value << "\n";
        out << join_csv(report.columns) << "\n";

        const std::size_t c12 = report.column_index("log_b12");
        const std::size_t ceta = report.column_index("log_b_eta");
        const std::size_t cg = report.column_index("log_g");
        const bool check = c12 != std::size_t(-1) && ceta != std::size_t(-1) && cg != std::size_t(-1);

        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& row = report.rows[i];
            if (check) {
                const double residual = std::fabs(row[c12] - (row[cg] + row[ceta]));
                if (!(residual < kFactorizationGuardTol))
                    result.guard_failures.push_back(
                        "GUARD_FAIL experiment=" + report.experiment + " row=" + std::to_string(i) +
                        " residual=" + format_g17(residual));
            }
            std::vector<std::string> fields;
            fields.reserve(row.size());
            for (double v : row) fields.push_back(format_g17(v));
            out << join_csv(fields) << "\n";
        }
        for (const auto& [key, value] : report.aggregates)
            out << "# " << key << " = " << format_g17(value) << "\n";
        if (!out) throw std::runtime_error("write failed for " + csv_path.string());
    }
    result.files.push_back(csv_path.string());

    if (spec.plot) emit_plots(report, spec, dir, result);
    return result;
}

} // namespace abcmc

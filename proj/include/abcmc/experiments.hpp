#pragma once

#include "abcmc/abc.hpp"
#include "abcmc/data.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace abcmc {

// Batch experiment runners behind the abc-verdict CLI. Every runner is a
// pure function of its spec: rerunning with the same seed reproduces each
// output file byte for byte, independent of the worker count.
struct ExperimentSpec {
    std::string experiment; // fig1 | lemma-convergence | normal-discrepancy | abc-vs-exact | false-alloc
    ModelPairSpec pair = ModelPairSpec::poisson_geometric();
    // fig1 / normal-discrepancy / false-alloc: replicates per generating
    // model; abc-vs-exact: total pseudo-observed datasets (half per model);
    // lemma-convergence: seeds per grid cell.
    std::size_t replicates = 0;
    std::size_t n = 0;
    std::size_t table_size = 0;
    SummaryStatistic statistic{StatId::Sum};
    DistanceMetric metric = DistanceMetric::NormalizedEuclidean;
    AcceptanceRule rule = AcceptanceRule::k_nearest(500);
    std::uint64_t master_seed = 42;
    std::string out_dir = ".";
    bool plot = false;
    unsigned workers = 1;
    std::vector<double> theta0_grid;     // lemma-convergence, count pair
    std::vector<std::size_t> n_grid;     // lemma-convergence

    // Paper-scale defaults for the named experiment.
    static ExperimentSpec defaults(const std::string& experiment);
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> metadata; // leading '#' lines
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> aggregates;    // trailing '#' lines

    std::size_t column_index(const std::string& name) const; // npos when absent
    double aggregate(const std::string& name) const;          // throws when absent
};

ExperimentReport run_fig1(const ExperimentSpec& spec);
ExperimentReport run_lemma_convergence(const ExperimentSpec& spec);
ExperimentReport run_normal_discrepancy(const ExperimentSpec& spec);
ExperimentReport run_abc_vs_exact(const ExperimentSpec& spec);
ExperimentReport run_false_alloc(const ExperimentSpec& spec);

ExperimentReport run_experiment(const ExperimentSpec& spec);

struct EmitResult {
    std::vector<std::string> files;          // paths written
    std::vector<std::string> guard_failures; // machine-readable, empty on success
};

// Writes <out_dir>/<experiment>.csv (metadata comments, header, one row per
// replicate, aggregate footer comments; 17 significant digits) and, when
// spec.plot is set, the experiment's SVG plots. While writing, every row
// carrying the (log B12, log B^eta, log g) triple is re-checked against
// the factorization identity |log B12 - log g - log B^eta| < 1e-9; any
// violation is reported as a guard failure.
EmitResult emit_outputs(const ExperimentReport& report, const ExperimentSpec& spec);

// Identity tolerance used by the emission guard.
inline constexpr double kFactorizationGuardTol = 1e-9;

} // namespace abcmc

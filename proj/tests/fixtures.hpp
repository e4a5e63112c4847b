#pragma once

#include <cstdint>

// Pilot-frozen Monte Carlo fixtures. Every constant was produced by the
// pilot binary at kPilotSeed; re-derive the whole block with one command:
//
//   cmake --build build && ./build/tests/pilot
//
// The runs are seeded and single-valued, so tests compare against these
// numbers with small slack only to survive refactors that perturb
// floating-point rounding, not Monte Carlo noise.
namespace fixtures {

inline constexpr std::uint64_t kPilotSeed = 42;

// fig1, count pair, n = 50, 1e4 replicates per generating model
inline constexpr double kFig1SdRatioModel1 = 0.053733;
inline constexpr double kFig1SdRatioModel2 = 0.056820;
inline constexpr double kFig1MaxAbsLogB12Model1 = 35.210856;
inline constexpr double kFig1MaxAbsLogBEtaModel1 = 4.769420;
inline constexpr double kFig1MaxAbsLogB12Model2 = 618766.860670;
inline constexpr double kFig1MaxAbsLogBEtaModel2 = 35339.436424;

// exact-rule false allocation rates, count pair, R = 500 per model
inline constexpr double kExactFullRates[3][2] = {
    {0.210, 0.328}, // n = 10
    {0.126, 0.194}, // n = 50
    {0.084, 0.124}, // n = 100
};
inline constexpr double kExactEtaRates[3][2] = {
    {0.150, 0.640}, // n = 10
    {0.064, 0.714}, // n = 50
    {0.074, 0.704}, // n = 100
};

// full-data vs statistic-based decisions, count pair, n = 50, 1e3 datasets
inline constexpr double kDivergenceDisagreement = 0.348;

// ABC repeat stability, count pair, T = 1e5, knn:500, K = 10, one dataset
inline constexpr double kStabilityObservedIqr = 0.017;

// abc-vs-exact correlation aggregates
// sum-logfact statistic, exact match, T = 1e6, 100 datasets, n = 5
inline constexpr double kCrossStatCorrFreqFull = 0.998877;
// sum statistic, exact match, T = 1e5, 100 datasets, n = 5
inline constexpr double kSumStatCorrFreqEta = 0.998022;
inline constexpr double kSumStatCorrFreqFull = 0.676812;

} // namespace fixtures

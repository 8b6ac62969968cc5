#pragma once

#include "qpr/measurement.hpp"
#include "qpr/reconstruct_c2.hpp"
#include "qpr/statespace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qpr {

// Independent check of the recursive enumeration: scan a uniform grid over
// the free phases, descend from every corner consistent with a nearby root,
// probe around each minimum for twins closer than a grid cell, and cluster
// the results. Slow but has no shared machinery with the recursion beyond
// the Born rule.

inline constexpr int kBruteForceDefaultSteps = 360;
inline constexpr double kBruteForceDefaultTol = 1e-5;
inline constexpr double kBruteForceMergeTol = 1e-5;
inline constexpr double kBruteForceSearchCap = 1e7;

struct BruteForceRoot {
    PureState state;
    std::vector<double> thetas; // phases of the support sites after the first
    double residual;            // largest absolute distribution deviation
};

struct BruteForceResult {
    std::vector<BruteForceRoot> roots;
    std::vector<int> support;
    int grid_steps = 0;
};

BruteForceResult brute_force_phase_search(const ProbabilityDistribution& position,
                                          const ProbabilityDistribution& constructed,
                                          int grid_steps = kBruteForceDefaultSteps,
                                          double tol = kBruteForceDefaultTol,
                                          double support_tol = kSupportTol);

// True when the state reproduces both distributions within tol.
bool verify_candidate(const PureState& s, const ProbabilityDistribution& position,
                      const ProbabilityDistribution& constructed, double tol);

enum class Strategy { C2, Povm };

std::string to_string(Strategy strategy);

// Deterministic per-trial generator: the same (seed, trial) pair always
// yields the same stream, independent of trial order.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

struct CampaignReport {
    int d = 0;
    Strategy strategy = Strategy::C2;
    int trials = 0;
    int successes = 0;
    int max_candidates = 0;
    double mean_candidates = 0.0;
    int measure_zero_hits = 0;
    double mean_fidelity = 0.0;
    double seconds = 0.0;
};

// Run `trials` random-state reconstructions and aggregate the outcome. A
// trial succeeds when some returned candidate reaches fidelity 1 - 1e-9 with
// the sampled truth.
CampaignReport run_campaign(int d, int trials, Strategy strategy, std::uint64_t seed,
                            double tol = kReconstructTol);

} // namespace qpr

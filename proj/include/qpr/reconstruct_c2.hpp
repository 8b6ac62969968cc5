#pragma once

#include "qpr/bases.hpp"
#include "qpr/measurement.hpp"
#include "qpr/statespace.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace qpr {

// Reconstruction from two outcome distributions: the position basis fixes the
// amplitude magnitudes, the constructed basis pins each successive phase up
// to a sign, and walking the support left to right enumerates every
// assignment consistent with both. A support of j sites yields at most
// 2^(j-1) candidates.

inline constexpr double kReconstructTol = 1e-8;
inline constexpr double kCosineClampTol = 1e-9;
inline constexpr double kCosineSnapTol = 1e-12;
inline constexpr double kRootDedupTol = 1e-9;
inline constexpr int kEnumerateSiteCap = 24;

// Amplitude magnitudes sqrt(p_k).
Eigen::VectorXd amplitudes_from_position(const ProbabilityDistribution& position);

// Outcome probabilities of the constructed basis, rescaled by the squared
// norms of the unnormalized rows. Entry j then equals the squared magnitude
// of the unnormalized row-j inner product with the state.
Eigen::VectorXd rescale_constructed_probs(const ProbabilityDistribution& constructed,
                                          const CoeffSequence& cs);

// One step of the phase recursion. The running sum over already-placed sites
// has magnitude `sum_mag` and phase `sum_phase`; the next support site
// contributes magnitude `coeff * amp`, and `q` is the rescaled constructed
// probability of the row that couples them. Returns the one or two phase
// values for the next site, in [0, 2*pi).
//
// Throws ChainBrokenError when sum_mag <= breakdown_tol (the step no longer
// constrains the phase) and InconsistentDistributionsError when the
// implied cosine lands outside [-1, 1] by more than kCosineClampTol.
std::vector<double> solve_phase_step(double sum_mag, double sum_phase, double coeff, double amp,
                                     double q, double breakdown_tol);

struct ChainFailure {
    int index;        // row whose running sum vanished
    double magnitude; // that sum's magnitude
};

struct EnumerationResult {
    // Sorted by phase tuple so concurrent branch evaluation orders could
    // merge to the same list.
    std::vector<PureState> candidates;
    std::optional<ChainFailure> failure; // set iff candidates is empty
    std::vector<int> support;
    int degenerate_steps = 0; // recursion steps whose two phase roots coincided
};

EnumerationResult enumerate_candidates(const ProbabilityDistribution& position,
                                       const ProbabilityDistribution& constructed,
                                       const CoeffSequence& cs, double tol = kReconstructTol,
                                       double support_tol = kSupportTol, bool force = false);

// Largest absolute deviation between the state's outcome probabilities and
// the given distributions, across both bases.
double max_distribution_deviation(const PureState& s, const ProbabilityDistribution& position,
                                  const ProbabilityDistribution& constructed);

// Keep only candidates reproducing both distributions within tol.
std::vector<PureState> prune_candidates(const std::vector<PureState>& candidates,
                                        const ProbabilityDistribution& position,
                                        const ProbabilityDistribution& constructed, double tol);

struct C2Reconstruction {
    std::vector<PureState> candidates;
    std::optional<ChainFailure> failure;
    int raw_candidate_count = 0;
    int degenerate_steps = 0;
    bool pruned = false;
};

C2Reconstruction reconstruct_via_c2(const ProbabilityDistribution& position,
                                    const ProbabilityDistribution& constructed,
                                    double tol = kReconstructTol,
                                    double support_tol = kSupportTol, bool force = false,
                                    bool prune = true);

struct MeasureZeroReport {
    bool in_set = false;
    double margin = 0.0;    // smallest running-sum magnitude the recursion consults
    int failing_index = -1; // row index attaining the margin, -1 if none consulted
};

// A state fails the recursion exactly when some running sum it consults
// vanishes. The first consulted sum covers a single support site and is
// structurally positive, so only the third support site onward can fail.
// States with fewer than three support sites report an infinite margin.
MeasureZeroReport in_measure_zero_set(const PureState& s, const CoeffSequence& cs,
                                      double tol = kReconstructTol,
                                      double support_tol = kSupportTol);

} // namespace qpr

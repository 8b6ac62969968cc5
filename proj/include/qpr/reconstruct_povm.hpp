#pragma once

#include "qpr/measurement.hpp"
#include "qpr/statespace.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qpr {

// Reconstruction strategy that couples pairs of support sites with a diagonal
// POVM and reads each pair's relative phase off the Fourier distribution of
// the post-measurement state. Pairs separated by exactly dim/2 make the
// two-outcome linear system singular, so orderings avoid them; a support that
// is exactly such a pair is handled by the Pauli x/y fallback.

enum class OrderingMode { Chain, Star };

struct SiteOrdering {
    OrderingMode requested = OrderingMode::Chain;
    OrderingMode realized = OrderingMode::Chain;
    // Chain: consecutive entries are coupled. Star: seq[0] is the hub and
    // every later entry couples to it.
    std::vector<int> seq;
};

// Order the support sites so that no coupled pair is separated by dim/2.
// Chain mode inserts each site (ascending) at whichever end of the sequence
// it does not conflict with; a site conflicting with a single-element
// sequence is deferred until a second site has been placed. Star mode picks
// the first site whose dim/2 partner is absent as hub, falling back to a
// chain when every site is partnered. A support of exactly two sites dim/2
// apart admits no ordering and raises FailingSetError.
SiteOrdering find_ordering(const std::vector<int>& support, int d,
                           OrderingMode mode = OrderingMode::Chain);

struct PovmSpec {
    // Pair elements first, completion element last.
    std::vector<Eigen::MatrixXcd> elements;
    SiteOrdering ordering;
    // Sites coupled by element l; no entry for the completion element.
    std::vector<std::pair<int, int>> pairs;
};

// Chain: element l is (|m_l><m_l| + |m_{l+1}><m_{l+1}|) / 2.
PovmSpec build_chain_povm(const SiteOrdering& ordering, int d);

// Star over j sites: element l is (|hub><hub| + |spoke_l><spoke_l|) / j.
PovmSpec build_star_povm(const SiteOrdering& ordering, int d);

// Dispatch on ordering.realized.
PovmSpec build_povm(const SiteOrdering& ordering, int d);

inline constexpr double kSinBetaTol = 1e-10;
inline constexpr double kPhaseNormTol = 1e-6;

// Invert the two-outcome Fourier system for a normalized two-site state
// a1|l1> + a2 e^{i delta}|l2>: outcome k has probability
// (1 + 2 a1 a2 cos(delta - 2 pi k (l2 - l1) / d)) / d, and outcomes 0 and 1
// determine cos(delta) and sin(delta). Raises SingularSystemError when
// |l2 - l1| = d/2 (the system degenerates) and InconsistentProbabilitiesError
// when the recovered cosine/sine pair misses the unit circle by more than
// norm_tol. Returns delta in [0, 2*pi).
double phase_difference_from_fourier(double a1, double a2, int l1, int l2, double p0, double p1,
                                     int d, double norm_tol = kPhaseNormTol);

struct PhaseEstimate {
    double delta = 0.0;
    bool defined = false;
};

// Recover the relative phase of a two-site state from Pauli x/y expectation
// values on that pair: <x> = 2 a1 a2 cos(delta), <y> = 2 a1 a2 sin(delta).
// Undefined when the amplitude product vanishes.
PhaseEstimate pauli_fallback(double x_expect, double y_expect, double a1, double a2);

struct PauliXY {
    double x = 0.0;
    double y = 0.0;
};

// Measurement access used by the reconstruction: either exact Born-rule
// values or finite-shot estimates, over the same interface.
class MeasurementOracle {
public:
    virtual ~MeasurementOracle() = default;

    // Fourier outcome distribution of the normalized post-measurement state
    // after POVM outcome l.
    virtual ProbabilityDistribution fourier_after_collapse(const PovmSpec& povm, int l) = 0;

    // Pauli x/y expectation values on the two-dimensional subspace spanned
    // by |site_low> and |site_high>.
    virtual PauliXY pauli_xy(int site_low, int site_high) = 0;
};

class ExactStateOracle : public MeasurementOracle {
public:
    explicit ExactStateOracle(PureState state) : state_(std::move(state)) {}

    ProbabilityDistribution fourier_after_collapse(const PovmSpec& povm, int l) override;
    PauliXY pauli_xy(int site_low, int site_high) override;

private:
    PureState state_;
};

class SampledStateOracle : public MeasurementOracle {
public:
    SampledStateOracle(PureState state, long long shots, std::mt19937_64& rng)
        : state_(std::move(state)), shots_(shots), rng_(rng) {}

    ProbabilityDistribution fourier_after_collapse(const PovmSpec& povm, int l) override;
    PauliXY pauli_xy(int site_low, int site_high) override;

private:
    PureState state_;
    long long shots_;
    std::mt19937_64& rng_;
};

struct PovmReconstruction {
    PureState state;
    // "normal" for the POVM + Fourier path, "fallback" for Pauli x/y.
    std::string path;
    std::optional<PovmSpec> povm;
};

// Full second-strategy reconstruction: position distribution fixes the
// magnitudes, the oracle supplies the phase measurements.
PovmReconstruction reconstruct_via_povm(const ProbabilityDistribution& position,
                                        MeasurementOracle& oracle, int d,
                                        OrderingMode mode = OrderingMode::Chain,
                                        double support_tol = kSupportTol,
                                        double norm_tol = kPhaseNormTol);

std::string to_string(OrderingMode mode);

} // namespace qpr

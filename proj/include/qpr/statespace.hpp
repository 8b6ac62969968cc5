#pragma once

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace qpr {

// Pure state of a d-level system, stored as complex amplitudes in the
// computational (position) basis. Not forced to unit norm on construction;
// normalize() produces the unit-norm version.
struct PureState {
    Eigen::VectorXcd amps;

    int dim() const { return static_cast<int>(amps.size()); }
};

// Indices of the nonzero amplitudes, ascending.
struct Support {
    std::vector<int> sites;

    int size() const { return static_cast<int>(sites.size()); }
    bool contains(int k) const;
};

inline constexpr double kSupportTol = 1e-9;

PureState normalize(const Eigen::VectorXcd& v);

// Sites whose amplitude magnitude exceeds tol.
Support support_of(const PureState& s, double tol = kSupportTol);

// |<a|b>|, invariant under global phase of either argument.
double fidelity(const PureState& a, const PureState& b);

// Haar-distributed pure state: 2d independent standard Gaussians, normalized.
PureState haar_random(int d, std::mt19937_64& rng);

// Global-phase canonical form: first above-tolerance amplitude made real
// positive. Two states equal up to global phase canonicalize identically.
PureState canonical(const PureState& s, double tol = kSupportTol);

// Computational basis vector |k>.
PureState basis_state(int d, int k);

} // namespace qpr

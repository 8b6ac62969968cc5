#include "qpr/statespace.hpp"

#include "qpr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace qpr {

bool Support::contains(int k) const {
    return std::binary_search(sites.begin(), sites.end(), k);
}

PureState normalize(const Eigen::VectorXcd& v) {
    double n = v.norm();
    if (n == 0.0) throw ZeroVectorError{};
    return PureState{v / n};
}

Support support_of(const PureState& s, double tol) {
    Support sup;
    for (int k = 0; k < s.dim(); ++k) {
        if (std::abs(s.amps(k)) > tol) sup.sites.push_back(k);
    }
    if (sup.sites.empty()) throw EmptySupportError{};
    return sup;
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatchError("fidelity: dimensions " + std::to_string(a.dim()) +
                                     " and " + std::to_string(b.dim()) + " differ");
    }
    // Unit vectors can overshoot 1 by a few ulps.
    return std::min(std::abs(a.amps.dot(b.amps)), 1.0);
}

PureState haar_random(int d, std::mt19937_64& rng) {
    if (d < 1) throw DimensionMismatchError("haar_random: dimension must be positive");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(d);
    for (int k = 0; k < d; ++k) {
        double re = gauss(rng);
        double im = gauss(rng);
        v(k) = std::complex<double>(re, im);
    }
    return normalize(v);
}

PureState canonical(const PureState& s, double tol) {
    for (int k = 0; k < s.dim(); ++k) {
        double mag = std::abs(s.amps(k));
        if (mag > tol) {
            std::complex<double> phase = s.amps(k) / mag;
            return PureState{s.amps * std::conj(phase)};
        }
    }
    throw EmptySupportError{};
}

PureState basis_state(int d, int k) {
    if (d < 1) throw DimensionMismatchError("basis_state: dimension must be positive");
    if (k < 0 || k >= d) {
        throw DimensionMismatchError("basis_state: index " + std::to_string(k) +
                                     " outside dimension " + std::to_string(d));
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    v(k) = 1.0;
    return PureState{v};
}

} // namespace qpr

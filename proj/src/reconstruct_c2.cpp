#include "qpr/reconstruct_c2.hpp"

#include "qpr/angles.hpp"
#include "qpr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace qpr {

Eigen::VectorXd amplitudes_from_position(const ProbabilityDistribution& position) {
    return position.probs.cwiseSqrt();
}

Eigen::VectorXd rescale_constructed_probs(const ProbabilityDistribution& constructed,
                                          const CoeffSequence& cs) {
    if (constructed.size() != cs.d) {
        throw DimensionMismatchError("rescale_constructed_probs: distribution size " +
                                     std::to_string(constructed.size()) +
                                     " does not match dimension " + std::to_string(cs.d));
    }
    std::vector<double> sq = constructed_unnormalized_sq_norms(cs);
    Eigen::VectorXd q(cs.d);
    for (int j = 0; j < cs.d; ++j) q(j) = constructed.probs(j) * sq[j];
    return q;
}

std::vector<double> solve_phase_step(double sum_mag, double sum_phase, double coeff, double amp,
                                     double q, double breakdown_tol) {
    double t = coeff * amp;
    if (t <= 0.0) {
        throw InconsistentDistributionsError("phase step called with zero target amplitude");
    }
    if (sum_mag <= breakdown_tol) throw ChainBrokenError{};
    double c = (sum_mag * sum_mag + t * t - q) / (2.0 * sum_mag * t);
    if (c > 1.0) {
        if (c - 1.0 > kCosineClampTol) {
            throw InconsistentDistributionsError("implied cosine " + std::to_string(c) +
                                                 " exceeds 1");
        }
        c = 1.0;
    } else if (c < -1.0) {
        if (-1.0 - c > kCosineClampTol) {
            throw InconsistentDistributionsError("implied cosine " + std::to_string(c) +
                                                 " is below -1");
        }
        c = -1.0;
    }
    // A cosine an ulp inside +-1 is a tangent root blurred by rounding. Left
    // alone it splits into two roots about sqrt(ulp) apart, which is exactly
    // the scale of the breakdown tolerance, so an exactly cancelling state
    // could slip past the vanished-sum check and yield unconstrained phases.
    // Snapping restores the double root; the phase shift is at most
    // sqrt(2 * kCosineSnapTol), far below every reconstruction tolerance.
    if (c > 1.0 - kCosineSnapTol) c = 1.0;
    if (c < -1.0 + kCosineSnapTol) c = -1.0;
    double gamma = std::acos(c);
    double plus = wrap_angle(sum_phase + gamma);
    double minus = wrap_angle(sum_phase - gamma);
    if (angle_distance(plus, minus) <= kRootDedupTol) return {plus};
    return {plus, minus};
}

namespace {

std::vector<int> support_from_amplitudes(const Eigen::VectorXd& a, double support_tol) {
    std::vector<int> sites;
    for (int k = 0; k < a.size(); ++k) {
        if (a(k) > support_tol) sites.push_back(k);
    }
    if (sites.empty()) throw EmptySupportError{};
    return sites;
}

struct Branch {
    std::complex<double> sum;
    std::vector<double> thetas;
};

PureState state_from_phases(const Eigen::VectorXd& a, const std::vector<int>& support,
                            const std::vector<double>& thetas) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(a.size());
    for (size_t l = 0; l < support.size(); ++l) {
        v(support[l]) = std::polar(a(support[l]), thetas[l]);
    }
    return normalize(v);
}

} // namespace

EnumerationResult enumerate_candidates(const ProbabilityDistribution& position,
                                       const ProbabilityDistribution& constructed,
                                       const CoeffSequence& cs, double tol, double support_tol,
                                       bool force) {
    if (position.size() != cs.d) {
        throw DimensionMismatchError("enumerate_candidates: position distribution size " +
                                     std::to_string(position.size()) +
                                     " does not match dimension " + std::to_string(cs.d));
    }
    Eigen::VectorXd a = amplitudes_from_position(position);
    Eigen::VectorXd q = rescale_constructed_probs(constructed, cs);
    std::vector<int> support = support_from_amplitudes(a, support_tol);
    int j = static_cast<int>(support.size());
    if (j > kEnumerateSiteCap && !force) throw DimensionCapError(j, kEnumerateSiteCap);

    EnumerationResult result;
    result.support = support;

    int k0 = support.front();
    std::vector<Branch> branches;
    branches.push_back(Branch{std::complex<double>(cs.A[k0] * a(k0), 0.0), {0.0}});

    for (int l = 1; l < j; ++l) {
        int site = support[l];
        int row = site - 1;
        std::vector<Branch> next;
        next.reserve(branches.size() * 2);
        bool degenerate = false;
        try {
            for (const Branch& b : branches) {
                double mag = std::abs(b.sum);
                double phase = std::arg(b.sum);
                std::vector<double> roots =
                    solve_phase_step(mag, phase, cs.A[site], a(site), q(row), tol);
                if (roots.size() == 1) degenerate = true;
                for (double theta : roots) {
                    Branch child = b;
                    child.sum += std::polar(cs.A[site] * a(site), theta);
                    child.thetas.push_back(theta);
                    next.push_back(std::move(child));
                }
            }
        } catch (const ChainBrokenError&) {
            // The running sum magnitude is identical across branches, so one
            // breakdown means every branch is stuck at this same row.
            result.failure = ChainFailure{row, std::abs(branches.front().sum)};
            return result;
        }
        if (degenerate) ++result.degenerate_steps;
        branches = std::move(next);
    }

    std::sort(branches.begin(), branches.end(),
              [](const Branch& lhs, const Branch& rhs) { return lhs.thetas < rhs.thetas; });
    result.candidates.reserve(branches.size());
    for (const Branch& b : branches) {
        result.candidates.push_back(state_from_phases(a, support, b.thetas));
    }
    return result;
}

double max_distribution_deviation(const PureState& s, const ProbabilityDistribution& position,
                                  const ProbabilityDistribution& constructed) {
    int d = s.dim();
    ProbabilityDistribution p = born_distribution(s, position_basis(d));
    ProbabilityDistribution c = born_distribution(s, constructed_basis(d));
    double dev = (p.probs - position.probs).cwiseAbs().maxCoeff();
    dev = std::max(dev, (c.probs - constructed.probs).cwiseAbs().maxCoeff());
    return dev;
}

std::vector<PureState> prune_candidates(const std::vector<PureState>& candidates,
                                        const ProbabilityDistribution& position,
                                        const ProbabilityDistribution& constructed, double tol) {
    std::vector<PureState> kept;
    for (const PureState& s : candidates) {
        if (max_distribution_deviation(s, position, constructed) <= tol) kept.push_back(s);
    }
    return kept;
}

C2Reconstruction reconstruct_via_c2(const ProbabilityDistribution& position,
                                    const ProbabilityDistribution& constructed, double tol,
                                    double support_tol, bool force, bool prune) {
    CoeffSequence cs = coeff_sequence(position.size());
    EnumerationResult enumeration =
        enumerate_candidates(position, constructed, cs, tol, support_tol, force);
    C2Reconstruction rec;
    rec.failure = enumeration.failure;
    rec.raw_candidate_count = static_cast<int>(enumeration.candidates.size());
    rec.degenerate_steps = enumeration.degenerate_steps;
    rec.pruned = prune;
    rec.candidates = prune ? prune_candidates(enumeration.candidates, position, constructed, tol)
                           : enumeration.candidates;
    return rec;
}

MeasureZeroReport in_measure_zero_set(const PureState& s, const CoeffSequence& cs, double tol,
                                      double support_tol) {
    if (s.dim() != cs.d) {
        throw DimensionMismatchError("in_measure_zero_set: state dimension " +
                                     std::to_string(s.dim()) + " does not match dimension " +
                                     std::to_string(cs.d));
    }
    Support sup = support_of(s, support_tol);
    MeasureZeroReport report;
    report.margin = std::numeric_limits<double>::infinity();
    if (sup.size() < 3) return report;

    std::complex<double> sum = 0.0;
    for (int l = 0; l < sup.size(); ++l) {
        int site = sup.sites[l];
        if (l >= 2) {
            double mag = std::abs(sum);
            if (mag < report.margin) {
                report.margin = mag;
                report.failing_index = site - 1;
            }
        }
        sum += cs.A[site] * s.amps(site);
    }
    report.in_set = report.margin <= tol;
    return report;
}

} // namespace qpr

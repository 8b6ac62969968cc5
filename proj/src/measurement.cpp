#include "qpr/measurement.hpp"

#include "qpr/errors.hpp"

#include <cmath>
#include <numeric>

namespace qpr {

ProbabilityDistribution make_distribution(const Eigen::VectorXd& raw, std::string source) {
    Eigen::VectorXd p = raw;
    for (int k = 0; k < p.size(); ++k) {
        if (p(k) < 0.0) {
            if (p(k) < -kProbNegativeSlack) {
                throw InvalidDistributionError("probability " + std::to_string(p(k)) +
                                               " at outcome " + std::to_string(k) +
                                               " is negative");
            }
            p(k) = 0.0;
        }
    }
    double total = p.sum();
    if (std::abs(total - 1.0) > kProbSumTol) {
        throw InvalidDistributionError("probabilities sum to " + std::to_string(total));
    }
    return ProbabilityDistribution{std::move(p), std::move(source)};
}

ProbabilityDistribution born_distribution(const PureState& s, const OrthonormalBasis& basis) {
    if (s.dim() != basis.dim()) {
        throw DimensionMismatchError("born_distribution: state dimension " +
                                     std::to_string(s.dim()) + " does not match basis dimension " +
                                     std::to_string(basis.dim()));
    }
    Eigen::VectorXcd coeffs = basis.vectors.conjugate() * s.amps;
    return make_distribution(coeffs.cwiseAbs2(), to_string(basis.label));
}

std::vector<long long> sample_counts(const ProbabilityDistribution& dist, long long shots,
                                     std::mt19937_64& rng) {
    if (shots < 0) throw InvalidDistributionError("sample_counts: negative shot count");
    std::vector<double> cdf(dist.size());
    double acc = 0.0;
    for (int k = 0; k < dist.size(); ++k) {
        acc += dist.probs(k);
        cdf[k] = acc;
    }
    cdf.back() = 1.0;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<long long> counts(dist.size(), 0);
    for (long long s = 0; s < shots; ++s) {
        double u = uni(rng);
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        ++counts[it - cdf.begin()];
    }
    return counts;
}

ProbabilityDistribution empirical_distribution(const std::vector<long long>& counts,
                                               std::string source) {
    long long total = std::accumulate(counts.begin(), counts.end(), 0LL);
    if (total <= 0) throw InvalidDistributionError("empirical_distribution: no counts");
    Eigen::VectorXd p(static_cast<int>(counts.size()));
    for (size_t k = 0; k < counts.size(); ++k) {
        p(static_cast<int>(k)) = static_cast<double>(counts[k]) / static_cast<double>(total);
    }
    return make_distribution(p, std::move(source));
}

ProbabilityDistribution povm_outcome_probs(const PureState& s,
                                           const std::vector<Eigen::MatrixXcd>& elements) {
    int d = s.dim();
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXd p(static_cast<int>(elements.size()));
    for (size_t l = 0; l < elements.size(); ++l) {
        const Eigen::MatrixXcd& g = elements[l];
        if (g.rows() != d || g.cols() != d) {
            throw DimensionMismatchError("povm_outcome_probs: element " + std::to_string(l) +
                                         " has wrong shape");
        }
        sum += g;
        p(static_cast<int>(l)) = std::real(s.amps.dot(g * s.amps));
    }
    if ((sum - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
        throw IncompletePovmError{};
    }
    return make_distribution(p, "povm");
}

PureState povm_collapse(const PureState& s, const Eigen::MatrixXcd& g, double tol) {
    if (g.rows() != s.dim() || g.cols() != s.dim()) {
        throw DimensionMismatchError("povm_collapse: element has wrong shape");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g);
    if (solver.info() != Eigen::Success) {
        throw InvalidDistributionError("povm_collapse: eigendecomposition failed");
    }
    Eigen::VectorXd evals = solver.eigenvalues();
    for (int k = 0; k < evals.size(); ++k) {
        // Hermitian roundoff can push an eigenvalue of a PSD element slightly
        // below zero; clamp before the square root.
        evals(k) = evals(k) < 0.0 ? 0.0 : std::sqrt(evals(k));
    }
    Eigen::MatrixXcd root =
        solver.eigenvectors() * evals.asDiagonal() * solver.eigenvectors().adjoint();
    Eigen::VectorXcd v = root * s.amps;
    if (v.norm() <= tol) throw ImpossibleOutcomeError{};
    return normalize(v);
}

} // namespace qpr

#pragma once

#include "qpr/bases.hpp"
#include "qpr/statespace.hpp"

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

namespace qpr {

// Probability distribution over measurement outcomes, tagged with the label
// of whatever produced it (a basis name, "povm", "sampled", ...).
struct ProbabilityDistribution {
    Eigen::VectorXd probs;
    std::string source;

    int size() const { return static_cast<int>(probs.size()); }
};

inline constexpr double kProbNegativeSlack = 1e-12;
inline constexpr double kProbSumTol = 1e-10;

// Validate and clean a raw vector of probabilities: entries in
// [-kProbNegativeSlack, ...] are clamped to zero, anything more negative is
// rejected, and the total must be within kProbSumTol of one.
ProbabilityDistribution make_distribution(const Eigen::VectorXd& raw, std::string source);

// Born-rule outcome distribution of a state measured in an orthonormal basis.
ProbabilityDistribution born_distribution(const PureState& s, const OrthonormalBasis& basis);

// Multinomial counts from `shots` independent draws.
std::vector<long long> sample_counts(const ProbabilityDistribution& dist, long long shots,
                                     std::mt19937_64& rng);

// Counts normalized back to a distribution (clamping and sum check included).
ProbabilityDistribution empirical_distribution(const std::vector<long long>& counts,
                                               std::string source);

// Outcome probabilities <phi|G_l|phi> of a POVM given by its elements.
ProbabilityDistribution povm_outcome_probs(const PureState& s,
                                           const std::vector<Eigen::MatrixXcd>& elements);

// Post-measurement state sqrt(G)|phi> / |sqrt(G)|phi>| for outcome G.
PureState povm_collapse(const PureState& s, const Eigen::MatrixXcd& g, double tol = 1e-12);

} // namespace qpr

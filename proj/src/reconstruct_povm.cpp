#include "qpr/reconstruct_povm.hpp"

#include "qpr/angles.hpp"
#include "qpr/bases.hpp"
#include "qpr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <stdexcept>

namespace qpr {

namespace {

inline constexpr double kAmpProductTol = 1e-12;

std::vector<int> sorted_support(const std::vector<int>& support, int d) {
    if (support.empty()) throw EmptySupportError{};
    std::vector<int> sorted = support;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.front() < 0 || sorted.back() >= d) {
        throw DimensionMismatchError("find_ordering: support site outside dimension " +
                                     std::to_string(d));
    }
    return sorted;
}

SiteOrdering chain_ordering(const std::vector<int>& sorted, int d) {
    SiteOrdering ordering;
    ordering.requested = OrderingMode::Chain;
    ordering.realized = OrderingMode::Chain;

    bool even = d % 2 == 0;
    int half = d / 2;
    auto conflicts = [&](int a, int b) { return even && std::abs(a - b) == half; };

    std::deque<int> seq{sorted.front()};
    std::optional<int> deferred;
    auto try_place = [&](int x) {
        if (!conflicts(x, seq.back())) {
            seq.push_back(x);
            return true;
        }
        if (!conflicts(x, seq.front())) {
            seq.push_front(x);
            return true;
        }
        return false;
    };

    for (size_t i = 1; i < sorted.size(); ++i) {
        int x = sorted[i];
        if (!try_place(x)) {
            // A site can conflict with both ends only when they are the same
            // single element: its two potential partners sit a full dimension
            // apart, so they cannot both be present.
            if (seq.size() > 1 || deferred.has_value()) {
                throw std::logic_error("chain ordering: both ends of a multi-site sequence "
                                       "conflict, which should be impossible");
            }
            deferred = x;
            continue;
        }
        if (deferred.has_value()) {
            if (!try_place(*deferred)) {
                throw std::logic_error("chain ordering: deferred site still conflicts after "
                                       "a second site was placed");
            }
            deferred.reset();
        }
    }
    if (deferred.has_value()) {
        throw FailingSetError(seq.front(), *deferred, d);
    }
    ordering.seq.assign(seq.begin(), seq.end());
    return ordering;
}

} // namespace

SiteOrdering find_ordering(const std::vector<int>& support, int d, OrderingMode mode) {
    std::vector<int> sorted = sorted_support(support, d);
    if (mode == OrderingMode::Chain) return chain_ordering(sorted, d);

    bool even = d % 2 == 0;
    int half = d / 2;
    for (int hub : sorted) {
        bool partnered =
            even && std::binary_search(sorted.begin(), sorted.end(), (hub + half) % d);
        if (partnered) continue;
        SiteOrdering ordering;
        ordering.requested = OrderingMode::Star;
        ordering.realized = OrderingMode::Star;
        ordering.seq.push_back(hub);
        for (int site : sorted) {
            if (site != hub) ordering.seq.push_back(site);
        }
        return ordering;
    }
    // Every site's half-dimension partner is present, so no hub can couple to
    // all spokes; a chain still works whenever the support has more than two
    // sites.
    SiteOrdering ordering = chain_ordering(sorted, d);
    ordering.requested = OrderingMode::Star;
    return ordering;
}

PovmSpec build_chain_povm(const SiteOrdering& ordering, int d) {
    PovmSpec spec;
    spec.ordering = ordering;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (size_t l = 0; l + 1 < ordering.seq.size(); ++l) {
        int m1 = ordering.seq[l];
        int m2 = ordering.seq[l + 1];
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
        g(m1, m1) = 0.5;
        g(m2, m2) = 0.5;
        acc += g;
        spec.elements.push_back(std::move(g));
        spec.pairs.emplace_back(m1, m2);
    }
    spec.elements.push_back(Eigen::MatrixXcd::Identity(d, d) - acc);
    return spec;
}

PovmSpec build_star_povm(const SiteOrdering& ordering, int d) {
    PovmSpec spec;
    spec.ordering = ordering;
    int j = static_cast<int>(ordering.seq.size());
    double weight = 1.0 / j;
    int hub = ordering.seq.front();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (int l = 1; l < j; ++l) {
        int spoke = ordering.seq[l];
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
        g(hub, hub) = weight;
        g(spoke, spoke) = weight;
        acc += g;
        spec.elements.push_back(std::move(g));
        spec.pairs.emplace_back(hub, spoke);
    }
    spec.elements.push_back(Eigen::MatrixXcd::Identity(d, d) - acc);
    return spec;
}

PovmSpec build_povm(const SiteOrdering& ordering, int d) {
    return ordering.realized == OrderingMode::Star ? build_star_povm(ordering, d)
                                                   : build_chain_povm(ordering, d);
}

double phase_difference_from_fourier(double a1, double a2, int l1, int l2, double p0, double p1,
                                     int d, double norm_tol) {
    if (l1 < 0 || l2 < 0 || l1 >= d || l2 >= d || l1 == l2) {
        throw DimensionMismatchError("phase_difference_from_fourier: invalid site pair");
    }
    double prod = 2.0 * a1 * a2;
    if (prod <= kAmpProductTol) {
        throw SingularSystemError("amplitude product vanishes; relative phase is undefined");
    }
    double beta = kTwoPi * (l2 - l1) / d;
    double sin_beta = std::sin(beta);
    if (std::abs(sin_beta) < kSinBetaTol) {
        throw SingularSystemError("sites " + std::to_string(l1) + " and " + std::to_string(l2) +
                                  " are separated by half the dimension; the first two Fourier "
                                  "outcomes do not determine the phase");
    }
    double cos_delta = (d * p0 - 1.0) / prod;
    double sin_delta = ((d * p1 - 1.0) / prod - cos_delta * std::cos(beta)) / sin_beta;
    double radius = std::hypot(cos_delta, sin_delta);
    if (std::abs(radius - 1.0) > norm_tol) {
        throw InconsistentProbabilitiesError("recovered phase components have magnitude " +
                                             std::to_string(radius) + ", expected 1");
    }
    return wrap_angle(std::atan2(sin_delta, cos_delta));
}

PhaseEstimate pauli_fallback(double x_expect, double y_expect, double a1, double a2) {
    if (a1 * a2 <= kAmpProductTol) return {0.0, false};
    return {wrap_angle(std::atan2(y_expect, x_expect)), true};
}

ProbabilityDistribution ExactStateOracle::fourier_after_collapse(const PovmSpec& povm, int l) {
    PureState post = povm_collapse(state_, povm.elements.at(static_cast<size_t>(l)));
    return born_distribution(post, fourier_basis(state_.dim()));
}

PauliXY ExactStateOracle::pauli_xy(int site_low, int site_high) {
    std::complex<double> cross = std::conj(state_.amps(site_low)) * state_.amps(site_high);
    return {2.0 * cross.real(), 2.0 * cross.imag()};
}

ProbabilityDistribution SampledStateOracle::fourier_after_collapse(const PovmSpec& povm, int l) {
    PureState post = povm_collapse(state_, povm.elements.at(static_cast<size_t>(l)));
    ProbabilityDistribution exact = born_distribution(post, fourier_basis(state_.dim()));
    std::vector<long long> counts = sample_counts(exact, shots_, rng_);
    return empirical_distribution(counts, "sampled:fourier");
}

PauliXY SampledStateOracle::pauli_xy(int site_low, int site_high) {
    std::complex<double> phi1 = state_.amps(site_low);
    std::complex<double> phi2 = state_.amps(site_high);
    const std::complex<double> i_unit(0.0, 1.0);

    auto estimate = [&](std::complex<double> plus_amp, std::complex<double> minus_amp,
                        const char* source) {
        Eigen::VectorXd raw(3);
        raw(0) = 0.5 * std::norm(plus_amp);
        raw(1) = 0.5 * std::norm(minus_amp);
        raw(2) = 1.0 - raw(0) - raw(1);
        ProbabilityDistribution dist = make_distribution(raw, source);
        std::vector<long long> counts = sample_counts(dist, shots_, rng_);
        return static_cast<double>(counts[0] - counts[1]) / static_cast<double>(shots_);
    };

    double x = estimate(phi1 + phi2, phi1 - phi2, "sampled:pauli-x");
    double y = estimate(phi1 - i_unit * phi2, phi1 + i_unit * phi2, "sampled:pauli-y");
    return {x, y};
}

PovmReconstruction reconstruct_via_povm(const ProbabilityDistribution& position,
                                        MeasurementOracle& oracle, int d, OrderingMode mode,
                                        double support_tol, double norm_tol) {
    if (position.size() != d) {
        throw DimensionMismatchError("reconstruct_via_povm: distribution size " +
                                     std::to_string(position.size()) +
                                     " does not match dimension " + std::to_string(d));
    }
    Eigen::VectorXd a = position.probs.cwiseSqrt();
    std::vector<int> support;
    for (int k = 0; k < d; ++k) {
        if (a(k) > support_tol) support.push_back(k);
    }
    if (support.empty()) throw EmptySupportError{};

    try {
        SiteOrdering ordering = find_ordering(support, d, mode);
        PovmSpec povm = build_povm(ordering, d);
        std::vector<double> theta(d, 0.0);
        for (size_t l = 0; l < povm.pairs.size(); ++l) {
            auto [m1, m2] = povm.pairs[l];
            ProbabilityDistribution fourier =
                oracle.fourier_after_collapse(povm, static_cast<int>(l));
            double r = std::hypot(a(m1), a(m2));
            double delta = phase_difference_from_fourier(a(m1) / r, a(m2) / r, m1, m2,
                                                         fourier.probs(0), fourier.probs(1), d,
                                                         norm_tol);
            theta[m2] = wrap_angle(theta[m1] + delta);
        }
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        for (int site : support) v(site) = std::polar(a(site), theta[site]);
        // The ordering may start anywhere; shift the reference so the
        // smallest support site carries phase zero.
        return {canonical(normalize(v), support_tol), "normal", std::move(povm)};
    } catch (const FailingSetError& f) {
        PauliXY expect = oracle.pauli_xy(f.site_low, f.site_high);
        PhaseEstimate est = pauli_fallback(expect.x, expect.y, a(f.site_low), a(f.site_high));
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(f.site_low) = a(f.site_low);
        v(f.site_high) = std::polar(a(f.site_high), est.delta);
        return {normalize(v), "fallback", std::nullopt};
    }
}

std::string to_string(OrderingMode mode) {
    return mode == OrderingMode::Star ? "star" : "chain";
}

} // namespace qpr

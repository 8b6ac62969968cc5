#include <doctest.h>

#include "qpr/angles.hpp"
#include "qpr/errors.hpp"
#include "qpr/measurement.hpp"
#include "qpr/oracle.hpp"
#include "qpr/reconstruct_c2.hpp"
#include "qpr/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

using namespace qpr;
using std::complex;

namespace {

struct TwoDists {
    ProbabilityDistribution position;
    ProbabilityDistribution constructed;
};

TwoDists exact_dists(const PureState& s) {
    int d = s.dim();
    return {born_distribution(s, position_basis(d)), born_distribution(s, constructed_basis(d))};
}

} // namespace

TEST_CASE("amplitudes_from_position takes square roots") {
    Eigen::VectorXd raw(2);
    raw << 0.25, 0.75;
    ProbabilityDistribution pos = make_distribution(raw, "position");
    Eigen::VectorXd amps = amplitudes_from_position(pos);
    CHECK(amps(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(amps(1) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("rescale_constructed_probs multiplies by the unnormalized row norms") {
    Eigen::VectorXd raw2(2);
    raw2 << 0.0, 1.0;
    Eigen::VectorXd q2 =
        rescale_constructed_probs(make_distribution(raw2, "constructed"), coeff_sequence(2));
    CHECK(q2(0) == 0.0);
    CHECK(q2(1) == 2.0);

    Eigen::VectorXd raw3(3);
    raw3 << 0.0, 0.0, 1.0;
    Eigen::VectorXd q3 =
        rescale_constructed_probs(make_distribution(raw3, "constructed"), coeff_sequence(3));
    CHECK(q3(0) == 0.0);
    CHECK(q3(1) == 0.0);
    CHECK(q3(2) == 4.0);
}

TEST_CASE("solve_phase_step basic roots") {
    const double s = 1.0 / std::sqrt(2.0);
    SUBCASE("tangent case gives one root") {
        auto roots = solve_phase_step(s, 0.0, 1.0, s, 0.0, kReconstructTol);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("generic case gives two roots") {
        auto roots = solve_phase_step(s, 0.0, 1.0, s, 1.0, kReconstructTol);
        REQUIRE(roots.size() == 2);
        std::sort(roots.begin(), roots.end());
        CHECK(roots[0] == doctest::Approx(kTwoPi / 4).epsilon(1e-12));
        CHECK(roots[1] == doctest::Approx(3 * kTwoPi / 4).epsilon(1e-12));
    }
    SUBCASE("opposite tangent gives the single root pi") {
        auto roots = solve_phase_step(s, 0.0, 1.0, s, 2.0, kReconstructTol);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0] == doctest::Approx(kTwoPi / 2).epsilon(1e-12));
    }
}

TEST_CASE("solve_phase_step rejects an unreachable probability") {
    CHECK_THROWS_AS(solve_phase_step(0.5, 0.0, 1.0, 0.5, 10.0, kReconstructTol),
                    InconsistentDistributionsError);
}

TEST_CASE("solve_phase_step reports a vanished running sum") {
    CHECK_THROWS_AS(solve_phase_step(1e-9, 0.0, 1.0, 0.5, 0.3, kReconstructTol), ChainBrokenError);
    try {
        solve_phase_step(0.0, 0.0, 1.0, 0.5, 0.3, kReconstructTol);
        FAIL("expected ChainBrokenError");
    } catch (const ChainBrokenError& e) {
        CHECK(e.index == -1);
    }
}

TEST_CASE("solve_phase_step roots are symmetric about the running-sum phase") {
    std::mt19937_64 rng = trial_rng(314, 0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double sum_mag = 0.2 + uni(rng);
        double sum_phase = uni(rng) * kTwoPi;
        double t = 0.2 + uni(rng);
        double theta = uni(rng) * kTwoPi;
        double q = sum_mag * sum_mag + t * t - 2.0 * sum_mag * t * std::cos(theta - sum_phase);
        auto roots = solve_phase_step(sum_mag, sum_phase, 1.0, t, q, kReconstructTol);
        REQUIRE(!roots.empty());
        bool hit = false;
        for (double r : roots) {
            CHECK(r >= 0.0);
            CHECK(r < kTwoPi);
            if (angle_distance(r, theta) < 1e-7) hit = true;
        }
        CHECK(hit);
        if (roots.size() == 2) {
            double up = wrap_angle(roots[0] - sum_phase);
            double down = wrap_angle(roots[1] - sum_phase);
            CHECK(angle_distance(up, -down) < 1e-9);
        }
    }
}

TEST_CASE("enumeration on a qubit with a quarter-turn phase finds both sign choices") {
    Eigen::VectorXcd v(2);
    v << 1.0, complex<double>(0.0, 1.0);
    PureState truth = normalize(v);
    TwoDists dists = exact_dists(truth);
    EnumerationResult res =
        enumerate_candidates(dists.position, dists.constructed, coeff_sequence(2));
    REQUIRE(res.candidates.size() == 2);
    CHECK(!res.failure.has_value());
    CHECK(res.degenerate_steps == 0);

    Eigen::VectorXcd w(2);
    w << 1.0, complex<double>(0.0, -1.0);
    PureState mirror = normalize(w);
    double f0 = std::max(fidelity(res.candidates[0], truth), fidelity(res.candidates[0], mirror));
    double f1 = std::max(fidelity(res.candidates[1], truth), fidelity(res.candidates[1], mirror));
    CHECK(f0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(res.candidates[0], res.candidates[1]) < 0.999);
}

TEST_CASE("enumeration on a basis state returns that state alone") {
    PureState truth = basis_state(4, 3);
    TwoDists dists = exact_dists(truth);
    EnumerationResult res =
        enumerate_candidates(dists.position, dists.constructed, coeff_sequence(4));
    REQUIRE(res.candidates.size() == 1);
    CHECK(fidelity(res.candidates[0], truth) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.support == std::vector<int>{3});
}

TEST_CASE("a coincident root pair is counted as a degenerate step") {
    Eigen::VectorXcd v(2);
    v << 1.0, 1.0;
    PureState truth = normalize(v);
    TwoDists dists = exact_dists(truth);
    EnumerationResult res =
        enumerate_candidates(dists.position, dists.constructed, coeff_sequence(2));
    CHECK(res.candidates.size() == 1);
    CHECK(res.degenerate_steps == 1);
    CHECK(fidelity(res.candidates[0], truth) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumeration candidates arrive sorted by their phase tuples") {
    std::mt19937_64 rng = trial_rng(2718, 4);
    PureState truth = haar_random(5, rng);
    TwoDists dists = exact_dists(truth);
    EnumerationResult res =
        enumerate_candidates(dists.position, dists.constructed, coeff_sequence(5));
    REQUIRE(res.candidates.size() >= 2);

    auto phase_tuple = [&](const PureState& s) {
        std::vector<double> thetas;
        int k0 = res.support.front();
        for (size_t l = 1; l < res.support.size(); ++l)
            thetas.push_back(wrap_angle(std::arg(s.amps(res.support[l])) -
                                        std::arg(s.amps(k0))));
        return thetas;
    };
    for (size_t i = 0; i + 1 < res.candidates.size(); ++i) {
        CHECK(phase_tuple(res.candidates[i]) <= phase_tuple(res.candidates[i + 1]));
    }
}

TEST_CASE("every enumerated candidate reproduces both distributions") {
    for (int trial = 0; trial < 200; ++trial) {
        std::mt19937_64 rng = trial_rng(424242, trial);
        PureState truth = haar_random(3, rng);
        TwoDists dists = exact_dists(truth);
        EnumerationResult res =
            enumerate_candidates(dists.position, dists.constructed, coeff_sequence(3));
        CHECK(res.candidates.size() <= 4);
        CHECK(!res.candidates.empty());
        bool found_truth = false;
        for (const PureState& c : res.candidates) {
            CHECK(verify_candidate(c, dists.position, dists.constructed, 1e-8));
            if (fidelity(c, truth) >= 1.0 - 1e-9) found_truth = true;
        }
        CHECK(found_truth);
    }
}

TEST_CASE("candidate count never exceeds two to the support size minus one") {
    for (int d : {2, 4, 6}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::mt19937_64 rng = trial_rng(515151 + d, trial);
            PureState truth = haar_random(d, rng);
            TwoDists dists = exact_dists(truth);
            EnumerationResult res =
                enumerate_candidates(dists.position, dists.constructed, coeff_sequence(d));
            int j = static_cast<int>(res.support.size());
            CHECK(static_cast<int>(res.candidates.size()) <= (1 << (j - 1)));
        }
    }
}

TEST_CASE("enumeration rejects distributions no state can produce") {
    Eigen::VectorXd p(2), c(2);
    p << 0.98, 0.02;
    c << 0.9, 0.1;
    CHECK_THROWS_AS(enumerate_candidates(make_distribution(p, "position"),
                                         make_distribution(c, "constructed"), coeff_sequence(2)),
                    InconsistentDistributionsError);
}

TEST_CASE("enumeration reports the row where an alternating state breaks the chain") {
    Eigen::VectorXcd v(3);
    v << 1.0, -1.0, 1.0;
    PureState truth = normalize(v);
    TwoDists dists = exact_dists(truth);
    EnumerationResult res =
        enumerate_candidates(dists.position, dists.constructed, coeff_sequence(3));
    CHECK(res.candidates.empty());
    REQUIRE(res.failure.has_value());
    CHECK(res.failure->index == 1);
    CHECK(res.failure->magnitude < 1e-8);

    C2Reconstruction rec = reconstruct_via_c2(dists.position, dists.constructed);
    CHECK(rec.candidates.empty());
    REQUIRE(rec.failure.has_value());
    CHECK(rec.failure->index == 1);
}

TEST_CASE("support size beyond the cap is rejected unless forced") {
    const int d = kEnumerateSiteCap + 1;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(d);
    PureState truth = normalize(v);
    TwoDists dists = exact_dists(truth);
    CHECK_THROWS_AS(
        enumerate_candidates(dists.position, dists.constructed, coeff_sequence(d)),
        DimensionCapError);
}

TEST_CASE("max_distribution_deviation is zero for the generating state") {
    std::mt19937_64 rng = trial_rng(777, 3);
    PureState truth = haar_random(4, rng);
    TwoDists dists = exact_dists(truth);
    CHECK(max_distribution_deviation(truth, dists.position, dists.constructed) < 1e-14);
}

TEST_CASE("prune_candidates keeps exactly the states that reproduce the data") {
    std::mt19937_64 rng = trial_rng(888, 0);
    PureState truth = haar_random(3, rng);
    TwoDists dists = exact_dists(truth);

    PureState off = truth;
    off.amps(2) *= std::polar(1.0, 0.1);
    std::vector<PureState> mixed{truth, off};
    std::vector<PureState> kept = prune_candidates(mixed, dists.position, dists.constructed, 1e-6);
    REQUIRE(kept.size() == 1);
    CHECK(fidelity(kept[0], truth) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruct_via_c2 reports raw and pruned candidate counts") {
    Eigen::VectorXcd v(2);
    v << 1.0, complex<double>(0.0, 1.0);
    PureState truth = normalize(v);
    TwoDists dists = exact_dists(truth);
    C2Reconstruction rec = reconstruct_via_c2(dists.position, dists.constructed);
    CHECK(rec.raw_candidate_count == 2);
    CHECK(rec.candidates.size() == 2);
    CHECK(rec.pruned);

    C2Reconstruction raw = reconstruct_via_c2(dists.position, dists.constructed, kReconstructTol,
                                              kSupportTol, false, false);
    CHECK_FALSE(raw.pruned);
    CHECK(raw.candidates.size() == 2);
}

TEST_CASE("alternating-sign state is flagged as unreconstructible") {
    Eigen::VectorXcd v(3);
    v << 1.0, -1.0, 1.0;
    PureState s = normalize(v);
    MeasureZeroReport report = in_measure_zero_set(s, coeff_sequence(3));
    CHECK(report.in_set);
    CHECK(report.failing_index == 1);
    CHECK(report.margin < 1e-12);
}

TEST_CASE("flat three-level state has the expected safety margin") {
    Eigen::VectorXcd v(3);
    v << 1.0, 1.0, 1.0;
    PureState s = normalize(v);
    MeasureZeroReport report = in_measure_zero_set(s, coeff_sequence(3));
    CHECK_FALSE(report.in_set);
    CHECK(report.failing_index == 1);
    CHECK(report.margin == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("states with fewer than three support sites are never flagged") {
    MeasureZeroReport one = in_measure_zero_set(basis_state(4, 2), coeff_sequence(4));
    CHECK_FALSE(one.in_set);
    CHECK(one.failing_index == -1);
    CHECK(std::isinf(one.margin));

    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(0) = 1.0;
    v(1) = -1.0;
    MeasureZeroReport two = in_measure_zero_set(normalize(v), coeff_sequence(4));
    CHECK_FALSE(two.in_set);
    CHECK(std::isinf(two.margin));
}

TEST_CASE("flagged states are exactly the ones the enumeration fails on") {
    for (int trial = 0; trial < 100; ++trial) {
        std::mt19937_64 rng = trial_rng(606060, trial);
        PureState truth = haar_random(4, rng);
        MeasureZeroReport report = in_measure_zero_set(truth, coeff_sequence(4), 1e-8);
        TwoDists dists = exact_dists(truth);
        EnumerationResult res =
            enumerate_candidates(dists.position, dists.constructed, coeff_sequence(4));
        CHECK(report.in_set == res.failure.has_value());
    }
}

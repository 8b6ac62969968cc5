#include <doctest.h>

#include "qpr/angles.hpp"
#include "qpr/errors.hpp"
#include "qpr/statespace.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace qpr;
using std::complex;

namespace {

PureState make_state(std::initializer_list<complex<double>> amps) {
    Eigen::VectorXcd v(static_cast<int>(amps.size()));
    int i = 0;
    for (auto a : amps) v(i++) = a;
    return PureState{v};
}

} // namespace

TEST_CASE("normalize scales to unit norm") {
    Eigen::VectorXcd v(2);
    v << complex<double>(3.0, 0.0), complex<double>(0.0, 4.0);
    PureState s = normalize(v);
    CHECK(s.amps(0).real() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s.amps(0).imag() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.amps(1).real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.amps(1).imag() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s.amps.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize is idempotent") {
    Eigen::VectorXcd v(3);
    v << complex<double>(1.0, 2.0), complex<double>(-0.5, 0.0), complex<double>(0.0, 3.0);
    PureState once = normalize(v);
    PureState twice = normalize(once.amps);
    CHECK((once.amps - twice.amps).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-16));
}

TEST_CASE("normalize rejects the zero vector") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    CHECK_THROWS_AS(normalize(v), ZeroVectorError);
}

TEST_CASE("support_of finds the sites above tolerance") {
    PureState s = make_state({0.8, 0.0, 0.6});
    Support supp = support_of(s);
    REQUIRE(supp.size() == 2);
    CHECK(supp.sites[0] == 0);
    CHECK(supp.sites[1] == 2);
    CHECK(supp.contains(0));
    CHECK_FALSE(supp.contains(1));
    CHECK(supp.contains(2));
}

TEST_CASE("support_of respects the tolerance argument") {
    PureState s = make_state({1.0, 1e-7, 1e-12});
    CHECK(support_of(s, 1e-9).size() == 2);
    CHECK(support_of(s, 1e-6).size() == 1);
}

TEST_CASE("support_of rejects an all-zero state") {
    PureState s = make_state({1e-12, 1e-13});
    CHECK_THROWS_AS(support_of(s), EmptySupportError);
}

TEST_CASE("fidelity is one for a state with itself") {
    std::mt19937_64 rng(11);
    for (int d : {2, 3, 7}) {
        PureState s = haar_random(d, rng);
        CHECK(fidelity(s, s) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("fidelity ignores global phase") {
    std::mt19937_64 rng(12);
    PureState s = haar_random(5, rng);
    PureState rotated{s.amps * std::polar(1.0, 1.234)};
    CHECK(fidelity(s, rotated) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("fidelity vanishes for orthogonal states") {
    CHECK(fidelity(basis_state(4, 1), basis_state(4, 3)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("fidelity is symmetric and never exceeds one") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        PureState a = haar_random(6, rng);
        PureState b = haar_random(6, rng);
        double f = fidelity(a, b);
        CHECK(f == doctest::Approx(fidelity(b, a)).epsilon(1e-15));
        CHECK(f <= 1.0);
        CHECK(f >= 0.0);
    }
    PureState s = haar_random(6, rng);
    CHECK(fidelity(s, s) <= 1.0);
}

TEST_CASE("fidelity rejects dimension mismatch") {
    CHECK_THROWS_AS(fidelity(basis_state(2, 0), basis_state(3, 0)), DimensionMismatchError);
}

TEST_CASE("haar_random yields unit-norm states of the right dimension") {
    std::mt19937_64 rng(21);
    for (int d : {2, 5, 16}) {
        PureState s = haar_random(d, rng);
        CHECK(s.dim() == d);
        CHECK(s.amps.norm() == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("haar_random is reproducible from the seed") {
    std::mt19937_64 a(99), b(99);
    PureState sa = haar_random(8, a);
    PureState sb = haar_random(8, b);
    CHECK((sa.amps - sb.amps).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("haar_random site occupations are uniform on average") {
    std::mt19937_64 rng(31);
    const int d = 4;
    const int trials = 100000;
    double mean0 = 0.0;
    for (int t = 0; t < trials; ++t) {
        PureState s = haar_random(d, rng);
        mean0 += std::norm(s.amps(0));
    }
    mean0 /= trials;
    CHECK(mean0 == doctest::Approx(1.0 / d).epsilon(0.04));
}

TEST_CASE("haar_random states have full support in practice") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 1000; ++t) {
        PureState s = haar_random(3, rng);
        CHECK(support_of(s).size() == 3);
    }
}

TEST_CASE("canonical makes the first supported amplitude real positive") {
    PureState s = make_state({0.0, complex<double>(0.0, 0.6), complex<double>(0.48, 0.64)});
    PureState c = canonical(s);
    CHECK(std::abs(c.amps(1).imag()) < 1e-15);
    CHECK(c.amps(1).real() > 0.0);
    CHECK(fidelity(normalize(s.amps), normalize(c.amps)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("canonical collapses global-phase orbits to one representative") {
    std::mt19937_64 rng(51);
    PureState s = haar_random(5, rng);
    PureState rotated{s.amps * std::polar(1.0, -2.5)};
    PureState ca = canonical(s);
    PureState cb = canonical(rotated);
    CHECK((ca.amps - cb.amps).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("basis_state is a unit vector at the requested site") {
    PureState s = basis_state(5, 3);
    CHECK(s.dim() == 5);
    CHECK(s.amps(3) == complex<double>(1.0, 0.0));
    CHECK(s.amps.norm() == 1.0);
    CHECK_THROWS_AS(basis_state(3, 3), DimensionMismatchError);
    CHECK_THROWS_AS(basis_state(3, -1), DimensionMismatchError);
    CHECK_THROWS_AS(basis_state(0, 0), DimensionMismatchError);
}

TEST_CASE("wrap_angle maps into the principal interval") {
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(kTwoPi + 0.25) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(wrap_angle(-0.25) == doctest::Approx(kTwoPi - 0.25).epsilon(1e-14));
    CHECK(wrap_angle(5.0 * kTwoPi) == doctest::Approx(0.0).epsilon(1e-12));
    for (double x : {-10.0, -1.0, 0.0, 3.0, 17.5}) {
        double w = wrap_angle(x);
        CHECK(w >= 0.0);
        CHECK(w < kTwoPi);
    }
}

TEST_CASE("angle_distance is the shorter arc") {
    CHECK(angle_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(angle_distance(1.0, 1.0) == doctest::Approx(0.0));
    CHECK(angle_distance(0.0, 3.14) == doctest::Approx(3.14).epsilon(1e-13));
}

#include "qpr/bases.hpp"

#include "qpr/angles.hpp"
#include "qpr/errors.hpp"

#include <cmath>
#include <complex>

namespace qpr {

CoeffSequence coeff_sequence(int d) {
    if (d < 2) throw DimensionMismatchError("coeff_sequence: dimension must be at least 2");
    CoeffSequence cs;
    cs.d = d;
    cs.Asq.resize(d + 1);
    cs.Asq[0] = 1.0;
    cs.Asq[1] = 1.0;
    double running = 2.0; // Asq[0] + Asq[1]
    for (int k = 2; k <= d; ++k) {
        cs.Asq[k] = running;
        running += cs.Asq[k];
    }
    cs.A.resize(d + 1);
    for (int k = 0; k <= d; ++k) cs.A[k] = std::sqrt(cs.Asq[k]);
    return cs;
}

OrthonormalBasis position_basis(int d) {
    if (d < 1) throw DimensionMismatchError("position_basis: dimension must be positive");
    return OrthonormalBasis{BasisKind::Position, Eigen::MatrixXcd::Identity(d, d)};
}

namespace {

std::complex<double> unit_phase(int num, int d) {
    int r = num % d;
    if (r < 0) r += d;
    // Exact values on the axes keep small-d bases bitwise reproducible.
    if (4 * r % d == 0) {
        switch (4 * r / d) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            case 3: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, kTwoPi * r / d);
}

} // namespace

OrthonormalBasis fourier_basis(int d) {
    if (d < 1) throw DimensionMismatchError("fourier_basis: dimension must be positive");
    Eigen::MatrixXcd m(d, d);
    double root = std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < d; ++j) {
            // k*j stays well inside int range for any reasonable d, but the
            // phase only depends on k*j mod d, so reduce factor-wise anyway.
            int r = static_cast<int>((static_cast<long long>(k) * j) % d);
            m(k, j) = unit_phase(r, d) / root;
        }
    }
    return OrthonormalBasis{BasisKind::Fourier, m};
}

OrthonormalBasis constructed_basis(int d) {
    CoeffSequence cs = coeff_sequence(d);
    std::vector<double> sq = constructed_unnormalized_sq_norms(cs);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int j = 0; j < d - 1; ++j) {
        double norm = std::sqrt(sq[j]);
        for (int i = 0; i <= j; ++i) m(j, i) = cs.A[i] / norm;
        m(j, j + 1) = -cs.A[j + 1] / norm;
    }
    double last = std::sqrt(sq[d - 1]);
    for (int i = 0; i < d; ++i) m(d - 1, i) = cs.A[i] / last;
    return OrthonormalBasis{BasisKind::Constructed, m};
}

std::vector<double> constructed_unnormalized_sq_norms(const CoeffSequence& cs) {
    std::vector<double> sq(cs.d);
    for (int j = 0; j < cs.d - 1; ++j) sq[j] = 2.0 * cs.Asq[j + 1];
    sq[cs.d - 1] = cs.Asq[cs.d];
    return sq;
}

std::string to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::Position: return "position";
        case BasisKind::Fourier: return "fourier";
        case BasisKind::Constructed: return "constructed";
    }
    return "unknown";
}

} // namespace qpr

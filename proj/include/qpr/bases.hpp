#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace qpr {

// Coefficient sequence backing the constructed basis. A has length d+1:
// A[0] = A[1] = 1 and A[k+1]^2 = sum of A[0..k]^2, so A[k]^2 is an exact
// power of two and stays exact in double up to far beyond d = 64.
struct CoeffSequence {
    int d;
    std::vector<double> A;   // magnitudes, size d+1
    std::vector<double> Asq; // exact squared magnitudes, size d+1
};

CoeffSequence coeff_sequence(int d);

enum class BasisKind { Position, Fourier, Constructed };

// Orthonormal basis stored row-wise: row k holds the components of the k-th
// basis vector in the position basis.
struct OrthonormalBasis {
    BasisKind label;
    Eigen::MatrixXcd vectors;

    int dim() const { return static_cast<int>(vectors.rows()); }
};

OrthonormalBasis position_basis(int d);

// Row k has entries exp(2*pi*i*k*j/d)/sqrt(d). Entries at multiples of a
// quarter turn are written as exact {1, i, -1, -i} so the d = 2 basis agrees
// bitwise with constructed_basis(2) up to row order.
OrthonormalBasis fourier_basis(int d);

// Row j < d-1 is (A[0], ..., A[j], -A[j+1], 0, ...) normalized; the last row
// is (A[0], ..., A[d-1]) normalized. All entries are real.
OrthonormalBasis constructed_basis(int d);

// Squared norms of the unnormalized constructed rows: 2*A[j+1]^2 for
// j < d-1 and A[d]^2 for the last row. Exact powers of two.
std::vector<double> constructed_unnormalized_sq_norms(const CoeffSequence& cs);

std::string to_string(BasisKind kind);

} // namespace qpr

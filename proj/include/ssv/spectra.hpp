#pragma once

#include <vector>

#include "ssv/matrix.hpp"

namespace ssv::spectra {

struct SpectrumResult {
    /// s_1 >= ... >= s_n >= 0
    std::vector<double> values;
    int sweeps = 0;
    double residual = 0.0;

    double largest() const { return values.front(); }
    double smallest() const { return values.back(); }
};

/// One-sided Jacobi on the columns of M (N x n, N >= n). Off-diagonal
/// tolerance 1e-12, cap 30 sweeps; throws numerical_failure past the cap.
SpectrumResult singular_values(const Matrix& m);

double smallest_singular(const Matrix& m);
double operator_norm(const Matrix& m);

/// Smallest singular value together with a unit right-singular witness x,
/// so that |M x| = s_n within rounding.
struct SmallestWitness {
    double value;
    std::vector<double> direction;
};
SmallestWitness smallest_singular_witness(const Matrix& m);

/// Independent estimate of the operator norm: power iteration on M^t M.
double operator_norm_power(const Matrix& m, int max_iters = 500, double tol = 1e-12);

/// Euclidean distance from column k to the span of the remaining columns.
/// Householder QR with column pivoting; rank-deficient spans are fine.
double column_distance(const Matrix& m, std::size_t k);

} // namespace ssv::spectra

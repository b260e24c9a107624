#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "distfobs/errors.hpp"

namespace distfobs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Numerical knobs shared across the library.  rank_tol <= 0 selects the
// automatic cutoff eps * max(rows, cols) relative to the largest singular
// value; a positive value replaces that relative factor.
struct ToleranceConfig {
    double rank_tol = 0.0;
    double stability_margin = 1e-9;
    double residual_tol = 1e-8;
};

// Rank by singular-value thresholding.  Empty matrices have rank 0.
int numerical_rank(const Matrix& m, const ToleranceConfig& tol = {});
int numerical_rank(const ComplexMatrix& m, const ToleranceConfig& tol = {});

// Moore-Penrose pseudo-inverse via SVD with the same cutoff as
// numerical_rank.  Shape: transpose of the input.
Matrix pseudo_inverse(const Matrix& m, const ToleranceConfig& tol = {});

// Rows form an orthonormal basis of the (right) null space of m; returned
// as a (cols - rank) x cols matrix.  Each basis row is sign-normalized so
// its first entry of non-negligible magnitude is positive, making the
// result deterministic.
Matrix orthonormal_nullspace_basis(const Matrix& m, const ToleranceConfig& tol = {});

// Eigenvalues of a square matrix, sorted by (real, imag) ascending.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

// Largest |eigenvalue|; 0 for an empty (0x0) matrix.
double spectral_radius(const Matrix& m);

// True iff every eigenvalue has modulus < 1 - stability_margin.
// Vacuously true for 0x0.
bool is_schur_stable(const Matrix& m, const ToleranceConfig& tol = {});

// True iff every row of `rows` lies in the row space of `m`
// (rank([m; rows]) == rank(m)).  Vacuously true when `rows` has no rows.
bool row_space_contains(const Matrix& m, const Matrix& rows,
                        const ToleranceConfig& tol = {});

// Vertical stack helper tolerant of 0-row blocks.
Matrix vstack(const std::vector<Matrix>& blocks);

bool has_finite_entries(const Matrix& m);

}  // namespace distfobs

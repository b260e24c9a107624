#include "distfobs/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace distfobs {

namespace {

template <class Mat>
int rank_from_svd(const Mat& m, const ToleranceConfig& tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double smax = sv(0);
    if (!(smax > 0.0)) return 0;
    const double rel = tol.rank_tol > 0.0
        ? tol.rank_tol
        : std::numeric_limits<double>::epsilon() *
              static_cast<double>(std::max(m.rows(), m.cols()));
    const double cutoff = rel * smax;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

}  // namespace

int numerical_rank(const Matrix& m, const ToleranceConfig& tol) {
    return rank_from_svd(m, tol);
}

int numerical_rank(const ComplexMatrix& m, const ToleranceConfig& tol) {
    return rank_from_svd(m, tol);
}

Matrix pseudo_inverse(const Matrix& m, const ToleranceConfig& tol) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double rel = tol.rank_tol > 0.0
        ? tol.rank_tol
        : std::numeric_limits<double>::epsilon() *
              static_cast<double>(std::max(m.rows(), m.cols()));
    const double cutoff = rel * smax;
    Vector inv = Vector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix orthonormal_nullspace_basis(const Matrix& m, const ToleranceConfig& tol) {
    const Eigen::Index n = m.cols();
    if (m.rows() == 0 || n == 0) {
        // Null space is all of R^n.
        return Matrix::Identity(n, n);
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const int r = numerical_rank(m, tol);
    Matrix basis = svd.matrixV().rightCols(n - r).transpose();
    // Deterministic sign: first entry of appreciable size made positive.
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(basis(i, j)) > 1e-12) {
                if (basis(i, j) < 0) basis.row(i) = -basis.row(i);
                break;
            }
        }
    }
    return basis;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols())
        throw SquareRequired("eigenvalues: matrix must be square");
    std::vector<std::complex<double>> out;
    if (m.rows() == 0) return out;
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw Error("eigenvalues: solver did not converge");
    out.reserve(static_cast<size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out.push_back(es.eigenvalues()(i));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

double spectral_radius(const Matrix& m) {
    double r = 0.0;
    for (const auto& ev : eigenvalues(m)) r = std::max(r, std::abs(ev));
    return r;
}

bool is_schur_stable(const Matrix& m, const ToleranceConfig& tol) {
    if (m.rows() != m.cols())
        throw SquareRequired("is_schur_stable: matrix must be square");
    if (m.rows() == 0) return true;
    return spectral_radius(m) < 1.0 - tol.stability_margin;
}

bool row_space_contains(const Matrix& m, const Matrix& rows,
                        const ToleranceConfig& tol) {
    if (rows.rows() == 0) return true;
    if (m.cols() != rows.cols())
        throw DimensionMismatch("row_space_contains: column counts differ");
    return numerical_rank(vstack({m, rows}), tol) == numerical_rank(m, tol);
}

Matrix vstack(const std::vector<Matrix>& blocks) {
    Eigen::Index cols = 0;
    Eigen::Index rows = 0;
    for (const auto& b : blocks) {
        if (b.rows() == 0) continue;
        if (cols == 0) cols = b.cols();
        else if (b.cols() != cols)
            throw DimensionMismatch("vstack: column counts differ");
        rows += b.rows();
    }
    if (cols == 0 && !blocks.empty()) cols = blocks.front().cols();
    Matrix out(rows, cols);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        if (b.rows() == 0) continue;
        out.middleRows(at, b.rows()) = b;
        at += b.rows();
    }
    return out;
}

bool has_finite_entries(const Matrix& m) {
    return m.allFinite();
}

}  // namespace distfobs

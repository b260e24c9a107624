#include "distfobs/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace distfobs {

namespace {

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_small(const Matrix& residual, double scale_hint,
                   double residual_tol, const char* what) {
    const double scale = std::max(1.0, scale_hint);
    if (max_abs(residual) > residual_tol * scale)
        throw ResidualTooLarge(std::string(what) + ": residual " +
                               std::to_string(max_abs(residual)) +
                               " exceeds tolerance");
}

}  // namespace

FunctionalDecomposition build_functional_decomposition(
    const SystemModel& m, const LeaderSelection& ls,
    const ToleranceConfig& tol) {
    const int n = m.state_dim();
    const int rs = ls.r_star;
    if (ls.Sigma.rows() != rs || ls.Sigma.cols() != n)
        throw DimensionMismatch("build_functional_decomposition: Sigma shape");

    FunctionalDecomposition fd;
    fd.Sigma = ls.Sigma;
    fd.V = orthonormal_nullspace_basis(fd.Sigma, tol);
    fd.T = vstack({fd.Sigma, fd.V});
    if (fd.T.rows() != n)
        throw ResidualTooLarge(
            "build_functional_decomposition: [Sigma; V] is not square — "
            "Sigma is rank deficient");

    Eigen::JacobiSVD<Matrix> tsvd(fd.T);
    const double smin = tsvd.singularValues()(n - 1);
    const double smax = tsvd.singularValues()(0);
    if (!(smin > 0.0))
        throw ResidualTooLarge("build_functional_decomposition: T singular");
    fd.condition_number = smax / smin;
    fd.T_inv = fd.T.fullPivLu().solve(Matrix::Identity(n, n));

    const Matrix Sp = pseudo_inverse(fd.Sigma, tol);
    fd.A_D = fd.Sigma * m.A * Sp;
    fd.C_D = ls.C_star * Sp;

    // Invariance certificates: the reduced state must close exactly.
    const Matrix SA = fd.Sigma * m.A;
    require_small(SA - fd.A_D * fd.Sigma, max_abs(SA), tol.residual_tol,
                  "Sigma A = A_D Sigma");
    require_small(ls.C_star - fd.C_D * fd.Sigma, max_abs(ls.C_star),
                  tol.residual_tol, "C* = C_D Sigma");

    const Matrix W = fd.T * m.A * fd.T_inv;
    require_small(W.topRightCorner(rs, n - rs), max_abs(W), tol.residual_tol,
                  "T A T^-1 block trianglular form");
    fd.A_E = W.bottomLeftCorner(n - rs, rs);
    fd.A_F = W.bottomRightCorner(n - rs, n - rs);

    if (!pbh_detectable(fd.A_D, fd.C_D, tol))
        throw ResidualTooLarge(
            "build_functional_decomposition: reduced pair fails PBH "
            "detectability — leader certificate invalid");
    return fd;
}

StaircaseDecomposition build_staircase(const Matrix& A_D,
                                       const std::vector<Matrix>& C_blocks,
                                       const ToleranceConfig& tol) {
    if (A_D.rows() != A_D.cols())
        throw SquareRequired("build_staircase: A_D must be square");
    const int r = static_cast<int>(A_D.rows());
    const int M = static_cast<int>(C_blocks.size());
    if (M < 1) throw ValidationError("build_staircase: need at least one leader");
    for (const auto& C : C_blocks)
        if (C.rows() > 0 && C.cols() != r)
            throw DimensionMismatch("build_staircase: C block column count");

    StaircaseDecomposition sd;
    // Peel each leader's newly-observable directions off the running
    // residual (so-far-unobservable) subspace.
    Matrix W = Matrix::Identity(r, r);
    std::vector<Matrix> basis_blocks;
    for (int j = 0; j < M; ++j) {
        const int w = static_cast<int>(W.cols());
        if (w == 0) {
            sd.obs_dims.push_back(0);
            basis_blocks.push_back(Matrix::Zero(r, 0));
            continue;
        }
        const Matrix A_res = W.transpose() * A_D * W;
        const Matrix C_res = C_blocks[static_cast<size_t>(j)] * W;
        const Matrix O = observability_matrix(A_res, C_res);
        int o = 0;
        Matrix Vfull;
        if (O.rows() == 0) {
            Vfull = Matrix::Identity(w, w);
        } else {
            Eigen::JacobiSVD<Matrix> svd(O, Eigen::ComputeFullV);
            o = numerical_rank(O, tol);
            Vfull = svd.matrixV();
            for (Eigen::Index c = 0; c < Vfull.cols(); ++c) {
                for (Eigen::Index rr = 0; rr < Vfull.rows(); ++rr) {
                    if (std::abs(Vfull(rr, c)) > 1e-12) {
                        if (Vfull(rr, c) < 0) Vfull.col(c) = -Vfull.col(c);
                        break;
                    }
                }
            }
        }
        sd.obs_dims.push_back(o);
        basis_blocks.push_back(W * Vfull.leftCols(o));
        W = W * Vfull.rightCols(w - o);
    }
    sd.unobs_dim = static_cast<int>(W.cols());

    sd.T_D = Matrix(r, r);
    sd.offsets.assign(static_cast<size_t>(M + 1), 0);
    int at = 0;
    for (int j = 0; j < M; ++j) {
        sd.offsets[static_cast<size_t>(j)] = at;
        sd.T_D.middleCols(at, sd.obs_dims[static_cast<size_t>(j)]) =
            basis_blocks[static_cast<size_t>(j)];
        at += sd.obs_dims[static_cast<size_t>(j)];
    }
    sd.offsets[static_cast<size_t>(M)] = at;
    sd.T_D.rightCols(sd.unobs_dim) = W;

    // T_D is orthogonal, so the transform and the structural-zero check are
    // numerically benign.
    Matrix Abar = sd.T_D.transpose() * A_D * sd.T_D;
    const double ascale = std::max(1.0, max_abs(Abar));
    auto block_of = [&](int col) {  // block index (0..M) containing column
        for (int j = 0; j < M; ++j)
            if (col < sd.offsets[static_cast<size_t>(j + 1)]) return j;
        return M;
    };
    for (int i = 0; i < r; ++i) {
        const int bi = block_of(i);
        for (int c = 0; c < r; ++c) {
            if (block_of(c) <= bi) continue;
            if (std::abs(Abar(i, c)) > tol.residual_tol * ascale)
                throw ResidualTooLarge(
                    "build_staircase: A_D upper block residual too large");
            Abar(i, c) = 0.0;
        }
    }
    sd.A_bar = std::move(Abar);

    for (int j = 0; j < M; ++j) {
        Matrix Cb = C_blocks[static_cast<size_t>(j)] * sd.T_D;
        const double cscale = std::max(1.0, max_abs(Cb));
        const int limit = sd.offsets[static_cast<size_t>(j + 1)];
        for (Eigen::Index i = 0; i < Cb.rows(); ++i)
            for (int c = limit; c < r; ++c) {
                if (std::abs(Cb(i, c)) > tol.residual_tol * cscale)
                    throw ResidualTooLarge(
                        "build_staircase: measurement rows reach past own "
                        "sub-state");
                Cb(i, c) = 0.0;
            }
        sd.C_bar.push_back(std::move(Cb));
    }
    return sd;
}

StaircaseDecomposition build_staircase(const FunctionalDecomposition& fd,
                                       const LeaderSelection& ls,
                                       const ToleranceConfig& tol) {
    std::vector<Matrix> C_blocks;
    int at = 0;
    for (int t : ls.rows_per_leader()) {
        C_blocks.push_back(fd.C_D.middleRows(at, t));
        at += t;
    }
    return build_staircase(fd.A_D, C_blocks, tol);
}

Matrix StaircaseDecomposition::A_block(int i, int j) const {
    const int M = sensor_count();
    if (i < 1 || i > M || j < 1 || j > M)
        throw InvalidNode("StaircaseDecomposition::A_block: index");
    return A_bar.block(offsets[static_cast<size_t>(i - 1)],
                       offsets[static_cast<size_t>(j - 1)],
                       obs_dims[static_cast<size_t>(i - 1)],
                       obs_dims[static_cast<size_t>(j - 1)]);
}

Matrix StaircaseDecomposition::C_block(int i, int j) const {
    const int M = sensor_count();
    if (i < 1 || i > M || j < 1 || j > M)
        throw InvalidNode("StaircaseDecomposition::C_block: index");
    return C_bar[static_cast<size_t>(i - 1)].middleCols(
        offsets[static_cast<size_t>(j - 1)],
        obs_dims[static_cast<size_t>(j - 1)]);
}

Matrix StaircaseDecomposition::A_unobservable() const {
    const int u = unobs_dim;
    return A_bar.bottomRightCorner(u, u);
}

Matrix StaircaseDecomposition::bottom_coupling(int j) const {
    const int M = sensor_count();
    if (j < 1 || j > M)
        throw InvalidNode("StaircaseDecomposition::bottom_coupling: index");
    return A_bar.block(offsets[static_cast<size_t>(M)],
                       offsets[static_cast<size_t>(j - 1)], unobs_dim,
                       obs_dims[static_cast<size_t>(j - 1)]);
}

Matrix StaircaseDecomposition::unobs_row_coupling() const {
    const int M = sensor_count();
    return A_bar.block(offsets[static_cast<size_t>(M)], 0, unobs_dim,
                       offsets[static_cast<size_t>(M)]);
}

std::vector<Vector> reduced_measurements(const SystemModel& m,
                                         const LeaderSelection& ls,
                                         const Vector& x) {
    if (x.size() != m.state_dim())
        throw DimensionMismatch("reduced_measurements: state length");
    std::vector<Vector> out;
    int at = 0;
    for (int t : ls.rows_per_leader()) {
        out.push_back(ls.C_star.middleRows(at, t) * x);
        at += t;
    }
    return out;
}

}  // namespace distfobs

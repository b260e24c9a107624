#pragma once

#include "distfobs/leaderselect.hpp"
#include "distfobs/sysmodel.hpp"

namespace distfobs {

// Stage one: restrict the plant to the subspace spanned by Sigma = [L; C~*].
// In coordinates T = [Sigma; V] (V an orthonormal null-space basis) the
// plant becomes block lower triangular with the reduced pair (A_D, C_D) on
// top, so phi = Sigma x evolves autonomously: phi' = A_D phi, with the
// selected measurements reading C_D phi.
struct FunctionalDecomposition {
    Matrix Sigma;   // r* x n
    Matrix V;       // (n - r*) x n
    Matrix T;       // [Sigma; V]
    Matrix T_inv;
    Matrix A_D;     // r* x r*
    Matrix C_D;     // q x r*   (q = selected rows)
    Matrix A_E;     // (n - r*) x r*
    Matrix A_F;     // (n - r*) x (n - r*)
    double condition_number = 0.0;  // of T
};

FunctionalDecomposition build_functional_decomposition(
    const SystemModel& m, const LeaderSelection& ls,
    const ToleranceConfig& tol = {});

// Stage two: sequential observability staircase of (A_D, {C_D blocks}) —
// one measurement block per leader, processed in leader order.  Sub-state j
// is the part of the remaining unobservable subspace exposed by leader j's
// rows; the tail block is unobservable to every leader.  T_D is orthogonal,
// and in its coordinates A_D and the measurement rows are block lower
// triangular:
//
//   z' = [A_11            ] z      y_j = [C_j1 .. C_jj 0 ..] z
//        [A_21 A_22       ]
//        [ ...        A_U ]
struct StaircaseDecomposition {
    Matrix T_D;                  // r* x r*, orthogonal (T_D^{-1} = T_D^T)
    Matrix A_bar;                // T_D^T A_D T_D with structural zeros applied
    std::vector<Matrix> C_bar;   // per leader: t_j x r*, zeros right of block j
    std::vector<int> obs_dims;   // o_j, may be 0
    int unobs_dim = 0;           // u
    std::vector<int> offsets;    // offsets[j-1] = start of sub-state j; [M] = U

    int order() const { return static_cast<int>(A_bar.rows()); }
    int sensor_count() const { return static_cast<int>(obs_dims.size()); }

    Matrix A_block(int i, int j) const;        // A_ij, 1-based, j <= i
    Matrix C_block(int i, int j) const;        // C_ij, 1-based, j <= i
    Matrix A_unobservable() const;             // A_U
    Matrix bottom_coupling(int j) const;       // A_j: U row, sub-state j col
    Matrix unobs_row_coupling() const;         // [A_1 .. A_M] stacked wide
};

// C_blocks: one entry per leader, rows of C_D grouped by leader.
StaircaseDecomposition build_staircase(const Matrix& A_D,
                                       const std::vector<Matrix>& C_blocks,
                                       const ToleranceConfig& tol = {});

// Convenience: run stage two on a stage-one result, splitting C_D by the
// selection's per-leader row counts.
StaircaseDecomposition build_staircase(const FunctionalDecomposition& fd,
                                       const LeaderSelection& ls,
                                       const ToleranceConfig& tol = {});

// Reduced measurements y-bar_i = C*_i x for each leader, in leader order.
std::vector<Vector> reduced_measurements(const SystemModel& m,
                                         const LeaderSelection& ls,
                                         const Vector& x);

}  // namespace distfobs

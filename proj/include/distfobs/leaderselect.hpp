#pragma once

#include <climits>
#include <optional>
#include <set>
#include <vector>

#include "distfobs/sysmodel.hpp"

namespace distfobs {

// Outcome of testing one (node set, row selection) candidate.  `feasible`
// requires both the row-space invariance condition and detectability of the
// induced reduced pair.
struct FeasibilityCertificate {
    std::set<int> node_set;
    RowSelection selection;
    int sigma_rank = 0;              // rank of [L; C-bar]
    bool rank_condition = false;     // row-space invariance holds
    bool detectability_condition = false;
    bool feasible() const { return rank_condition && detectability_condition; }
};

struct MinimalLeaderSet {
    std::set<int> nodes;
    RowSelection selection;   // the best (lowest-order) selection found
    int order = 0;            // rank of [L; C-bar] for that selection
};

struct EnumerationCaps {
    int max_set_size = INT_MAX;
    int max_total_rows = INT_MAX;
};

// The chosen functional leader set: nodes, their selected rows, the stacked
// selected measurement matrix C*, the induced observer order r*, and the
// reduction basis Sigma (first r rows are exactly L, remaining rows are the
// greedily chosen independent rows of C*).
struct LeaderSelection {
    std::set<int> nodes;
    RowSelection selection;
    Matrix C_star;
    Matrix Sigma;
    int r_star = 0;

    std::vector<int> ordered_nodes() const;     // ascending; leader j = [j-1]
    std::vector<int> rows_per_leader() const;   // selected row counts t_j
};

// Centralized existence conditions for a functional observer of L x given
// all measurements pooled: (i) rank [LA; CA; C; L] == rank [CA; C; L];
// (ii) the pencil condition for every |s| >= 1, evaluated at the unstable
// eigenvalues of A plus fixed generic probe points.  Returns (i), (ii).
std::pair<bool, bool> check_darouach(const SystemModel& m,
                                     const ToleranceConfig& tol = {});

// Single point evaluation of the pencil condition at s.
bool darouach_pencil_holds_at(const SystemModel& m, std::complex<double> s,
                              const ToleranceConfig& tol = {});

// Test one candidate leader set with an explicit row selection.
// Throws EmptySelection when no rows are selected.
FeasibilityCertificate check_feasible(const SystemModel& m,
                                      const std::set<int>& nodes,
                                      const RowSelection& sel,
                                      const ToleranceConfig& tol = {});

// All minimal feasible leader sets within the caps (a set is minimal when
// no proper subset is feasible).  Every member node must contribute at
// least one selected row; each reported set carries its lowest-order
// selection (ties: fewer rows, then lexicographic on (node,row) pairs).
std::vector<MinimalLeaderSet> enumerate_minimal_leader_sets(
    const SystemModel& m, const ToleranceConfig& tol = {},
    const EnumerationCaps& caps = {});

// The functional leader set: a minimal set of least order r*; ties broken
// by lexicographically smallest node list.  Throws NoFeasibleLeaderSet.
LeaderSelection select_functional_leader_set(const SystemModel& m,
                                             const ToleranceConfig& tol = {},
                                             const EnumerationCaps& caps = {});

// Dimension of the detectable subspace of (A, C): n minus the number of
// unstable eigenvalues (with multiplicity) of the unobservable part.
int detectable_subspace_dim(const Matrix& A, const Matrix& C,
                            const ToleranceConfig& tol = {});

// Standard PBH detectability: rank [sI - A; C] full at every unstable
// eigenvalue of A.
bool pbh_detectable(const Matrix& A, const Matrix& C,
                    const ToleranceConfig& tol = {});

// Greedy reduction basis: rows of L followed by the rows of C_rows that are
// independent of everything above them, scanned in order.  Full row rank,
// rank([L; C_rows]) rows total.
Matrix build_sigma(const Matrix& L, const Matrix& C_rows,
                   const ToleranceConfig& tol = {});

// Split of R^n into observable/unobservable parts of (A, C): columns of
// `observable` span the observability row-space image, columns of
// `unobservable` its orthogonal complement; both orthonormal.
struct ObservabilitySplit {
    Matrix observable;    // n x o
    Matrix unobservable;  // n x (n - o)
};
ObservabilitySplit observability_split(const Matrix& A, const Matrix& C,
                                       const ToleranceConfig& tol = {});

// Stacked observability matrix [C; CA; ...; CA^{n-1}].
Matrix observability_matrix(const Matrix& A, const Matrix& C);

}  // namespace distfobs

#include "distfobs/leaderselect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace distfobs {

std::vector<int> LeaderSelection::ordered_nodes() const {
    return {nodes.begin(), nodes.end()};
}

std::vector<int> LeaderSelection::rows_per_leader() const {
    std::vector<int> t;
    for (int i : nodes) {
        auto it = selection.rows.find(i);
        t.push_back(it == selection.rows.end()
                        ? 0
                        : static_cast<int>(it->second.size()));
    }
    return t;
}

Matrix observability_matrix(const Matrix& A, const Matrix& C) {
    if (A.rows() != A.cols())
        throw SquareRequired("observability_matrix: A must be square");
    const auto n = A.rows();
    if (C.rows() == 0) return Matrix::Zero(0, n);
    if (C.cols() != n)
        throw DimensionMismatch("observability_matrix: C column count");
    Matrix out(C.rows() * n, n);
    Matrix block = C;
    for (Eigen::Index j = 0; j < n; ++j) {
        out.middleRows(j * C.rows(), C.rows()) = block;
        block = block * A;
    }
    return out;
}

ObservabilitySplit observability_split(const Matrix& A, const Matrix& C,
                                       const ToleranceConfig& tol) {
    const auto n = A.rows();
    ObservabilitySplit split;
    const Matrix O = observability_matrix(A, C);
    if (O.rows() == 0) {
        split.observable = Matrix::Zero(n, 0);
        split.unobservable = Matrix::Identity(n, n);
        return split;
    }
    Eigen::JacobiSVD<Matrix> svd(O, Eigen::ComputeFullV);
    const int r = numerical_rank(O, tol);
    Matrix V = svd.matrixV();
    // Deterministic column signs.
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            if (std::abs(V(i, j)) > 1e-12) {
                if (V(i, j) < 0) V.col(j) = -V.col(j);
                break;
            }
        }
    }
    split.observable = V.leftCols(r);
    split.unobservable = V.rightCols(n - r);
    return split;
}

Matrix build_sigma(const Matrix& L, const Matrix& C_rows,
                   const ToleranceConfig& tol) {
    std::vector<Matrix> rows{L};
    Matrix stack = L;
    int rank = numerical_rank(L, tol);
    for (Eigen::Index i = 0; i < C_rows.rows(); ++i) {
        Matrix cand = vstack({stack, C_rows.row(i)});
        const int r2 = numerical_rank(cand, tol);
        if (r2 > rank) {
            rank = r2;
            stack = std::move(cand);
        }
    }
    return stack;
}

bool darouach_pencil_holds_at(const SystemModel& m, std::complex<double> s,
                              const ToleranceConfig& tol) {
    const Matrix C = m.full_C();
    const Matrix CA = C * m.A;
    const Matrix LA = m.L * m.A;
    const int target = numerical_rank(vstack({CA, C, m.L}), tol);
    ComplexMatrix pencil(m.L.rows() + CA.rows() + C.rows(), m.state_dim());
    pencil.topRows(m.L.rows()) =
        s * m.L.cast<std::complex<double>>() - LA.cast<std::complex<double>>();
    pencil.middleRows(m.L.rows(), CA.rows()) = CA.cast<std::complex<double>>();
    pencil.bottomRows(C.rows()) = C.cast<std::complex<double>>();
    return numerical_rank(pencil, tol) == target;
}

std::pair<bool, bool> check_darouach(const SystemModel& m,
                                     const ToleranceConfig& tol) {
    const Matrix C = m.full_C();
    const Matrix CA = C * m.A;
    const Matrix LA = m.L * m.A;
    const bool rank_cond =
        numerical_rank(vstack({LA, CA, C, m.L}), tol) ==
        numerical_rank(vstack({CA, C, m.L}), tol);

    // The pencil rank is constant in s except at finitely many points, and
    // for this pencil those points are eigenvalues of A.  Checking the
    // unstable eigenvalues alone is not enough, though: the *constant*
    // rank must also match, so two fixed generic probes off the spectrum
    // are included.
    std::vector<std::complex<double>> candidates = {
        {1.234567891, 0.7654321},
        {1.6180339887, -0.2139870123},
    };
    for (const auto& ev : eigenvalues(m.A))
        if (std::abs(ev) >= 1.0 - tol.stability_margin) candidates.push_back(ev);

    bool detect_cond = true;
    for (const auto& s : candidates)
        if (!darouach_pencil_holds_at(m, s, tol)) {
            detect_cond = false;
            break;
        }
    return {rank_cond, detect_cond};
}

FeasibilityCertificate check_feasible(const SystemModel& m,
                                      const std::set<int>& nodes,
                                      const RowSelection& sel,
                                      const ToleranceConfig& tol) {
    FeasibilityCertificate cert;
    cert.node_set = nodes;
    cert.selection = sel;

    const Matrix Cbar = stacked_C(m, nodes, sel);
    if (Cbar.rows() == 0)
        throw EmptySelection("check_feasible: selection has no rows");

    cert.sigma_rank = numerical_rank(vstack({m.L, Cbar}), tol);
    cert.rank_condition =
        numerical_rank(vstack({m.L * m.A, Cbar * m.A, m.L, Cbar}), tol) ==
        cert.sigma_rank;

    // Detectability of the reduced pair, tested as standard PBH at the
    // unstable eigenvalues (the pencil is square off the spectrum, so no
    // generic probe is needed here).
    const Matrix Sigma = build_sigma(m.L, Cbar, tol);
    const Matrix Sp = pseudo_inverse(Sigma, tol);
    cert.detectability_condition =
        pbh_detectable(Sigma * m.A * Sp, Cbar * Sp, tol);
    return cert;
}

bool pbh_detectable(const Matrix& A, const Matrix& C,
                    const ToleranceConfig& tol) {
    if (A.rows() != A.cols())
        throw SquareRequired("pbh_detectable: A must be square");
    const int n = static_cast<int>(A.rows());
    for (const auto& ev : eigenvalues(A)) {
        if (std::abs(ev) < 1.0 - tol.stability_margin) continue;
        ComplexMatrix pbh(n + C.rows(), n);
        pbh.topRows(n) =
            ev * ComplexMatrix::Identity(n, n) - A.cast<std::complex<double>>();
        pbh.bottomRows(C.rows()) = C.cast<std::complex<double>>();
        if (numerical_rank(pbh, tol) < n) return false;
    }
    return true;
}

namespace {

struct BestSelection {
    RowSelection sel;
    int order = 0;
    int row_count = 0;
};

// Lowest-order feasible selection within a node set, if any.  Every member
// node must contribute at least one row.
std::optional<BestSelection> best_feasible_selection(
    const SystemModel& m, const std::set<int>& nodes,
    const ToleranceConfig& tol, const EnumerationCaps& caps) {
    std::vector<std::pair<int, int>> all_rows;  // (node, 1-based row)
    std::map<int, int> node_row_count;
    for (int i : nodes) {
        const int ri = static_cast<int>(m.sensors[static_cast<size_t>(i - 1)].rows());
        node_row_count[i] = ri;
        for (int j = 1; j <= ri; ++j) all_rows.emplace_back(i, j);
        if (ri == 0) return std::nullopt;  // member without rows can't contribute
    }
    const int R = static_cast<int>(all_rows.size());
    if (R == 0) return std::nullopt;
    if (R > 20)
        throw ValidationError(
            "leader-set enumeration supports at most 20 candidate rows; "
            "restrict with EnumerationCaps");

    std::optional<BestSelection> best;
    for (unsigned mask = 1; mask < (1u << R); ++mask) {
        const int rows_used = __builtin_popcount(mask);
        if (rows_used > caps.max_total_rows) continue;
        RowSelection sel;
        for (int b = 0; b < R; ++b)
            if (mask & (1u << b))
                sel.rows[all_rows[static_cast<size_t>(b)].first].push_back(
                    all_rows[static_cast<size_t>(b)].second);
        if (static_cast<int>(sel.rows.size()) != static_cast<int>(nodes.size()))
            continue;  // some member node has no selected row
        const auto cert = check_feasible(m, nodes, sel, tol);
        if (!cert.feasible()) continue;
        BestSelection cand{sel, cert.sigma_rank, rows_used};
        if (!best || cand.order < best->order ||
            (cand.order == best->order &&
             (cand.row_count < best->row_count ||
              (cand.row_count == best->row_count &&
               cand.sel.flattened() < best->sel.flattened()))))
            best = std::move(cand);
    }
    return best;
}

}  // namespace

std::vector<MinimalLeaderSet> enumerate_minimal_leader_sets(
    const SystemModel& m, const ToleranceConfig& tol,
    const EnumerationCaps& caps) {
    const int N = m.node_count();
    const int max_size = std::min(N, caps.max_set_size);

    // Memoized feasibility per node set so the minimality checks reuse work.
    std::map<std::set<int>, std::optional<BestSelection>> memo;
    auto feasibility = [&](const std::set<int>& s)
        -> const std::optional<BestSelection>& {
        auto it = memo.find(s);
        if (it == memo.end())
            it = memo.emplace(s, best_feasible_selection(m, s, tol, caps)).first;
        return it->second;
    };

    std::vector<MinimalLeaderSet> out;
    for (int size = 1; size <= max_size; ++size) {
        // All subsets of {1..N} of this size, lexicographic.
        std::vector<bool> choose(static_cast<size_t>(N), false);
        std::fill(choose.begin(), choose.begin() + size, true);
        // std::prev_permutation over the selector walks subsets in
        // lexicographic order of their sorted element lists.
        do {
            std::set<int> s;
            for (int i = 0; i < N; ++i)
                if (choose[static_cast<size_t>(i)]) s.insert(i + 1);
            const auto& best = feasibility(s);
            if (!best) continue;
            bool minimal = true;
            // Any feasible proper subset disqualifies minimality.
            const std::vector<int> elems(s.begin(), s.end());
            for (unsigned sub = 1; sub + 1 < (1u << size) && minimal; ++sub) {
                std::set<int> t;
                for (int b = 0; b < size; ++b)
                    if (sub & (1u << b)) t.insert(elems[static_cast<size_t>(b)]);
                if (feasibility(t)) minimal = false;
            }
            if (!minimal) continue;
            MinimalLeaderSet ms;
            ms.nodes = s;
            ms.selection = best->sel;
            ms.order = best->order;
            out.push_back(std::move(ms));
        } while (std::prev_permutation(choose.begin(), choose.end()));
    }
    return out;
}

LeaderSelection select_functional_leader_set(const SystemModel& m,
                                             const ToleranceConfig& tol,
                                             const EnumerationCaps& caps) {
    const auto minimal = enumerate_minimal_leader_sets(m, tol, caps);
    if (minimal.empty())
        throw NoFeasibleLeaderSet(
            "select_functional_leader_set: no feasible leader set exists");
    const MinimalLeaderSet* pick = &minimal.front();
    for (const auto& ms : minimal) {
        if (ms.order < pick->order) pick = &ms;
        else if (ms.order == pick->order) {
            const std::vector<int> a(ms.nodes.begin(), ms.nodes.end());
            const std::vector<int> b(pick->nodes.begin(), pick->nodes.end());
            if (a < b) pick = &ms;
        }
    }
    LeaderSelection ls;
    ls.nodes = pick->nodes;
    ls.selection = pick->selection;
    ls.C_star = stacked_C(m, pick->nodes, pick->selection);
    ls.Sigma = build_sigma(m.L, ls.C_star, tol);
    ls.r_star = static_cast<int>(ls.Sigma.rows());
    return ls;
}

int detectable_subspace_dim(const Matrix& A, const Matrix& C,
                            const ToleranceConfig& tol) {
    if (A.rows() != A.cols())
        throw SquareRequired("detectable_subspace_dim: A must be square");
    const auto split = observability_split(A, C, tol);
    const Matrix Au =
        split.unobservable.transpose() * A * split.unobservable;
    int unstable = 0;
    for (const auto& ev : eigenvalues(Au))
        if (std::abs(ev) >= 1.0 - tol.stability_margin) ++unstable;
    return static_cast<int>(A.rows()) - unstable;
}

}  // namespace distfobs

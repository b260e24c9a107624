#pragma once

#include <optional>
#include <vector>

#include "distfobs/decomp.hpp"
#include "distfobs/graphkit.hpp"

namespace distfobs {

// Everything a node needs at runtime: one Luenberger gain per leader
// sub-state, one spanning tree (rooted at that leader) per sub-state, and
// the induced row-stochastic consensus weights.
struct ObserverDesign {
    std::vector<int> leaders;          // ascending node ids; sub-state j -> [j-1]
    std::vector<Matrix> gains;         // G_j, o_j x t_j
    std::vector<SpanningTree> trees;   // rooted at leaders[j-1]
    std::vector<Matrix> weights;       // W^j, N x N, rows sum to 1
    double rho = 0.0;
};

// Place the eigenvalues of A - G C on (approximately) the circle of radius
// rho.  Requires (A, C) observable; verifies the spectral radius afterwards
// and throws SynthesisFailed if it exceeds rho + stability_margin.
Matrix design_gain(const Matrix& A, const Matrix& C, double rho,
                   const ToleranceConfig& tol = {});

// Tree-concentrated weights: weight 1 on the spanning-tree parent, and 1 on
// itself for the root.  One N x N matrix per sub-state.
std::vector<Matrix> design_consensus_weights(
    const DiGraph& g, const std::vector<int>& leaders,
    const std::vector<SpanningTree>& trees);

ObserverDesign design_observer(const SystemModel& m, const LeaderSelection& ls,
                               const StaircaseDecomposition& sd, double rho,
                               const ToleranceConfig& tol = {});

// A node's estimate in observer coordinates z = [z^(1); ...; z^(M); z_U].
struct NodeEstimate {
    Vector z;

    Vector substate(const StaircaseDecomposition& sd, int j) const;
    Vector unobservable(const StaircaseDecomposition& sd) const;
    // psi-hat = leading r entries of T_D z (the estimate of L x).
    Vector psi_hat(const StaircaseDecomposition& sd, int r) const;
};

// One synchronous update of node i.  `previous` holds every node's estimate
// at time k (1-based by node id via index+1); `measurement` must be present
// iff node i is a leader and then carries its own reduced measurement.
NodeEstimate node_update(int node, const std::vector<NodeEstimate>& previous,
                         const std::optional<Vector>& measurement,
                         const ObserverDesign& od,
                         const StaircaseDecomposition& sd, const DiGraph& g);

// Stacked error dynamics e[k+1] = transition * e[k] with the error states
// ordered sub-state-major: for each sub-state j, the leader's error then the
// remaining nodes in tree BFS order; finally each node's unobservable error
// in node order.
struct ErrorDynamics {
    Matrix transition;
    double spectral_radius = 0.0;
    std::vector<int> state_offsets;  // per (sub-state, tree-position) block
};

ErrorDynamics assemble_error_dynamics(const ObserverDesign& od,
                                      const StaircaseDecomposition& sd,
                                      const DiGraph& g);

// ---- naive consensus baseline ----

// Per-node mixing/injection coefficients and neighborhood-averaging weights
// for the naive scheme x-hat_i' = alpha_i sum_j w_ij x-hat_j +
// beta_i sum_{j in N_i} y_j.
struct NaiveParams {
    Vector alphas;
    Vector betas;
    Matrix weights;  // N x N, rows sum to 1, support within N_i plus self
};

// Error system e' = M e + B1 psi + B2 y_m of the naive scheme, where psi is
// the tracked function value and y_m the single measurement.
struct NaiveErrorSystem {
    Matrix M;
    Vector B1;
    Vector B2;
    double alpha = 0.0;
    double beta = 0.0;
    int measuring_node = 0;
};

NaiveErrorSystem assemble_naive_error_dynamics(const NaiveParams& params,
                                               const SystemModel& m,
                                               const ToleranceConfig& tol = {});

// Solve L A = alpha L + beta C_m for the unique measuring node m; the
// residual must vanish for the naive scheme to track at all.
struct NaiveSpanSplit {
    double alpha = 0.0;
    double beta = 0.0;
    int measuring_node = 0;
};
NaiveSpanSplit naive_span_split(const SystemModel& m,
                                const ToleranceConfig& tol = {});

// ---- scalar-generic update kernel ----
//
// The simulator runs the same per-node update in plain double or in
// extended precision; `zero_like` lets templates mint zeros carrying the
// right precision.
inline double zero_like(double) { return 0.0; }

template <class S>
void update_node_kernel(int node, const StaircaseDecomposition& sd,
                        const ObserverDesign& od, const DiGraph& g,
                        const std::vector<std::vector<S>>& previous,
                        const std::vector<S>* measurement,
                        std::vector<S>& next) {
    const int M = sd.sensor_count();
    const int r = sd.order();
    const int N = g.node_count();
    if (node < 1 || node > N) throw InvalidNode("update_node_kernel: node");
    const auto& zi = previous[static_cast<size_t>(node - 1)];
    if (zi.size() != static_cast<size_t>(r))
        throw DimensionMismatch("update_node_kernel: estimate length");
    const S zero = zero_like(zi[0]);

    next.assign(static_cast<size_t>(r), zero);

    int own_substate = 0;  // 1-based, 0 when not a leader
    for (int j = 1; j <= M; ++j)
        if (od.leaders[static_cast<size_t>(j - 1)] == node) own_substate = j;

    for (int j = 1; j <= M; ++j) {
        const int off = sd.offsets[static_cast<size_t>(j - 1)];
        const int oj = sd.obs_dims[static_cast<size_t>(j - 1)];
        if (oj == 0) continue;
        const int limit = sd.offsets[static_cast<size_t>(j)];  // end of block j
        if (j == own_substate) {
            if (measurement == nullptr)
                throw ValidationError(
                    "update_node_kernel: leader needs its measurement");
            const auto& Cj = sd.C_bar[static_cast<size_t>(j - 1)];
            const auto& Gj = od.gains[static_cast<size_t>(j - 1)];
            const int tj = static_cast<int>(Cj.rows());
            // Prediction through own sub-states 1..j, then measurement
            // correction.
            std::vector<S> innov(static_cast<size_t>(tj), zero);
            for (int t = 0; t < tj; ++t) {
                S acc = (*measurement)[static_cast<size_t>(t)];
                for (int c = 0; c < limit; ++c)
                    acc += (-Cj(t, c)) * zi[static_cast<size_t>(c)];
                innov[static_cast<size_t>(t)] = acc;
            }
            for (int row = off; row < limit; ++row) {
                S acc = zero;
                for (int c = 0; c < limit; ++c)
                    acc += sd.A_bar(row, c) * zi[static_cast<size_t>(c)];
                for (int t = 0; t < tj; ++t)
                    acc += Gj(row - off, t) * innov[static_cast<size_t>(t)];
                next[static_cast<size_t>(row)] = acc;
            }
        } else {
            // Consensus mix over the weight row, then own lower couplings.
            const auto& W = od.weights[static_cast<size_t>(j - 1)];
            std::vector<S> mix(static_cast<size_t>(oj), zero);
            for (int l = 1; l <= N; ++l) {
                const double w = W(node - 1, l - 1);
                if (w == 0.0) continue;
                const auto& zl = previous[static_cast<size_t>(l - 1)];
                for (int c = 0; c < oj; ++c)
                    mix[static_cast<size_t>(c)] +=
                        w * zl[static_cast<size_t>(off + c)];
            }
            for (int row = off; row < limit; ++row) {
                S acc = zero;
                for (int c = 0; c < oj; ++c)
                    acc += sd.A_bar(row, off + c) * mix[static_cast<size_t>(c)];
                for (int c = 0; c < off; ++c)
                    acc += sd.A_bar(row, c) * zi[static_cast<size_t>(c)];
                next[static_cast<size_t>(row)] = acc;
            }
        }
    }
    // Unobservable tail: pure prediction from the node's own estimate.
    for (int row = sd.offsets[static_cast<size_t>(M)]; row < r; ++row) {
        S acc = zero;
        for (int c = 0; c < r; ++c)
            acc += sd.A_bar(row, c) * zi[static_cast<size_t>(c)];
        next[static_cast<size_t>(row)] = acc;
    }
}

}  // namespace distfobs

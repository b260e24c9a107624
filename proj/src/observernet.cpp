#include "distfobs/observernet.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace distfobs {

namespace {

// Real matrix with all eigenvalues on the circle of radius rho at the given
// angles (conjugate pairs; trailing real eigenvalue when odd count).  For
// rho == 0 a single nilpotent Jordan block keeps the pair (F, R)
// non-derogatory, which a zero matrix would not.
Matrix target_spectrum_matrix(int o, double rho,
                              const std::vector<double>& angles) {
    Matrix F = Matrix::Zero(o, o);
    if (rho == 0.0) {
        for (int i = 0; i + 1 < o; ++i) F(i, i + 1) = 1.0;
        return F;
    }
    int at = 0;
    int pair = 0;
    while (at + 1 < o) {
        const double th = angles[static_cast<size_t>(pair++)];
        const double c = rho * std::cos(th);
        const double s = rho * std::sin(th);
        F(at, at) = c;
        F(at, at + 1) = s;
        F(at + 1, at) = -s;
        F(at + 1, at + 1) = c;
        at += 2;
    }
    if (at < o) F(at, at) = rho;
    return F;
}

// Solve A^T Y - Y F = Q via the Kronecker system (small orders only).
Matrix solve_sylvester(const Matrix& At, const Matrix& F, const Matrix& Q) {
    const int o = static_cast<int>(At.rows());
    Matrix K = Matrix::Zero(o * o, o * o);
    // vec(A^T Y) = (I kron A^T) vec(Y); vec(Y F) = (F^T kron I) vec(Y)
    for (int j = 0; j < o; ++j)
        K.block(j * o, j * o, o, o) = At;
    for (int j = 0; j < o; ++j)
        for (int i = 0; i < o; ++i)
            K.block(j * o, i * o, o, o).diagonal().array() += -F(i, j);
    Eigen::Map<const Vector> q(Q.data(), o * o);
    Vector y = K.fullPivLu().solve(q);
    Matrix Y(o, o);
    std::copy(y.data(), y.data() + o * o, Y.data());
    return Y;
}

}  // namespace

Matrix design_gain(const Matrix& A, const Matrix& C, double rho,
                   const ToleranceConfig& tol) {
    if (A.rows() != A.cols())
        throw SquareRequired("design_gain: A must be square");
    const int o = static_cast<int>(A.rows());
    const int t = static_cast<int>(C.rows());
    if (o == 0) return Matrix::Zero(0, t);
    if (t == 0 || C.cols() != o)
        throw DimensionMismatch("design_gain: C shape");
    if (rho < 0.0) throw ValidationError("design_gain: rho must be >= 0");
    if (numerical_rank(observability_matrix(A, C), tol) != o)
        throw SynthesisFailed("design_gain: (A, C) is not observable");

    std::mt19937 rng(0x5eedu);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int pairs = o / 2;

    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<double> angles;
        for (int p = 0; p < pairs; ++p)
            angles.push_back(M_PI * (p + 0.5 + 0.11 * attempt) /
                             (pairs + 1.0));
        const Matrix F = target_spectrum_matrix(o, rho, angles);

        // The Sylvester equation has a unique solution only when F and A
        // share no eigenvalues; perturb the angles and retry when they do.
        bool clash = false;
        for (const auto& ea : eigenvalues(A))
            for (const auto& ef : eigenvalues(F))
                if (std::abs(ea - ef) < 1e-9) clash = true;
        if (clash && attempt + 1 < 40) continue;

        Matrix R(t, o);
        if (attempt == 0) {
            // Deterministic first try; randomized only on retries.
            for (int i = 0; i < t; ++i)
                for (int j = 0; j < o; ++j)
                    R(i, j) = (i + j) % 2 == 0 ? 1.0 : 0.5;
        } else {
            for (int i = 0; i < t; ++i)
                for (int j = 0; j < o; ++j) R(i, j) = unit(rng);
        }

        const Matrix Y =
            solve_sylvester(A.transpose(), F, C.transpose() * R);
        Eigen::FullPivLU<Matrix> lu(Y);
        if (!lu.isInvertible()) continue;
        const Matrix G = (R * lu.inverse()).transpose();
        if (!has_finite_entries(G)) continue;
        const double achieved = spectral_radius(A - G * C);
        if (achieved <= rho + tol.stability_margin) return G;
    }
    throw SynthesisFailed(
        "design_gain: could not reach spectral radius " + std::to_string(rho));
}

std::vector<Matrix> design_consensus_weights(
    const DiGraph& g, const std::vector<int>& leaders,
    const std::vector<SpanningTree>& trees) {
    if (leaders.size() != trees.size())
        throw DimensionMismatch("design_consensus_weights: leaders vs trees");
    const int N = g.node_count();
    std::vector<Matrix> out;
    for (size_t j = 0; j < trees.size(); ++j) {
        const auto& tree = trees[j];
        if (tree.root != leaders[j])
            throw ValidationError(
                "design_consensus_weights: tree root is not the leader");
        Matrix W = Matrix::Zero(N, N);
        W(tree.root - 1, tree.root - 1) = 1.0;
        for (const auto& [child, parent] : tree.parent) {
            if (!g.has_edge(parent, child))
                throw ValidationError(
                    "design_consensus_weights: tree edge missing from graph");
            W(child - 1, parent - 1) = 1.0;
        }
        out.push_back(std::move(W));
    }
    return out;
}

ObserverDesign design_observer(const SystemModel& m, const LeaderSelection& ls,
                               const StaircaseDecomposition& sd, double rho,
                               const ToleranceConfig& tol) {
    ObserverDesign od;
    od.rho = rho;
    od.leaders = ls.ordered_nodes();
    const int M = sd.sensor_count();
    if (static_cast<int>(od.leaders.size()) != M)
        throw DimensionMismatch("design_observer: leader count vs staircase");

    if (!is_schur_stable(sd.A_unobservable(), tol))
        throw SynthesisFailed(
            "design_observer: unobservable block is not Schur stable");

    for (int j = 1; j <= M; ++j) {
        const Matrix Ajj = sd.A_block(j, j);
        const Matrix Cjj = sd.C_block(j, j);
        od.gains.push_back(Ajj.rows() == 0
                               ? Matrix::Zero(0, sd.C_bar[static_cast<size_t>(j - 1)].rows())
                               : design_gain(Ajj, Cjj, rho, tol));
        od.trees.push_back(
            m.graph.spanning_tree_rooted_at(od.leaders[static_cast<size_t>(j - 1)]));
    }
    od.weights = design_consensus_weights(m.graph, od.leaders, od.trees);
    return od;
}

Vector NodeEstimate::substate(const StaircaseDecomposition& sd, int j) const {
    if (j < 1 || j > sd.sensor_count())
        throw InvalidNode("NodeEstimate::substate: index");
    return z.segment(sd.offsets[static_cast<size_t>(j - 1)],
                     sd.obs_dims[static_cast<size_t>(j - 1)]);
}

Vector NodeEstimate::unobservable(const StaircaseDecomposition& sd) const {
    return z.tail(sd.unobs_dim);
}

Vector NodeEstimate::psi_hat(const StaircaseDecomposition& sd, int r) const {
    return (sd.T_D * z).head(r);
}

NodeEstimate node_update(int node, const std::vector<NodeEstimate>& previous,
                         const std::optional<Vector>& measurement,
                         const ObserverDesign& od,
                         const StaircaseDecomposition& sd, const DiGraph& g) {
    const int r = sd.order();
    std::vector<std::vector<double>> prev;
    prev.reserve(previous.size());
    for (const auto& est : previous) {
        if (est.z.size() != r)
            throw DimensionMismatch("node_update: estimate length");
        prev.emplace_back(est.z.data(), est.z.data() + r);
    }
    std::vector<double> meas;
    if (measurement)
        meas.assign(measurement->data(), measurement->data() + measurement->size());
    std::vector<double> out;
    update_node_kernel<double>(node, sd, od, g, prev,
                               measurement ? &meas : nullptr, out);
    NodeEstimate next;
    next.z = Eigen::Map<const Vector>(out.data(), r);
    return next;
}

ErrorDynamics assemble_error_dynamics(const ObserverDesign& od,
                                      const StaircaseDecomposition& sd,
                                      const DiGraph& g) {
    const int M = sd.sensor_count();
    const int N = g.node_count();
    const int u = sd.unobs_dim;

    // Position of each node within each sub-state's tree ordering.
    std::vector<std::vector<int>> pos(static_cast<size_t>(M),
                                      std::vector<int>(static_cast<size_t>(N + 1), -1));
    for (int j = 0; j < M; ++j) {
        const auto& order = od.trees[static_cast<size_t>(j)].order;
        for (size_t p = 0; p < order.size(); ++p)
            pos[static_cast<size_t>(j)][static_cast<size_t>(order[p])] =
                static_cast<int>(p);
    }

    std::vector<int> base(static_cast<size_t>(M + 1), 0);
    for (int j = 0; j < M; ++j)
        base[static_cast<size_t>(j + 1)] =
            base[static_cast<size_t>(j)] +
            N * sd.obs_dims[static_cast<size_t>(j)];
    const int dim = base[static_cast<size_t>(M)] + N * u;

    auto sub_off = [&](int j, int node) {  // 1-based j, node
        return base[static_cast<size_t>(j - 1)] +
               pos[static_cast<size_t>(j - 1)][static_cast<size_t>(node)] *
                   sd.obs_dims[static_cast<size_t>(j - 1)];
    };
    auto u_off = [&](int node) {
        return base[static_cast<size_t>(M)] + (node - 1) * u;
    };

    ErrorDynamics ed;
    ed.transition = Matrix::Zero(dim, dim);
    Matrix& T = ed.transition;

    for (int j = 1; j <= M; ++j) {
        const int oj = sd.obs_dims[static_cast<size_t>(j - 1)];
        if (oj == 0) continue;
        const int leader = od.leaders[static_cast<size_t>(j - 1)];
        const auto& W = od.weights[static_cast<size_t>(j - 1)];
        const Matrix Gj = od.gains[static_cast<size_t>(j - 1)];
        for (int node = 1; node <= N; ++node) {
            const int row = sub_off(j, node);
            if (node == leader) {
                T.block(row, sub_off(j, node), oj, oj) =
                    sd.A_block(j, j) - Gj * sd.C_block(j, j);
                for (int l = 1; l < j; ++l) {
                    const int ol = sd.obs_dims[static_cast<size_t>(l - 1)];
                    if (ol == 0) continue;
                    T.block(row, sub_off(l, node), oj, ol) =
                        sd.A_block(j, l) - Gj * sd.C_block(j, l);
                }
            } else {
                for (int src = 1; src <= N; ++src) {
                    const double w = W(node - 1, src - 1);
                    if (w == 0.0) continue;
                    T.block(row, sub_off(j, src), oj, oj) +=
                        w * sd.A_block(j, j);
                }
                for (int l = 1; l < j; ++l) {
                    const int ol = sd.obs_dims[static_cast<size_t>(l - 1)];
                    if (ol == 0) continue;
                    T.block(row, sub_off(l, node), oj, ol) = sd.A_block(j, l);
                }
            }
        }
    }
    if (u > 0) {
        const Matrix Au = sd.A_unobservable();
        for (int node = 1; node <= N; ++node) {
            const int row = u_off(node);
            T.block(row, row, u, u) = Au;
            for (int j = 1; j <= M; ++j) {
                const int oj = sd.obs_dims[static_cast<size_t>(j - 1)];
                if (oj == 0) continue;
                T.block(row, sub_off(j, node), u, oj) = sd.bottom_coupling(j);
            }
        }
    }

    ed.spectral_radius = dim == 0 ? 0.0 : spectral_radius(T);
    for (int j = 0; j <= M; ++j) ed.state_offsets.push_back(base[static_cast<size_t>(j)]);
    return ed;
}

NaiveSpanSplit naive_span_split(const SystemModel& m,
                                const ToleranceConfig& tol) {
    if (m.L.rows() != 1)
        throw ValidationError("naive baseline: L must be a single row");
    int measuring = 0;
    for (int i = 1; i <= m.node_count(); ++i) {
        const auto& C = m.sensors[static_cast<size_t>(i - 1)];
        if (C.rows() == 0) continue;
        if (measuring != 0 || C.rows() != 1)
            throw ValidationError(
                "naive baseline: exactly one node may carry a single "
                "measurement row");
        measuring = i;
    }
    if (measuring == 0)
        throw ValidationError("naive baseline: no measuring node");

    const Matrix& Cm = m.sensors[static_cast<size_t>(measuring - 1)];
    const Vector target = (m.L * m.A).transpose();
    Matrix basis(m.state_dim(), 2);
    basis.col(0) = m.L.transpose();
    basis.col(1) = Cm.transpose();
    const Vector coeff =
        basis.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
    const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
    if ((basis * coeff - target).cwiseAbs().maxCoeff() > tol.residual_tol * scale)
        throw DecompositionFailed(
            "naive baseline: L A does not lie in span{L, C_m}");
    return {coeff(0), coeff(1), measuring};
}

NaiveErrorSystem assemble_naive_error_dynamics(const NaiveParams& params,
                                               const SystemModel& m,
                                               const ToleranceConfig& tol) {
    const int N = m.node_count();
    if (params.alphas.size() != N || params.betas.size() != N ||
        params.weights.rows() != N || params.weights.cols() != N)
        throw DimensionMismatch("naive baseline: parameter shapes");

    for (int i = 1; i <= N; ++i) {
        double row_sum = 0.0;
        const auto nb = m.graph.neighborhood(i);
        for (int l = 1; l <= N; ++l) {
            const double w = params.weights(i - 1, l - 1);
            if (w < 0.0)
                throw ValidationError("naive baseline: negative weight");
            if (w > 0.0 && !std::binary_search(nb.begin(), nb.end(), l))
                throw ValidationError(
                    "naive baseline: weight outside neighborhood");
            row_sum += w;
        }
        if (std::abs(row_sum - 1.0) > 1e-12)
            throw ValidationError("naive baseline: weight rows must sum to 1");
    }

    const auto split = naive_span_split(m, tol);
    NaiveErrorSystem sys;
    sys.alpha = split.alpha;
    sys.beta = split.beta;
    sys.measuring_node = split.measuring_node;
    sys.M = Matrix::Zero(N, N);
    sys.B1 = Vector::Zero(N);
    sys.B2 = Vector::Zero(N);
    for (int i = 1; i <= N; ++i) {
        for (int l = 1; l <= N; ++l)
            sys.M(i - 1, l - 1) =
                params.alphas(i - 1) * params.weights(i - 1, l - 1);
        sys.B1(i - 1) = params.alphas(i - 1) - split.alpha;
        const auto nb = m.graph.neighborhood(i);
        const bool sees = std::binary_search(nb.begin(), nb.end(),
                                             split.measuring_node);
        sys.B2(i - 1) = (sees ? params.betas(i - 1) : 0.0) - split.beta;
    }
    return sys;
}

}  // namespace distfobs

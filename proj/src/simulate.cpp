#include "distfobs/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "distfobs/bigfloat.hpp"

namespace distfobs {

namespace {

template <class S>
struct Ops;

template <>
struct Ops<double> {
    static double make(double v, long) { return v; }
    static double to_dbl(double v) { return v; }
    static double root(double v) { return std::sqrt(v); }
};

template <>
struct Ops<BigFloat> {
    static BigFloat make(double v, long bits) { return BigFloat(v, bits); }
    static double to_dbl(const BigFloat& v) { return v.to_double(); }
    static BigFloat root(const BigFloat& v) { return sqrt(v); }
};

template <class S>
std::vector<S> lift(const Vector& v, long bits) {
    std::vector<S> out;
    out.reserve(static_cast<size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(Ops<S>::make(v(i), bits));
    return out;
}

template <class S>
std::vector<S> matvec(const Matrix& M, const std::vector<S>& x, long bits) {
    std::vector<S> y;
    y.reserve(static_cast<size_t>(M.rows()));
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        S acc = Ops<S>::make(0.0, bits);
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            acc += M(i, j) * x[static_cast<size_t>(j)];
        y.push_back(std::move(acc));
    }
    return y;
}

// Append one step to the trace: psi, every node's psi-hat, and the error
// norm computed in working precision before rounding to double.
template <class S>
void record(SimulationTrace& t, const std::vector<S>& psi,
            const std::vector<std::vector<S>>& psi_hat, long bits) {
    const int r = t.function_count;
    Vector p(r);
    for (int i = 0; i < r; ++i) p(i) = Ops<S>::to_dbl(psi[static_cast<size_t>(i)]);
    t.psi.push_back(p);
    t.psi_hat.emplace_back();
    t.err_norm.emplace_back();
    for (const auto& ph : psi_hat) {
        Vector v(r);
        S acc = Ops<S>::make(0.0, bits);
        for (int i = 0; i < r; ++i) {
            const S diff = ph[static_cast<size_t>(i)] - psi[static_cast<size_t>(i)];
            acc += diff * diff;
            v(i) = Ops<S>::to_dbl(ph[static_cast<size_t>(i)]);
        }
        t.psi_hat.back().push_back(v);
        t.err_norm.back().push_back(Ops<S>::to_dbl(Ops<S>::root(acc)));
    }
}

template <class S>
SimulationTrace simulate_proposed(const Scenario& sc, const AnalysisReport& an,
                                  long bits) {
    const auto& ls = an.selection;
    const auto& sd = an.staircase;
    const auto& od = an.design;
    const int N = sc.model.node_count();
    const int r = sc.model.function_count();
    const int rs = ls.r_star;
    const int M = sd.sensor_count();

    SimulationTrace t;
    t.function_count = r;
    t.node_count = N;
    t.precision_bits = static_cast<int>(bits);

    std::vector<S> x = lift<S>(sc.x0, bits);
    std::vector<std::vector<S>> est(
        static_cast<size_t>(N),
        std::vector<S>(static_cast<size_t>(rs), Ops<S>::make(0.0, bits)));
    if (sc.initial_estimates) {
        if (static_cast<int>(sc.initial_estimates->size()) != N)
            throw DimensionMismatch("initial_estimates: need one per node");
        for (int i = 0; i < N; ++i) {
            const Vector& z0 = (*sc.initial_estimates)[static_cast<size_t>(i)];
            if (z0.size() != rs)
                throw DimensionMismatch(
                    "initial_estimates: expected length r* = " +
                    std::to_string(rs));
            est[static_cast<size_t>(i)] = lift<S>(z0, bits);
        }
    }

    // psi-hat reads the top r rows of T_D (Sigma's leading rows are L).
    const Matrix Phi = sd.T_D.topRows(r);
    std::vector<int> row_offset(static_cast<size_t>(M), 0);
    {
        int at = 0;
        const auto per = ls.rows_per_leader();
        for (int j = 0; j < M; ++j) {
            row_offset[static_cast<size_t>(j)] = at;
            at += per[static_cast<size_t>(j)];
        }
    }

    for (long k = 0;; ++k) {
        const std::vector<S> psi = matvec<S>(sc.model.L, x, bits);
        std::vector<std::vector<S>> psi_hat;
        psi_hat.reserve(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i)
            psi_hat.push_back(matvec<S>(Phi, est[static_cast<size_t>(i)], bits));
        record(t, psi, psi_hat, bits);
        if (k == sc.horizon) break;

        std::vector<std::vector<S>> meas(static_cast<size_t>(M));
        const auto per = ls.rows_per_leader();
        for (int j = 0; j < M; ++j)
            meas[static_cast<size_t>(j)] = matvec<S>(
                ls.C_star.middleRows(row_offset[static_cast<size_t>(j)],
                                     per[static_cast<size_t>(j)]),
                x, bits);

        std::vector<std::vector<S>> next(static_cast<size_t>(N));
        for (int node = 1; node <= N; ++node) {
            const std::vector<S>* own = nullptr;
            for (int j = 0; j < M; ++j)
                if (od.leaders[static_cast<size_t>(j)] == node)
                    own = &meas[static_cast<size_t>(j)];
            update_node_kernel<S>(node, sd, od, sc.model.graph, est, own,
                                  next[static_cast<size_t>(node - 1)]);
        }
        est = std::move(next);
        x = matvec<S>(sc.model.A, x, bits);
    }
    return t;
}

template <class S>
SimulationTrace simulate_naive(const Scenario& sc, const NaiveParams& np,
                               int measuring_node, long bits) {
    const int N = sc.model.node_count();
    SimulationTrace t;
    t.function_count = 1;
    t.node_count = N;
    t.precision_bits = static_cast<int>(bits);

    std::vector<S> x = lift<S>(sc.x0, bits);
    std::vector<S> xhat(static_cast<size_t>(N), Ops<S>::make(0.0, bits));
    if (sc.initial_estimates) {
        if (static_cast<int>(sc.initial_estimates->size()) != N)
            throw DimensionMismatch("initial_estimates: need one per node");
        for (int i = 0; i < N; ++i) {
            const Vector& v = (*sc.initial_estimates)[static_cast<size_t>(i)];
            if (v.size() != 1)
                throw DimensionMismatch(
                    "initial_estimates: naive mode uses one scalar per node");
            xhat[static_cast<size_t>(i)] = Ops<S>::make(v(0), bits);
        }
    }
    const Matrix& Cm =
        sc.model.sensors[static_cast<size_t>(measuring_node - 1)];

    for (long k = 0;; ++k) {
        const std::vector<S> psi = matvec<S>(sc.model.L, x, bits);
        std::vector<std::vector<S>> psi_hat;
        for (int i = 0; i < N; ++i)
            psi_hat.push_back({xhat[static_cast<size_t>(i)]});
        record(t, psi, psi_hat, bits);
        if (k == sc.horizon) break;

        // y from the single measuring node; everyone mixes neighbors.
        S y = Ops<S>::make(0.0, bits);
        for (Eigen::Index c = 0; c < Cm.cols(); ++c)
            y += Cm(0, c) * x[static_cast<size_t>(c)];

        std::vector<S> next(static_cast<size_t>(N), Ops<S>::make(0.0, bits));
        for (int i = 1; i <= N; ++i) {
            S mix = Ops<S>::make(0.0, bits);
            for (int l = 1; l <= N; ++l) {
                const double w = np.weights(i - 1, l - 1);
                if (w != 0.0) mix += w * xhat[static_cast<size_t>(l - 1)];
            }
            S acc = np.alphas(i - 1) * mix;
            const auto nb = sc.model.graph.neighborhood(i);
            if (std::binary_search(nb.begin(), nb.end(), measuring_node))
                acc += np.betas(i - 1) * y;
            next[static_cast<size_t>(i - 1)] = std::move(acc);
        }
        xhat = std::move(next);
        x = matvec<S>(sc.model.A, x, bits);
    }
    return t;
}

NaiveParams default_naive_params(const SystemModel& m,
                                 const NaiveSpanSplit& split) {
    const int N = m.node_count();
    NaiveParams np;
    np.alphas = Vector::Constant(N, split.alpha);
    np.betas = Vector::Constant(N, split.beta);
    np.weights = Matrix::Zero(N, N);
    for (int i = 1; i <= N; ++i) {
        const auto nb = m.graph.neighborhood(i);
        for (int l : nb)
            np.weights(i - 1, l - 1) = 1.0 / static_cast<double>(nb.size());
    }
    return np;
}

}  // namespace

long auto_precision_bits(const Matrix& A, long horizon) {
    const double rho = spectral_radius(A);
    if (rho <= 1.0) return 53;
    const double growth = static_cast<double>(horizon) * std::log2(rho);
    const long bits = 53 + 10 + static_cast<long>(std::ceil(growth));
    return std::min(bits, 4096L);
}

SimulationTrace run_simulate(const Scenario& sc) {
    require_valid(sc.model, sc.tol);
    if (sc.x0.size() != sc.model.state_dim())
        throw DimensionMismatch("x0 must have length n");
    const long bits = sc.precision_bits
                          ? *sc.precision_bits
                          : auto_precision_bits(sc.model.A, sc.horizon);

    if (sc.mode == SimMode::naive) {
        NaiveSpanSplit split;
        NaiveParams np;
        try {
            split = naive_span_split(sc.model, sc.tol);
            np = sc.naive ? *sc.naive : default_naive_params(sc.model, split);
            // Validates parameter shapes and the span condition together.
            assemble_naive_error_dynamics(np, sc.model, sc.tol);
        } catch (const DecompositionFailed& e) {
            throw ModeUnsupported(e.what());
        }
        return bits <= 53 ? simulate_naive<double>(sc, np, split.measuring_node, bits)
                          : simulate_naive<BigFloat>(sc, np, split.measuring_node, bits);
    }

    const AnalysisReport an = run_analyze(sc);
    return bits <= 53 ? simulate_proposed<double>(sc, an, bits)
                      : simulate_proposed<BigFloat>(sc, an, bits);
}

}  // namespace distfobs

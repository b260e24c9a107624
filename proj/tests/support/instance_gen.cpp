#include "support/instance_gen.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "distfobs/numkit.hpp"

namespace testsup {

using distfobs::DiGraph;
using distfobs::Matrix;
using distfobs::SystemModel;

Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> n01;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = n01(rng);
    return m;
}

Matrix random_orthogonal(std::mt19937_64& rng, int n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, n));
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Sign fix keeps the draw well spread over the orthogonal group.
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

namespace {

// Mostly-stable spectrum; the occasional unstable mode stays close to 1 so
// 500-step simulations do not overflow anything.
double random_eigenvalue(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> stable(0.15, 0.85);
    std::uniform_real_distribution<double> unstable(1.001, 1.02);
    const double mag = (u01(rng) < 0.2) ? unstable(rng) : stable(rng);
    return (u01(rng) < 0.5) ? mag : -mag;
}

// Lower triangular with prescribed eigenvalues and mild coupling noise.
Matrix lower_with_spectrum(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> n01;
    Matrix t = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        t(i, i) = random_eigenvalue(rng);
        for (int j = 0; j < i; ++j) t(i, j) = 0.3 * n01(rng);
    }
    return t;
}

DiGraph random_strong_digraph(std::mt19937_64& rng, int n, double extra_p) {
    DiGraph g(n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < n; ++i) g.add_edge(perm[i], perm[(i + 1) % n]);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            if (a != b && u01(rng) < extra_p) g.add_edge(a, b);
    return g;
}

// Split `total` sensor rows over `nodes` nodes, at most `cap` per node.
std::vector<int> spread_rows(std::mt19937_64& rng, int nodes, int total, int cap) {
    std::vector<int> counts(nodes, 0);
    std::uniform_int_distribution<int> pick(0, nodes - 1);
    int placed = 0;
    while (placed < total) {
        const int i = pick(rng);
        if (counts[i] < cap) {
            ++counts[i];
            ++placed;
        }
    }
    return counts;
}

}  // namespace

SystemModel random_pencil_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_dist(2, 6);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int n = n_dist(rng);

    Matrix a;
    if (u01(rng) < 0.35) {
        // Schur-stable plant: the unstable eigenvalue set is empty, which
        // is exactly where a naive point evaluation would have nothing to
        // check.
        const Matrix g = gaussian(rng, n, n);
        const double radius = distfobs::spectral_radius(g);
        a = g * ((0.3 + 0.5 * u01(rng)) / std::max(radius, 1e-9));
    } else {
        const Matrix q = random_orthogonal(rng, n);
        Matrix t = lower_with_spectrum(rng, n);
        // Push a couple of modes clearly outside the unit circle.
        for (int i = 0; i < n; ++i)
            if (u01(rng) < 0.4) t(i, i) = (u01(rng) < 0.5 ? 1.0 : -1.0) * (1.1 + u01(rng));
        a = q.transpose() * t * q;
    }

    std::uniform_int_distribution<int> q_dist(1, std::max(1, (2 * n) / 3));
    const int q_rows = q_dist(rng);
    Matrix c = gaussian(rng, q_rows, n);

    Matrix l;
    const double shape = u01(rng);
    if (shape < 0.5) {
        l = gaussian(rng, (u01(rng) < 0.7 ? 1 : 2), n);
    } else if (shape < 0.8) {
        // L inside the row space of [C; CA]: makes the constant-rank
        // condition true by construction.
        Matrix pool(2 * q_rows, n);
        pool << c, c * a;
        l = gaussian(rng, 1, 2 * q_rows) * pool;
    } else {
        // Degenerate: L literally one of the measurement-derived rows.
        std::uniform_int_distribution<int> row(0, q_rows - 1);
        l = (u01(rng) < 0.5) ? Matrix(c.row(row(rng)))
                             : Matrix((c * a).row(row(rng)));
        if (l.cwiseAbs().maxCoeff() < 1e-9) l = gaussian(rng, 1, n);
    }

    SystemModel m{a, {}, l, random_strong_digraph(rng, 3, 0.2)};
    const auto counts = spread_rows(rng, 3, q_rows, q_rows);
    int next = 0;
    for (int i = 0; i < 3; ++i) {
        Matrix ci(counts[i], n);
        for (int k = 0; k < counts[i]; ++k) ci.row(k) = c.row(next++);
        m.sensors.push_back(ci);
    }
    return m;
}

SystemModel random_selection_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_dist(2, 8);
    std::uniform_int_distribution<int> node_dist(2, 5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    for (int attempt = 0; attempt < 100; ++attempt) {
        const int n = n_dist(rng);
        const int nodes = node_dist(rng);
        const int r = (u01(rng) < 0.7 || n < 3) ? 1 : 2;

        Matrix a, l;
        int span_dim = 0;
        Matrix span_basis;  // rows span an A^T-invariant subspace
        const bool structured = u01(rng) < 0.5;
        if (structured) {
            std::uniform_int_distribution<int> k_dist(r, std::min(n, r + 3));
            span_dim = k_dist(rng);
            const Matrix q = random_orthogonal(rng, n);
            Matrix lam = lower_with_spectrum(rng, n);
            lam.topRightCorner(span_dim, n - span_dim).setZero();
            a = q.transpose() * lam * q;
            span_basis = q.topRows(span_dim);
            l = gaussian(rng, r, span_dim) * span_basis;
        } else {
            const Matrix q = random_orthogonal(rng, n);
            a = q.transpose() * lower_with_spectrum(rng, n) * q;
            l = gaussian(rng, r, n);
        }
        if (distfobs::numerical_rank(l) < r) continue;

        std::uniform_int_distribution<int> total_dist(1, std::min(2 * nodes, n + 2));
        const int total = total_dist(rng);
        const auto counts = spread_rows(rng, nodes, total, 2);

        SystemModel m{a, {}, l, random_strong_digraph(rng, nodes, 0.3)};
        for (int i = 0; i < nodes; ++i) {
            Matrix ci(counts[i], n);
            for (int k = 0; k < counts[i]; ++k) {
                if (structured && u01(rng) < 0.7)
                    ci.row(k) = gaussian(rng, 1, span_dim) * span_basis;
                else
                    ci.row(k) = gaussian(rng, 1, n);
            }
            m.sensors.push_back(ci);
        }
        return m;
    }
    throw std::runtime_error("instance generator failed to produce a model");
}

}  // namespace testsup

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "distfobs/numkit.hpp"
#include "support/instance_gen.hpp"
#include "support/models.hpp"

using namespace distfobs;

TEST_CASE("numerical_rank on exact and near-deficient matrices") {
    CHECK(numerical_rank(Matrix(Matrix::Identity(3, 3))) == 3);

    // Row stack [x1'; measurement rows; L] for the 3-state fixture after
    // picking only the first sensor row: rank collapses to 2.
    Matrix stack(4, 3);
    stack << 0, 2, 0, 3, 0, 0, 1, 0, 0, 0, 1, 0;
    CHECK(numerical_rank(stack) == 2);

    Matrix near(2, 2);
    near << 1.0, 1.0, 1.0, 1.0 + 1e-16;
    CHECK(numerical_rank(near) == 1);

    CHECK(numerical_rank(Matrix(Matrix::Zero(4, 2))) == 0);
}

TEST_CASE("numerical_rank honours an explicit cutoff") {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, 1e-6;
    CHECK(numerical_rank(m) == 2);
    ToleranceConfig coarse;
    coarse.rank_tol = 1e-4;
    CHECK(numerical_rank(m, coarse) == 1);
}

TEST_CASE("pseudo_inverse basics") {
    CHECK(testsup::max_abs_diff(pseudo_inverse(Matrix::Identity(3, 3)),
                                Matrix::Identity(3, 3)) < 1e-12);

    Matrix sigma(2, 3);
    sigma << 1, 0, 0, 0, 1, 0;
    CHECK(testsup::max_abs_diff(pseudo_inverse(sigma), sigma.transpose()) < 1e-12);

    Matrix d(2, 2);
    d << 2, 0, 0, 0;
    Matrix expected(2, 2);
    expected << 0.5, 0, 0, 0;
    CHECK(testsup::max_abs_diff(pseudo_inverse(d), expected) < 1e-12);
}

TEST_CASE("pseudo_inverse satisfies the Penrose identities on random matrices") {
    std::mt19937_64 rng(7u);
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 5);
        const int cols = 1 + static_cast<int>(rng() % 5);
        const Matrix m = testsup::gaussian(rng, rows, cols);
        const Matrix p = pseudo_inverse(m);
        CHECK(testsup::max_abs_diff(m * p * m, m) < 1e-8);
        CHECK(testsup::max_abs_diff(p * m * p, p) < 1e-8);
        CHECK(testsup::max_abs_diff((m * p).transpose(), m * p) < 1e-8);
        CHECK(testsup::max_abs_diff((p * m).transpose(), p * m) < 1e-8);
    }
}

TEST_CASE("rank is transpose invariant on random matrices") {
    std::mt19937_64 rng(11u);
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 6);
        const int cols = 1 + static_cast<int>(rng() % 6);
        Matrix m = testsup::gaussian(rng, rows, cols);
        if (trial % 3 == 0 && rows > 1) m.row(rows - 1) = m.row(0);  // force deficiency
        CHECK(numerical_rank(m) == numerical_rank(Matrix(m.transpose())));
    }
}

TEST_CASE("orthonormal_nullspace_basis") {
    Matrix sigma(2, 3);
    sigma << 1, 0, 0, 0, 1, 0;
    const Matrix b = orthonormal_nullspace_basis(sigma);
    REQUIRE(b.rows() == 1);
    Matrix e3(1, 3);
    e3 << 0, 0, 1;
    CHECK(testsup::max_abs_diff(b, e3) < 1e-12);

    CHECK(orthonormal_nullspace_basis(Matrix::Identity(4, 4)).rows() == 0);

    Matrix row(1, 2);
    row << 1, 1;
    const Matrix nb = orthonormal_nullspace_basis(row);
    REQUIRE(nb.rows() == 1);
    const double s = 1.0 / std::sqrt(2.0);
    Matrix expected(1, 2);
    expected << s, -s;
    CHECK(testsup::max_abs_diff(nb, expected) < 1e-12);
}

TEST_CASE("nullspace basis annihilates and is orthonormal (random)") {
    std::mt19937_64 rng(13u);
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 4);
        const int cols = 2 + static_cast<int>(rng() % 5);
        const Matrix m = testsup::gaussian(rng, rows, cols);
        const Matrix b = orthonormal_nullspace_basis(m);
        CHECK(b.rows() == cols - numerical_rank(m));
        if (b.rows() > 0) {
            CHECK((m * b.transpose()).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(testsup::max_abs_diff(b * b.transpose(),
                                        Matrix::Identity(b.rows(), b.rows())) < 1e-10);
        }
    }
}

TEST_CASE("eigenvalues") {
    Matrix a(2, 2);
    a << 0.5, 2.0, 0.0, 3.0;
    auto ev = eigenvalues(a);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].real() == doctest::Approx(0.5));
    CHECK(ev[1].real() == doctest::Approx(3.0));
    CHECK(std::abs(ev[0].imag()) < 1e-12);
    CHECK(std::abs(ev[1].imag()) < 1e-12);

    Matrix b(2, 2);
    b << 0, 2, 3, 0;
    ev = eigenvalues(b);
    const double root = std::sqrt(6.0);
    CHECK(ev[0].real() == doctest::Approx(-root));
    CHECK(ev[1].real() == doctest::Approx(root));

    ev = eigenvalues(Matrix::Zero(2, 2));
    CHECK(ev[0] == std::complex<double>(0.0, 0.0));
    CHECK(ev[1] == std::complex<double>(0.0, 0.0));

    CHECK_THROWS_AS(eigenvalues(Matrix::Zero(2, 3)), SquareRequired);
}

TEST_CASE("eigenvalues of triangular matrices match the diagonal") {
    std::mt19937_64 rng(17u);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        Matrix t = testsup::gaussian(rng, n, n);
        t = t.triangularView<Eigen::Lower>();
        auto ev = eigenvalues(t);
        std::vector<double> diag;
        for (int i = 0; i < n; ++i) diag.push_back(t(i, i));
        std::sort(diag.begin(), diag.end());
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(ev[i].imag()) < 1e-8);
            CHECK(ev[i].real() == doctest::Approx(diag[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("is_schur_stable") {
    Matrix half(1, 1);
    half << 0.5;
    CHECK(is_schur_stable(half));

    Matrix a(2, 2);
    a << 0.5, 2.0, 0.0, 3.0;
    CHECK_FALSE(is_schur_stable(a));

    Matrix nil(2, 2);
    nil << 0, 0, 1, 0;
    CHECK(is_schur_stable(nil));

    CHECK(is_schur_stable(Matrix(0, 0)));  // vacuous
    CHECK_THROWS_AS(is_schur_stable(Matrix::Zero(1, 2)), SquareRequired);
}

TEST_CASE("row_space_contains") {
    Matrix any(1, 2);
    any << 3.0, -4.0;
    CHECK(row_space_contains(Matrix::Identity(2, 2), any));

    Matrix sigma(2, 3);
    sigma << 1, 0, 0, 0, 1, 0;
    Matrix inside(1, 3);
    inside << 0, 1, 0;
    CHECK(row_space_contains(sigma, inside));

    Matrix l(1, 3), la(1, 3);
    l << 1, 0, 0;
    la << 0, 2, 0;
    CHECK_FALSE(row_space_contains(l, la));

    CHECK_THROWS_AS(row_space_contains(sigma, Matrix::Zero(1, 2)), DimensionMismatch);
}

TEST_CASE("vstack tolerates zero-row blocks") {
    Matrix top(1, 2), bottom(1, 2);
    top << 1, 2;
    bottom << 3, 4;
    const Matrix out = vstack({top, Matrix(0, 2), bottom});
    REQUIRE(out.rows() == 2);
    CHECK(out(0, 1) == 2.0);
    CHECK(out(1, 0) == 3.0);
}

TEST_CASE("spectral_radius and finiteness helpers") {
    Matrix a(2, 2);
    a << 0.5, 2.0, 0.0, 3.0;
    CHECK(spectral_radius(a) == doctest::Approx(3.0));
    CHECK(spectral_radius(Matrix(0, 0)) == 0.0);

    CHECK(has_finite_entries(a));
    a(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(has_finite_entries(a));
}

#include "lsbd/pca.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <random>
#include <stdexcept>

using namespace lsbd;

TEST_CASE("top eigenpairs agree with Jacobi iteration on random symmetric matrices") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 2 + trial % 9;
        const Matrix b = oracle::random_matrix(n, n, rng);
        const Matrix sym = b * b.transpose();
        const int count = 1 + static_cast<int>(trial % n);
        const EigenPairs got = top_eigenpairs(sym, count);
        const auto [values, vectors] = oracle::jacobi_eigen(sym);

        REQUIRE(got.values.size() == count);
        for (int i = 0; i < count; ++i) {
            CHECK(got.values(i) == doctest::Approx(values(i)).epsilon(1e-10));
            CHECK(std::abs(std::abs(got.vectors.col(i).dot(vectors.col(i))) - 1.0) < 1e-8);
            Eigen::Index top = 0;
            got.vectors.col(i).cwiseAbs().maxCoeff(&top);
            CHECK(got.vectors(top, i) > 0.0);
            if (i > 0) CHECK(got.values(i - 1) >= got.values(i));
        }
        CHECK((got.vectors.transpose() * got.vectors - Matrix::Identity(count, count)).norm() < 1e-10);
    }
}

TEST_CASE("degenerate eigenspaces get a basis that depends only on the span") {
    std::mt19937_64 rng(8);
    const Matrix q = Eigen::HouseholderQR<Matrix>(oracle::random_matrix(5, 5, rng)).householderQ();
    Vector d(5);
    d << 3.0, 2.0, 2.0, 0.5, 0.1;
    const Matrix sym = q * d.asDiagonal() * q.transpose();

    const EigenPairs ref = top_eigenpairs(sym, 3);
    for (int trial = 0; trial < 10; ++trial) {
        // Rotate the basis inside the 2-dimensional eigenspace; the matrix is unchanged in exact arithmetic.
        const double a = 0.3 * trial + 0.1;
        Matrix rot = Matrix::Identity(5, 5);
        rot.block<2, 2>(1, 1) << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        const Matrix q2 = q * rot;
        const Matrix sym2 = q2 * d.asDiagonal() * q2.transpose();
        const EigenPairs got = top_eigenpairs(sym2, 3);
        CHECK((got.vectors - ref.vectors).cwiseAbs().maxCoeff() < 1e-8);
    }

    // The canonical basis of span(e0, e1) is (e0, e1).
    Matrix diag = Matrix::Zero(4, 4);
    diag.diagonal() << 1.0, 1.0, 0.0, 0.0;
    const EigenPairs axes = top_eigenpairs(diag, 2);
    CHECK((axes.vectors - Matrix::Identity(4, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("top_eigenpairs rejects bad requests") {
    const Matrix sym = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(top_eigenpairs(sym, 0), std::invalid_argument);
    CHECK_THROWS_AS(top_eigenpairs(sym, 4), std::invalid_argument);
    CHECK_THROWS_AS(top_eigenpairs(Matrix::Zero(2, 3), 1), std::invalid_argument);
    Matrix bad = sym;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(top_eigenpairs(bad, 1), std::invalid_argument);
}

TEST_CASE("population covariance divides by N") {
    Matrix x(4, 2);
    x << 1, 0, -1, 0, 0, 2, 0, -2;
    const Matrix c = population_covariance(x);
    CHECK(c(0, 0) == doctest::Approx(0.5));
    CHECK(c(1, 1) == doctest::Approx(2.0));
    CHECK(c(0, 1) == doctest::Approx(0.0));
}

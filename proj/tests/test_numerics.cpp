#include <cmath>
#include <limits>
#include <sstream>

#include "helpers.hpp"

using namespace fi;
using fi::test::random_matrix;
using fi::test::thrown_kind;

TEST_SUITE("numerics") {

TEST_CASE("svd of the identity and of diag(2, 0)") {
    const SvdResult id = svd(CMatrix::Identity(3, 3));
    CHECK((id.singular_values - RVector::Ones(3)).norm() <= 1e-14);

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    const RVector s = singular_values(d);
    CHECK(s(0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(s(1)) <= 1e-15);
}

TEST_CASE("svd reconstructs a random 8x5 matrix with orthonormal factors") {
    const CMatrix a = random_matrix(8, 5, 7);
    const SvdResult s = svd(a);
    const double smax = s.singular_values(0);
    CHECK((a - reconstruct(s, 8, 5)).norm() <= 1e-10 * smax);
    CHECK((s.left_basis.adjoint() * s.left_basis - CMatrix::Identity(8, 8)).norm() <= 1e-10);
    CHECK((s.right_basis.adjoint() * s.right_basis - CMatrix::Identity(5, 5)).norm() <= 1e-10);
    for (Eigen::Index i = 1; i < s.singular_values.size(); ++i)
        CHECK(s.singular_values(i) <= s.singular_values(i - 1));
    // Independent oracle: Eigen's own Jacobi SVD.
    Eigen::JacobiSVD<CMatrix> ref(a);
    CHECK((s.singular_values - ref.singularValues()).norm() <= 1e-12 * smax);
}

TEST_CASE("svd is deterministic and rejects non-finite input") {
    const CMatrix a = random_matrix(6, 6, 3);
    const SvdResult s1 = svd(a), s2 = svd(a);
    CHECK(s1.singular_values == s2.singular_values);
    CHECK(s1.left_basis == s2.left_basis);

    CMatrix bad = a;
    bad(2, 3) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK(thrown_kind([&] { svd(bad); }) == ErrorKind::InvalidMatrix);
    bad(2, 3) = Complex(std::numeric_limits<double>::infinity(), 0.0);
    CHECK(thrown_kind([&] { svd(bad); }) == ErrorKind::InvalidMatrix);
    CHECK(thrown_kind([&] { svd(CMatrix(0, 0)); }) == ErrorKind::InvalidMatrix);
}

TEST_CASE("reconstruction residual property over shapes and ranks") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const Eigen::Index r = 2 + static_cast<Eigen::Index>(seed % 5), c = 1 + static_cast<Eigen::Index>(seed % 7);
        CMatrix a = random_matrix(r, c, seed);
        if (seed % 3 == 0 && c > 1) a.col(0) = a.col(c - 1) * Complex(0.5, -2.0);  // rank deficient
        const SvdResult s = svd(a);
        CHECK((a - reconstruct(s, r, c)).norm() <= 1e-10 * s.singular_values(0));
    }
}

TEST_CASE("eigh on small Hermitian matrices") {
    const EighResult e1 = eigh(CMatrix::Identity(2, 2));
    CHECK((e1.eigenvalues - RVector::Ones(2)).norm() <= 1e-14);

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 1.0;
    const EighResult e2 = eigh(d);
    CHECK(e2.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(e2.eigenvalues(1) == doctest::Approx(4.0));

    // Gram of {e1, e1 + e2}; roots of x^2 - 3x + 1.
    CMatrix g(2, 2);
    g << 1.0, 1.0, 1.0, 2.0;
    const EighResult e3 = eigh(g);
    CHECK(std::abs(e3.eigenvalues(0) - (3.0 - std::sqrt(5.0)) / 2.0) <= 1e-14);
    CHECK(std::abs(e3.eigenvalues(1) - (3.0 + std::sqrt(5.0)) / 2.0) <= 1e-14);
    for (Eigen::Index i = 0; i < 2; ++i)
        CHECK((g * e3.eigenvectors.col(i) - e3.eigenvalues(i) * e3.eigenvectors.col(i)).norm() <= 1e-9 * 3.0);
}

TEST_CASE("eigh rejects non-Hermitian input") {
    CMatrix a(2, 2);
    a << 1.0, 2.0, 0.0, 1.0;
    CHECK(thrown_kind([&] { eigh(a); }) == ErrorKind::NotHermitian);
}

TEST_CASE("eigh of Gram matrices is nonnegative and satisfies Av = lambda v") {
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        const CMatrix f = random_matrix(5, 9, seed);  // 9 vectors in C^5: rank-deficient Gram
        const CMatrix g = f.adjoint() * f;
        const EighResult e = eigh(g);
        const double smax = e.eigenvalues.maxCoeff();
        CHECK(e.eigenvalues.minCoeff() >= -1e-10 * smax);
        for (Eigen::Index i = 1; i < e.eigenvalues.size(); ++i) CHECK(e.eigenvalues(i) >= e.eigenvalues(i - 1));
        CHECK((g * e.eigenvectors - e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal()).norm() <=
              1e-9 * opnorm(g) * 3.0);
    }
}

TEST_CASE("lstsq examples") {
    const CMatrix b = random_matrix(4, 2, 5);
    CHECK((lstsq(CMatrix::Identity(4, 4), b) - b).norm() <= 1e-14);

    CMatrix a(2, 1);
    a << 1.0, 1.0;
    CMatrix rhs(2, 1);
    rhs << 0.0, 2.0;
    const CMatrix x = lstsq(a, rhs);
    CHECK(std::abs(x(0, 0) - 1.0) <= 1e-14);

    CHECK(thrown_kind([&] { lstsq(CMatrix::Identity(3, 3), CMatrix::Ones(2, 1)); }) == ErrorKind::ShapeError);
}

TEST_CASE("lstsq returns the minimum-norm exact solution of a rank-deficient system") {
    CMatrix a = random_matrix(6, 4, 11);
    a.col(3) = a.col(0) + a.col(1);
    const CVector truth = random_matrix(4, 1, 12);
    const CVector b = a * truth;
    const CVector x = lstsq(a, b);
    CHECK((a * x - b).norm() <= 1e-10 * b.norm());
    const CMatrix n = null_basis(a);
    REQUIRE(n.cols() == 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const CVector other = x + n * random_matrix(1, 1, 100 + seed);
        CHECK(x.norm() <= other.norm() + 1e-12);
    }
}

TEST_CASE("lstsq residual is orthogonal to the column space") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        const CMatrix a = random_matrix(7, 3, seed);
        const CMatrix b = random_matrix(7, 2, seed + 1000);
        const CMatrix x = lstsq(a, b);
        CHECK((a.adjoint() * (a * x - b)).norm() <= 1e-8 * opnorm(a) * b.norm());
    }
}

TEST_CASE("opnorm of unitary, diagonal and random matrices") {
    CHECK(std::abs(opnorm(fi::test::random_unitary(6, 2)) - 1.0) <= 1e-10);
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    CHECK(opnorm(d) == doctest::Approx(3.0).epsilon(1e-14));
    const CMatrix a = random_matrix(5, 3, 77);
    Eigen::JacobiSVD<CMatrix> ref(a);
    CHECK(std::abs(opnorm(a) - ref.singularValues()(0)) <= 1e-12 * ref.singularValues()(0));
    CHECK(opnorm(CMatrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("rank tolerance, pinv, range and null bases") {
    CHECK(rank_tolerance(4, 6, 2.0) == doctest::Approx(6 * std::numeric_limits<double>::epsilon() * 2.0));
    CHECK(rank_tolerance(4, 6, 2.0, 3.0) == doctest::Approx(18 * std::numeric_limits<double>::epsilon() * 2.0));

    CMatrix a = random_matrix(5, 4, 9);
    a.col(2) = 2.0 * a.col(1);
    const CMatrix p = pinv(a);
    CHECK((a * p * a - a).norm() <= 1e-10 * a.norm());
    CHECK((p * a * p - p).norm() <= 1e-10 * p.norm());
    CHECK(range_basis(a).cols() == 3);
    const CMatrix n = null_basis(a);
    CHECK(n.cols() == 1);
    CHECK((a * n).norm() <= 1e-12 * a.norm());
    CHECK((n.adjoint() * n - CMatrix::Identity(1, 1)).norm() <= 1e-12);
}

TEST_CASE("principal angles") {
    const CMatrix q = fi::test::random_unitary(4, 3);
    CHECK(max_principal_angle(q.leftCols(2), q.leftCols(2)) <= 1e-7);
    CHECK(std::abs(max_principal_angle(q.leftCols(1), q.col(1)) - M_PI / 2) <= 1e-12);
}

TEST_CASE("complex CSV round trip") {
    CHECK(parse_complex("1.5-2i") == Complex(1.5, -2.0));
    CHECK(parse_complex("-3") == Complex(-3.0, 0.0));
    CHECK(parse_complex("1e-3+4.25i") == Complex(1e-3, 4.25));
    const CMatrix a = random_matrix(3, 4, 8);
    std::stringstream s;
    write_csv(s, a);
    const CMatrix b = read_csv(s);
    REQUIRE(b.rows() == 3);
    REQUIRE(b.cols() == 4);
    CHECK((a - b).norm() == 0.0);
}

}  // TEST_SUITE

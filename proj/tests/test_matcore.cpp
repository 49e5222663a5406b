#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nhdm/matcore.hpp"
#include "nhdm/serialize.hpp"

using namespace nhdm;
using Catch::Approx;

namespace {

CMatrix random_matrix(std::mt19937& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = cplx(unif(rng), unif(rng));
    return m;
}

}  // namespace

TEST_CASE("eig closed form n=2") {
    CMatrix a(2, 2);
    a << cplx(0, 1), 0.5, 0.5, cplx(0, -1);
    const Spectrum s = eig(a);
    // mu = +/- i sqrt(3)/2
    REQUIRE(s.eigenvalues(0).imag() == Approx(-std::sqrt(0.75)).margin(1e-12));
    REQUIRE(s.eigenvalues(1).imag() == Approx(std::sqrt(0.75)).margin(1e-12));
    REQUIRE_FALSE(s.defect_flag);
    for (int j = 0; j < 2; ++j) {
        const CVector v = s.right_eigenvectors.col(j);
        REQUIRE((a * v - s.eigenvalues(j) * v).norm() < 1e-12);
        REQUIRE(v.norm() == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("eig closed form n=3 and exact triple root") {
    CMatrix a(3, 3);
    a << 2, 1, 0, 0, 2, 1, 0, 0, 2;  // Jordan block: defective
    const Spectrum s = eig(a);
    for (int j = 0; j < 3; ++j)
        REQUIRE(std::abs(s.eigenvalues(j) - cplx(2, 0)) < 1e-12);
    REQUIRE(s.defect_flag);
}

TEST_CASE("eig matches characteristic polynomial on random draws") {
    std::mt19937 rng(11u);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 2 + trial % 7;  // 2..8
        const CMatrix a = random_matrix(rng, n);
        const Spectrum s = eig(a);
        cplx tr_sum(0, 0);
        for (Eigen::Index j = 0; j < n; ++j) tr_sum += s.eigenvalues(j);
        REQUIRE(std::abs(tr_sum - a.trace()) < 1e-9);
        if (!s.defect_flag) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const CVector v = s.right_eigenvectors.col(j);
                REQUIRE((a * v - s.eigenvalues(j) * v).norm() < 1e-8);
            }
        }
    }
}

TEST_CASE("eig sorts by real then imaginary part") {
    std::mt19937 rng(5u);
    const CMatrix a = random_matrix(rng, 6);
    const Spectrum s = eig(a);
    for (Eigen::Index j = 1; j < 6; ++j) {
        const cplx prev = s.eigenvalues(j - 1), cur = s.eigenvalues(j);
        REQUIRE((prev.real() < cur.real() ||
                 (prev.real() == cur.real() && prev.imag() <= cur.imag())));
    }
}

TEST_CASE("mat_inverse round trip and singular rejection") {
    std::mt19937 rng(3u);
    const CMatrix a = random_matrix(rng, 4);
    const CMatrix inv = mat_inverse(a);
    REQUIRE(operator_norm(a * inv - CMatrix::Identity(4, 4)) < 1e-10);

    CMatrix sing(2, 2);
    sing << 1, 2, 2, 4;
    REQUIRE_THROWS_AS(mat_inverse(sing), SingularMatrixError);
}

TEST_CASE("mat_function reproduces exp and log") {
    CMatrix a(2, 2);
    a << 1, 0.3, 0.2, 2;
    const CMatrix e = mat_function(a, [](cplx z) { return std::exp(z); });
    const CMatrix back = mat_function(e, [](cplx z) { return std::log(z); });
    REQUIRE(operator_norm(back - a) < 1e-10);

    // f(A) commutes with A
    REQUIRE(operator_norm(e * a - a * e) < 1e-10);
}

TEST_CASE("mat_function rejects defective input") {
    CMatrix jordan(2, 2);
    jordan << 1, 1, 0, 1;
    REQUIRE_THROWS_AS(mat_function(jordan, [](cplx z) { return z; }),
                      DefectiveMatrixError);
}

TEST_CASE("is_positive_semidefinite") {
    CMatrix good(2, 2);
    good << 0.4, 0.2, 0.2, 0.6;
    REQUIRE(is_positive_semidefinite(good));

    CMatrix indef(2, 2);
    indef << 1, 2, 2, 1;
    REQUIRE_FALSE(is_positive_semidefinite(indef));

    CMatrix nonherm(2, 2);
    nonherm << 1, cplx(0, 1), 0, 1;
    REQUIRE_FALSE(is_positive_semidefinite(nonherm));
}

TEST_CASE("trace cyclicity") {
    std::mt19937 rng(9u);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix a = random_matrix(rng, 4), b = random_matrix(rng, 4);
        REQUIRE(std::abs((a * b).trace() - (b * a).trace()) < 1e-12);
    }
}

TEST_CASE("operator norm basics") {
    CMatrix u(2, 2);
    u << 0, 1, -1, 0;
    REQUIRE(operator_norm(u) == Approx(1.0).margin(1e-14));
    REQUIRE(operator_norm(3.0 * u) == Approx(3.0).margin(1e-13));
}

TEST_CASE("complex matrix round trip through text") {
    std::mt19937 rng(17u);
    const CMatrix a = random_matrix(rng, 3);
    const CMatrix back = parse_matrix(format_matrix(a));
    REQUIRE(operator_norm(back - a) < 1e-15);

    REQUIRE(parse_complex("1") == cplx(1, 0));
    REQUIRE(parse_complex("-2.5i") == cplx(0, -2.5));
    REQUIRE(parse_complex("1e-3+4i") == cplx(1e-3, 4));
    REQUIRE_THROWS_AS(parse_complex("bogus"), ParseError);
    REQUIRE_THROWS_AS(parse_matrix("1 2\n3\n"), DimensionError);
}

TEST_CASE("tolerance validation") {
    Tolerances t;
    t.eq_tol = -1;
    REQUIRE_THROWS_AS(t.validate(), DomainError);
    REQUIRE_THROWS_AS(eig(CMatrix::Zero(0, 0)), DimensionError);
}

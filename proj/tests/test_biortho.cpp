#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nhdm/biortho.hpp"

using namespace nhdm;
using Catch::Approx;

namespace {

CMatrix random_invertible(std::mt19937& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (;;) {
        CMatrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = cplx(unif(rng), unif(rng));
        Eigen::JacobiSVD<CMatrix> svd(m);
        if (svd.singularValues()(n - 1) > 1e-2) return m;
    }
}

}  // namespace

TEST_CASE("property PI equals invertibility in finite dimension") {
    std::mt19937 rng(23u);
    for (int trial = 0; trial < 30; ++trial) {
        const CMatrix r = random_invertible(rng, 2 + trial % 4);
        const DeformationOp op = make_deformation(r);
        REQUIRE(op.invertible);
        REQUIRE(op.pi_holds);
    }

    CMatrix sing(3, 3);
    sing << 1, 1, 0, 2, 2, 0, 0, 0, 1;
    const DeformationOp op = make_deformation(sing);
    REQUIRE_FALSE(op.invertible);
    REQUIRE_FALSE(op.pi_holds);
    REQUIRE_FALSE(has_property_pi(CMatrix::Zero(2, 2)));
}

TEST_CASE("riesz pair is biorthonormal and resolves the identity") {
    std::mt19937 rng(31u);
    const Eigen::Index n = 4;
    const DeformationOp op = make_deformation(random_invertible(rng, n));
    const BiorthogonalSystem sys = riesz_pair_from(op, canonical_onb(n));
    REQUIRE(sys.span_dim == n);

    CMatrix resolution = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx ip = sys.phis[i].dot(sys.psis[j]);
            REQUIRE(std::abs(ip - (i == j ? cplx(1, 0) : cplx(0, 0))) < 1e-10);
        }
        resolution += sys.phis[i] * sys.psis[i].adjoint();
    }
    REQUIRE(operator_norm(resolution - CMatrix::Identity(n, n)) < 1e-10);
}

TEST_CASE("riesz pair rejects singular R") {
    CMatrix sing(2, 2);
    sing << 1, 2, 2, 4;
    REQUIRE_THROWS_AS(riesz_pair_from(make_deformation(sing), canonical_onb(2)),
                      SingularMatrixError);
}

TEST_CASE("gdm duals agree with the riesz duals for invertible R") {
    std::mt19937 rng(41u);
    const Eigen::Index n = 3;
    const DeformationOp op = make_deformation(random_invertible(rng, n));
    const BiorthogonalSystem a = riesz_pair_from(op, canonical_onb(n));
    const BiorthogonalSystem b = gdm_duals(op, canonical_onb(n));
    for (Eigen::Index j = 0; j < n; ++j)
        REQUIRE((a.psis[j] - b.psis[j]).norm() < 1e-9);
}

TEST_CASE("gdm duals require property PI") {
    CMatrix sing(2, 2);
    sing << 1, 1, 1, 1;
    REQUIRE_THROWS_AS(gdm_duals(make_deformation(sing), canonical_onb(2)),
                      PropertyPIError);
}

TEST_CASE("intertwines measures the similarity residual") {
    std::mt19937 rng(43u);
    const Eigen::Index n = 3;
    const CMatrix r = random_invertible(rng, n);
    CMatrix b = CMatrix::Zero(n, n);
    b.diagonal() << 0.2, 0.3, 0.5;
    const CMatrix a = r * b * mat_inverse(r);
    auto [ok, residual] = intertwines(a, r, b);
    REQUIRE(ok);
    REQUIRE(residual < 1e-12);

    auto [bad, res2] = intertwines(a + CMatrix::Identity(n, n), r, b);
    REQUIRE_FALSE(bad);
    REQUIRE(res2 > 0.1);
}

TEST_CASE("basis_expand recovers coefficients") {
    std::mt19937 rng(47u);
    const Eigen::Index n = 4;
    const DeformationOp op = make_deformation(random_invertible(rng, n));
    const BiorthogonalSystem sys = riesz_pair_from(op, canonical_onb(n));
    CVector target = CVector::Zero(n);
    CVector want(n);
    want << cplx(1, 0), cplx(0, -2), cplx(0.5, 0.5), cplx(-1, 0);
    for (Eigen::Index j = 0; j < n; ++j) target += want(j) * sys.phis[j];
    const CVector got = basis_expand(sys, target);
    REQUIRE((got - want).norm() < 1e-9);
}

TEST_CASE("basis_expand rejects vectors outside the span") {
    BiorthogonalSystem sys;
    sys.dim = 3;
    sys.span_dim = 1;
    CVector phi = CVector::Unit(3, 0), psi = CVector::Unit(3, 0);
    sys.phis = {phi};
    sys.psis = {psi};
    CVector f(3);
    f << 1, 1, 0;
    REQUIRE_THROWS_AS(basis_expand(sys, f), SpanError);
}

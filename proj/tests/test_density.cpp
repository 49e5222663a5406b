#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "nhdm/density.hpp"

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

DensityMatrix random_dm(std::mt19937& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    const CMatrix g = random_invertible(rng, n);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(g + g.adjoint());
    CVector lam(n);
    double z = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        lam(k) = unif(rng);
        z += lam(k).real();
    }
    lam /= z;
    CMatrix m = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    return dm_new((m + m.adjoint()) / 2.0);
}

}  // namespace

TEST_CASE("dm_new validates positivity and trace") {
    CMatrix good(2, 2);
    good << 0.4, 0.2, 0.2, 0.6;
    const DensityMatrix dm = dm_new(good);
    REQUIRE(dm.lambdas[0] >= dm.lambdas[1]);
    REQUIRE(dm.lambdas[0] + dm.lambdas[1] == Approx(1.0).margin(1e-12));

    CMatrix indef(2, 2);
    indef << 1.5, 1, 1, -0.5;
    REQUIRE_THROWS_AS(dm_new(indef), NotPSDError);

    CMatrix off(2, 2);
    off << 0.5, 0, 0, 0.6;
    REQUIRE_THROWS_AS(dm_new(off), TraceNotOneError);
}

TEST_CASE("rdm preserves spectrum, trace and entropy but not positivity") {
    CMatrix r(2, 2), rho0m(2, 2);
    r << 1, 2, 1, 3;
    rho0m << 0.4, 0.2, 0.2, 0.6;
    const RieszDM rdm = rdm_new(make_deformation(r), dm_new(rho0m));

    CMatrix expected(2, 2);
    expected << 1, -0.2, 1, 0;
    REQUIRE(operator_norm(rdm.mat - expected) < 1e-13);
    REQUIRE(std::abs(rdm.mat.trace() - cplx(1, 0)) < 1e-13);
    REQUIRE_FALSE(is_positive_semidefinite(rdm.mat));

    // similar matrices share eigenvalues, purity and entropy trace
    const Spectrum s = eig(rdm.mat);
    REQUIRE(std::abs(s.eigenvalues(0) - cplx(rdm.base.lambdas[1], 0)) < 1e-9);
    REQUIRE(std::abs(s.eigenvalues(1) - cplx(rdm.base.lambdas[0], 0)) < 1e-9);
    REQUIRE(purity(rdm) == Approx(purity(rdm.base)).margin(1e-10));
    REQUIRE(entropy_trace(rdm) == Approx(entropy_trace(rdm.base)).margin(1e-12));
}

TEST_CASE("rdm_wrap accepts the exact closed form and rejects others") {
    std::mt19937 rng(53u);
    const DeformationOp r = make_deformation(random_invertible(rng, 3));
    const DensityMatrix rho0 = random_dm(rng, 3);
    const CMatrix mat = r.R * rho0.mat * mat_inverse(r.R);
    const RieszDM rdm = rdm_wrap(mat, r, rho0);
    REQUIRE(operator_norm(rdm.mat - mat) == 0.0);
    REQUIRE_THROWS_AS(rdm_wrap(mat + 0.01 * CMatrix::Identity(3, 3), r, rho0),
                      IntertwiningViolation);
}

TEST_CASE("entropy operator of a DM is -rho log rho") {
    CMatrix m = CMatrix::Zero(2, 2);
    m.diagonal() << 0.25, 0.75;
    const DensityMatrix dm = dm_new(m);
    const CMatrix s = entropy_operator(dm).mat;
    REQUIRE(s(0, 0).real() == Approx(-0.25 * std::log(0.25)).margin(1e-14));
    REQUIRE(s(1, 1).real() == Approx(-0.75 * std::log(0.75)).margin(1e-14));
    REQUIRE(std::abs(s(0, 1)) < 1e-14);

    // 0 log 0 = 0: the pure projector has a vanishing entropy operator
    CMatrix pure = CMatrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    REQUIRE(operator_norm(entropy_operator(dm_new(pure)).mat) < 1e-14);
}

TEST_CASE("riesz entropy operator intertwines by similarity") {
    std::mt19937 rng(59u);
    const DeformationOp r = make_deformation(random_invertible(rng, 3));
    const DensityMatrix rho0 = random_dm(rng, 3);
    const RieszDM rdm = rdm_new(r, rho0);
    const CMatrix s = entropy_operator(rdm).mat;
    const CMatrix s0 = entropy_operator(rho0).mat;
    REQUIRE(operator_norm(s * r.R - r.R * s0) < 1e-9);
    REQUIRE(std::abs(s.trace() - s0.trace()) < 1e-10);
}

TEST_CASE("gdm_from_pi reduces to the riesz state for invertible R") {
    std::mt19937 rng(61u);
    const DeformationOp r = make_deformation(random_invertible(rng, 3));
    const DensityMatrix rho0 = random_dm(rng, 3);
    const GeneralizedDM g = gdm_from_pi(r, rho0);
    const RieszDM rdm = rdm_new(r, rho0);
    REQUIRE(operator_norm(g.mat - rdm.mat) < 1e-9);
    auto [ok, residual] = intertwines(g.mat, r.R, rho0.mat);
    REQUIRE(ok);
}

TEST_CASE("gdm_check validates the intertwining relation") {
    CMatrix rho0m = CMatrix::Zero(3, 3);
    rho0m.diagonal() << 0.5, 0.25, 0.25;
    const DensityMatrix rho0 = dm_new(rho0m);
    const double s2 = std::sqrt(2.0);
    CMatrix rstar(3, 3);
    rstar << 0, s2, s2, 1, 0, 0, 0, 1, 1;
    CMatrix rho = CMatrix::Zero(3, 3);
    rho(0, 0) = 0.25;
    rho(1, 1) = 0.5;
    rho(2, 0) = 0.25 / s2;
    const GeneralizedDM g = gdm_check(rho, rstar, rho0);
    REQUIRE_FALSE(g.R.invertible);
    REQUIRE(g.system.span_dim == 2);  // the two degenerate phis coincide
    REQUIRE_THROWS_AS(gdm_check(rho + 0.1 * CMatrix::Identity(3, 3), rstar, rho0),
                      IntertwiningViolation);
}

TEST_CASE("generalized entropy operator satisfies S(rho) R = R S(rho0)") {
    CMatrix rho0m = CMatrix::Zero(3, 3);
    rho0m.diagonal() << 0.6, 0.2, 0.2;
    const DensityMatrix rho0 = dm_new(rho0m);
    const double s2 = std::sqrt(2.0);
    CMatrix rstar(3, 3);
    rstar << 0, s2, s2, 1, 0, 0, 0, 1, 1;
    CMatrix rho = CMatrix::Zero(3, 3);
    rho(0, 0) = 0.2;
    rho(1, 1) = 0.6;
    rho(2, 0) = 0.2 / s2;
    const GeneralizedDM g = gdm_check(rho, rstar, rho0);
    const CMatrix s = entropy_operator(g).mat;
    const CMatrix s0 = entropy_operator(rho0).mat;
    REQUIRE(operator_norm(s * rstar - rstar * s0) < 1e-12);
    // diagonal entries carry -lambda log lambda of the surviving weights
    REQUIRE(s(1, 1).real() == Approx(-0.6 * std::log(0.6)).margin(1e-12));
    REQUIRE(s(0, 0).real() == Approx(-0.2 * std::log(0.2)).margin(1e-12));
}

TEST_CASE("functional_eval cross-checks the base representation") {
    std::mt19937 rng(67u);
    const DeformationOp r = make_deformation(random_invertible(rng, 3));
    const DensityMatrix rho0 = random_dm(rng, 3);
    const RieszDM rdm = rdm_new(r, rho0);
    const CMatrix x = random_invertible(rng, 3);
    const cplx direct = functional_eval(rdm, x);
    REQUIRE(std::abs(direct - (rdm.mat * x).trace()) < 1e-12);
    REQUIRE(std::abs(functional_eval(rdm, CMatrix::Identity(3, 3)) - cplx(1, 0)) <
            1e-10);
}

TEST_CASE("is_pure and convex_combine") {
    CMatrix pure = CMatrix::Zero(2, 2);
    pure(0, 0) = 1.0;
    CMatrix mixed = CMatrix::Zero(2, 2);
    mixed.diagonal() << 0.5, 0.5;
    const DensityMatrix p = dm_new(pure), m = dm_new(mixed);
    REQUIRE(is_pure(p));
    REQUIRE_FALSE(is_pure(m));

    const DensityMatrix mix = convex_combine(p, m, 0.5);
    REQUIRE(mix.lambdas[0] == Approx(0.75).margin(1e-12));
    REQUIRE_FALSE(is_pure(mix));
    REQUIRE_THROWS_AS(convex_combine(p, m, 1.5), DomainError);

    std::mt19937 rng(71u);
    const DeformationOp r1 = make_deformation(random_invertible(rng, 2));
    const DeformationOp r2 = make_deformation(random_invertible(rng, 2));
    const RieszDM a = rdm_new(r1, p), b = rdm_new(r1, m), c = rdm_new(r2, m);
    const RieszDM ab = convex_combine(a, b, 0.25);
    REQUIRE(std::abs(ab.mat.trace() - cplx(1, 0)) < 1e-10);
    REQUIRE_THROWS_AS(convex_combine(a, c, 0.5), RMismatchError);
}

TEST_CASE("entropy_of_spectrum rejects bad weights") {
    REQUIRE(entropy_of_spectrum({1.0, 0.0, 0.0}) == 0.0);
    REQUIRE(entropy_of_spectrum({0.5, 0.5}) == Approx(std::log(2.0)).margin(1e-14));
    REQUIRE_THROWS_AS(entropy_of_spectrum({-0.1, 1.1}), DomainError);
    REQUIRE_THROWS_AS(entropy_of_spectrum({0.9, 0.9}), DomainError);
}

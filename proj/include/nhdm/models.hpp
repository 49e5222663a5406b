#pragma once

// The two finite-dimensional models: the 2x2 two-state PT Hamiltonian and the
// truncated 3x3 Swanson oscillator, with their deformation matrices, spectra,
// thermal weights and exceptional-point classification.

#include <cmath>
#include <utility>
#include <vector>

#include "nhdm/biortho.hpp"
#include "nhdm/density.hpp"
#include "nhdm/matcore.hpp"

namespace nhdm {

struct TwoStateParams {
    double r = 1.0;
    double d = 0.5;
    double theta = 0.0;

    double discriminant() const {
        const double s = r * std::sin(theta);
        return d * d - s * s;
    }
};

struct SwansonParams {
    double alpha1 = 1.0;
    double alpha2 = 1.0;

    double discriminant() const { return 1.0 + 2.0 * alpha1 * alpha2; }
};

enum class RegionTag { Unbroken, Broken, Exceptional };

struct Region {
    RegionTag tag;
    double discriminant;
};

inline constexpr double kEpTol = 1e-10;  // |discriminant| cutoff, absolute

inline Region classify_region(double discriminant, double tol = kEpTol) {
    if (std::abs(discriminant) <= tol)
        return {RegionTag::Exceptional, discriminant};
    return {discriminant > 0 ? RegionTag::Unbroken : RegionTag::Broken,
            discriminant};
}

struct ModelSpectrum {
    std::vector<cplx> eigenvalues;   // model's own ordering
    BiorthogonalSystem system;       // phis with region-appropriate duals
    std::vector<cplx> normalizers;   // A+/- or h2, h3 (empty on fallback)
    Region region{RegionTag::Unbroken, 0.0};
};

namespace detail {

// Scale each psi so that <phi_j, psi_j> = 1 exactly.
inline void binormalize(BiorthogonalSystem& sys) {
    for (size_t j = 0; j < sys.phis.size(); ++j) {
        const cplx ip = sys.phis[j].dot(sys.psis[j]);
        if (std::abs(ip) < 1e-14)
            throw DefectiveMatrixError(
                "binormalize: vanishing biorthogonal pairing");
        sys.psis[j] /= ip;
    }
}

}  // namespace detail

inline CMatrix two_state_h(const TwoStateParams& p) {
    if (!std::isfinite(p.r) || !std::isfinite(p.d) || !std::isfinite(p.theta))
        throw DomainError("two_state_h: parameters must be finite");
    CMatrix h(2, 2);
    h << p.r * std::exp(cplx(0, p.theta)), p.d,
         p.d, p.r * std::exp(cplx(0, -p.theta));
    return h;
}

inline ModelSpectrum two_state_spectrum(const TwoStateParams& p,
                                        const Tolerances& tol = {}) {
    tol.validate();
    const double s = p.r * std::sin(p.theta);
    const double delta = p.discriminant();
    const Region region = classify_region(delta);
    if (region.tag == RegionTag::Exceptional)
        throw ExceptionalPointError("two_state_spectrum: d^2 = r^2 sin^2(theta)",
                                    cplx(p.r * std::cos(p.theta), 0));

    const cplx sq = std::sqrt(cplx(delta, 0));
    const cplx mu_m = p.r * std::cos(p.theta) - sq;  // mu_-
    const cplx mu_p = p.r * std::cos(p.theta) + sq;  // mu_+
    const cplx a_m = std::sqrt(cplx(2 * delta, 0) - 2.0 * cplx(0, s) * sq);
    const cplx a_p = std::sqrt(cplx(2 * delta, 0) + 2.0 * cplx(0, s) * sq);

    CVector phi_m(2), phi_p(2), psi_m(2), psi_p(2);
    phi_m << (cplx(0, s) - sq) / std::conj(a_m), cplx(p.d, 0) / std::conj(a_m);
    phi_p << (cplx(0, s) + sq) / std::conj(a_p), cplx(p.d, 0) / std::conj(a_p);
    psi_m << (cplx(0, -s) - sq) / a_m, cplx(p.d, 0) / a_m;
    psi_p << (cplx(0, -s) + sq) / a_p, cplx(p.d, 0) / a_p;

    ModelSpectrum out;
    out.region = region;
    out.eigenvalues = {mu_m, mu_p};
    out.normalizers = {a_m, a_p};
    out.system.dim = 2;
    out.system.span_dim = 2;
    out.system.phis = {phi_m, phi_p};
    if (region.tag == RegionTag::Broken)
        out.system.psis = {psi_p, psi_m};  // dual swap: psi~_+/- = psi_-/+
    else
        out.system.psis = {psi_m, psi_p};
    detail::binormalize(out.system);
    return out;
}

// The explicit deformation for d = 1/2, r = 1, y = sin(theta).
inline DeformationOp two_state_R(double y, const Tolerances& tol = {}) {
    if (!(std::abs(y) < 0.5))
        throw OutOfRegionError("two_state_R: requires |y| < 1/2");
    const double s = std::sqrt(1.0 - 4.0 * y * y);
    const cplx dm = std::sqrt(cplx(2.0 * (1.0 - 4.0 * y * y), 0) -
                              cplx(0, 4.0 * y * s));
    const cplx dp = std::sqrt(cplx(2.0 * (1.0 - 4.0 * y * y), 0) +
                              cplx(0, 4.0 * y * s));
    CMatrix r(2, 2);
    r << (cplx(0, 2.0 * y) + s) / dm, (cplx(0, 2.0 * y) - s) / dp,
         1.0 / dm, 1.0 / dp;
    return make_deformation(r, tol);
}

inline std::pair<CMatrix, CMatrix> swanson_h(const SwansonParams& p) {
    if (!std::isfinite(p.alpha1) || !std::isfinite(p.alpha2))
        throw DomainError("swanson_h: parameters must be finite");
    const double s2 = std::sqrt(2.0);
    CMatrix c = CMatrix::Zero(3, 3);
    c(0, 1) = 1.0;
    c(1, 2) = s2;
    CMatrix h = c.adjoint() * c + p.alpha1 * c * c +
                p.alpha2 * (c.adjoint() * c.adjoint());
    CMatrix direct(3, 3);
    direct << 0, 0, s2 * p.alpha1,
              0, 1, 0,
              s2 * p.alpha2, 0, 2;
    if (operator_norm(h - direct) > 1e-14 * std::max(1.0, operator_norm(h)))
        throw DomainError("swanson_h: ladder construction mismatch");
    return {c, direct};
}

inline ModelSpectrum swanson_spectrum(const SwansonParams& p,
                                      const Tolerances& tol = {}) {
    tol.validate();
    const double disc = p.discriminant();
    const Region region = classify_region(disc);
    if (region.tag == RegionTag::Exceptional)
        throw ExceptionalPointError("swanson_spectrum: 1 + 2 alpha1 alpha2 = 0",
                                    cplx(1, 0));

    const CMatrix h = swanson_h(p).second;
    ModelSpectrum out;
    out.region = region;
    const cplx sd = std::sqrt(cplx(disc, 0));
    out.eigenvalues = {cplx(1, 0), 1.0 - sd, 1.0 + sd};
    out.system.dim = 3;
    out.system.span_dim = 3;

    const double prod = p.alpha1 * p.alpha2;
    if (prod != 0.0) {
        const double s2 = std::sqrt(2.0);
        const cplx mu2 = out.eigenvalues[1], mu3 = out.eigenvalues[2];
        const cplx h2 = 1.0 / std::sqrt(mu2 * mu2 / (2.0 * prod) + 1.0);
        const cplx h3 = 1.0 / std::sqrt(mu3 * mu3 / (2.0 * prod) + 1.0);
        out.normalizers = {h2, h3};
        CVector phi1(3), phi2(3), phi3(3);
        phi1 << 0, 1, 0;
        phi2 << -h3 * mu3 / (s2 * p.alpha2), 0, h3;
        phi3 << -h2 * mu2 / (s2 * p.alpha2), 0, h2;
        out.system.phis = {phi1, phi2, phi3};
    } else {
        // h2, h3 formulas divide by zero; fall back to the generic solver and
        // match eigenvectors to the model ordering by eigenvalue proximity.
        const Spectrum s = eig(h, tol);
        out.system.phis.resize(3);
        std::vector<bool> used(3, false);
        for (size_t j = 0; j < 3; ++j) {
            Eigen::Index best = -1;
            double best_dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < 3; ++k) {
                if (used[k]) continue;
                const double dist = std::abs(s.eigenvalues(k) - out.eigenvalues[j]);
                if (dist < best_dist) { best_dist = dist; best = k; }
            }
            used[best] = true;
            out.system.phis[j] = s.right_eigenvectors.col(best);
        }
    }

    // Duals: columns of (R^{-1})+ for R built from the phis. This realizes the
    // left eigenvectors and the broken-region index swap automatically.
    CMatrix r(3, 3);
    for (int j = 0; j < 3; ++j) r.col(j) = out.system.phis[j];
    const CMatrix rinv = mat_inverse(r, tol);
    for (int j = 0; j < 3; ++j) out.system.psis.push_back(rinv.adjoint().col(j));
    return out;
}

inline DeformationOp swanson_R(const SwansonParams& p, const Tolerances& tol = {}) {
    const double disc = p.discriminant();
    const double s2 = std::sqrt(2.0);
    if (std::abs(disc) <= kEpTol) {
        CMatrix r(3, 3);
        r << 0, s2 * p.alpha1, s2 * p.alpha1,
             1, 0, 0,
             0, 1, 1;
        return make_deformation(r, tol);  // invertible = false, pi_holds = false
    }
    const ModelSpectrum s = swanson_spectrum(p, tol);
    CMatrix r(3, 3);
    for (int j = 0; j < 3; ++j) r.col(j) = s.system.phis[j];
    return make_deformation(r, tol);
}

inline std::vector<double> thermal_lambdas(double beta,
                                           const std::vector<cplx>& mus,
                                           const Tolerances& tol = {}) {
    if (beta < 0 || !std::isfinite(beta))
        throw DomainError("thermal_lambdas: beta must be finite and >= 0");
    if (mus.empty()) throw DomainError("thermal_lambdas: empty spectrum");
    tol.validate();
    double mu_min = std::numeric_limits<double>::infinity();
    for (const cplx& mu : mus) {
        if (std::abs(mu.imag()) > tol.eq_tol)
            throw ComplexSpectrumError(
                "thermal_lambdas: spectrum is not real (broken region)");
        mu_min = std::min(mu_min, mu.real());
    }
    std::vector<double> lam(mus.size());
    double z = 0.0;
    for (size_t j = 0; j < mus.size(); ++j) {
        lam[j] = std::exp(-beta * (mus[j].real() - mu_min));  // shifted for stability
        z += lam[j];
    }
    for (double& l : lam) l /= z;
    return lam;
}

inline std::vector<double> rdm1_lambdas(const std::vector<cplx>& mus) {
    if (mus.empty()) throw DomainError("rdm1_lambdas: empty spectrum");
    std::vector<double> lam(mus.size());
    double z = 0.0;
    for (size_t j = 0; j < mus.size(); ++j) {
        lam[j] = std::norm(mus[j]);
        z += lam[j];
    }
    if (z <= 0.0) throw DomainError("rdm1_lambdas: all eigenvalues are zero");
    for (double& l : lam) l /= z;
    return lam;
}

// Thermal purity and entropy of the Swanson RDM as closed forms in
// X = beta * sqrt(1 + 2 alpha1 alpha2).
inline std::pair<double, double> rdm2_closed_forms(double beta,
                                                   const SwansonParams& p) {
    const double disc = p.discriminant();
    if (disc < 0)
        throw BrokenRegionError("rdm2_closed_forms: requires 1 + 2 a1 a2 >= 0");
    if (beta < 0 || !std::isfinite(beta))
        throw DomainError("rdm2_closed_forms: beta must be finite and >= 0");
    const double x = beta * std::sqrt(disc);
    const double purity = 1.0 - 2.0 / (2.0 * std::cosh(x) + 1.0);
    // tr S = log N' + (X e^{-X} + 2 X e^{-2X})/N', N' = 1 + e^{-X} + e^{-2X};
    // written with the lowest level shifted out so large X cannot overflow.
    const double e1 = std::exp(-x), e2 = std::exp(-2.0 * x);
    const double np = 1.0 + e1 + e2;
    const double entropy = std::log(np) + (x * e1 + 2.0 * x * e2) / np;
    return {purity, entropy};
}

inline GeneralizedDM gdm_rho(double alpha1, double lambda1,
                             const Tolerances& tol = {}) {
    if (alpha1 == 0.0 || !std::isfinite(alpha1))
        throw DomainError("gdm_rho: alpha1 must be finite and nonzero");
    if (!(lambda1 >= 0.0 && lambda1 <= 1.0))
        throw DomainError("gdm_rho: lambda1 must lie in [0, 1]");
    const double a = (1.0 - lambda1) / 2.0;
    const double s2 = std::sqrt(2.0);
    CMatrix rho = CMatrix::Zero(3, 3);
    rho(0, 0) = a;
    rho(1, 1) = lambda1;
    rho(2, 0) = a / (s2 * alpha1);
    CMatrix rstar(3, 3);
    rstar << 0, s2 * alpha1, s2 * alpha1,
             1, 0, 0,
             0, 1, 1;
    CMatrix rho0 = CMatrix::Zero(3, 3);
    rho0(0, 0) = lambda1;
    rho0(1, 1) = a;
    rho0(2, 2) = a;
    return gdm_check(rho, rstar, dm_new(rho0, tol), tol);
}

enum class Model { TwoState, Swanson };

inline double exceptional_locus(Model model, double fixed) {
    if (!std::isfinite(fixed)) throw DomainError("exceptional_locus: non-finite");
    if (model == Model::Swanson) {
        if (fixed == 0.0)
            throw DomainError("exceptional_locus: alpha1 must be nonzero");
        return -1.0 / (2.0 * fixed);  // alpha2 on 1 + 2 a1 a2 = 0
    }
    // Two-state: fixed = d/r, locus sin(theta) = +/- d/r (positive branch).
    if (std::abs(fixed) > 1.0)
        throw DomainError("exceptional_locus: |d/r| > 1 has no solution");
    return std::abs(fixed);
}

}  // namespace nhdm

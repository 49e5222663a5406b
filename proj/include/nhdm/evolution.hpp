#pragma once

// Von Neumann evolution d(rho)/dt = -i [H0, rho] under a Hermitian reference
// Hamiltonian: a fixed-step RK4 integrator plus the closed-form trajectories
// of both models. The integrator exists purely as an independent oracle.

#include <array>
#include <cmath>
#include <vector>

#include "nhdm/density.hpp"
#include "nhdm/matcore.hpp"
#include "nhdm/models.hpp"

namespace nhdm {

struct EvolutionSpec {
    CMatrix H0;
    DensityMatrix rho_init;
    std::vector<double> t_grid;
    double step = 0.0;  // <= 0 selects the default 1e-3 / ||H0||
};

inline std::vector<CMatrix> evolve_numeric(const EvolutionSpec& spec,
                                           const Tolerances& tol = {}) {
    require_square(spec.H0, "evolve_numeric");
    tol.validate();
    const double hnorm = operator_norm(spec.H0);
    if (operator_norm(spec.H0 - spec.H0.adjoint()) >
        tol.eq_tol * std::max(1.0, hnorm))
        throw DomainError("evolve_numeric: H0 must be Hermitian");
    if (spec.H0.rows() != spec.rho_init.mat.rows())
        throw DimensionError("evolve_numeric: dimension mismatch");
    for (size_t i = 1; i < spec.t_grid.size(); ++i)
        if (!(spec.t_grid[i] > spec.t_grid[i - 1]))
            throw DomainError("evolve_numeric: t_grid must be strictly increasing");

    const double h = (spec.step > 0) ? spec.step
                                     : 1e-3 / std::max(1.0, hnorm);
    const auto deriv = [&](const CMatrix& rho) -> CMatrix {
        return cplx(0, -1) * (spec.H0 * rho - rho * spec.H0);
    };

    std::vector<CMatrix> out;
    CMatrix rho = spec.rho_init.mat;
    double t = 0.0;
    for (double target : spec.t_grid) {
        if (target < 0) throw DomainError("evolve_numeric: negative time");
        while (t < target - 1e-15 * std::max(1.0, target)) {
            const double dt = std::min(h, target - t);  // land on grid times
            const CMatrix k1 = deriv(rho);
            const CMatrix k2 = deriv(rho + 0.5 * dt * k1);
            const CMatrix k3 = deriv(rho + 0.5 * dt * k2);
            const CMatrix k4 = deriv(rho + dt * k3);
            rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            rho = (rho + rho.adjoint().eval()) / 2.0;  // exact flow is Hermitian
            t += dt;
        }
        out.push_back(rho);
    }
    return out;
}

// General evolved two-state matrix for rho(0) = [[c1, c2],[c3, c4]] under the
// Hermitian H0 = H(theta = 0); Omega = 2 d t.
inline CMatrix two_state_rho0_closed(double t, const std::array<cplx, 4>& c,
                                     double d, const Tolerances& tol = {}) {
    tol.validate();
    const cplx c1 = c[0], c2 = c[1], c3 = c[2], c4 = c[3];
    if (std::abs(c1 + c4 - 1.0) > tol.eq_tol)
        throw TraceNotOneError("two_state_rho0_closed: c1 + c4 != 1",
                               (c1 + c4).real());
    if (std::abs(c3 - std::conj(c2)) > tol.eq_tol)
        throw DomainError("two_state_rho0_closed: c3 != conj(c2)");
    CMatrix init(2, 2);
    init << c1, c2, c3, c4;
    if (!is_positive_semidefinite(init, tol))
        throw NotPSDError("two_state_rho0_closed: initial matrix not PSD", 0.0);

    const double om = 2.0 * d * t;
    const cplx i1(0, 1);
    const double so = std::sin(om), co = std::cos(om);
    CMatrix rho(2, 2);
    rho(0, 0) = 0.5 * (1.0 + i1 * (c2 - c3) * so + (c1 - c4) * co);
    rho(0, 1) = 0.5 * (c2 + c3 + i1 * (c1 - c4) * so - (c3 - c2) * co);
    rho(1, 0) = 0.5 * (c2 + c3 - i1 * (c1 - c4) * so + (c3 - c2) * co);
    rho(1, 1) = 0.5 * (1.0 - i1 * (c2 - c3) * so - (c1 - c4) * co);
    return rho;
}

// rho_theta(t) = R rho0(t) R^{-1} for the reference initial state
// diag(2/3, 1/3), d = 1/2, r = 1, y = sin(theta).
inline RieszDM two_state_rdm_closed(double t, double y,
                                    const Tolerances& tol = {}) {
    const DeformationOp r = two_state_R(y, tol);  // OutOfRegion for |y| >= 1/2
    const double s = std::sqrt(1.0 - 4.0 * y * y);
    const cplx i1(0, 1);
    const double st = std::sin(t), ct = std::cos(t);
    CMatrix rho(2, 2);
    rho(0, 0) = 0.5 + i1 * y * ct / (3.0 * s) + 2.0 * y * st / 3.0;
    rho(0, 1) = ct / (6.0 * s) + i1 * (1.0 - 16.0 * y * y) * st / 6.0;
    rho(1, 0) = ct / (6.0 * s) - i1 * st / 6.0;
    rho(1, 1) = 0.5 - i1 * y * ct / (3.0 * s) - 2.0 * y * st / 3.0;

    const CMatrix rho0 =
        two_state_rho0_closed(t, {cplx(2.0 / 3.0), 0, 0, cplx(1.0 / 3.0)}, 0.5, tol);
    return rdm_wrap(rho, r, dm_new(rho0, tol), tol);
}

// Evolved diagonal state under the Hermitian Swanson Hamiltonian
// (alpha2 = alpha1); X = 1 + 2 alpha1^2.
inline CMatrix swanson_rho0_closed(double t, double alpha1,
                                   const std::array<double, 3>& lambdas,
                                   const Tolerances& tol = {}) {
    tol.validate();
    const double l1 = lambdas[0], l2 = lambdas[1], l3 = lambdas[2];
    if (std::abs(l1 + l2 + l3 - 1.0) > tol.eq_tol)
        throw TraceNotOneError("swanson_rho0_closed: lambdas must sum to 1",
                               l1 + l2 + l3);
    for (double l : lambdas)
        if (l < -tol.psd_tol || l > 1.0 + tol.eq_tol)
            throw DomainError("swanson_rho0_closed: lambdas must lie in [0, 1]");

    const double x = 1.0 + 2.0 * alpha1 * alpha1;
    const double sx = std::sqrt(x);
    const double sh = std::sin(sx * t), ch = std::cos(sx * t);
    const double ch2 = std::cos(2.0 * sx * t);
    const double a2 = alpha1 * alpha1;
    const double s2 = std::sqrt(2.0);

    CMatrix rho = CMatrix::Zero(3, 3);
    rho(0, 0) = (l1 + ch2 * a2 * (l1 - l3) + a2 * (l1 + l3)) / x;
    rho(1, 1) = l2;
    rho(2, 2) = (l3 + ch2 * a2 * (l3 - l1) + a2 * (l1 + l3)) / x;
    rho(0, 2) = -s2 * sh * cplx(sh * sx, -ch * x) * alpha1 * (l1 - l3) /
                std::pow(x, 1.5);
    rho(2, 0) = std::conj(rho(0, 2));
    return rho;
}

// The nine closed-form entries of rho(t) = R rho0(t) R^{-1}, with
// F_+/- = sqrt(X) S_h +/- i X C_h.
inline RieszDM swanson_rdm_closed(double t, const SwansonParams& p,
                                  const std::array<double, 3>& lambdas,
                                  const Tolerances& tol = {}) {
    const double disc = p.discriminant();
    if (std::abs(disc) <= kEpTol)
        throw ExceptionalPointError("swanson_rdm_closed: mu2 = mu3", cplx(1, 0));
    const ModelSpectrum spec = swanson_spectrum(p, tol);
    const cplx m2 = spec.eigenvalues[1], m3 = spec.eigenvalues[2];
    const cplx h2 = spec.normalizers.empty() ? cplx(0) : spec.normalizers[0];
    if (p.alpha1 * p.alpha2 == 0.0)
        throw DomainError("swanson_rdm_closed: requires alpha1 alpha2 != 0");

    const double l1 = lambdas[0], l2 = lambdas[1], l3 = lambdas[2];
    const double a1 = p.alpha1, a2 = p.alpha2;
    const double aa = a1 * a1;
    const double x = 1.0 + 2.0 * aa;
    const double sx = std::sqrt(x);
    const double x32 = std::pow(x, 1.5);
    const double sh = std::sin(sx * t), ch = std::cos(sx * t);
    const double ch2 = std::cos(2.0 * sx * t);
    const double s2 = std::sqrt(2.0);
    const cplx fp = cplx(sx * sh, x * ch), fm = cplx(sx * sh, -x * ch);

    CMatrix rho(3, 3);
    rho(0, 0) = (-x * m3 * l2 + m2 * (l3 + aa * (l1 + l3)) +
                 aa * m2 * (l3 - l1) * ch2) / (x * (m2 - m3));
    rho(0, 1) = h2 * a1 * m2 * (l1 - l3) * sh * fp / (x32 * a2);
    rho(0, 2) = m2 * m3 * (l3 - l2 + aa * (l1 - 2.0 * l2 + l3) +
                           aa * (l3 - l1) * ch2) / (s2 * x * a2 * (m2 - m3));
    rho(1, 0) = 2.0 * a1 * a2 * sh * fm * (l1 - l3) / (h2 * x32 * (m2 - m3));
    rho(1, 1) = (l1 + aa * (l1 + l3) + aa * (l1 - l3) * ch2) / x;
    rho(1, 2) = s2 * a1 * m3 * sh * fm * (l1 - l3) / (h2 * x32 * (m2 - m3));
    rho(2, 0) = s2 * a2 * (l2 - l3 - aa * (l1 - 2.0 * l2 + l3) +
                           aa * (l1 - l3) * ch2) / (x * (m2 - m3));
    rho(2, 1) = -s2 * h2 * a1 * sh * fp * (l1 - l3) / x32;
    rho(2, 2) = ((m2 + 2.0 * aa * m2) * l2 - m3 * (l3 + aa * (l1 + l3)) +
                 aa * m3 * (l1 - l3) * ch2) / (x * (m2 - m3));

    const CMatrix rho0 = swanson_rho0_closed(t, a1, lambdas, tol);
    return rdm_wrap(rho, swanson_R(p, tol), dm_new(rho0, tol), tol);
}

}  // namespace nhdm

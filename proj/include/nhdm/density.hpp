#pragma once

// The three density-matrix grades (DM, RDM, GDM), their entropy operators,
// purity, linear functionals and the pure-state characterizations.

#include <cmath>
#include <vector>

#include "nhdm/biortho.hpp"
#include "nhdm/matcore.hpp"

namespace nhdm {

// 0*log 0 = 0, applied only below double underflow.
inline double xlogx(double x) {
    return (x < 1e-300) ? 0.0 : x * std::log(x);
}

struct DensityMatrix {
    CMatrix mat;
    std::vector<double> lambdas;  // sorted descending
    CMatrix eigvecs;              // orthonormal columns matching lambdas

    CMatrix projector(Eigen::Index j) const {
        return eigvecs.col(j) * eigvecs.col(j).adjoint();
    }
};

inline DensityMatrix dm_new(const CMatrix& m, const Tolerances& tol = {}) {
    require_square(m, "dm_new");
    tol.validate();
    const double scale = std::max(1.0, operator_norm(m));
    const CMatrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    if (operator_norm(m - m.adjoint()) > tol.eq_tol * scale ||
        es.eigenvalues().minCoeff() < -tol.psd_tol * scale)
        throw NotPSDError("dm_new: matrix is not positive semidefinite",
                          es.eigenvalues().minCoeff());
    const double tr = m.trace().real();
    if (std::abs(m.trace() - cplx(1, 0)) > tol.eq_tol)
        throw TraceNotOneError("dm_new: trace is not one", tr);

    DensityMatrix dm;
    dm.mat = m;
    const Eigen::Index n = m.rows();
    dm.lambdas.resize(n);
    dm.eigvecs.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {  // solver sorts ascending; flip
        dm.lambdas[j] = es.eigenvalues()(n - 1 - j);
        dm.eigvecs.col(j) = es.eigenvectors().col(n - 1 - j);
    }
    return dm;
}

struct RieszDM {
    CMatrix mat;
    DeformationOp R;
    DensityMatrix base;
    BiorthogonalSystem system;
};

namespace detail {

inline BiorthogonalSystem riesz_system_for(const DeformationOp& r,
                                           const DensityMatrix& rho0,
                                           const Tolerances& tol) {
    std::vector<CVector> onb;
    for (Eigen::Index j = 0; j < rho0.eigvecs.cols(); ++j)
        onb.push_back(rho0.eigvecs.col(j));
    BiorthogonalSystem sys = riesz_pair_from(r, onb, tol);
    sys.lambdas = rho0.lambdas;
    return sys;
}

}  // namespace detail

inline RieszDM rdm_new(const DeformationOp& r, const DensityMatrix& rho0,
                       const Tolerances& tol = {}) {
    if (!r.invertible)
        throw SingularMatrixError("rdm_new: R is not invertible",
                                  std::abs(r.R.determinant()));
    if (r.R.rows() != rho0.mat.rows())
        throw DimensionError("rdm_new: dimension mismatch");
    RieszDM rdm;
    rdm.R = r;
    rdm.base = rho0;
    rdm.mat = r.R * rho0.mat * mat_inverse(r.R, tol);
    rdm.system = detail::riesz_system_for(r, rho0, tol);
    return rdm;
}

// Wraps an externally supplied matrix (e.g. a closed form) after verifying
// the similarity invariant mat = R rho0 R^{-1}.
inline RieszDM rdm_wrap(const CMatrix& mat, const DeformationOp& r,
                        const DensityMatrix& rho0, const Tolerances& tol = {}) {
    RieszDM rdm = rdm_new(r, rho0, tol);
    const double cond = operator_norm(r.R) * operator_norm(mat_inverse(r.R, tol));
    const double residual = operator_norm(mat - rdm.mat);
    if (residual > tol.eq_tol * cond * std::max(1.0, operator_norm(mat)))
        throw IntertwiningViolation("rdm_wrap: matrix is not R rho0 R^{-1}",
                                    residual);
    rdm.mat = mat;
    return rdm;
}

struct GeneralizedDM {
    CMatrix mat;
    DeformationOp R;
    DensityMatrix base;
    BiorthogonalSystem system;  // restricted to the span of the phis
    bool via_pi = false;
};

namespace detail {

// Prune linearly dependent phi directions by Gram-Schmidt residual, keeping
// the lowest-index representative.
inline void prune_gdm_system(BiorthogonalSystem& sys, double threshold) {
    std::vector<CVector> kept, ortho;
    std::vector<double> kept_lambdas;
    for (size_t j = 0; j < sys.phis.size(); ++j) {
        CVector v = sys.phis[j];
        for (const auto& q : ortho) v -= q.dot(sys.phis[j]) * q;
        if (v.norm() > threshold) {
            ortho.push_back(v.normalized());
            kept.push_back(sys.phis[j]);
            if (!sys.lambdas.empty()) kept_lambdas.push_back(sys.lambdas[j]);
        }
    }
    sys.phis = std::move(kept);
    sys.lambdas = std::move(kept_lambdas);
    sys.span_dim = static_cast<Eigen::Index>(sys.phis.size());
}

// Duals for a GDM system: per lambda-group, combine the left eigenvectors of
// rho so that <phi_i, psi_j> = delta_ij on the kept indices.
inline void attach_left_duals(BiorthogonalSystem& sys, const CMatrix& rho,
                              double scale) {
    const Eigen::Index n = rho.rows();
    sys.psis.assign(sys.phis.size(), CVector::Zero(n));
    std::vector<bool> done(sys.phis.size(), false);
    for (size_t j = 0; j < sys.phis.size(); ++j) {
        if (done[j]) continue;
        std::vector<size_t> group{j};
        for (size_t k = j + 1; k < sys.phis.size(); ++k)
            if (!done[k] && std::abs(sys.lambdas[k] - sys.lambdas[j]) <= 1e-9 * scale)
                group.push_back(k);

        const CMatrix m = rho.adjoint() - cplx(sys.lambdas[j], 0) *
                                             CMatrix::Identity(n, n);
        Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
        Eigen::Index null_dim = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (svd.singularValues()(i) <= 1e-9 * scale) ++null_dim;
        null_dim = std::max<Eigen::Index>(null_dim,
                                          static_cast<Eigen::Index>(group.size()));
        const CMatrix nullsp = svd.matrixV().rightCols(null_dim);

        CMatrix g(group.size(), null_dim);  // g_ij = <phi_i, N_j>
        for (size_t gi = 0; gi < group.size(); ++gi)
            g.row(gi) = sys.phis[group[gi]].adjoint() * nullsp;
        const CMatrix coeff =
            g.completeOrthogonalDecomposition().pseudoInverse();
        for (size_t gj = 0; gj < group.size(); ++gj) {
            sys.psis[group[gj]] = nullsp * coeff.col(gj);
            done[group[gj]] = true;
        }
    }
}

inline BiorthogonalSystem gdm_system_for(const CMatrix& rho, const CMatrix& r,
                                         const DensityMatrix& rho0) {
    BiorthogonalSystem sys;
    sys.dim = r.rows();
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
        sys.phis.push_back(r * rho0.eigvecs.col(j));
        sys.lambdas.push_back(rho0.lambdas[j]);
    }
    const double scale = std::max(1.0, operator_norm(r));
    prune_gdm_system(sys, 1e-10 * scale);
    attach_left_duals(sys, rho, std::max(1.0, operator_norm(rho)));
    return sys;
}

}  // namespace detail

inline GeneralizedDM gdm_from_pi(const DeformationOp& r, const DensityMatrix& rho0,
                                 const Tolerances& tol = {}) {
    if (!r.pi_holds)
        throw PropertyPIError("gdm_from_pi: R does not have property PI");
    if (r.R.rows() != rho0.mat.rows())
        throw DimensionError("gdm_from_pi: dimension mismatch");
    GeneralizedDM g;
    g.R = r;
    g.base = rho0;
    g.via_pi = true;
    const CMatrix gram_inv = mat_inverse(r.R.adjoint() * r.R, tol);
    g.mat = r.R * rho0.mat * gram_inv * r.R.adjoint();
    std::vector<CVector> onb;
    for (Eigen::Index j = 0; j < rho0.eigvecs.cols(); ++j)
        onb.push_back(rho0.eigvecs.col(j));
    g.system = gdm_duals(r, onb, tol);
    g.system.lambdas = rho0.lambdas;
    return g;
}

inline GeneralizedDM gdm_check(const CMatrix& rho, const CMatrix& r,
                               const DensityMatrix& rho0,
                               const Tolerances& tol = {}) {
    auto [ok, residual] = intertwines(rho, r, rho0.mat, tol);
    if (!ok)
        throw IntertwiningViolation("gdm_check: rho R != R rho0", residual);
    GeneralizedDM g;
    g.mat = rho;
    g.R = make_deformation(r, tol);
    g.base = rho0;
    g.via_pi = false;
    g.system = detail::gdm_system_for(rho, r, rho0);
    return g;
}

enum class EntropyGrade { Standard, Riesz, Generalized };

struct EntropyOperator {
    CMatrix mat;
    EntropyGrade grade;
};

inline EntropyOperator entropy_operator(const DensityMatrix& dm,
                                        const Tolerances& tol = {}) {
    tol.validate();
    CMatrix s = CMatrix::Zero(dm.mat.rows(), dm.mat.cols());
    for (size_t j = 0; j < dm.lambdas.size(); ++j) {
        if (dm.lambdas[j] < -tol.psd_tol)
            throw DomainError("entropy_operator: negative eigenvalue");
        const double lam = std::max(dm.lambdas[j], 0.0);
        s -= xlogx(lam) * dm.projector(static_cast<Eigen::Index>(j));
    }
    return {s, EntropyGrade::Standard};
}

inline EntropyOperator entropy_operator(const RieszDM& rdm,
                                        const Tolerances& tol = {}) {
    const CMatrix s0 = entropy_operator(rdm.base, tol).mat;
    return {rdm.R.R * s0 * mat_inverse(rdm.R.R, tol), EntropyGrade::Riesz};
}

inline EntropyOperator entropy_operator(const GeneralizedDM& g,
                                        const Tolerances& tol = {}) {
    tol.validate();
    const Eigen::Index n = g.mat.rows();
    CMatrix s = CMatrix::Zero(n, n);
    for (size_t j = 0; j < g.system.phis.size(); ++j) {
        if (g.system.lambdas[j] < -tol.psd_tol)
            throw DomainError("entropy_operator: negative eigenvalue");
        const double lam = std::max(g.system.lambdas[j], 0.0);
        s -= xlogx(lam) * (g.system.phis[j] * g.system.psis[j].adjoint());
    }
    // Canonical solution of S(rho) R = R S(rho0), verified a posteriori.
    const CMatrix s0 = entropy_operator(g.base, tol).mat;
    auto [ok, residual] = intertwines(s, g.R.R, s0, tol);
    if (!ok)
        throw IntertwiningViolation(
            "entropy_operator: S(rho) R != R S(rho0)", residual);
    return {s, EntropyGrade::Generalized};
}

namespace detail {

inline double purity_of(const CMatrix& m, bool assert_real, double eq_tol) {
    const cplx tr = (m * m).trace();
    // tr(m^2) accumulates rounding on the scale of ||m||^2 even when the
    // exact value is O(1), e.g. near-singular deformations.
    const double scale = std::pow(std::max(1.0, operator_norm(m)), 2);
    if (assert_real && std::abs(tr.imag()) > eq_tol * scale)
        throw DomainError("purity: trace of rho^2 is not real");
    return tr.real();
}

}  // namespace detail

inline double purity(const DensityMatrix& dm, const Tolerances& tol = {}) {
    return detail::purity_of(dm.mat, true, tol.eq_tol);
}
inline double purity(const RieszDM& rdm, const Tolerances& tol = {}) {
    return detail::purity_of(rdm.mat, true, tol.eq_tol);
}
// For a GDM the imaginary part is reported by the caller if needed but not
// constrained; the real part matches the unqualified tr(rho^2).
inline double purity(const GeneralizedDM& g, const Tolerances& tol = {}) {
    return detail::purity_of(g.mat, false, tol.eq_tol);
}

inline double entropy_of_spectrum(const std::vector<double>& lambdas,
                                  const Tolerances& tol = {}) {
    tol.validate();
    double sum = 0.0, total = 0.0;
    for (double lam : lambdas) {
        if (lam < -tol.psd_tol || lam > 1.0 + tol.eq_tol)
            throw DomainError("entropy_of_spectrum: eigenvalue outside [0, 1]");
        sum -= xlogx(std::max(lam, 0.0));
        total += lam;
    }
    if (total > 1.0 + tol.eq_tol)
        throw DomainError("entropy_of_spectrum: eigenvalues sum above one");
    return sum;
}

inline double entropy_trace(const DensityMatrix& dm, const Tolerances& tol = {}) {
    return entropy_of_spectrum(dm.lambdas, tol);
}
inline double entropy_trace(const RieszDM& rdm, const Tolerances& tol = {}) {
    return entropy_of_spectrum(rdm.base.lambdas, tol);
}
inline double entropy_trace(const GeneralizedDM& g, const Tolerances& tol = {}) {
    return entropy_of_spectrum(g.system.lambdas, tol);
}

inline cplx functional_eval(const DensityMatrix& dm, const CMatrix& x,
                            const Tolerances& tol = {}) {
    if (x.rows() != dm.mat.rows() || x.cols() != dm.mat.cols())
        throw DimensionError("functional_eval: dimension mismatch");
    (void)tol;
    return (dm.mat * x).trace();
}

inline cplx functional_eval(const RieszDM& rdm, const CMatrix& x,
                            const Tolerances& tol = {}) {
    if (x.rows() != rdm.mat.rows() || x.cols() != rdm.mat.cols())
        throw DimensionError("functional_eval: dimension mismatch");
    const cplx direct = (rdm.mat * x).trace();
    // Cross-check against Phi_rho0(X_R) with X_R = R^{-1} X R.
    const CMatrix rinv = mat_inverse(rdm.R.R, tol);
    const cplx via_base = (rdm.base.mat * (rinv * x * rdm.R.R)).trace();
    const double cond = operator_norm(rdm.R.R) * operator_norm(rinv);
    if (std::abs(direct - via_base) >
        tol.eq_tol * cond * std::max(1.0, operator_norm(x)))
        throw DomainError("functional_eval: RDM functional identity violated");
    return direct;
}

inline cplx functional_eval(const GeneralizedDM& g, const CMatrix& x,
                            const Tolerances& tol = {}) {
    if (x.rows() != g.mat.rows() || x.cols() != g.mat.cols())
        throw DimensionError("functional_eval: dimension mismatch");
    const cplx direct = (g.mat * x).trace();
    if (g.via_pi) {
        // Cross-check against Phi_rho0(X~_R) with X~_R = (R+R)^{-1} R+ X R.
        const CMatrix gram_inv = mat_inverse(g.R.R.adjoint() * g.R.R, tol);
        const cplx via_base =
            (g.base.mat * (gram_inv * g.R.R.adjoint() * x * g.R.R)).trace();
        const double bound =
            operator_norm(gram_inv) * std::pow(operator_norm(g.R.R), 2);
        if (std::abs(direct - via_base) >
            tol.eq_tol * (1.0 + bound) * std::max(1.0, operator_norm(x)))
            throw DomainError("functional_eval: GDM functional identity violated");
    }
    return direct;
}

namespace detail {

// ||S|| on the relevant spectrum, independent of the deformation.
inline double entropy_sup(const std::vector<double>& lambdas) {
    double mx = 0.0;
    for (double lam : lambdas) mx = std::max(mx, -xlogx(std::max(lam, 0.0)));
    return mx;
}

inline bool is_pure_impl(double pur, const std::vector<double>& lambdas,
                         double tol) {
    const bool by_purity = std::abs(pur - 1.0) <= tol;
    const bool by_entropy = entropy_sup(lambdas) <= 50.0 * tol;
    if (by_purity != by_entropy)
        throw DomainError("is_pure: purity and entropy criteria disagree");
    return by_purity;
}

}  // namespace detail

inline bool is_pure(const DensityMatrix& dm, double tol = 1e-8) {
    return detail::is_pure_impl(purity(dm), dm.lambdas, tol);
}
inline bool is_pure(const RieszDM& rdm, double tol = 1e-8) {
    return detail::is_pure_impl(
        detail::purity_of(rdm.base.mat, true, 1e-10), rdm.base.lambdas, tol);
}
inline bool is_pure(const GeneralizedDM& g, double tol = 1e-8) {
    return detail::is_pure_impl(purity(g), g.system.lambdas, tol);
}

inline DensityMatrix convex_combine(const DensityMatrix& a, const DensityMatrix& b,
                                    double w, const Tolerances& tol = {}) {
    if (w < 0.0 || w > 1.0) throw DomainError("convex_combine: weight outside [0, 1]");
    return dm_new(w * a.mat + (1.0 - w) * b.mat, tol);
}

inline RieszDM convex_combine(const RieszDM& a, const RieszDM& b, double w,
                              const Tolerances& tol = {}) {
    if (w < 0.0 || w > 1.0) throw DomainError("convex_combine: weight outside [0, 1]");
    if (operator_norm(a.R.R - b.R.R) >
        tol.eq_tol * std::max(1.0, operator_norm(a.R.R)))
        throw RMismatchError("convex_combine: RDMs have different R");
    const DensityMatrix base = convex_combine(a.base, b.base, w, tol);
    return rdm_new(a.R, base, tol);
}

inline GeneralizedDM convex_combine(const GeneralizedDM& a, const GeneralizedDM& b,
                                    double w, const Tolerances& tol = {}) {
    if (w < 0.0 || w > 1.0) throw DomainError("convex_combine: weight outside [0, 1]");
    if (operator_norm(a.R.R - b.R.R) >
        tol.eq_tol * std::max(1.0, operator_norm(a.R.R)))
        throw RMismatchError("convex_combine: GDMs have different R");
    const DensityMatrix base = convex_combine(a.base, b.base, w, tol);
    if (a.via_pi && b.via_pi) return gdm_from_pi(a.R, base, tol);
    return gdm_check(w * a.mat + (1.0 - w) * b.mat, a.R.R, base, tol);
}

}  // namespace nhdm

#pragma once

// Biorthogonal systems, Riesz pairs, the property-PI predicate and
// intertwining-relation checks.

#include <utility>
#include <vector>

#include "nhdm/matcore.hpp"

namespace nhdm {

struct BiorthogonalSystem {
    Eigen::Index dim = 0;
    std::vector<CVector> phis;     // pruned to span_dim entries
    std::vector<CVector> psis;     // biorthogonal duals, <phi_i, psi_j> = delta_ij
    std::vector<double> lambdas;   // optional; per kept pair, empty if absent
    Eigen::Index span_dim = 0;     // dim of the closed span of the phis
};

struct DeformationOp {
    CMatrix R;
    bool invertible = false;
    bool pi_holds = false;
};

inline bool has_property_pi(const CMatrix& r, const Tolerances& tol = {}) {
    require_square(r, "has_property_pi");
    tol.validate();
    const CMatrix g = r.adjoint() * r;
    const double nrm = operator_norm(g);
    if (nrm == 0.0) return false;
    return std::abs(g.determinant()) >
           tol.psd_tol * std::pow(nrm, static_cast<double>(g.rows()));
}

inline DeformationOp make_deformation(const CMatrix& r, const Tolerances& tol = {}) {
    require_square(r, "make_deformation");
    tol.validate();
    DeformationOp op;
    op.R = r;
    const double nrm = operator_norm(r);
    op.invertible = nrm > 0.0 &&
        std::abs(r.determinant()) >
            tol.psd_tol * std::pow(nrm, static_cast<double>(r.rows()));
    op.pi_holds = has_property_pi(r, tol);
    return op;
}

inline std::vector<CVector> canonical_onb(Eigen::Index n) {
    std::vector<CVector> onb(n);
    for (Eigen::Index j = 0; j < n; ++j) onb[j] = CVector::Unit(n, j);
    return onb;
}

inline BiorthogonalSystem riesz_pair_from(const DeformationOp& op,
                                          const std::vector<CVector>& onb,
                                          const Tolerances& tol = {}) {
    if (!op.invertible)
        throw SingularMatrixError("riesz_pair_from: R is not invertible",
                                  std::abs(op.R.determinant()));
    const Eigen::Index n = op.R.rows();
    if (static_cast<Eigen::Index>(onb.size()) != n)
        throw DimensionError("riesz_pair_from: basis size mismatch");
    const CMatrix rinv = mat_inverse(op.R, tol);
    BiorthogonalSystem sys;
    sys.dim = n;
    sys.span_dim = n;
    for (const auto& e : onb) {
        sys.phis.push_back(op.R * e);
        sys.psis.push_back(rinv.adjoint() * e);
    }
    return sys;
}

inline BiorthogonalSystem gdm_duals(const DeformationOp& op,
                                    const std::vector<CVector>& onb,
                                    const Tolerances& tol = {}) {
    if (!op.pi_holds)
        throw PropertyPIError("gdm_duals: R does not have property PI");
    const Eigen::Index n = op.R.rows();
    if (static_cast<Eigen::Index>(onb.size()) != n)
        throw DimensionError("gdm_duals: basis size mismatch");
    const CMatrix gram_inv = mat_inverse(op.R.adjoint() * op.R, tol);
    BiorthogonalSystem sys;
    sys.dim = n;
    sys.span_dim = n;
    for (const auto& e : onb) {
        sys.phis.push_back(op.R * e);
        sys.psis.push_back(op.R * (gram_inv * e));
    }
    return sys;
}

// residual = ||A R - R B|| in operator norm.
inline std::pair<bool, double> intertwines(const CMatrix& a, const CMatrix& r,
                                           const CMatrix& b,
                                           const Tolerances& tol = {}) {
    if (a.cols() != r.rows() || r.cols() != b.rows() || a.rows() != a.cols() ||
        b.rows() != b.cols())
        throw DimensionError("intertwines: incompatible dimensions");
    tol.validate();
    const double residual = operator_norm(a * r - r * b);
    const double scale =
        operator_norm(a) * operator_norm(r) + operator_norm(r) * operator_norm(b) +
        std::numeric_limits<double>::epsilon();
    return {residual <= tol.eq_tol * scale, residual};
}

inline CVector basis_expand(const BiorthogonalSystem& sys, const CVector& f,
                            const Tolerances& tol = {}) {
    if (f.size() != sys.dim)
        throw DimensionError("basis_expand: vector dimension mismatch");
    tol.validate();
    const auto k = static_cast<Eigen::Index>(sys.phis.size());
    CVector coeff(k);
    CVector recon = CVector::Zero(sys.dim);
    for (Eigen::Index j = 0; j < k; ++j) {
        coeff(j) = sys.psis[j].dot(f);
        recon += coeff(j) * sys.phis[j];
    }
    const double residual = (recon - f).norm();
    if (residual > tol.eq_tol * std::max(1.0, f.norm()))
        throw SpanError("basis_expand: vector outside the span of the phis",
                        residual);
    return coeff;
}

}  // namespace nhdm

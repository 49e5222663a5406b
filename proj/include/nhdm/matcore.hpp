#pragma once

// Dense complex matrix primitives sized for n <= 8: eigendecomposition with
// closed forms for n = 2, 3, spectral matrix functions, positivity tests and
// the operator norm. Everything here is a pure function on immutable values.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "nhdm/errors.hpp"

namespace nhdm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Tolerances {
    double eq_tol = 1e-10;      // equality of matrices/scalars
    double psd_tol = 1e-12;     // positivity margins
    double defect_tol = 1e-8;   // eigenvector-matrix condition cutoff

    void validate() const {
        if (eq_tol <= 0 || psd_tol <= 0 || defect_tol <= 0)
            throw DomainError("Tolerances must be strictly positive");
    }
};

struct Spectrum {
    CVector eigenvalues;           // sorted by (real, imag) ascending
    CMatrix right_eigenvectors;    // unit columns, deterministic phase
    bool defect_flag = false;
};

inline void require_square(const CMatrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw DimensionError(std::string(who) + ": matrix must be square and non-empty");
    if (!a.allFinite())
        throw DomainError(std::string(who) + ": matrix has non-finite entries");
}

inline double operator_norm(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

namespace detail {

inline bool cplx_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Deterministic phase: the dominant entry is made real positive.
inline void fix_phase(CVector& v) {
    double mx = v.cwiseAbs().maxCoeff();
    if (mx <= 0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= (1.0 - 1e-12) * mx) {
            v *= std::conj(v(i)) / std::abs(v(i));
            break;
        }
    }
}

inline std::vector<cplx> char_roots_2x2(const CMatrix& a) {
    const cplx tr = a(0, 0) + a(1, 1);
    const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

// Cardano with a deterministic branch choice (largest-magnitude cube).
inline std::vector<cplx> char_roots_3x3(const CMatrix& m) {
    const cplx tr = m(0, 0) + m(1, 1) + m(2, 2);
    const cplx minors = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)
                      + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)
                      + m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const cplx det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                   - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                   + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    // lambda^3 + A lambda^2 + B lambda + C
    const cplx A = -tr, B = minors, C = -det;
    const cplx p = B - A * A / 3.0;
    const cplx q = 2.0 * A * A * A / 27.0 - A * B / 3.0 + C;
    const cplx shift = -A / 3.0;

    const double scale = std::max({1.0, std::abs(p), std::abs(q)});
    if (std::abs(p) < 1e-15 * scale && std::abs(q) < 1e-15 * scale)
        return {shift, shift, shift};

    const cplx s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx u3 = -q / 2.0 + s;
    if (std::abs(-q / 2.0 - s) > std::abs(u3)) u3 = -q / 2.0 - s;
    const cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx v = (std::abs(u) > 0) ? -p / (3.0 * u) : cplx(0, 0);
    const cplx w(-0.5, std::sqrt(3.0) / 2.0);
    std::vector<cplx> roots(3);
    cplx wk(1, 0);
    for (int k = 0; k < 3; ++k) {
        roots[k] = wk * u + std::conj(wk) * v + shift;
        wk *= w;
    }
    return roots;
}

}  // namespace detail

inline Spectrum eig(const CMatrix& a, const Tolerances& tol = {}) {
    require_square(a, "eig");
    tol.validate();
    const Eigen::Index n = a.rows();
    const double scale = std::max(1.0, a.norm());

    std::vector<cplx> vals;
    if (n == 1) {
        vals = {a(0, 0)};
    } else if (n == 2) {
        vals = detail::char_roots_2x2(a);
    } else if (n == 3) {
        vals = detail::char_roots_3x3(a);
    } else {
        if (n > 8) throw DimensionError("eig: only n <= 8 supported");
        Eigen::ComplexEigenSolver<CMatrix> es(a, /*computeEigenvectors=*/false);
        vals.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    }
    std::sort(vals.begin(), vals.end(), detail::cplx_less);

    Spectrum out;
    out.eigenvalues = Eigen::Map<const CVector>(vals.data(), n);
    out.right_eigenvectors = CMatrix::Zero(n, n);

    // Group (numerically) coinciding eigenvalues and extract the null space
    // of A - lambda*I per group; a deficit marks a defective matrix.
    const double group_tol = 1e-8 * scale;
    bool deficit = false;
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < n;) {
        Eigen::Index j = i + 1;
        double diameter = 0.0;
        while (j < n && std::abs(vals[j] - vals[j - 1]) <= group_tol) {
            diameter = std::max(diameter, std::abs(vals[j] - vals[i]));
            ++j;
        }
        const Eigen::Index k = j - i;
        cplx mean(0, 0);
        for (Eigen::Index m = i; m < j; ++m) mean += vals[m];
        mean /= static_cast<double>(k);

        CMatrix shifted = a - mean * CMatrix::Identity(n, n);
        Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
        const double null_tol = std::max(1e-10 * scale, 4.0 * diameter);
        Eigen::Index null_count = 0;
        for (Eigen::Index m = 0; m < n; ++m)
            if (svd.singularValues()(m) <= null_tol) ++null_count;
        if (null_count < k) deficit = true;
        for (Eigen::Index m = 0; m < k; ++m) {
            CVector v = svd.matrixV().col(n - 1 - m);
            detail::fix_phase(v);
            out.right_eigenvectors.col(col++) = v;
        }
        i = j;
    }

    Eigen::JacobiSVD<CMatrix> vsvd(out.right_eigenvectors);
    const double smin = vsvd.singularValues()(n - 1);
    const double cond = (smin > 0)
        ? vsvd.singularValues()(0) / smin
        : std::numeric_limits<double>::infinity();
    out.defect_flag = deficit || cond > 1.0 / tol.defect_tol;
    return out;
}

inline CMatrix mat_inverse(const CMatrix& a, const Tolerances& tol = {}) {
    require_square(a, "mat_inverse");
    tol.validate();
    const double nrm = operator_norm(a);
    const double abs_det = std::abs(a.determinant());
    if (nrm == 0.0 ||
        abs_det <= tol.psd_tol * std::pow(nrm, static_cast<double>(a.rows())))
        throw SingularMatrixError("mat_inverse: singular matrix", abs_det);
    return a.inverse();
}

inline CMatrix mat_function(const CMatrix& a,
                            const std::function<cplx(cplx)>& f,
                            const Tolerances& tol = {}) {
    require_square(a, "mat_function");
    const Spectrum s = eig(a, tol);
    if (s.defect_flag)
        throw DefectiveMatrixError("mat_function: matrix is numerically defective");
    CVector fv(s.eigenvalues.size());
    for (Eigen::Index j = 0; j < fv.size(); ++j) {
        const cplx w = f(s.eigenvalues(j));
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
            throw DomainError("mat_function: f not finite at eigenvalue " +
                              std::to_string(s.eigenvalues(j).real()) + "+" +
                              std::to_string(s.eigenvalues(j).imag()) + "i");
        fv(j) = w;
    }
    const CMatrix& v = s.right_eigenvectors;
    return v * fv.asDiagonal() * v.partialPivLu().solve(CMatrix::Identity(v.rows(), v.cols()));
}

inline bool is_positive_semidefinite(const CMatrix& a, const Tolerances& tol = {}) {
    require_square(a, "is_positive_semidefinite");
    tol.validate();
    const double scale = std::max(1.0, operator_norm(a));
    if (operator_norm(a - a.adjoint()) > tol.eq_tol * scale) return false;
    const CMatrix h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.psd_tol * scale;
}

}  // namespace nhdm

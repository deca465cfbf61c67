// Shared dense linear-algebra helpers for small complex matrices.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace symlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Operator (spectral) 2-norm.
inline double op_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

// Smallest singular value.
inline double min_sv(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

inline bool is_finite(const CMatrix& m) { return m.allFinite(); }

inline CMatrix herm_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// ||M - M*||, the deviation from hermitian symmetry.
inline double herm_defect(const CMatrix& m) { return op_norm(CMatrix(m - m.adjoint())); }

// Extremal eigenvalues of the hermitian part (self-adjoint solver on Herm(m)).
inline double min_eig_herm(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}
inline double max_eig_herm(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm_part(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

// Orthonormal basis (columns) of the numerical kernel of m at threshold `tol`.
inline CMatrix kernel_basis(const CMatrix& m, double tol) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int n = static_cast<int>(s.size());
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (s(i) <= tol) ++k;
    return svd.matrixV().rightCols(k);
}

// FNV-1a hash of the raw matrix bytes, used in diagnostics.
inline std::string matrix_hash(const CMatrix& m) {
    const unsigned char* p = reinterpret_cast<const unsigned char*>(m.data());
    size_t nbytes = sizeof(Complex) * static_cast<size_t>(m.size());
    unsigned long long h = 1469598103934665603ull;
    for (size_t i = 0; i < nbytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return std::string(buf);
}

}  // namespace symlab

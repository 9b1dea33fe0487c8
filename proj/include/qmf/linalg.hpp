#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

namespace qmf {

using Operator = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

enum class Axis { x = 0, y = 1, z = 2 };

inline const char* axis_name(Axis a) {
    switch (a) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        default: return "z";
    }
}

namespace linalg {

double max_abs(const Operator& a);

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const Operator& a);

/// Throws std::invalid_argument when the defect exceeds tol.
void require_hermitian(const Operator& a, double tol = 1e-10);

/// True iff every off-diagonal entry is exactly zero.
bool is_diagonal(const Operator& a);

/// C = op(A) * op(B) through BLAS zgemm.
void gemm(const Operator& a, const Operator& b, Operator& c,
          bool adjoint_a = false, bool adjoint_b = false);

/// C += op(A) * op(B); C must already have the right shape.
void gemm_acc(const Operator& a, const Operator& b, Operator& c,
              bool adjoint_a = false, bool adjoint_b = false);

/// Ascending eigenvalues of a Hermitian matrix (LAPACK zheevd, values only).
Eigen::VectorXd eigenvalues(const Operator& h);

/// Full eigensystem, ascending eigenvalues, columns phase-fixed so the
/// largest-modulus component of each eigenvector is real positive.
void eigensystem(const Operator& h, Eigen::VectorXd& evals, Operator& evecs);

/// Largest |eigenvalue| of a Hermitian matrix. Direct for small dimensions,
/// power iteration above that.
double spectral_norm_hermitian(const Operator& h);

/// log sum_k exp(v_k), max-shifted.
double log_sum_exp(std::span<const double> values);

} // namespace linalg
} // namespace qmf

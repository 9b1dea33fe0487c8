#include "qmf/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmf::linalg {

double max_abs(const Operator& a) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            m = std::max(m, std::abs(a(i, j)));
    return m;
}

double hermiticity_defect(const Operator& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

void require_hermitian(const Operator& a, double tol) {
    const double defect = hermiticity_defect(a);
    if (!(defect <= tol))
        throw std::invalid_argument("matrix is not Hermitian (defect " +
                                    std::to_string(defect) + ")");
}

bool is_diagonal(const Operator& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j && a(i, j) != cplx(0.0, 0.0)) return false;
    return true;
}

namespace {

void gemm_impl(const Operator& a, const Operator& b, Operator& c,
               bool adjoint_a, bool adjoint_b, bool accumulate) {
    const auto m = adjoint_a ? a.cols() : a.rows();
    const auto k = adjoint_a ? a.rows() : a.cols();
    const auto kb = adjoint_b ? b.cols() : b.rows();
    const auto n = adjoint_b ? b.rows() : b.cols();
    if (k != kb) throw std::invalid_argument("gemm: inner dimensions differ");
    if (accumulate) {
        if (c.rows() != m || c.cols() != n)
            throw std::invalid_argument("gemm_acc: output shape mismatch");
    } else {
        c.resize(m, n);
    }
    const cplx one(1.0, 0.0), zero(0.0, 0.0);
    const cplx beta = accumulate ? one : zero;
    cblas_zgemm(CblasColMajor,
                adjoint_a ? CblasConjTrans : CblasNoTrans,
                adjoint_b ? CblasConjTrans : CblasNoTrans,
                static_cast<int>(m), static_cast<int>(n), static_cast<int>(k),
                &one, a.data(), static_cast<int>(a.rows()),
                b.data(), static_cast<int>(b.rows()),
                &beta, c.data(), static_cast<int>(c.rows()));
}

} // namespace

void gemm(const Operator& a, const Operator& b, Operator& c,
          bool adjoint_a, bool adjoint_b) {
    gemm_impl(a, b, c, adjoint_a, adjoint_b, false);
}

void gemm_acc(const Operator& a, const Operator& b, Operator& c,
              bool adjoint_a, bool adjoint_b) {
    gemm_impl(a, b, c, adjoint_a, adjoint_b, true);
}

namespace {

void zheevd_inplace(Operator& a, Eigen::VectorXd& w, char jobz) {
    const int n = static_cast<int>(a.rows());
    w.resize(n);
    if (n == 0) return;
    const int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, jobz, 'L', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0)
        throw std::runtime_error("zheevd failed with info " + std::to_string(info));
}

} // namespace

Eigen::VectorXd eigenvalues(const Operator& h) {
    require_hermitian(h);
    Operator a = h;
    Eigen::VectorXd w;
    zheevd_inplace(a, w, 'N');
    return w;
}

void eigensystem(const Operator& h, Eigen::VectorXd& evals, Operator& evecs) {
    require_hermitian(h);
    evecs = h;
    zheevd_inplace(evecs, evals, 'V');
    // Fix the gauge: rotate each column so its largest-modulus entry is
    // real positive (ties resolved by lowest index).
    for (Eigen::Index j = 0; j < evecs.cols(); ++j) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < evecs.rows(); ++i) {
            const double v = std::norm(evecs(i, j));
            if (v > best) {
                best = v;
                imax = i;
            }
        }
        const cplx pivot = evecs(imax, j);
        const double mod = std::abs(pivot);
        if (mod > 0.0) evecs.col(j) *= std::conj(pivot) / mod;
    }
}

double spectral_norm_hermitian(const Operator& h) {
    require_hermitian(h, 1e-9);
    const Eigen::Index n = h.rows();
    if (n == 0) return 0.0;
    if (n <= 1024) {
        const Eigen::VectorXd w = eigenvalues(h);
        return std::max(std::abs(w(0)), std::abs(w(n - 1)));
    }
    // Power iteration with a deterministic start; the growth factor |Hv|/|v|
    // converges to the spectral radius even when +/-lambda_max both dominate.
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = cplx(1.0 + 0.5 * std::sin(0.7 * double(i)), 0.3 * std::cos(1.3 * double(i)));
    v.normalize();
    double growth = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Eigen::VectorXcd w = h * v;
        const double g = w.norm();
        if (g == 0.0) return 0.0;
        v = w / g;
        if (it > 5 && std::abs(g - growth) <= 1e-10 * std::max(1.0, g)) return g;
        growth = g;
    }
    return growth;
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("log_sum_exp of empty range");
    double vmax = values[0];
    for (double v : values) vmax = std::max(vmax, v);
    double s = 0.0;
    for (double v : values) s += std::exp(v - vmax);
    return vmax + std::log(s);
}

} // namespace qmf::linalg

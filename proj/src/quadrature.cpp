#include "qmf/quadrature.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmf::quad {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 * (first eigenvector component)^2.
Rule golub_welsch(std::vector<double> diag, std::vector<double> offdiag, double mu0) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> z(static_cast<size_t>(n) * n);
    const int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, diag.data(),
                                   offdiag.data(), z.data(), n);
    if (info != 0)
        throw std::runtime_error("dstev failed with info " + std::to_string(info));
    Rule r;
    r.nodes = std::move(diag);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double v0 = z[static_cast<size_t>(i) * n];
        r.weights[i] = mu0 * v0 * v0;
    }
    return r;
}

} // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    std::vector<double> d(n, 0.0), e(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k)
        e[k - 1] = double(k) / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(std::move(d), std::move(e), 2.0);
}

Rule gauss_hermite_normal(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    // Jacobi matrix for the weight e^{-x^2/2}/sqrt(2 pi): offdiag sqrt(k).
    std::vector<double> d(n, 0.0), e(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(double(k));
    return golub_welsch(std::move(d), std::move(e), 1.0);
}

} // namespace qmf::quad

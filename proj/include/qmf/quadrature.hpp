#pragma once

#include <vector>

namespace qmf::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
Rule gauss_legendre(int n);

/// Gauss-Hermite rule normalized against the standard normal density:
/// sum_i w_i f(x_i) ~ E[f(Z)], Z ~ N(0,1); weights sum to 1.
Rule gauss_hermite_normal(int n);

} // namespace qmf::quad

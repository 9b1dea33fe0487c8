#pragma once

#include "qmf/linalg.hpp"
#include "qmf/polynomial.hpp"

#include <cstdint>
#include <vector>

namespace qmf {

inline constexpr int kMaxSites = 14;      // 2^14 dense product space
inline constexpr int kMaxWeylDegree = 6;  // multiset permutations <= 6!

enum class SpinContext { product, irrep };

/// Spin generators on either the N-qubit product space (dimension 2^N)
/// or a single irrep C^{2J+1}. Immutable after construction.
struct SpinOperatorSet {
    SpinContext context;
    int dim = 0;
    int sites = 0;  // product context: N, else 0
    int two_j = 0;  // irrep context: 2J, else 0
    Operator sx, sy, sz;
};

struct SpinSector {
    int two_j;
    long long multiplicity;
    int block_dim; // 2J+1
};

struct BlockSpectrum {
    int sites;
    std::vector<SpinSector> sectors; // descending J
};

void require_site_count(int n_sites);

/// Lift of the single-site spin vector to site `site` (1-based) of the
/// N-qubit space; identity on every other factor.
SpinOperatorSet build_site_spin(int n_sites, int site);

/// Total spin S = sum_n S(n) on the product space.
SpinOperatorSet build_total_spin(int n_sites);

/// Standard (2J+1)-dimensional generators, Sz = diag(J, J-1, ..., -J).
SpinOperatorSet spin_irrep(int two_j);

/// Multiplicity M_{N,J} of the spin-J irrep in the N-qubit space,
/// exact integer arithmetic, valid for N <= 24.
long long block_degeneracy(int n_sites, int two_j);

BlockSpectrum block_spectrum(int n_sites);

/// N * SymP((2/N) S) on the product space: every monomial averaged over
/// the distinct orderings of its operator factors.
Operator weyl_ordered_operator(const PolynomialSymbol& p, int n_sites);

/// Same symmetrization for explicit generators: prefactor * SymP(scale * S).
/// Used for irrep blocks, where scale = 2/N and prefactor 1 reproduces the
/// restriction of P((2/N)S) to C^{2J+1}.
Operator weyl_ordered_on(const PolynomialSymbol& p, const SpinOperatorSet& ops,
                         double scale, double prefactor);

/// Directional form sum_k alpha_k <w_k, M>^{d_k} of the decomposition,
/// times N (the rewriting used by the product-state lower bound).
Operator directional_operator(const DirectionalDecomposition& dec, int n_sites);

// --- bit-structured applications on the product space ------------------
// out = S_axis * in (accumulating variants add). Cost O(N 2^N) per column.

void apply_total_spin(int n_sites, Axis axis, const Operator& in, Operator& out);
void apply_total_spin_vec(int n_sites, Axis axis, const Eigen::VectorXcd& in,
                          Eigen::VectorXcd& out);

/// out = S_+/- * in for the total spin (raising = +1, lowering = -1).
void apply_total_ladder(int n_sites, int direction, const Eigen::VectorXcd& in,
                        Eigen::VectorXcd& out);

/// Dense total-spin component, built by applying the bit-structured
/// operator to the identity.
Operator dense_total_spin(int n_sites, Axis axis);

/// Sz eigenvalue (N - 2 popcount)/2 of a computational basis state.
double sz_eigenvalue(int n_sites, std::uint64_t state);

} // namespace qmf

#pragma once

#include "qmf/polynomial.hpp"
#include "qmf/spin.hpp"

#include <functional>
#include <vector>

namespace qmf {

struct SphereNode {
    double theta, phi, weight;
};

/// Tensor quadrature on S^2: Gauss-Legendre in cos(theta) crossed with a
/// uniform trapezoid in phi. Weights sum to 4 pi.
struct SphereQuadrature {
    std::vector<SphereNode> nodes;
    int exactness = 0; // spherical harmonics integrated exactly up to this degree

    static SphereQuadrature tensor(int n_theta, int n_phi);
    static SphereQuadrature for_degree(int degree);
};

Vec3 sphere_direction(double theta, double phi);

/// Bloch coherent state U(theta, phi) |J> on C^{2J+1}.
Eigen::VectorXcd coherent_vector(int two_j, double theta, double phi);

/// Coherent states evaluated on every quadrature node.
struct CoherentFrame {
    int two_j = 0;
    std::vector<Eigen::VectorXcd> states;
    static CoherentFrame build(int two_j, const SphereQuadrature& q);
};

/// Max deviation of (2J+1)/(4 pi) sum w |Omega><Omega| from the identity.
/// Requires quadrature exactness >= 2 (2J).
double resolution_check(int two_j, const SphereQuadrature& q);

/// <Omega| G |Omega>.
double lower_symbol(const Operator& g, const Eigen::VectorXcd& state);

/// (2J+1)/(4 pi) int N f((2J/N) e(Omega)) |Omega><Omega| dOmega.
/// A constant f fails loudly when the quadrature cannot even reproduce
/// the resolution of unity.
Operator upper_symbol_operator(const std::function<double(const Vec3&)>& f, int two_j,
                               int n_sites, const SphereQuadrature& q);

struct BerezinBounds {
    double lower, exact, upper;
};

/// Berezin-Lieb sandwich for G with a known upper symbol g(theta, phi).
/// A violated sandwich beyond tolerance throws (quadrature or symbol bug).
BerezinBounds berezin_lieb_bounds(const Operator& g_op,
                                  const std::function<double(double, double)>& upper_symbol,
                                  int two_j, const SphereQuadrature& q);

/// Operator-norm gap between the Weyl restriction P((2/N)S)|_{C^{2J+1}}
/// and its coherent-state integral, maximized over admissible J.
double duffield_error(const PolynomialSymbol& p, int n_sites);
std::vector<std::pair<int, double>> duffield_profile(const PolynomialSymbol& p, int n_sites);

/// Product-space isometries onto the total-spin sectors: for every J the
/// kernel vectors of S_+ at top weight, lowered through the ladder.
struct SectorIsometries {
    int n_sites = 0;
    // per sector J (descending): columns grouped as [alpha][m] with
    // m = J..-J; dimensions 2^N x (multiplicity (2J+1)).
    struct Sector {
        int two_j;
        long long multiplicity;
        Eigen::MatrixXd basis; // real in the computational basis
    };
    std::vector<Sector> sectors;
};

SectorIsometries build_sector_isometries(int n_sites);

/// H_V for a general continuous symbol via the block construction:
/// same coherent-state block operator on every copy of C^{2J+1}.
Operator assemble_hv_blocks(const std::function<double(const Vec3&)>& f, int n_sites,
                            const SphereQuadrature& q);

} // namespace qmf

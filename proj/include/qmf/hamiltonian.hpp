#pragma once

#include "qmf/disorder.hpp"
#include "qmf/polynomial.hpp"
#include "qmf/spin.hpp"

#include <optional>

namespace qmf {

/// Full random-field Hamiltonian with its construction record.
struct AssembledHamiltonian {
    Operator matrix;
    int n_sites = 0;
    PolynomialSymbol symbol;
    FieldRealization fields;
    std::optional<Vec3> tilt;                      // gamma of sqrt(N) <gamma, M>
    std::optional<std::pair<Vec3, Vec3>> penalty;  // (alpha, m) of the linearized form
};

/// H_b = 2 sum_n <b(n), S(n)>; mutually commuting single-site terms.
Operator assemble_field_term(const FieldRealization& r);

/// H_{P,b} = N SymP((2/N)S) + H_b.
AssembledHamiltonian assemble_full(const PolynomialSymbol& p, const FieldRealization& r);

/// sqrt(N) <gamma, M> = (2/sqrt(N)) <gamma, S>.
Operator tilt_term(int n_sites, const Vec3& gamma);

/// H + sqrt(N) <gamma, M>.
AssembledHamiltonian assemble_perturbed(const AssembledHamiltonian& h, const GaussianTilt& t);

/// L(alpha, m, b) = N<alpha, m*m> - 4 sum_mu alpha_mu m_mu S_mu + H_b,
/// the exactly solvable linearization of the negative-definite quadratic
/// model; requires alpha >= 0 componentwise and |m| <= 1.
AssembledHamiltonian assemble_linearized(const Vec3& alpha, const Vec3& m,
                                         const FieldRealization& r);

/// Q_m = N sum_mu (M_mu - m_mu)^2, positive semidefinite.
Operator assemble_quadratic_penalty(const Vec3& m, int n_sites);

/// True when the model is classical: P depends only on m_z and every
/// sampled field points along z. Such Hamiltonians are diagonal.
bool commutes_with_sz(const PolynomialSymbol& p, const FieldRealization& r);

/// Diagonal of H_{P,b} in the computational basis for the classical case;
/// throws if commutes_with_sz is false.
Eigen::VectorXd diagonal_energies(const PolynomialSymbol& p, const FieldRealization& r);

} // namespace qmf

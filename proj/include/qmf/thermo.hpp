#pragma once

#include "qmf/hamiltonian.hpp"

#include <array>
#include <map>
#include <span>
#include <string>

namespace qmf {

/// Full Hermitian eigendecomposition plus the derived Boltzmann data.
/// eigenvalues ascending, eigenvector phases fixed (largest-modulus
/// component real positive), boltzmann(k) = e^{E_k}/Z computed max-shifted.
struct SpectralData {
    Eigen::VectorXd eigenvalues;
    Operator eigenvectors;
    Eigen::VectorXd boltzmann;
    double log_z = 0.0;
    int dim = 0;
};

SpectralData diagonalize(const Operator& h);

/// Ascending eigenvalues only; exact O(dim) path for diagonal matrices.
Eigen::VectorXd spectrum(const Operator& h);

double pressure_from_spectrum(const Eigen::VectorXd& evals, int n_sites);
double pressure(const Operator& h, int n_sites);
double pressure(const SpectralData& sd, int n_sites);

/// <A>_H = Tr e^H A / Tr e^H; checks the imaginary residue.
double gibbs_average(const SpectralData& sd, const Operator& a);

/// <A^2> - <A>^2, nonnegative up to roundoff.
double thermal_variance(const SpectralData& sd, const Operator& a);

struct IdentityPair {
    double lhs, rhs;
};

/// <Å^2> against the double spectral sum (1/2Z) sum |A_kl|^2 (e^Ek + e^El).
IdentityPair spectral_variance_identity(const SpectralData& sd, const Operator& a);

/// <[A,H]^2> against -(1/2Z) sum |A_kl|^2 (e^Ek + e^El)(Ek - El)^2.
IdentityPair commutator_moment(const SpectralData& sd, const Operator& h,
                               const Operator& a);

/// The eigen-sum for d^2 p_N / d gamma_mu^2 of H + sqrt(N) gamma_mu M_mu
/// with the e^{E_k} convention on degenerate pairs.
double curvature_formula(const SpectralData& sd, const Operator& m_mu);

struct CurvatureCheck {
    double formula;
    double finite_difference; // central second difference at `step`
    double richardson;        // Richardson combination of steps h and 2h
};

CurvatureCheck duhamel_curvature(const Operator& h, int n_sites, Axis mu,
                                 double step = 1e-3);

/// p_N(H+A) - <A>_H / N - p_N(H) >= 0 (Bogoliubov).
double bogoliubov_gap(const Operator& h, const Operator& a, int n_sites);

/// Every quantity of the thermal-fluctuation proof chain for one
/// realization and one magnetization axis.
struct FluctuationChain {
    double variance;        // <M̊^2>, direct
    double variance_sum;    // spectral double sum
    double commutator;      // <[M,H]^2>, direct (nonpositive)
    double commutator_sum;  // spectral double sum
    double curvature;       // d^2 p / d gamma^2 eigen-sum
    double remainder;       // (1/2Z) sum |M_kl|^2 |e^Ek - e^El|
};

FluctuationChain fluctuation_chain(const SpectralData& sd, const Operator& h,
                                   const Operator& m_mu);

struct MonteCarloStat {
    double mean = 0.0;
    double std_error = 0.0;
    int samples = 0;
};

/// Monte Carlo average over Gaussian tilts of sum_mu <M̊_mu^2>_{H(gamma)}.
MonteCarloStat fluctuation_estimate(const PolynomialSymbol& p, const FieldRealization& r,
                                    std::span<const std::uint64_t> tilt_seeds);

// --- product trial states (Gibbs variational lower bound) ---------------

/// rho_b(h) = tensor_n e^{2<h+b(n), s>} / tr, stored through the per-site
/// radii r_n = |h + b(n)| and directions.
struct ProductTrialState {
    int n_sites = 0;
    Vec3 h = Vec3::Zero();
    std::vector<double> radii;
    std::vector<Vec3> directions; // unit, or zero when r_n = 0
};

ProductTrialState trial_state(const FieldRealization& r, const Vec3& h);

/// Tr[rho_n s] = (1/2) tanh(r_n) v_n.
Vec3 trial_site_moment(const ProductTrialState& ts, int site);

/// Tr[rho <w, M>^d] computed exactly through the product structure.
double trial_directional_moment(const ProductTrialState& ts, const Vec3& w, int d);

/// Tr[rho H_{P,b}], exact.
double trial_energy(const ProductTrialState& ts, const PolynomialSymbol& p,
                    const FieldRealization& r);

/// -Tr[rho log rho] >= 0 (sum of site entropies).
double trial_entropy(const ProductTrialState& ts);

/// (Tr[rho H_{P,b}] - Tr[rho log rho]) / N, a lower bound for p_N.
double gibbs_trial_bound(const PolynomialSymbol& p, const FieldRealization& r,
                         const Vec3& h);

/// Dense 2^N density matrix of the product state (small N cross-checks).
Operator dense_trial_state(const ProductTrialState& ts);

/// -Tr[rho log rho] from rho's eigendecomposition, 0 log 0 = 0.
double von_neumann_entropy(const Operator& rho);

struct ThermalReport {
    double log_z = 0.0;
    double pressure = 0.0;
    std::map<std::string, double> averages;            // <M_mu>
    std::array<double, 3> magnetization_variances{};   // <M̊_mu^2>
};

ThermalReport thermal_report(const SpectralData& sd, int n_sites);

} // namespace qmf

#pragma once

#include "qmf/disorder.hpp"
#include "qmf/polynomial.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace qmf {

/// I(r): entropy of a +-1 variable with mean r; I(0) = ln 2, I(1) = 0.
double binary_entropy(double r);

enum class LambdaMethod {
    closed_form,    // point mass at zero: log 2 cosh |h|
    atom_sum,       // exact finite-support expectation
    gauss_hermite,  // gaussian kinds, tensor rule per component
    gauss_legendre, // uniform_box kinds, tensor rule per component
    sample_average  // Monte Carlo with the counter RNG
};

struct LambdaEval {
    double value = 0.0;
    Vec3 gradient = Vec3::Zero();
    Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();
    double mc_std_error = 0.0; // sample_average only
};

/// Evaluator of Lambda_b(h) = E[log 2 cosh |h + b|] (quenched) or of the
/// annealed variant log(2 E[cosh |h + b|]). Nodes are cached at
/// construction; evaluation is pure.
class LambdaEvaluator {
public:
    /// Method chosen from the distribution kind; gaussian/uniform orders
    /// default to 40 nodes per component.
    static LambdaEvaluator make(const FieldDistribution& dist, bool annealed = false);
    static LambdaEvaluator make(const FieldDistribution& dist, LambdaMethod method,
                                int order_or_count, std::uint64_t seed,
                                bool annealed = false);

    LambdaEval eval(const Vec3& h) const;
    double value(const Vec3& h) const { return eval(h).value; }
    Vec3 gradient(const Vec3& h) const { return eval(h).gradient; }

    bool annealed() const { return annealed_; }
    LambdaMethod method() const { return method_; }
    const FieldDistribution& distribution() const { return dist_; }
    LambdaEvaluator annealed_variant() const;
    size_t node_count() const { return nodes_.size(); }

private:
    FieldDistribution dist_ = FieldDistribution::point_mass(Vec3::Zero());
    LambdaMethod method_ = LambdaMethod::closed_form;
    bool annealed_ = false;
    std::vector<FieldAtom> nodes_;
};

double lambda_value(const LambdaEvaluator& ev, const Vec3& h);
Vec3 lambda_gradient(const LambdaEvaluator& ev, const Vec3& h);

/// Remark-4 functional log(2 E[cosh |h+b|]) with the default method.
double annealed_lambda(const FieldDistribution& dist, const Vec3& h);

struct LegendreSolution {
    Vec3 m = Vec3::Zero();
    Vec3 h = Vec3::Zero();
    double lambda_star = 0.0;
    int iterations = 0;
    double residual = 0.0; // |grad Lambda(h) - m|
    bool converged = false;
    bool boundary_extrapolated = false;
};

/// Lambda*(m) by damped Newton on the strictly concave h -> <m,h> - Lambda(h).
/// |m| beyond 1 - 1e-6 is handled by ray extrapolation against the exact
/// boundary value Lambda*(u) = -<u, E b>.
LegendreSolution legendre_transform(const LambdaEvaluator& ev, const Vec3& m);

struct VariationalResult {
    double pressure = 0.0;
    Vec3 maximizer = Vec3::Zero();
    double grid_best = 0.0;
    int grid_points = 0;
    int refine_evals = 0;
    std::vector<std::pair<std::string, double>> trace;
};

/// Field-free formula max_r { I(r) + max_Omega V(r e(Omega)) }.
VariationalResult deterministic_pressure(const PolynomialSymbol& v);

/// sup_m ( V(m) - Lambda*(m) ): coarse 17^3 ball grid, then local
/// Nelder-Mead refinement with restarts.
VariationalResult variational_pressure(const PolynomialSymbol& v, const LambdaEvaluator& ev);

VariationalResult annealed_pressure(const PolynomialSymbol& v, const FieldDistribution& dist);

/// Negative-definite quadratic model: the inf form
/// inf_m ( sum alpha_mu m_mu^2 + Lambda(-2 alpha (.) m) ) and its dual
/// sup_m ( P_alpha(m) - Lambda*(m) ), which agree (Toland-Singer).
struct QuadraticDuality {
    double inf_form;
    double dual_form;
    Vec3 inf_minimizer;
    Vec3 dual_maximizer;
};

QuadraticDuality quadratic_inf_pressure(const Vec3& alpha, const LambdaEvaluator& ev);

/// Exact pressure of the linearized Hamiltonian L(alpha, m, b):
/// <alpha, m*m> + (1/N) sum_n log 2 cosh |b(n) - 2 alpha (.) m|.
double linear_pressure_finiteN(const Vec3& alpha, const Vec3& m, const FieldRealization& r);

/// Curvature constant C = sum_k |beta_k| d_k (d_k - 1)/2 of the
/// directional decomposition of P.
double micro_gap_constant(const PolynomialSymbol& p);

/// g_P(alpha) of the microcanonical comparison
/// P(M) <= (P(m) + g_P(alpha)) 1 + alpha sum_mu (M_mu - m_mu)^2,
/// valid for alpha > micro_gap_constant(P); nonincreasing in alpha, -> 0.
double micro_gap(const PolynomialSymbol& p, double alpha);

/// Shared ball maximizer (exposed for reuse and testing): coarse grid of
/// `grid_n`^3 points pruned to the ball, then Nelder-Mead restarts.
struct BallMaximum {
    double value;
    Vec3 argmax;
    double grid_best;
    int grid_points;
    int evals;
};
BallMaximum maximize_over_ball(const std::function<double(const Vec3&)>& objective,
                               int grid_n = 17, int restarts = 3);

} // namespace qmf

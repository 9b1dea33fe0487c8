#pragma once

#include "qmf/linalg.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qmf {

struct Monomial {
    double coeff = 0.0;
    int px = 0, py = 0, pz = 0;
    int degree() const { return px + py + pz; }
};

/// Real polynomial on the closed unit ball in R^3, stored as a merged
/// monomial list. Doubles as the classical symbol and as the recipe for
/// the Weyl-ordered operator.
class PolynomialSymbol {
public:
    PolynomialSymbol() = default;
    explicit PolynomialSymbol(std::vector<Monomial> monomials);

    /// Text format: semicolon-separated monomials `coeff*x^a*y^b*z^c`,
    /// e.g. "1*z^2; 0.5*x". Whitespace ignored, absent variables have
    /// exponent zero, a bare variable means exponent one.
    static PolynomialSymbol parse(std::string_view text);

    const std::vector<Monomial>& monomials() const { return monos_; }
    int degree() const;
    bool is_zero() const { return monos_.empty(); }

    /// Plain evaluation, no domain check.
    double operator()(const Vec3& m) const;

    /// Sum of |coeff| over monomials (operator-norm budget of the
    /// associated mean-field Hamiltonian divided by N).
    double coeff_l1() const;

    /// Largest possible |gradient| on the closed unit ball (crude bound).
    double gradient_bound() const;

    bool depends_only_on_z() const;

    PolynomialSymbol scaled(double factor) const;
    PolynomialSymbol plus(const PolynomialSymbol& other) const;

    std::string to_string() const;

private:
    std::vector<Monomial> monos_; // merged on (px,py,pz), sorted, no zeros
};

/// Evaluation restricted to the closed unit ball; rejects |m| > 1 + 1e-12.
double symbol_eval(const PolynomialSymbol& p, const Vec3& m);

/// One directional power alpha * <w, .>^d with a unit vector w and d >= 1.
struct DirectionalTerm {
    double alpha;
    Vec3 w;
    int d;
};

/// P(m) = constant + sum_k alpha_k <w_k, m>^{d_k}, valid both as a function
/// identity on R^3 and, applied to the magnetization operator, as an
/// operator identity with the Weyl-ordered monomial form.
struct DirectionalDecomposition {
    double constant = 0.0;
    std::vector<DirectionalTerm> terms;

    double operator()(const Vec3& m) const;
};

DirectionalDecomposition directional_decomposition(const PolynomialSymbol& p);

} // namespace qmf

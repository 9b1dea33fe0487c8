#include "qmf/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace qmf;

TEST_CASE("parse: documented text format") {
    const auto p = PolynomialSymbol::parse("1*z^2; 0.5*x^1");
    CHECK(p.degree() == 2);
    CHECK(p(Vec3(0, 0, 1)) == doctest::Approx(1.0));
    CHECK(p(Vec3(1, 0, 0)) == doctest::Approx(0.5));
    CHECK(p(Vec3(0.2, 0.9, 0.3)) == doctest::Approx(0.09 + 0.1));
}

TEST_CASE("parse: bare variables, constants, signs, whitespace") {
    CHECK(PolynomialSymbol::parse("z")(Vec3(0, 0, 0.5)) == doctest::Approx(0.5));
    CHECK(PolynomialSymbol::parse(" -2 ")(Vec3(1, 1, 1)) == doctest::Approx(-2.0));
    CHECK(PolynomialSymbol::parse("-1*y^2; 3")(Vec3(0, 0.5, 0)) == doctest::Approx(2.75));
    CHECK(PolynomialSymbol::parse("2*x*y*z")(Vec3(0.5, 0.5, 0.5)) == doctest::Approx(0.25));
    CHECK(PolynomialSymbol::parse("x^2*x")(Vec3(0.5, 0, 0)) == doctest::Approx(0.125));
    CHECK(PolynomialSymbol::parse("")(Vec3(1, 0, 0)) == 0.0);
}

TEST_CASE("parse: malformed inputs rejected") {
    CHECK_THROWS_AS(PolynomialSymbol::parse("1*w^2"), std::invalid_argument);
    CHECK_THROWS_AS(PolynomialSymbol::parse("1*"), std::invalid_argument);
    CHECK_THROWS_AS(PolynomialSymbol::parse("x^-2"), std::invalid_argument);
    CHECK_THROWS_AS(PolynomialSymbol::parse("1 2"), std::invalid_argument);
    CHECK_THROWS_AS(PolynomialSymbol::parse("x^"), std::invalid_argument);
}

TEST_CASE("monomials with equal powers merge") {
    const auto p = PolynomialSymbol::parse("1*z^2; 2*z^2; -3*z^2");
    CHECK(p.is_zero());
    const auto q = PolynomialSymbol::parse("1*x*y; 1*y*x");
    CHECK(q.monomials().size() == 1);
    CHECK(q.monomials()[0].coeff == doctest::Approx(2.0));
}

TEST_CASE("symbol_eval examples and the ball check") {
    const auto qcw = PolynomialSymbol::parse("1*z^2; 0.5*x");
    CHECK(symbol_eval(qcw, Vec3(1, 0, 0)) == doctest::Approx(0.5));
    const auto xy = PolynomialSymbol::parse("1*x*y");
    CHECK(symbol_eval(xy, Vec3(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0)) ==
          doctest::Approx(0.5));
    const auto zz = PolynomialSymbol::parse("1*z^2");
    CHECK(symbol_eval(zz, Vec3(0, 0, 0.9575)) == doctest::Approx(0.91683).epsilon(1e-4));
    CHECK_THROWS_AS(symbol_eval(zz, Vec3(1.1, 0, 0)), std::invalid_argument);
}

TEST_CASE("directional decomposition equals the polynomial as a function") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> expo(0, 2);
    std::uniform_real_distribution<double> coord(-0.57, 0.57);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Monomial> monos;
        for (int k = 0; k < 4; ++k)
            monos.push_back({coeff(gen), expo(gen), expo(gen), expo(gen)});
        const PolynomialSymbol p(monos);
        const DirectionalDecomposition dec = directional_decomposition(p);
        for (int pt = 0; pt < 10; ++pt) {
            const Vec3 m(coord(gen), coord(gen), coord(gen));
            CHECK(dec(m) == doctest::Approx(p(m)).epsilon(1e-12));
        }
    }
}

TEST_CASE("directional decomposition uses unit directions") {
    const auto p = PolynomialSymbol::parse("1*x*y; 0.3*z^3; -0.2*x^2*z");
    for (const auto& t : directional_decomposition(p).terms) {
        CHECK(t.w.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.d >= 1);
    }
}

TEST_CASE("coefficient bookkeeping") {
    const auto p = PolynomialSymbol::parse("1*z^2; -0.5*x");
    CHECK(p.coeff_l1() == doctest::Approx(1.5));
    CHECK(p.depends_only_on_z() == false);
    CHECK(PolynomialSymbol::parse("2*z^4; 1").depends_only_on_z());
    const auto sum = p.plus(p.scaled(-1.0));
    CHECK(sum.is_zero());
}

TEST_CASE("to_string parses back to the same polynomial") {
    const auto p = PolynomialSymbol::parse("0.25*x^2*y; -1*z^3; 2");
    const auto q = PolynomialSymbol::parse(p.to_string());
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> coord(-0.5, 0.5);
    for (int i = 0; i < 5; ++i) {
        const Vec3 m(coord(gen), coord(gen), coord(gen));
        CHECK(p(m) == doctest::Approx(q(m)).epsilon(1e-15));
    }
}

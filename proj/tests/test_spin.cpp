#include "qmf/spin.hpp"

#include "qmf/linalg.hpp"

#include <doctest.h>

#include <random>

using namespace qmf;

namespace {

double op_norm(const Operator& a) { return linalg::spectral_norm_hermitian(a); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

} // namespace

TEST_CASE("single site: the 2x2 generators") {
    const auto s = build_site_spin(1, 1);
    CHECK(s.sz(0, 0) == cplx(0.5, 0.0));
    CHECK(s.sz(1, 1) == cplx(-0.5, 0.0));
    CHECK(s.sx(0, 1) == cplx(0.5, 0.0));
    CHECK(s.sy(0, 1) == cplx(0.0, -0.5));
    CHECK(linalg::max_abs(commutator(s.sx, s.sy) - cplx(0, 1) * s.sz) < 1e-15);
}

TEST_CASE("site lift: identity tensor factors") {
    const auto s = build_site_spin(2, 1);
    const Eigen::VectorXd ev = linalg::eigenvalues(s.sz);
    CHECK(ev(0) == doctest::Approx(-0.5));
    CHECK(ev(1) == doctest::Approx(-0.5));
    CHECK(ev(2) == doctest::Approx(0.5));
    CHECK(ev(3) == doctest::Approx(0.5));
}

TEST_CASE("disjoint sites commute, same site closes the algebra") {
    const auto s2 = build_site_spin(3, 2);
    const auto s3 = build_site_spin(3, 3);
    CHECK(linalg::max_abs(commutator(s2.sx, s2.sy) - cplx(0, 1) * s2.sz) < 1e-14);
    CHECK(linalg::max_abs(commutator(s2.sx, s3.sy)) == 0.0);
}

TEST_CASE("site bounds are enforced") {
    CHECK_THROWS_AS(build_site_spin(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_site_spin(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_site_spin(kMaxSites + 1, 1), std::invalid_argument);
}

TEST_CASE("total spin: S^2 spectrum at N=2 and norms") {
    const auto s = build_total_spin(2);
    const Operator s2 = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
    Eigen::VectorXd ev = linalg::eigenvalues(s2);
    CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) CHECK(ev(k) == doctest::Approx(2.0));

    const auto s4 = build_total_spin(4);
    CHECK(op_norm(Operator(0.5 * s4.sz)) == doctest::Approx(1.0)); // (2/N) Sz at N=4

    const auto s1 = build_total_spin(1);
    const auto site = build_site_spin(1, 1);
    CHECK(linalg::max_abs(s1.sz - site.sz) == 0.0);
    CHECK(linalg::max_abs(s1.sx - site.sx) == 0.0);
}

TEST_CASE("casimir commutes with every component") {
    for (int n : {2, 3, 4}) {
        const auto s = build_total_spin(n);
        const Operator s2 = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
        CHECK(linalg::max_abs(commutator(s2, s.sx)) < 1e-12);
        CHECK(linalg::max_abs(commutator(s2, s.sy)) < 1e-12);
        CHECK(linalg::max_abs(commutator(s2, s.sz)) < 1e-12);
    }
    for (int two_j : {1, 2, 3, 7}) {
        const auto s = spin_irrep(two_j);
        const Operator s2 = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
        CHECK(linalg::max_abs(commutator(s2, s.sx)) < 1e-12);
        CHECK(linalg::max_abs(commutator(s2, s.sz)) < 1e-12);
    }
}

TEST_CASE("weyl operator: the paper's mixed example m_x m_y") {
    const int n = 3;
    const auto p = PolynomialSymbol::parse("1*x*y");
    const auto s = build_total_spin(n);
    const Operator expect = n * 2.0 * (s.sx * s.sy + s.sy * s.sx) / double(n * n);
    CHECK(linalg::max_abs(weyl_ordered_operator(p, n) - expect) < 1e-12);
}

TEST_CASE("weyl operator: classical CW at N=2") {
    const auto h = weyl_ordered_operator(PolynomialSymbol::parse("1*z^2"), 2);
    const Eigen::VectorXd ev = linalg::eigenvalues(h);
    CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev(1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev(2) == doctest::Approx(2.0));
    CHECK(ev(3) == doctest::Approx(2.0));
}

TEST_CASE("weyl operator: constants and degree guard") {
    const auto h = weyl_ordered_operator(PolynomialSymbol::parse("1"), 3);
    CHECK(linalg::max_abs(h - 3.0 * Operator::Identity(8, 8)) == 0.0);
    CHECK_THROWS_AS(weyl_ordered_operator(PolynomialSymbol::parse("1*z^7"), 3),
                    std::invalid_argument);
}

TEST_CASE("weyl operator: single-variable powers are plain operator powers") {
    const int n = 4;
    const auto s = build_total_spin(n);
    const Operator mz = (2.0 / n) * s.sz;
    const Operator expect = n * mz * mz * mz;
    CHECK(linalg::max_abs(weyl_ordered_operator(PolynomialSymbol::parse("1*z^3"), n) -
                          expect) < 1e-12);
}

TEST_CASE("weyl symmetry: random polynomials stay Hermitian") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> coeff(-1.5, 1.5);
    std::uniform_int_distribution<int> expo(0, 2);
    std::uniform_int_distribution<int> nn(2, 8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Monomial> monos;
        for (int k = 0; k < 3; ++k) {
            Monomial m{coeff(gen), expo(gen), expo(gen), expo(gen)};
            if (m.degree() > 4) m.pz = 0;
            monos.push_back(m);
        }
        const int n = nn(gen);
        const Operator h = weyl_ordered_operator(PolynomialSymbol(monos), n);
        CHECK(linalg::hermiticity_defect(h) <= 1e-12);
    }
}

TEST_CASE("monomial-basis operator equals the directional form") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(0, 2);
    for (int n : {2, 3, 5}) {
        for (int trial = 0; trial < 6; ++trial) {
            std::vector<Monomial> monos;
            for (int k = 0; k < 3; ++k) {
                Monomial m{coeff(gen), expo(gen), expo(gen), expo(gen)};
                if (m.degree() > 4) m.px = 0;
                monos.push_back(m);
            }
            const PolynomialSymbol p(monos);
            const Operator a = weyl_ordered_operator(p, n);
            const Operator b = directional_operator(directional_decomposition(p), n);
            CHECK(linalg::max_abs(a - b) < 1e-10);
        }
    }
}

TEST_CASE("block degeneracies: examples, the dimension sum, admissibility") {
    CHECK(block_degeneracy(2, 2) == 1);
    CHECK(block_degeneracy(2, 0) == 1);
    CHECK(block_degeneracy(4, 4) == 1);
    CHECK(block_degeneracy(4, 2) == 3);
    CHECK(block_degeneracy(4, 0) == 2);
    CHECK(block_degeneracy(1, 1) == 1);
    CHECK(5 * 1 + 3 * 3 + 1 * 2 == 16);

    for (int n = 1; n <= 24; ++n) {
        long long total = 0;
        for (const auto& sector : block_spectrum(n).sectors) {
            total += sector.multiplicity * sector.block_dim;
            // agreement with the (2J+1)/(N+1) binom(N+1, N/2+J+1) form
            long long binom = 1;
            const int kk = (n + sector.two_j) / 2 + 1;
            for (int i = 1; i <= kk; ++i)
                binom = binom * (n + 1 - kk + i) / i;
            CHECK(sector.multiplicity ==
                  binom * (sector.two_j + 1) / (n + 1));
        }
        CHECK(total == (1ll << n));
    }

    CHECK_THROWS_AS(block_degeneracy(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(block_degeneracy(4, 6), std::invalid_argument);
    CHECK_THROWS_AS(block_degeneracy(25, 1), std::invalid_argument);
}

TEST_CASE("irrep generators") {
    const auto half = spin_irrep(1);
    const auto site = build_site_spin(1, 1);
    CHECK(linalg::max_abs(half.sx - site.sx) < 1e-15);
    CHECK(linalg::max_abs(half.sy - site.sy) < 1e-15);
    CHECK(linalg::max_abs(half.sz - site.sz) < 1e-15);

    const auto one = spin_irrep(2);
    CHECK(one.sz(0, 0) == cplx(1.0, 0.0));
    CHECK(one.sz(1, 1) == cplx(0.0, 0.0));
    CHECK(one.sz(2, 2) == cplx(-1.0, 0.0));
    const Operator s2 = one.sx * one.sx + one.sy * one.sy + one.sz * one.sz;
    CHECK(linalg::max_abs(s2 - 2.0 * Operator::Identity(3, 3)) < 1e-12);

    const auto zero = spin_irrep(0);
    CHECK(zero.sx.rows() == 1);
    CHECK(linalg::max_abs(zero.sx) == 0.0);

    for (int two_j : {1, 2, 3, 5, 8}) {
        const auto s = spin_irrep(two_j);
        CHECK(linalg::max_abs(commutator(s.sx, s.sy) - cplx(0, 1) * s.sz) < 1e-12);
        CHECK(linalg::max_abs(commutator(s.sy, s.sz) - cplx(0, 1) * s.sx) < 1e-12);
        CHECK(linalg::max_abs(commutator(s.sz, s.sx) - cplx(0, 1) * s.sy) < 1e-12);
    }
}

TEST_CASE("magnetization commutator scaling <= 2/N") {
    for (int n : {2, 4, 6, 8, 10}) {
        const Eigen::Index dim = 1ll << n;
        Operator my(dim, dim), k(dim, dim), tmp(dim, dim);
        apply_total_spin(n, Axis::y, Operator::Identity(dim, dim), my);
        apply_total_spin(n, Axis::x, my, k); // Sx Sy
        Operator mx(dim, dim);
        apply_total_spin(n, Axis::x, Operator::Identity(dim, dim), mx);
        apply_total_spin(n, Axis::y, mx, tmp); // Sy Sx
        const Operator comm = (4.0 / (n * n)) * (k - tmp); // [Mx, My]
        // equals i (4/N^2) Sz exactly
        const Operator sz = dense_total_spin(n, Axis::z);
        CHECK(linalg::max_abs(comm - cplx(0, 1) * (4.0 / (n * n)) * sz) < 1e-13);
        CHECK(op_norm(Operator(cplx(0, -1) * comm)) <= 2.0 / n + 1e-12);
    }
}

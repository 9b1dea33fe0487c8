#include "qmf/spin.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qmf {

namespace {

constexpr cplx kI(0.0, 1.0);

unsigned long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
    }
    return r;
}

double multiset_orderings(int a, int b, int c) {
    const int d = a + b + c;
    double f = 1.0;
    for (int i = 2; i <= d; ++i) f *= i;
    for (int i = 2; i <= a; ++i) f /= i;
    for (int i = 2; i <= b; ++i) f /= i;
    for (int i = 2; i <= c; ++i) f /= i;
    return f;
}

// out(j) += factor * (S_axis in)(j), one column.
void apply_axis_col(int n_sites, Axis axis, const cplx* in, cplx* out, cplx factor) {
    const std::uint64_t dim = 1ull << n_sites;
    switch (axis) {
        case Axis::z:
            for (std::uint64_t j = 0; j < dim; ++j)
                out[j] += factor * (0.5 * (n_sites - 2.0 * std::popcount(j))) * in[j];
            break;
        case Axis::x:
            for (int n = 0; n < n_sites; ++n) {
                const std::uint64_t m = 1ull << n;
                const cplx half = 0.5 * factor;
                for (std::uint64_t j = 0; j < dim; ++j) out[j] += half * in[j ^ m];
            }
            break;
        case Axis::y:
            for (int n = 0; n < n_sites; ++n) {
                const std::uint64_t m = 1ull << n;
                const cplx up = -0.5 * kI * factor;   // receiving state has the bit clear
                const cplx down = 0.5 * kI * factor;  // receiving state has the bit set
                for (std::uint64_t j = 0; j < dim; ++j)
                    out[j] += ((j & m) ? down : up) * in[j ^ m];
            }
            break;
    }
}

void apply_axis_matrix(int n_sites, Axis axis, const Operator& in, Operator& out,
                       cplx factor) {
    const Eigen::Index dim = in.rows();
    for (Eigen::Index c = 0; c < in.cols(); ++c)
        apply_axis_col(n_sites, axis, in.data() + c * dim, out.data() + c * dim, factor);
}

} // namespace

void require_site_count(int n_sites) {
    if (n_sites < 1 || n_sites > kMaxSites)
        throw std::invalid_argument("site count " + std::to_string(n_sites) +
                                    " outside supported range [1," +
                                    std::to_string(kMaxSites) + "]");
}

double sz_eigenvalue(int n_sites, std::uint64_t state) {
    return 0.5 * (n_sites - 2.0 * std::popcount(state));
}

void apply_total_spin(int n_sites, Axis axis, const Operator& in, Operator& out) {
    out.setZero(in.rows(), in.cols());
    apply_axis_matrix(n_sites, axis, in, out, cplx(1.0, 0.0));
}

void apply_total_spin_vec(int n_sites, Axis axis, const Eigen::VectorXcd& in,
                          Eigen::VectorXcd& out) {
    out.setZero(in.size());
    apply_axis_col(n_sites, axis, in.data(), out.data(), cplx(1.0, 0.0));
}

void apply_total_ladder(int n_sites, int direction, const Eigen::VectorXcd& in,
                        Eigen::VectorXcd& out) {
    const std::uint64_t dim = 1ull << n_sites;
    out.setZero(in.size());
    for (int n = 0; n < n_sites; ++n) {
        const std::uint64_t m = 1ull << n;
        if (direction > 0) {
            // s_+ |down> = |up>: receiving state has the bit clear
            for (std::uint64_t j = 0; j < dim; ++j)
                if (!(j & m)) out[j] += in[j | m];
        } else {
            for (std::uint64_t j = 0; j < dim; ++j)
                if (j & m) out[j] += in[j ^ m];
        }
    }
}

Operator dense_total_spin(int n_sites, Axis axis) {
    require_site_count(n_sites);
    const Eigen::Index dim = 1ll << n_sites;
    Operator s = Operator::Zero(dim, dim);
    if (axis == Axis::z) {
        for (Eigen::Index j = 0; j < dim; ++j)
            s(j, j) = sz_eigenvalue(n_sites, static_cast<std::uint64_t>(j));
        return s;
    }
    for (int n = 0; n < n_sites; ++n) {
        const Eigen::Index m = 1ll << n;
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (axis == Axis::x) {
                s(j, j ^ m) += 0.5;
            } else {
                s(j, j ^ m) += (j & m) ? 0.5 * kI : -0.5 * kI;
            }
        }
    }
    return s;
}

SpinOperatorSet build_site_spin(int n_sites, int site) {
    require_site_count(n_sites);
    if (site < 1 || site > n_sites)
        throw std::invalid_argument("site index out of bounds");
    const Eigen::Index dim = 1ll << n_sites;
    const Eigen::Index m = 1ll << (site - 1);
    SpinOperatorSet set{SpinContext::product, static_cast<int>(dim), n_sites, 0,
                        Operator::Zero(dim, dim), Operator::Zero(dim, dim),
                        Operator::Zero(dim, dim)};
    for (Eigen::Index j = 0; j < dim; ++j) {
        set.sx(j, j ^ m) = 0.5;
        set.sy(j, j ^ m) = (j & m) ? 0.5 * kI : -0.5 * kI;
        set.sz(j, j) = (j & m) ? -0.5 : 0.5;
    }
    return set;
}

SpinOperatorSet build_total_spin(int n_sites) {
    require_site_count(n_sites);
    SpinOperatorSet set{SpinContext::product, 1 << n_sites, n_sites, 0,
                        dense_total_spin(n_sites, Axis::x),
                        dense_total_spin(n_sites, Axis::y),
                        dense_total_spin(n_sites, Axis::z)};
    return set;
}

SpinOperatorSet spin_irrep(int two_j) {
    if (two_j < 0) throw std::invalid_argument("spin_irrep: 2J must be nonnegative");
    const int dim = two_j + 1;
    const double j = 0.5 * two_j;
    Operator sp = Operator::Zero(dim, dim);
    Operator sz = Operator::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double m = j - k;
        sz(k, k) = m;
        if (k > 0) sp(k - 1, k) = std::sqrt((j - m) * (j + m + 1.0));
    }
    const Operator sm = sp.adjoint();
    SpinOperatorSet set{SpinContext::irrep, dim, 0, two_j,
                        0.5 * (sp + sm), -0.5 * kI * (sp - sm), sz};
    return set;
}

long long block_degeneracy(int n_sites, int two_j) {
    if (n_sites < 1 || n_sites > 24)
        throw std::invalid_argument("block_degeneracy: N outside [1,24]");
    if (two_j < 0 || two_j > n_sites || (n_sites - two_j) % 2 != 0)
        throw std::invalid_argument("block_degeneracy: inadmissible (N, 2J) pair");
    // Cancellation-free ballot form of (2J+1)/(N+1) binom(N+1, N/2+J+1).
    const int k = (n_sites + two_j) / 2;
    return static_cast<long long>(binomial(n_sites, k) - binomial(n_sites, k + 1));
}

BlockSpectrum block_spectrum(int n_sites) {
    BlockSpectrum bs{n_sites, {}};
    for (int two_j = n_sites; two_j >= 0; two_j -= 2)
        bs.sectors.push_back({two_j, block_degeneracy(n_sites, two_j), two_j + 1});
    return bs;
}

namespace {

// Shared DFS over the distinct orderings of one monomial's factors.
// `apply` left-multiplies the accumulator by the spin component.
template <typename ApplyFn, typename EmitFn>
void weyl_dfs(int a, int b, int c, const Operator& q, const ApplyFn& apply,
              const EmitFn& emit) {
    if (a == 0 && b == 0 && c == 0) {
        emit(q);
        return;
    }
    Operator next(q.rows(), q.cols());
    if (a > 0) {
        apply(Axis::x, q, next);
        weyl_dfs(a - 1, b, c, next, apply, emit);
    }
    if (b > 0) {
        apply(Axis::y, q, next);
        weyl_dfs(a, b - 1, c, next, apply, emit);
    }
    if (c > 0) {
        apply(Axis::z, q, next);
        weyl_dfs(a, b, c - 1, next, apply, emit);
    }
}

} // namespace

Operator weyl_ordered_operator(const PolynomialSymbol& p, int n_sites) {
    require_site_count(n_sites);
    if (p.degree() > kMaxWeylDegree)
        throw std::invalid_argument("weyl_ordered_operator: degree exceeds " +
                                    std::to_string(kMaxWeylDegree));
    const Eigen::Index dim = 1ll << n_sites;
    Operator h = Operator::Zero(dim, dim);
    const auto apply = [n_sites](Axis ax, const Operator& in, Operator& out) {
        apply_total_spin(n_sites, ax, in, out);
    };
    for (const auto& mono : p.monomials()) {
        const int d = mono.degree();
        if (d == 0) {
            h.diagonal().array() += n_sites * mono.coeff;
            continue;
        }
        const double leaf_weight = n_sites * mono.coeff *
                                   std::pow(2.0 / n_sites, d) /
                                   multiset_orderings(mono.px, mono.py, mono.pz);
        const Operator id = Operator::Identity(dim, dim);
        weyl_dfs(mono.px, mono.py, mono.pz, id, apply,
                 [&](const Operator& q) { h += leaf_weight * q; });
    }
    return h;
}

Operator weyl_ordered_on(const PolynomialSymbol& p, const SpinOperatorSet& ops,
                         double scale, double prefactor) {
    if (p.degree() > kMaxWeylDegree)
        throw std::invalid_argument("weyl_ordered_on: degree exceeds " +
                                    std::to_string(kMaxWeylDegree));
    const Eigen::Index dim = ops.sx.rows();
    Operator h = Operator::Zero(dim, dim);
    const auto apply = [&](Axis ax, const Operator& in, Operator& out) {
        switch (ax) {
            case Axis::x: out.noalias() = ops.sx * in; break;
            case Axis::y: out.noalias() = ops.sy * in; break;
            case Axis::z: out.noalias() = ops.sz * in; break;
        }
    };
    for (const auto& mono : p.monomials()) {
        const int d = mono.degree();
        if (d == 0) {
            h.diagonal().array() += prefactor * mono.coeff;
            continue;
        }
        const double leaf_weight = prefactor * mono.coeff * std::pow(scale, d) /
                                   multiset_orderings(mono.px, mono.py, mono.pz);
        const Operator id = Operator::Identity(dim, dim);
        weyl_dfs(mono.px, mono.py, mono.pz, id, apply,
                 [&](const Operator& q) { h += leaf_weight * q; });
    }
    return h;
}

Operator directional_operator(const DirectionalDecomposition& dec, int n_sites) {
    require_site_count(n_sites);
    const Eigen::Index dim = 1ll << n_sites;
    Operator h = Operator::Zero(dim, dim);
    h.diagonal().array() += n_sites * dec.constant;
    for (const auto& term : dec.terms) {
        Operator q = Operator::Identity(dim, dim);
        Operator next(dim, dim);
        for (int k = 0; k < term.d; ++k) {
            next.setZero();
            apply_axis_matrix(n_sites, Axis::x, q, next, cplx(term.w.x(), 0.0));
            apply_axis_matrix(n_sites, Axis::y, q, next, cplx(term.w.y(), 0.0));
            apply_axis_matrix(n_sites, Axis::z, q, next, cplx(term.w.z(), 0.0));
            q.swap(next);
        }
        h += n_sites * term.alpha * std::pow(2.0 / n_sites, term.d) * q;
    }
    return h;
}

} // namespace qmf

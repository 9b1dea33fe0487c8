#include "qmf/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qmf {

namespace {

constexpr cplx kI(0.0, 1.0);

/// h += 2 sum_n <c(n), S(n)> for per-site vectors c(n); O(N 2^N) fill.
void add_site_linear(Operator& h, int n_sites, const std::vector<Vec3>& c) {
    const std::uint64_t dim = 1ull << n_sites;
    for (int n = 0; n < n_sites; ++n) {
        const std::uint64_t m = 1ull << n;
        const Vec3& v = c[static_cast<size_t>(n)];
        if (v.x() == 0.0 && v.y() == 0.0 && v.z() == 0.0) continue;
        for (std::uint64_t j = 0; j < dim; ++j) {
            // 2 s_z contributes +-v_z on the diagonal.
            h(j, j) += (j & m) ? -v.z() : v.z();
            if (v.x() != 0.0 || v.y() != 0.0) {
                // 2 s_x = sigma_x, 2 s_y = sigma_y.
                h(j, j ^ m) += v.x() + ((j & m) ? kI * v.y() : -kI * v.y());
            }
        }
    }
}

void add_uniform_linear(Operator& h, int n_sites, const Vec3& c) {
    add_site_linear(h, n_sites, std::vector<Vec3>(static_cast<size_t>(n_sites), c));
}

} // namespace

Operator assemble_field_term(const FieldRealization& r) {
    require_site_count(r.n_sites);
    const Eigen::Index dim = 1ll << r.n_sites;
    Operator h = Operator::Zero(dim, dim);
    add_site_linear(h, r.n_sites, r.fields);
    return h;
}

AssembledHamiltonian assemble_full(const PolynomialSymbol& p, const FieldRealization& r) {
    require_site_count(r.n_sites);
    AssembledHamiltonian out;
    out.n_sites = r.n_sites;
    out.symbol = p;
    out.fields = r;
    out.matrix = weyl_ordered_operator(p, r.n_sites);
    add_site_linear(out.matrix, r.n_sites, r.fields);
    return out;
}

Operator tilt_term(int n_sites, const Vec3& gamma) {
    require_site_count(n_sites);
    const Eigen::Index dim = 1ll << n_sites;
    Operator h = Operator::Zero(dim, dim);
    add_uniform_linear(h, n_sites, gamma / std::sqrt(double(n_sites)));
    return h;
}

AssembledHamiltonian assemble_perturbed(const AssembledHamiltonian& h, const GaussianTilt& t) {
    AssembledHamiltonian out = h;
    add_uniform_linear(out.matrix, h.n_sites, t.gamma / std::sqrt(double(h.n_sites)));
    out.tilt = t.gamma;
    return out;
}

AssembledHamiltonian assemble_linearized(const Vec3& alpha, const Vec3& m,
                                         const FieldRealization& r) {
    if (!(alpha.x() >= 0.0 && alpha.y() >= 0.0 && alpha.z() >= 0.0))
        throw std::invalid_argument("assemble_linearized: alpha must be >= 0");
    if (m.norm() > 1.0 + 1e-12)
        throw std::invalid_argument("assemble_linearized: |m| must be <= 1");
    require_site_count(r.n_sites);
    const Eigen::Index dim = 1ll << r.n_sites;
    AssembledHamiltonian out;
    out.n_sites = r.n_sites;
    out.fields = r;
    out.penalty = std::make_pair(alpha, m);
    out.matrix = Operator::Zero(dim, dim);
    out.matrix.diagonal().array() += r.n_sites * alpha.cwiseProduct(m).dot(m);
    // -4 alpha_mu m_mu S_mu == 2 sum_n <-2 alpha . m, S(n)>
    add_uniform_linear(out.matrix, r.n_sites, -2.0 * alpha.cwiseProduct(m));
    add_site_linear(out.matrix, r.n_sites, r.fields);
    return out;
}

Operator assemble_quadratic_penalty(const Vec3& m, int n_sites) {
    if (m.norm() > 1.0 + 1e-12)
        throw std::invalid_argument("assemble_quadratic_penalty: |m| must be <= 1");
    require_site_count(n_sites);
    const Eigen::Index dim = 1ll << n_sites;
    // N sum (M - m)^2 = (4/N) S^2 - 4 <m, S> + N |m|^2.
    Operator h = Operator::Zero(dim, dim);
    Operator tmp(dim, dim), tmp2(dim, dim);
    for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
        apply_total_spin(n_sites, ax, Operator::Identity(dim, dim), tmp);
        apply_total_spin(n_sites, ax, tmp, tmp2);
        h += (4.0 / n_sites) * tmp2;
    }
    add_uniform_linear(h, n_sites, -m);
    h.diagonal().array() += n_sites * m.squaredNorm();
    return h;
}

bool commutes_with_sz(const PolynomialSymbol& p, const FieldRealization& r) {
    if (!p.depends_only_on_z()) return false;
    for (const auto& b : r.fields)
        if (b.x() != 0.0 || b.y() != 0.0) return false;
    return true;
}

Eigen::VectorXd diagonal_energies(const PolynomialSymbol& p, const FieldRealization& r) {
    if (!commutes_with_sz(p, r))
        throw std::invalid_argument("diagonal_energies: model does not commute with Sz");
    require_site_count(r.n_sites);
    const int n = r.n_sites;
    const std::uint64_t dim = 1ull << n;
    Eigen::VectorXd e(dim);
    for (std::uint64_t j = 0; j < dim; ++j) {
        const double mz = 2.0 * sz_eigenvalue(n, j) / n;
        double v = n * p(Vec3(0.0, 0.0, mz));
        for (int s = 0; s < n; ++s)
            v += ((j >> s) & 1) ? -r.fields[s].z() : r.fields[s].z();
        e(j) = v;
    }
    return e;
}

} // namespace qmf

#include "qmf/coherent.hpp"

#include "qmf/quadrature.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmf {

namespace {

constexpr cplx kI(0.0, 1.0);
constexpr double kFourPi = 4.0 * std::numbers::pi;

} // namespace

SphereQuadrature SphereQuadrature::tensor(int n_theta, int n_phi) {
    if (n_theta < 1 || n_phi < 1)
        throw std::invalid_argument("SphereQuadrature: node counts must be >= 1");
    const auto gl = quad::gauss_legendre(n_theta);
    SphereQuadrature q;
    q.exactness = std::min(2 * n_theta - 1, n_phi - 1);
    const double wphi = 2.0 * std::numbers::pi / n_phi;
    q.nodes.reserve(static_cast<size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double theta = std::acos(gl.nodes[static_cast<size_t>(i)]);
        for (int j = 0; j < n_phi; ++j)
            q.nodes.push_back({theta, wphi * j, gl.weights[static_cast<size_t>(i)] * wphi});
    }
    return q;
}

SphereQuadrature SphereQuadrature::for_degree(int degree) {
    const int d = std::max(degree, 0);
    return tensor(d / 2 + 1, d + 1);
}

Vec3 sphere_direction(double theta, double phi) {
    return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta));
}

Eigen::VectorXcd coherent_vector(int two_j, double theta, double phi) {
    const SpinOperatorSet ops = spin_irrep(two_j);
    const Operator s_plus = ops.sx + kI * ops.sy;
    const Operator s_minus = ops.sx - kI * ops.sy;
    // U = exp(A), A = (theta/2)(e^{i phi} S_- - e^{-i phi} S_+) anti-Hermitian;
    // exponentiate through the Hermitian generator iA.
    const Operator a = 0.5 * theta * (std::exp(kI * phi) * s_minus -
                                      std::exp(-kI * phi) * s_plus);
    const Operator hgen = kI * a;
    Eigen::VectorXd evals;
    Operator evecs;
    linalg::eigensystem(hgen, evals, evecs);
    Eigen::VectorXcd ref = Eigen::VectorXcd::Zero(two_j + 1);
    ref(0) = 1.0; // highest-weight state of Sz
    Eigen::VectorXcd coeff = evecs.adjoint() * ref;
    for (int k = 0; k <= two_j; ++k) coeff(k) *= std::exp(-kI * evals(k));
    return evecs * coeff;
}

CoherentFrame CoherentFrame::build(int two_j, const SphereQuadrature& q) {
    CoherentFrame f;
    f.two_j = two_j;
    f.states.reserve(q.nodes.size());
    for (const auto& node : q.nodes)
        f.states.push_back(coherent_vector(two_j, node.theta, node.phi));
    return f;
}

double resolution_check(int two_j, const SphereQuadrature& q) {
    if (q.exactness < 2 * two_j)
        throw std::invalid_argument("resolution_check: quadrature exactness " +
                                    std::to_string(q.exactness) + " below 2(2J) = " +
                                    std::to_string(2 * two_j));
    const CoherentFrame frame = CoherentFrame::build(two_j, q);
    const int dim = two_j + 1;
    Operator r = Operator::Zero(dim, dim);
    for (size_t i = 0; i < q.nodes.size(); ++i) {
        const double w = q.nodes[i].weight * dim / kFourPi;
        r.noalias() += w * frame.states[i] * frame.states[i].adjoint();
    }
    r -= Operator::Identity(dim, dim);
    return linalg::max_abs(r);
}

double lower_symbol(const Operator& g, const Eigen::VectorXcd& state) {
    if (g.rows() != state.size())
        throw std::invalid_argument("lower_symbol: dimension mismatch");
    const cplx v = state.dot(g * state);
    return v.real();
}

Operator upper_symbol_operator(const std::function<double(const Vec3&)>& f, int two_j,
                               int n_sites, const SphereQuadrature& q) {
    const CoherentFrame frame = CoherentFrame::build(two_j, q);
    const int dim = two_j + 1;
    const double radius = n_sites > 0 ? double(two_j) / n_sites : 0.0;
    Operator g = Operator::Zero(dim, dim);
    Operator resolution = Operator::Zero(dim, dim);
    for (size_t i = 0; i < q.nodes.size(); ++i) {
        const double w = q.nodes[i].weight * dim / kFourPi;
        const Operator outer = frame.states[i] * frame.states[i].adjoint();
        const Vec3 m = radius * sphere_direction(q.nodes[i].theta, q.nodes[i].phi);
        g.noalias() += (w * n_sites * f(m)) * outer;
        resolution += w * outer;
    }
    resolution -= Operator::Identity(dim, dim);
    if (linalg::max_abs(resolution) > 1e-10)
        throw std::runtime_error("upper_symbol_operator: quadrature fails the "
                                 "constant-function self-test");
    return g;
}

BerezinBounds berezin_lieb_bounds(const Operator& g_op,
                                  const std::function<double(double, double)>& upper_symbol,
                                  int two_j, const SphereQuadrature& q) {
    if (g_op.rows() != two_j + 1)
        throw std::invalid_argument("berezin_lieb_bounds: operator dimension != 2J+1");
    linalg::require_hermitian(g_op, 1e-10);
    const CoherentFrame frame = CoherentFrame::build(two_j, q);
    const double dim = two_j + 1.0;
    BerezinBounds b{0.0, 0.0, 0.0};
    for (size_t i = 0; i < q.nodes.size(); ++i) {
        const double w = q.nodes[i].weight * dim / kFourPi;
        b.lower += w * std::exp(lower_symbol(g_op, frame.states[i]));
        b.upper += w * std::exp(upper_symbol(q.nodes[i].theta, q.nodes[i].phi));
    }
    const Eigen::VectorXd evals = linalg::eigenvalues(g_op);
    for (double e : evals) b.exact += std::exp(e);
    const double tol = 1e-8;
    if (b.lower > b.exact * (1.0 + tol) + tol || b.exact > b.upper * (1.0 + tol) + tol)
        throw std::runtime_error("berezin_lieb_bounds: sandwich violated");
    return b;
}

std::vector<std::pair<int, double>> duffield_profile(const PolynomialSymbol& p, int n_sites) {
    require_site_count(n_sites);
    std::vector<std::pair<int, double>> out;
    for (int two_j = n_sites; two_j >= 0; two_j -= 2) {
        const SpinOperatorSet ops = spin_irrep(two_j);
        const Operator weyl = weyl_ordered_on(p, ops, 2.0 / n_sites, 1.0);
        const SphereQuadrature q = SphereQuadrature::for_degree(2 * two_j + p.degree() + 2);
        const CoherentFrame frame = CoherentFrame::build(two_j, q);
        const double radius = double(two_j) / n_sites;
        Operator integral = Operator::Zero(two_j + 1, two_j + 1);
        for (size_t i = 0; i < q.nodes.size(); ++i) {
            const double w = q.nodes[i].weight * (two_j + 1) / kFourPi;
            const Vec3 m = radius * sphere_direction(q.nodes[i].theta, q.nodes[i].phi);
            integral.noalias() += (w * p(m)) * frame.states[i] * frame.states[i].adjoint();
        }
        out.push_back({two_j, linalg::spectral_norm_hermitian(weyl - integral)});
    }
    return out;
}

double duffield_error(const PolynomialSymbol& p, int n_sites) {
    double e = 0.0;
    for (const auto& [two_j, gap] : duffield_profile(p, n_sites)) e = std::max(e, gap);
    return e;
}

SectorIsometries build_sector_isometries(int n_sites) {
    require_site_count(n_sites);
    if (n_sites > 12)
        throw std::invalid_argument("build_sector_isometries: N <= 12 required");
    const std::uint64_t dim = 1ull << n_sites;

    // computational-basis states per down-bit count, ascending integer order
    std::vector<std::vector<std::uint64_t>> by_count(static_cast<size_t>(n_sites) + 1);
    for (std::uint64_t s = 0; s < dim; ++s)
        by_count[static_cast<size_t>(std::popcount(s))].push_back(s);

    SectorIsometries iso;
    iso.n_sites = n_sites;
    for (int two_j = n_sites; two_j >= 0; two_j -= 2) {
        const int k = (n_sites - two_j) / 2; // down bits at top weight m = J
        const auto& top = by_count[static_cast<size_t>(k)];
        const long long mult = block_degeneracy(n_sites, two_j);

        Eigen::MatrixXd kernel;
        if (k == 0) {
            kernel = Eigen::MatrixXd::Identity(1, 1);
        } else {
            const auto& above = by_count[static_cast<size_t>(k - 1)];
            std::vector<long long> row_of(dim, -1);
            for (size_t r = 0; r < above.size(); ++r)
                row_of[above[r]] = static_cast<long long>(r);
            Eigen::MatrixXd a =
                Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(above.size()),
                                      static_cast<Eigen::Index>(top.size()));
            for (size_t c = 0; c < top.size(); ++c) {
                std::uint64_t s = top[c];
                for (int n = 0; n < n_sites; ++n) {
                    const std::uint64_t m = 1ull << n;
                    if (s & m) a(row_of[s ^ m], static_cast<Eigen::Index>(c)) += 1.0;
                }
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            lu.setThreshold(1e-10);
            kernel = lu.kernel();
            // orthonormalize in column order
            for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
                for (Eigen::Index prev = 0; prev < c; ++prev)
                    kernel.col(c) -= kernel.col(prev).dot(kernel.col(c)) * kernel.col(prev);
                const double nrm = kernel.col(c).norm();
                if (nrm < 1e-12)
                    throw std::runtime_error("sector isometry: degenerate kernel basis");
                kernel.col(c) /= nrm;
            }
        }
        if (kernel.cols() != mult)
            throw std::runtime_error("sector isometry: kernel dimension " +
                                     std::to_string(kernel.cols()) +
                                     " != multiplicity " + std::to_string(mult));

        const double j = 0.5 * two_j;
        SectorIsometries::Sector sector;
        sector.two_j = two_j;
        sector.multiplicity = mult;
        sector.basis.resize(static_cast<Eigen::Index>(dim),
                            static_cast<Eigen::Index>(mult) * (two_j + 1));
        Eigen::VectorXcd v(static_cast<Eigen::Index>(dim)), w(static_cast<Eigen::Index>(dim));
        for (long long alpha = 0; alpha < mult; ++alpha) {
            v.setZero();
            for (size_t c = 0; c < top.size(); ++c)
                v(static_cast<Eigen::Index>(top[c])) = kernel(static_cast<Eigen::Index>(c),
                                                              static_cast<Eigen::Index>(alpha));
            for (int step = 0; step <= two_j; ++step) {
                sector.basis.col(alpha * (two_j + 1) + step) = v.real();
                if (step == two_j) break;
                const double m = j - step;
                apply_total_ladder(n_sites, -1, v, w);
                v = w / std::sqrt((j + m) * (j - m + 1.0));
            }
        }
        iso.sectors.push_back(std::move(sector));
    }
    return iso;
}

Operator assemble_hv_blocks(const std::function<double(const Vec3&)>& f, int n_sites,
                            const SphereQuadrature& q) {
    const SectorIsometries iso = build_sector_isometries(n_sites);
    const Eigen::Index dim = 1ll << n_sites;
    Operator h = Operator::Zero(dim, dim);
    for (const auto& sector : iso.sectors) {
        const int bd = sector.two_j + 1;
        const Operator g = upper_symbol_operator(f, sector.two_j, n_sites, q);
        const Operator v = sector.basis.cast<cplx>();
        Operator t(dim, v.cols());
        for (long long alpha = 0; alpha < sector.multiplicity; ++alpha)
            t.middleCols(alpha * bd, bd).noalias() = v.middleCols(alpha * bd, bd) * g;
        linalg::gemm_acc(t, v, h, /*adjoint_a=*/false, /*adjoint_b=*/true);
    }
    return h;
}

} // namespace qmf

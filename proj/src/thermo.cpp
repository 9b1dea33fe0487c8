#include "qmf/thermo.hpp"

#include "qmf/varform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmf {

namespace {

Eigen::VectorXd boltzmann_weights(const Eigen::VectorXd& evals, double& log_z) {
    const double emax = evals.maxCoeff();
    Eigen::VectorXd w = (evals.array() - emax).exp();
    const double s = w.sum();
    log_z = emax + std::log(s);
    return w / s;
}

void require_same_dim(const SpectralData& sd, const Operator& a) {
    if (a.rows() != sd.dim || a.cols() != sd.dim)
        throw std::invalid_argument("observable dimension does not match spectral data");
}

/// A_kl = Psi^H (A - <A>) Psi together with <A>.
struct ProjectedObservable {
    Operator kl;
    double mean;
};

ProjectedObservable project_centered(const SpectralData& sd, const Operator& a) {
    require_same_dim(sd, a);
    Operator b, kl;
    linalg::gemm(a, sd.eigenvectors, b);
    linalg::gemm(sd.eigenvectors, b, kl, /*adjoint_a=*/true);
    double mean = 0.0;
    for (int k = 0; k < sd.dim; ++k) mean += sd.boltzmann(k) * kl(k, k).real();
    kl.diagonal().array() -= mean;
    return {std::move(kl), mean};
}

} // namespace

SpectralData diagonalize(const Operator& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: square matrix required");
    linalg::require_hermitian(h, 1e-10);
    SpectralData sd;
    sd.dim = static_cast<int>(h.rows());
    if (linalg::is_diagonal(h)) {
        // exact spectral data: sorted diagonal + permutation eigenvectors
        const Eigen::VectorXd d = h.diagonal().real();
        std::vector<int> order(static_cast<size_t>(sd.dim));
        for (int i = 0; i < sd.dim; ++i) order[static_cast<size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return d(a) < d(b); });
        sd.eigenvalues.resize(sd.dim);
        sd.eigenvectors = Operator::Zero(sd.dim, sd.dim);
        for (int k = 0; k < sd.dim; ++k) {
            sd.eigenvalues(k) = d(order[static_cast<size_t>(k)]);
            sd.eigenvectors(order[static_cast<size_t>(k)], k) = 1.0;
        }
    } else {
        linalg::eigensystem(h, sd.eigenvalues, sd.eigenvectors);
    }
    sd.boltzmann = boltzmann_weights(sd.eigenvalues, sd.log_z);
    return sd;
}

Eigen::VectorXd spectrum(const Operator& h) {
    linalg::require_hermitian(h, 1e-10);
    if (linalg::is_diagonal(h)) {
        Eigen::VectorXd w = h.diagonal().real();
        std::sort(w.begin(), w.end());
        return w;
    }
    return linalg::eigenvalues(h);
}

double pressure_from_spectrum(const Eigen::VectorXd& evals, int n_sites) {
    return linalg::log_sum_exp({evals.data(), static_cast<size_t>(evals.size())}) / n_sites;
}

double pressure(const Operator& h, int n_sites) {
    return pressure_from_spectrum(spectrum(h), n_sites);
}

double pressure(const SpectralData& sd, int n_sites) { return sd.log_z / n_sites; }

double gibbs_average(const SpectralData& sd, const Operator& a) {
    require_same_dim(sd, a);
    Operator b;
    linalg::gemm(a, sd.eigenvectors, b);
    cplx acc(0.0, 0.0);
    for (int k = 0; k < sd.dim; ++k)
        acc += sd.boltzmann(k) * sd.eigenvectors.col(k).dot(b.col(k));
    if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
        throw std::runtime_error("gibbs_average: imaginary residue beyond tolerance");
    return acc.real();
}

double thermal_variance(const SpectralData& sd, const Operator& a) {
    require_same_dim(sd, a);
    Operator b;
    linalg::gemm(a, sd.eigenvectors, b);
    double mean = 0.0, second = 0.0;
    for (int k = 0; k < sd.dim; ++k) {
        mean += sd.boltzmann(k) * sd.eigenvectors.col(k).dot(b.col(k)).real();
        second += sd.boltzmann(k) * b.col(k).squaredNorm();
    }
    return second - mean * mean;
}

IdentityPair spectral_variance_identity(const SpectralData& sd, const Operator& a) {
    const auto proj = project_centered(sd, a);
    double rhs = 0.0;
    for (int l = 0; l < sd.dim; ++l)
        for (int k = 0; k < sd.dim; ++k)
            rhs += 0.5 * std::norm(proj.kl(k, l)) * (sd.boltzmann(k) + sd.boltzmann(l));
    return {thermal_variance(sd, a), rhs};
}

IdentityPair commutator_moment(const SpectralData& sd, const Operator& h,
                               const Operator& a) {
    require_same_dim(sd, a);
    require_same_dim(sd, h);
    Operator ah, ha;
    linalg::gemm(a, h, ah);
    linalg::gemm(h, a, ha);
    const Operator comm = ah - ha; // anti-Hermitian
    Operator c;
    linalg::gemm(comm, sd.eigenvectors, c);
    double lhs = 0.0;
    for (int k = 0; k < sd.dim; ++k)
        lhs -= sd.boltzmann(k) * c.col(k).squaredNorm(); // <K^2> = -<K^H K>
    const auto proj = project_centered(sd, a);
    double rhs = 0.0;
    for (int l = 0; l < sd.dim; ++l)
        for (int k = 0; k < sd.dim; ++k) {
            const double de = sd.eigenvalues(k) - sd.eigenvalues(l);
            rhs -= 0.5 * std::norm(proj.kl(k, l)) * (sd.boltzmann(k) + sd.boltzmann(l)) *
                   de * de;
        }
    return {lhs, rhs};
}

namespace {

double curvature_sum(const SpectralData& sd, const ProjectedObservable& proj) {
    double s = 0.0;
    for (int l = 0; l < sd.dim; ++l) {
        const double el = sd.eigenvalues(l);
        for (int k = 0; k < sd.dim; ++k) {
            const double ek = sd.eigenvalues(k);
            const double w2 = std::norm(proj.kl(k, l));
            if (w2 == 0.0) continue;
            // degenerate pairs use the e^{E_k} limit branch
            if (std::abs(ek - el) <= 1e-9 * std::max(1.0, std::abs(ek))) {
                s += w2 * sd.boltzmann(k);
            } else {
                s += w2 * (sd.boltzmann(k) - sd.boltzmann(l)) / (ek - el);
            }
        }
    }
    return s;
}

} // namespace

double curvature_formula(const SpectralData& sd, const Operator& m_mu) {
    return curvature_sum(sd, project_centered(sd, m_mu));
}

CurvatureCheck duhamel_curvature(const Operator& h, int n_sites, Axis mu, double step) {
    Vec3 dir = Vec3::Zero();
    dir[static_cast<int>(mu)] = 1.0;
    const Operator b = tilt_term(n_sites, dir); // sqrt(N) M_mu
    const Operator m_mu = b / std::sqrt(double(n_sites));

    CurvatureCheck out{};
    out.formula = curvature_formula(diagonalize(h), m_mu);

    const auto p_at = [&](double t) { return pressure(Operator(h + t * b), n_sites); };
    const double p0 = p_at(0.0);
    const double fd1 = (p_at(step) - 2.0 * p0 + p_at(-step)) / (step * step);
    const double fd2 =
        (p_at(2.0 * step) - 2.0 * p0 + p_at(-2.0 * step)) / (4.0 * step * step);
    out.finite_difference = fd1;
    out.richardson = (4.0 * fd1 - fd2) / 3.0;
    return out;
}

double bogoliubov_gap(const Operator& h, const Operator& a, int n_sites) {
    if (a.rows() != h.rows() || a.cols() != h.cols())
        throw std::invalid_argument("bogoliubov_gap: dimension mismatch");
    const SpectralData sd = diagonalize(h);
    const double mean_a = gibbs_average(sd, a);
    return pressure(Operator(h + a), n_sites) - mean_a / n_sites - pressure(sd, n_sites);
}

FluctuationChain fluctuation_chain(const SpectralData& sd, const Operator& h,
                                   const Operator& m_mu) {
    FluctuationChain c{};
    const auto proj = project_centered(sd, m_mu);
    c.variance = thermal_variance(sd, m_mu);
    c.curvature = curvature_sum(sd, proj);
    double vsum = 0.0, csum = 0.0, rem = 0.0;
    for (int l = 0; l < sd.dim; ++l) {
        const double el = sd.eigenvalues(l);
        for (int k = 0; k < sd.dim; ++k) {
            const double w2 = std::norm(proj.kl(k, l));
            if (w2 == 0.0) continue;
            const double de = sd.eigenvalues(k) - el;
            const double plus = sd.boltzmann(k) + sd.boltzmann(l);
            vsum += 0.5 * w2 * plus;
            csum -= 0.5 * w2 * plus * de * de;
            rem += 0.5 * w2 * std::abs(sd.boltzmann(k) - sd.boltzmann(l));
        }
    }
    c.variance_sum = vsum;
    c.commutator_sum = csum;
    const IdentityPair comm = commutator_moment(sd, h, m_mu);
    c.commutator = comm.lhs;
    c.remainder = rem;
    return c;
}

MonteCarloStat fluctuation_estimate(const PolynomialSymbol& p, const FieldRealization& r,
                                    std::span<const std::uint64_t> tilt_seeds) {
    if (tilt_seeds.empty())
        throw std::invalid_argument("fluctuation_estimate: need at least one tilt seed");
    const int n = r.n_sites;
    const AssembledHamiltonian base = assemble_full(p, r);
    std::array<Operator, 3> m_ops;
    for (int ax = 0; ax < 3; ++ax)
        m_ops[ax] = (2.0 / n) * dense_total_spin(n, static_cast<Axis>(ax));
    std::vector<double> values;
    values.reserve(tilt_seeds.size());
    for (const std::uint64_t s : tilt_seeds) {
        const auto tilted = assemble_perturbed(base, GaussianTilt::from_seed(s));
        const SpectralData sd = diagonalize(tilted.matrix);
        double total = 0.0;
        for (const auto& m : m_ops) total += thermal_variance(sd, m);
        values.push_back(total);
    }
    MonteCarloStat stat;
    stat.samples = static_cast<int>(values.size());
    for (double v : values) stat.mean += v;
    stat.mean /= stat.samples;
    if (stat.samples > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - stat.mean) * (v - stat.mean);
        stat.std_error = std::sqrt(ss / (stat.samples - 1)) / std::sqrt(double(stat.samples));
    }
    return stat;
}

// --- product trial states ------------------------------------------------

ProductTrialState trial_state(const FieldRealization& r, const Vec3& h) {
    ProductTrialState ts;
    ts.n_sites = r.n_sites;
    ts.h = h;
    ts.radii.reserve(r.n_sites);
    ts.directions.reserve(r.n_sites);
    for (const auto& b : r.fields) {
        const Vec3 v = h + b;
        const double rad = v.norm();
        ts.radii.push_back(rad);
        ts.directions.push_back(rad > 0.0 ? Vec3(v / rad) : Vec3::Zero());
    }
    return ts;
}

Vec3 trial_site_moment(const ProductTrialState& ts, int site) {
    return 0.5 * std::tanh(ts.radii[static_cast<size_t>(site - 1)]) *
           ts.directions[static_cast<size_t>(site - 1)];
}

double trial_directional_moment(const ProductTrialState& ts, const Vec3& w, int d) {
    // Site variables X_n = <w, S(n)> satisfy X_n^2 = |w|^2/4, so all site
    // moments close over (mean, |w|). Partial-sum moments by convolution.
    const double w2 = 0.25 * w.squaredNorm();
    std::vector<double> binom(static_cast<size_t>(d) + 1, 0.0);
    std::vector<double> mom(static_cast<size_t>(d) + 1, 0.0);
    mom[0] = 1.0;
    std::vector<double> next(mom.size());
    std::vector<double> site_pow(mom.size());
    for (int n = 1; n <= ts.n_sites; ++n) {
        const double m1 = w.dot(trial_site_moment(ts, n));
        site_pow[0] = 1.0;
        for (int j = 1; j <= d; ++j)
            site_pow[static_cast<size_t>(j)] =
                (j % 2 == 0) ? std::pow(w2, j / 2) : std::pow(w2, (j - 1) / 2) * m1;
        std::fill(next.begin(), next.end(), 0.0);
        for (int j = 0; j <= d; ++j) {
            double c = 1.0; // binomial(j, i) built incrementally
            for (int i = 0; i <= j; ++i) {
                next[static_cast<size_t>(j)] +=
                    c * mom[static_cast<size_t>(j - i)] * site_pow[static_cast<size_t>(i)];
                c = c * (j - i) / (i + 1.0);
            }
        }
        mom.swap(next);
    }
    return std::pow(2.0 / ts.n_sites, d) * mom[static_cast<size_t>(d)];
}

double trial_energy(const ProductTrialState& ts, const PolynomialSymbol& p,
                    const FieldRealization& r) {
    const int n = ts.n_sites;
    double e = 0.0;
    for (int site = 1; site <= n; ++site)
        e += 2.0 * r.fields[static_cast<size_t>(site - 1)].dot(trial_site_moment(ts, site));
    const DirectionalDecomposition dec = directional_decomposition(p);
    e += n * dec.constant;
    for (const auto& t : dec.terms)
        e += n * t.alpha * trial_directional_moment(ts, t.w, t.d);
    return e;
}

double trial_entropy(const ProductTrialState& ts) {
    double s = 0.0;
    for (double r : ts.radii) s += binary_entropy(std::tanh(r));
    return s;
}

double gibbs_trial_bound(const PolynomialSymbol& p, const FieldRealization& r,
                         const Vec3& h) {
    const ProductTrialState ts = trial_state(r, h);
    return (trial_energy(ts, p, r) + trial_entropy(ts)) / r.n_sites;
}

Operator dense_trial_state(const ProductTrialState& ts) {
    Operator rho = Operator::Ones(1, 1);
    // Site 1 is the fastest-varying index: rho = rho_N kron ... kron rho_1.
    for (int site = ts.n_sites; site >= 1; --site) {
        const double t = std::tanh(ts.radii[static_cast<size_t>(site - 1)]);
        const Vec3& v = ts.directions[static_cast<size_t>(site - 1)];
        Eigen::Matrix2cd site_rho;
        site_rho << 0.5 * (1.0 + t * v.z()), 0.5 * t * cplx(v.x(), -v.y()),
            0.5 * t * cplx(v.x(), v.y()), 0.5 * (1.0 - t * v.z());
        Operator out(rho.rows() * 2, rho.cols() * 2);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j)
                out.block(i * rho.rows(), j * rho.cols(), rho.rows(), rho.cols()) =
                    site_rho(i, j) * rho;
        rho = std::move(out);
    }
    return rho;
}

double von_neumann_entropy(const Operator& rho) {
    const Eigen::VectorXd evals = spectrum(rho);
    double s = 0.0;
    for (double lam : evals) {
        if (lam < -1e-10) throw std::invalid_argument("von_neumann_entropy: negative eigenvalue");
        if (lam > 0.0) s -= lam * std::log(lam);
    }
    return s;
}

ThermalReport thermal_report(const SpectralData& sd, int n_sites) {
    ThermalReport rep;
    rep.log_z = sd.log_z;
    rep.pressure = sd.log_z / n_sites;
    for (int ax = 0; ax < 3; ++ax) {
        const Operator m = (2.0 / n_sites) * dense_total_spin(n_sites, static_cast<Axis>(ax));
        rep.averages[std::string("M") + axis_name(static_cast<Axis>(ax))] =
            gibbs_average(sd, m);
        rep.magnetization_variances[static_cast<size_t>(ax)] = thermal_variance(sd, m);
    }
    return rep;
}

} // namespace qmf

#include "qmf/varform.hpp"

#include "qmf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmf {

double binary_entropy(double r) {
    if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("binary_entropy: r must lie in [0,1]");
    const double a = 0.5 * (1.0 + r), b = 0.5 * (1.0 - r);
    double s = 0.0;
    if (a > 0.0) s -= a * std::log(a);
    if (b > 0.0) s -= b * std::log(b);
    return s;
}

namespace {

double log2cosh(double x) {
    // log(2 cosh x) = |x| + log(1 + e^{-2|x|}), overflow-safe
    const double ax = std::abs(x);
    return ax + std::log1p(std::exp(-2.0 * ax));
}

} // namespace

LambdaEvaluator LambdaEvaluator::make(const FieldDistribution& dist, bool annealed) {
    switch (dist.kind()) {
        case FieldKind::point_mass:
            return make(dist, dist.is_zero() ? LambdaMethod::closed_form : LambdaMethod::atom_sum,
                        0, 0, annealed);
        case FieldKind::axis_dichotomous:
        case FieldKind::empirical:
            return make(dist, LambdaMethod::atom_sum, 0, 0, annealed);
        case FieldKind::gaussian:
            if (dist.param_sigma() == 0.0)
                return make(dist, LambdaMethod::gauss_hermite, 1, 0, annealed);
            return make(dist, LambdaMethod::gauss_hermite, 40, 0, annealed);
        case FieldKind::uniform_box:
            return make(dist, LambdaMethod::gauss_legendre, 40, 0, annealed);
    }
    throw std::logic_error("unreachable");
}

LambdaEvaluator LambdaEvaluator::make(const FieldDistribution& dist, LambdaMethod method,
                                      int order_or_count, std::uint64_t seed,
                                      bool annealed) {
    LambdaEvaluator ev;
    ev.dist_ = dist;
    ev.method_ = method;
    ev.annealed_ = annealed;
    if (annealed && !dist.has_exponential_moment())
        throw std::invalid_argument("annealed evaluator requires a finite exponential moment");
    switch (method) {
        case LambdaMethod::closed_form:
            if (dist.kind() != FieldKind::point_mass || !dist.is_zero())
                throw std::invalid_argument("closed_form applies to the point mass at zero only");
            ev.nodes_ = {{Vec3::Zero(), 1.0}};
            break;
        case LambdaMethod::atom_sum:
            ev.nodes_ = dist.atoms();
            break;
        case LambdaMethod::gauss_hermite: {
            if (dist.kind() != FieldKind::gaussian)
                throw std::invalid_argument("gauss_hermite applies to gaussian kinds only");
            const double sigma = dist.param_sigma();
            const Vec3 mean = dist.param_mean();
            if (sigma == 0.0) {
                ev.nodes_ = {{mean, 1.0}};
                break;
            }
            const auto rule = quad::gauss_hermite_normal(order_or_count);
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                for (size_t j = 0; j < rule.nodes.size(); ++j)
                    for (size_t k = 0; k < rule.nodes.size(); ++k)
                        ev.nodes_.push_back(
                            {mean + sigma * Vec3(rule.nodes[i], rule.nodes[j], rule.nodes[k]),
                             rule.weights[i] * rule.weights[j] * rule.weights[k]});
            break;
        }
        case LambdaMethod::gauss_legendre: {
            if (dist.kind() != FieldKind::uniform_box)
                throw std::invalid_argument("gauss_legendre applies to uniform_box kinds only");
            const auto rule = quad::gauss_legendre(order_or_count);
            std::array<std::vector<std::pair<double, double>>, 3> comp;
            for (int k = 0; k < 3; ++k) {
                const double lo = dist.param_lo()[k], hi = dist.param_hi()[k];
                if (hi > lo) {
                    for (size_t i = 0; i < rule.nodes.size(); ++i)
                        comp[k].push_back({lo + 0.5 * (rule.nodes[i] + 1.0) * (hi - lo),
                                           0.5 * rule.weights[i]});
                } else {
                    comp[k].push_back({lo, 1.0});
                }
            }
            for (const auto& [x, wx] : comp[0])
                for (const auto& [y, wy] : comp[1])
                    for (const auto& [z, wz] : comp[2])
                        ev.nodes_.push_back({Vec3(x, y, z), wx * wy * wz});
            break;
        }
        case LambdaMethod::sample_average: {
            if (order_or_count < 1)
                throw std::invalid_argument("sample_average requires a positive sample count");
            for (int i = 1; i <= order_or_count; ++i)
                ev.nodes_.push_back({dist.sample_site(seed, static_cast<std::uint64_t>(i)),
                                     1.0 / order_or_count});
            break;
        }
    }
    return ev;
}

LambdaEvaluator LambdaEvaluator::annealed_variant() const {
    LambdaEvaluator ev = *this;
    if (!dist_.has_exponential_moment())
        throw std::invalid_argument("annealed evaluator requires a finite exponential moment");
    ev.annealed_ = true;
    return ev;
}

LambdaEval LambdaEvaluator::eval(const Vec3& h) const {
    LambdaEval out;
    const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
    if (!annealed_) {
        double mean_sq = 0.0;
        for (const auto& node : nodes_) {
            const Vec3 v = h + node.value;
            const double r = v.norm();
            const double f = log2cosh(r);
            out.value += node.weight * f;
            mean_sq += node.weight * f * f;
            if (r > 0.0) {
                const Vec3 u = v / r;
                const double t = std::tanh(r);
                out.gradient += node.weight * t * u;
                const Eigen::Matrix3d uu = u * u.transpose();
                out.hessian +=
                    node.weight * ((1.0 - t * t) * uu + (t / r) * (id - uu));
            } else {
                out.hessian += node.weight * id;
            }
        }
        if (method_ == LambdaMethod::sample_average && nodes_.size() > 1) {
            const double var = std::max(0.0, mean_sq - out.value * out.value);
            out.mc_std_error = std::sqrt(var / double(nodes_.size() - 1));
        }
        return out;
    }
    // annealed: Lambda = log(2 F), F = E[cosh r]; moments accumulated in a
    // max-shifted exponential scale for large |h|.
    const double shift = h.norm() + 3.0;
    double f0 = 0.0, fsq = 0.0;
    Vec3 f1 = Vec3::Zero();
    Eigen::Matrix3d f2 = Eigen::Matrix3d::Zero();
    for (const auto& node : nodes_) {
        const Vec3 v = h + node.value;
        const double r = v.norm();
        const double c = std::exp(r - shift) * 0.5 * (1.0 + std::exp(-2.0 * r));
        const double s = std::exp(r - shift) * 0.5 * (1.0 - std::exp(-2.0 * r));
        f0 += node.weight * c;
        fsq += node.weight * c * c;
        if (r > 0.0) {
            const Vec3 u = v / r;
            const Eigen::Matrix3d uu = u * u.transpose();
            f1 += node.weight * s * u;
            f2 += node.weight * (c * uu + (s / r) * (id - uu));
        } else {
            f2 += node.weight * id;
        }
    }
    out.value = std::log(2.0) + std::log(f0) + shift;
    out.gradient = f1 / f0;
    out.hessian = f2 / f0 - (f1 / f0) * (f1 / f0).transpose();
    if (method_ == LambdaMethod::sample_average && nodes_.size() > 1) {
        const double var = std::max(0.0, fsq - f0 * f0);
        out.mc_std_error = std::sqrt(var / double(nodes_.size() - 1)) / f0;
    }
    return out;
}

double lambda_value(const LambdaEvaluator& ev, const Vec3& h) { return ev.value(h); }
Vec3 lambda_gradient(const LambdaEvaluator& ev, const Vec3& h) { return ev.gradient(h); }

double annealed_lambda(const FieldDistribution& dist, const Vec3& h) {
    return LambdaEvaluator::make(dist, /*annealed=*/true).value(h);
}

namespace {

constexpr double kInteriorMargin = 1e-6;
constexpr double kNewtonTarget = 1e-11;
constexpr int kNewtonMaxIter = 100;

/// Exact boundary value Lambda*(u) on the unit sphere: -<u, E b> for the
/// quenched functional, -log E[e^{<u, b>}] for the annealed one.
double boundary_lambda_star(const LambdaEvaluator& ev, const Vec3& u) {
    if (!ev.annealed()) return -u.dot(ev.distribution().mean_field_vector());
    // annealed: lim_t (t - Lambda_ann(t u)) = -log E[e^{<u, b>}]
    switch (ev.distribution().kind()) {
        case FieldKind::gaussian: {
            const Vec3 mu = ev.distribution().param_mean();
            const double s = ev.distribution().param_sigma();
            return -(u.dot(mu) + 0.5 * s * s * u.squaredNorm());
        }
        case FieldKind::uniform_box: {
            double logmgf = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double lo = ev.distribution().param_lo()[k];
                const double hi = ev.distribution().param_hi()[k];
                const double t = u[k];
                if (hi > lo && std::abs(t) > 1e-14) {
                    logmgf += std::log((std::exp(t * hi) - std::exp(t * lo)) / (t * (hi - lo)));
                } else {
                    logmgf += t * 0.5 * (lo + hi);
                }
            }
            return -logmgf;
        }
        default: {
            double mx = -std::numeric_limits<double>::infinity();
            for (const auto& a : ev.distribution().atoms()) mx = std::max(mx, u.dot(a.value));
            double acc = 0.0;
            for (const auto& a : ev.distribution().atoms())
                if (a.weight > 0.0) acc += a.weight * std::exp(u.dot(a.value) - mx);
            return -(mx + std::log(acc));
        }
    }
}

LegendreSolution newton_legendre(const LambdaEvaluator& ev, const Vec3& m, Vec3 h0) {
    LegendreSolution sol;
    sol.m = m;
    Vec3 h = h0;
    LambdaEval e = ev.eval(h);
    double obj = e.value - m.dot(h);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
        const Vec3 grad = e.gradient - m;
        sol.residual = grad.norm();
        sol.iterations = it;
        if (sol.residual <= kNewtonTarget) break;
        Vec3 step = -e.hessian.ldlt().solve(grad);
        if (!step.allFinite() || step.dot(grad) > 0.0) step = -grad;
        double t = 1.0;
        Vec3 h_next = h + step;
        LambdaEval e_next = ev.eval(h_next);
        int halvings = 0;
        while (e_next.value - m.dot(h_next) > obj && halvings < 60) {
            t *= 0.5;
            h_next = h + t * step;
            e_next = ev.eval(h_next);
            ++halvings;
        }
        h = h_next;
        e = e_next;
        obj = e.value - m.dot(h);
    }
    sol.residual = (ev.eval(h).gradient - m).norm();
    sol.converged = sol.residual <= 1e-10;
    sol.h = h;
    sol.lambda_star = m.dot(h) - ev.value(h);
    return sol;
}

Vec3 default_start(const Vec3& m) {
    const double r = m.norm();
    if (r == 0.0) return Vec3::Zero();
    const double rc = std::min(r, 1.0 - 1e-9);
    return std::atanh(rc) * (m / r);
}

} // namespace

LegendreSolution legendre_transform(const LambdaEvaluator& ev, const Vec3& m) {
    const double r = m.norm();
    if (r > 1.0 + 1e-12)
        throw std::invalid_argument("legendre_transform: |m| must be <= 1");
    if (r > 1.0 - kInteriorMargin) {
        const Vec3 u = m / r;
        LegendreSolution inner =
            newton_legendre(ev, (1.0 - kInteriorMargin) * u,
                            default_start((1.0 - kInteriorMargin) * u));
        const double t = std::min(1.0, (r - (1.0 - kInteriorMargin)) / kInteriorMargin);
        LegendreSolution sol = inner;
        sol.m = m;
        sol.lambda_star =
            (1.0 - t) * inner.lambda_star + t * boundary_lambda_star(ev, u);
        sol.boundary_extrapolated = true;
        return sol;
    }
    return newton_legendre(ev, m, default_start(m));
}

// --- ball optimizer -------------------------------------------------------

namespace {

struct NmResult {
    double value;
    Vec3 x;
    int evals;
};

// Nelder-Mead minimization; tight tolerances since downstream tests ask
// for 1e-6 maximizer accuracy.
NmResult nelder_mead_min(const std::function<double(const Vec3&)>& f, const Vec3& x0,
                         double size, int max_evals) {
    std::array<Vec3, 4> xs;
    std::array<double, 4> fs;
    int evals = 0;
    const auto eval = [&](const Vec3& x) {
        ++evals;
        return f(x);
    };
    xs[0] = x0;
    for (int k = 0; k < 3; ++k) {
        xs[k + 1] = x0;
        xs[k + 1][k] += size;
    }
    for (int k = 0; k < 4; ++k) fs[k] = eval(xs[k]);
    const auto order = [&] {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (fs[j] < fs[i]) {
                    std::swap(fs[i], fs[j]);
                    std::swap(xs[i], xs[j]);
                }
    };
    while (evals < max_evals) {
        order();
        double diam = 0.0;
        for (int k = 1; k < 4; ++k) diam = std::max(diam, (xs[k] - xs[0]).norm());
        if (fs[3] - fs[0] <= 1e-13 * (1.0 + std::abs(fs[0])) && diam <= 1e-8) break;
        const Vec3 centroid = (xs[0] + xs[1] + xs[2]) / 3.0;
        const Vec3 xr = centroid + (centroid - xs[3]);
        const double fr = eval(xr);
        if (fr < fs[0]) {
            const Vec3 xe = centroid + 2.0 * (centroid - xs[3]);
            const double fe = eval(xe);
            if (fe < fr) {
                xs[3] = xe;
                fs[3] = fe;
            } else {
                xs[3] = xr;
                fs[3] = fr;
            }
        } else if (fr < fs[2]) {
            xs[3] = xr;
            fs[3] = fr;
        } else {
            const Vec3 xc = centroid + 0.5 * ((fr < fs[3] ? xr : xs[3]) - centroid);
            const double fc = eval(xc);
            if (fc < std::min(fr, fs[3])) {
                xs[3] = xc;
                fs[3] = fc;
            } else {
                for (int k = 1; k < 4; ++k) {
                    xs[k] = xs[0] + 0.5 * (xs[k] - xs[0]);
                    fs[k] = eval(xs[k]);
                }
            }
        }
    }
    order();
    return {fs[0], xs[0], evals};
}

} // namespace

BallMaximum maximize_over_ball(const std::function<double(const Vec3&)>& objective,
                               int grid_n, int restarts) {
    BallMaximum out{-std::numeric_limits<double>::infinity(), Vec3::Zero(), 0.0, 0, 0};
    std::vector<std::pair<double, Vec3>> grid;
    for (int ix = 0; ix < grid_n; ++ix)
        for (int iy = 0; iy < grid_n; ++iy)
            for (int iz = 0; iz < grid_n; ++iz) {
                const Vec3 m(-1.0 + 2.0 * ix / (grid_n - 1.0),
                             -1.0 + 2.0 * iy / (grid_n - 1.0),
                             -1.0 + 2.0 * iz / (grid_n - 1.0));
                if (m.norm() > 1.0) continue;
                grid.push_back({objective(m), m});
            }
    out.grid_points = static_cast<int>(grid.size());
    std::sort(grid.begin(), grid.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    out.grid_best = grid.front().first;
    out.value = grid.front().first;
    out.argmax = grid.front().second;

    std::vector<Vec3> starts;
    for (const auto& [v, m] : grid) {
        if (static_cast<int>(starts.size()) >= restarts) break;
        bool close = false;
        for (const auto& s : starts)
            if ((s - m).norm() < 0.35) close = true;
        if (!close) starts.push_back(m);
    }
    const auto neg = [&](const Vec3& m) { return -objective(m); };
    for (const auto& s : starts) {
        NmResult coarse = nelder_mead_min(neg, s, 0.12, 2000);
        NmResult fine = nelder_mead_min(neg, coarse.x, 1e-3, 1500);
        out.evals += coarse.evals + fine.evals;
        const auto& best = fine.value < coarse.value ? fine : coarse;
        if (-best.value > out.value) {
            out.value = -best.value;
            out.argmax = best.x;
        }
    }
    return out;
}

// --- variational formulas -------------------------------------------------

VariationalResult deterministic_pressure(const PolynomialSymbol& v) {
    const auto objective = [&](const Vec3& m) {
        const double r = m.norm();
        if (r > 1.0) return -1e100;
        return v(m) + binary_entropy(r);
    };
    BallMaximum bm = maximize_over_ball(objective);
    // radial-angular sweep, an independent set of refinement seeds
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    Vec3 best_dir = Vec3::UnitZ();
    double best_val = -1e100;
    for (int ir = 0; ir <= 48; ++ir) {
        const double r = ir / 48.0;
        for (int k = 0; k < 96; ++k) {
            const double z = 1.0 - 2.0 * (k + 0.5) / 96.0;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * k;
            const Vec3 m = r * Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
            const double val = objective(m);
            if (val > best_val) {
                best_val = val;
                best_dir = m;
            }
        }
    }
    const auto neg = [&](const Vec3& m) { return -objective(m); };
    NmResult polish = nelder_mead_min(neg, best_dir, 0.05, 2000);
    polish = nelder_mead_min(neg, polish.x, 1e-3, 1500);
    VariationalResult out;
    out.pressure = bm.value;
    out.maximizer = bm.argmax;
    if (-polish.value > out.pressure) {
        out.pressure = -polish.value;
        out.maximizer = polish.x;
    }
    out.grid_best = bm.grid_best;
    out.grid_points = bm.grid_points;
    out.refine_evals = bm.evals + polish.evals;
    out.trace = {{"grid", bm.grid_best}, {"refined", out.pressure}};
    return out;
}

VariationalResult variational_pressure(const PolynomialSymbol& v, const LambdaEvaluator& ev) {
    int flagged = 0;
    Vec3 warm = Vec3::Zero();
    bool have_warm = false;
    const auto objective = [&](const Vec3& m) {
        if (m.norm() > 1.0) return -1e100;
        LegendreSolution sol =
            (have_warm && m.norm() <= 1.0 - kInteriorMargin)
                ? newton_legendre(ev, m, warm)
                : legendre_transform(ev, m);
        if (!sol.converged && !sol.boundary_extrapolated) ++flagged;
        warm = sol.h;
        have_warm = true;
        return v(m) - sol.lambda_star;
    };
    BallMaximum bm = maximize_over_ball(objective);
    VariationalResult out;
    out.pressure = bm.value;
    out.maximizer = bm.argmax;
    out.grid_best = bm.grid_best;
    out.grid_points = bm.grid_points;
    out.refine_evals = bm.evals;
    out.trace = {{"grid", bm.grid_best},
                 {"refined", bm.value},
                 {"flagged", double(flagged)}};
    return out;
}

VariationalResult annealed_pressure(const PolynomialSymbol& v, const FieldDistribution& dist) {
    return variational_pressure(v, LambdaEvaluator::make(dist, /*annealed=*/true));
}

QuadraticDuality quadratic_inf_pressure(const Vec3& alpha, const LambdaEvaluator& ev) {
    if (!(alpha.x() >= 0.0 && alpha.y() >= 0.0 && alpha.z() >= 0.0))
        throw std::invalid_argument("quadratic_inf_pressure: alpha must be >= 0");
    const auto f = [&](const Vec3& m) {
        if (m.norm() > 1.0) return 1e100;
        return alpha.cwiseProduct(m).dot(m) + ev.value(-2.0 * alpha.cwiseProduct(m));
    };
    // convex objective: grid + local refinement on -f
    BallMaximum bm = maximize_over_ball([&](const Vec3& m) { return -f(m); }, 9, 2);
    QuadraticDuality out{};
    out.inf_form = -bm.value;
    out.inf_minimizer = bm.argmax;
    PolynomialSymbol p_alpha(std::vector<Monomial>{{-alpha.x(), 2, 0, 0},
                                                   {-alpha.y(), 0, 2, 0},
                                                   {-alpha.z(), 0, 0, 2}});
    const VariationalResult dual = variational_pressure(p_alpha, ev);
    out.dual_form = dual.pressure;
    out.dual_maximizer = dual.maximizer;
    return out;
}

double linear_pressure_finiteN(const Vec3& alpha, const Vec3& m, const FieldRealization& r) {
    if (!(alpha.x() >= 0.0 && alpha.y() >= 0.0 && alpha.z() >= 0.0))
        throw std::invalid_argument("linear_pressure_finiteN: alpha must be >= 0");
    if (m.norm() > 1.0 + 1e-12)
        throw std::invalid_argument("linear_pressure_finiteN: |m| must be <= 1");
    double p = alpha.cwiseProduct(m).dot(m);
    double site_sum = 0.0;
    for (const auto& b : r.fields)
        site_sum += log2cosh((b - 2.0 * alpha.cwiseProduct(m)).norm());
    return p + site_sum / r.n_sites;
}

double micro_gap_constant(const PolynomialSymbol& p) {
    double c = 0.0;
    for (const auto& t : directional_decomposition(p).terms)
        c += std::abs(t.alpha) * t.d * (t.d - 1) / 2.0;
    return c;
}

namespace {

// max over x in [-1,1] of a (x - x0) - c (x - x0)^2
double clamped_vertex_max(double a, double c, double x0) {
    const double tlo = -1.0 - x0, thi = 1.0 - x0;
    double t = a / (2.0 * c);
    t = std::clamp(t, tlo, thi);
    const double v = a * t - c * t * t;
    const double vlo = a * tlo - c * tlo * tlo;
    const double vhi = a * thi - c * thi * thi;
    return std::max({v, vlo, vhi});
}

} // namespace

double micro_gap(const PolynomialSymbol& p, double alpha) {
    const DirectionalDecomposition dec = directional_decomposition(p);
    const double c_total = micro_gap_constant(p);
    if (!(alpha > c_total))
        throw std::invalid_argument("micro_gap: alpha must exceed the curvature constant");
    if (dec.terms.empty()) return 0.0;
    // Spread the spare quadratic budget evenly so the per-monomial bounds
    // sum to the full operator inequality.
    const double spare = (alpha - c_total) / double(dec.terms.size());
    double g = 0.0;
    for (const auto& t : dec.terms) {
        const auto value_at = [&](double x0) {
            const double a = t.alpha * t.d * std::pow(x0, t.d - 1);
            return clamped_vertex_max(a, spare, x0);
        };
        const int n_grid = 20001;
        double best = 0.0, best_x0 = 0.0;
        for (int i = 0; i < n_grid; ++i) {
            const double x0 = -1.0 + 2.0 * i / (n_grid - 1.0);
            const double v = value_at(x0);
            if (v > best) {
                best = v;
                best_x0 = x0;
            }
        }
        // golden-section polish around the grid maximum
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = std::max(-1.0, best_x0 - 2.0 / (n_grid - 1.0));
        double hi = std::min(1.0, best_x0 + 2.0 / (n_grid - 1.0));
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = value_at(x1), f2 = value_at(x2);
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = value_at(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = value_at(x1);
            }
        }
        g += std::max(best, std::max(f1, f2));
    }
    return g;
}

} // namespace qmf

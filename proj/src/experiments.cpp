#include "qmf/experiments.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace qmf {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

Vec3 parse_vec3(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string(what) + " must be an array of 3 numbers");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

EvaluatorSpec parse_evaluator(const json& j) {
    reject_unknown(j, {"method", "order", "count", "seed"}, "evaluator");
    EvaluatorSpec spec;
    spec.method = j.value("method", "auto");
    spec.order = j.value("order", 40);
    spec.count = j.value("count", 20000);
    spec.seed = j.value("seed", std::uint64_t{1});
    const char* methods[] = {"auto",           "closed_form",    "atom_sum",
                             "gauss_hermite",  "gauss_legendre", "sample_average"};
    bool ok = false;
    for (const char* m : methods)
        if (spec.method == m) ok = true;
    if (!ok) throw ConfigError("unknown evaluator method '" + spec.method + "'");
    return spec;
}

void parallel_tasks(int count, int threads, const std::function<void(int)>& task) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
        });
    for (auto& th : pool) th.join();
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

LambdaEvaluator EvaluatorSpec::build(const FieldDistribution& dist, bool annealed) const {
    if (method == "auto") return LambdaEvaluator::make(dist, annealed);
    if (method == "closed_form")
        return LambdaEvaluator::make(dist, LambdaMethod::closed_form, 0, 0, annealed);
    if (method == "atom_sum")
        return LambdaEvaluator::make(dist, LambdaMethod::atom_sum, 0, 0, annealed);
    if (method == "gauss_hermite")
        return LambdaEvaluator::make(dist, LambdaMethod::gauss_hermite, order, 0, annealed);
    if (method == "gauss_legendre")
        return LambdaEvaluator::make(dist, LambdaMethod::gauss_legendre, order, 0, annealed);
    if (method == "sample_average")
        return LambdaEvaluator::make(dist, LambdaMethod::sample_average, count, seed, annealed);
    throw ConfigError("unknown evaluator method '" + method + "'");
}

RunConfig RunConfig::parse_file(const std::filesystem::path& path, RunKind kind) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), kind);
}

RunConfig RunConfig::parse(const std::string& text, RunKind kind) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    cfg.kind = kind;
    try {
        switch (kind) {
            case RunKind::converge:
                reject_unknown(j, {"model", "distribution", "N_list", "seeds", "evaluator", "output"},
                               "config");
                break;
            case RunKind::fluct:
                reject_unknown(j, {"model", "distribution", "N_list", "seeds", "tilt", "output"},
                               "config");
                break;
            case RunKind::duality:
                reject_unknown(j, {"distribution", "alpha_battery", "evaluator", "output"},
                               "config");
                break;
            case RunKind::berezin:
                reject_unknown(j, {"model", "J_list", "quadrature", "output"}, "config");
                break;
            case RunKind::lambda_scan:
                reject_unknown(j, {"distribution", "direction", "t_values", "evaluator", "output"},
                               "config");
                break;
        }

        if (j.contains("distribution")) {
            try {
                cfg.distribution = FieldDistribution::from_json(j.at("distribution"));
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
        } else if (kind != RunKind::berezin) {
            throw ConfigError("missing 'distribution'");
        }

        if (kind == RunKind::converge || kind == RunKind::fluct) {
            if (!j.contains("model")) throw ConfigError("missing 'model'");
            try {
                cfg.model = PolynomialSymbol::parse(j.at("model").get<std::string>());
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            if (!j.contains("N_list")) throw ConfigError("missing 'N_list'");
            for (const auto& n : j.at("N_list")) {
                const int v = n.get<int>();
                if (v < 1 || v > kMaxSites)
                    throw ConfigError("N_list entries must lie in [1," +
                                      std::to_string(kMaxSites) + "]");
                cfg.n_list.push_back(v);
            }
            if (cfg.n_list.empty()) throw ConfigError("N_list must not be empty");
            if (j.contains("seeds")) {
                reject_unknown(j.at("seeds"), {"count", "base"}, "seeds");
                cfg.seed_count = j.at("seeds").value("count", 1);
                cfg.seed_base = j.at("seeds").value("base", std::uint64_t{1});
            }
            if (cfg.seed_count < 1) throw ConfigError("seeds.count must be >= 1");
        }
        if (kind == RunKind::fluct) {
            if (j.contains("tilt")) {
                reject_unknown(j.at("tilt"), {"samples", "base_seed"}, "tilt");
                cfg.tilt_samples = j.at("tilt").value("samples", 8);
                cfg.tilt_base = j.at("tilt").value("base_seed", std::uint64_t{1});
            }
            // 0 disables the Gaussian tilt; a Monte Carlo run needs >= 8 samples
            if (cfg.tilt_samples != 0 && cfg.tilt_samples < 8)
                throw ConfigError("tilt.samples must be 0 (tilt off) or >= 8");
        }
        if (kind == RunKind::duality) {
            if (!j.contains("alpha_battery")) throw ConfigError("missing 'alpha_battery'");
            for (const auto& a : j.at("alpha_battery")) {
                const Vec3 alpha = parse_vec3(a, "alpha_battery entry");
                if (!(alpha.x() >= 0 && alpha.y() >= 0 && alpha.z() >= 0))
                    throw ConfigError("alpha_battery entries must be >= 0 componentwise");
                cfg.alpha_battery.push_back(alpha);
            }
            if (cfg.alpha_battery.empty())
                throw ConfigError("alpha_battery must not be empty");
        }
        if (kind == RunKind::berezin) {
            if (!j.contains("model")) throw ConfigError("missing 'model'");
            const json& m = j.at("model");
            reject_unknown(m, {"kind", "poly", "N", "h"}, "model");
            const std::string mk = m.value("kind", "symbol");
            if (mk == "symbol") {
                cfg.berezin.is_field = false;
                try {
                    cfg.berezin.poly = PolynomialSymbol::parse(m.at("poly").get<std::string>());
                } catch (const std::exception& e) {
                    throw ConfigError(e.what());
                }
                cfg.berezin.n_sites = m.value("N", 8);
                if (cfg.berezin.n_sites < 1 || cfg.berezin.n_sites > kMaxSites)
                    throw ConfigError("model.N outside supported range");
            } else if (mk == "field") {
                cfg.berezin.is_field = true;
                cfg.berezin.h = parse_vec3(m.at("h"), "model.h");
            } else {
                throw ConfigError("model.kind must be 'symbol' or 'field'");
            }
            if (!j.contains("J_list")) throw ConfigError("missing 'J_list'");
            for (const auto& v : j.at("J_list")) {
                const double jj = v.get<double>();
                const int two_j = static_cast<int>(std::lround(2.0 * jj));
                if (two_j < 0 || std::abs(2.0 * jj - two_j) > 1e-9)
                    throw ConfigError("J_list entries must be half-integers >= 0");
                cfg.two_j_list.push_back(two_j);
            }
            if (cfg.two_j_list.empty()) throw ConfigError("J_list must not be empty");
            if (j.contains("quadrature")) {
                reject_unknown(j.at("quadrature"), {"n_theta", "n_phi"}, "quadrature");
                cfg.quadrature = {j.at("quadrature").value("n_theta", 32),
                                  j.at("quadrature").value("n_phi", 32)};
            }
        }
        if (kind == RunKind::lambda_scan) {
            if (!j.contains("direction")) throw ConfigError("missing 'direction'");
            cfg.ray_direction = parse_vec3(j.at("direction"), "direction");
            if (cfg.ray_direction.norm() == 0.0)
                throw ConfigError("direction must be nonzero");
            cfg.ray_direction.normalize();
            if (!j.contains("t_values")) throw ConfigError("missing 't_values'");
            for (const auto& t : j.at("t_values")) cfg.ray_ts.push_back(t.get<double>());
            if (cfg.ray_ts.empty()) throw ConfigError("t_values must not be empty");
        }
        if (j.contains("evaluator")) cfg.evaluator = parse_evaluator(j.at("evaluator"));
        if (j.contains("output")) {
            reject_unknown(j.at("output"), {"path", "format"}, "output");
            cfg.out_path = j.at("output").value("path", "");
            cfg.format = j.at("output").value("format", "csv");
            if (cfg.format != "csv" && cfg.format != "json")
                throw ConfigError("output.format must be 'csv' or 'json'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }

    // canonical echo for hashing
    ordered_json echo;
    echo["kind"] = static_cast<int>(kind);
    echo["model"] = cfg.model.to_string();
    echo["distribution"] = cfg.distribution.to_json();
    echo["N_list"] = cfg.n_list;
    echo["seeds"] = {cfg.seed_count, cfg.seed_base};
    echo["tilt"] = {cfg.tilt_samples, cfg.tilt_base};
    echo["evaluator"] = {cfg.evaluator.method, cfg.evaluator.order, cfg.evaluator.count,
                         cfg.evaluator.seed};
    auto alphas = ordered_json::array();
    for (const auto& a : cfg.alpha_battery) alphas.push_back({a.x(), a.y(), a.z()});
    echo["alpha_battery"] = alphas;
    echo["berezin"] = {cfg.berezin.is_field, cfg.berezin.poly.to_string(),
                       cfg.berezin.n_sites,
                       {cfg.berezin.h.x(), cfg.berezin.h.y(), cfg.berezin.h.z()}};
    echo["J_list"] = cfg.two_j_list;
    echo["direction"] = {cfg.ray_direction.x(), cfg.ray_direction.y(),
                         cfg.ray_direction.z()};
    echo["t_values"] = cfg.ray_ts;
    cfg.canonical_ = echo.dump();
    return cfg;
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical_); }

namespace {

double exact_pressure(const PolynomialSymbol& p, const FieldRealization& r) {
    if (commutes_with_sz(p, r)) {
        const Eigen::VectorXd e = diagonal_energies(p, r);
        return linalg::log_sum_exp({e.data(), static_cast<size_t>(e.size())}) / r.n_sites;
    }
    return pressure(assemble_full(p, r).matrix, r.n_sites);
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

TableReport run_convergence(const RunConfig& cfg, int threads) {
    TableReport rep;
    rep.kind = "converge";
    rep.config_hash = cfg.hash();
    rep.columns = {"N", "p_mean", "p_stderr", "p_limit", "gap"};

    const LambdaEvaluator ev = cfg.evaluator.build(cfg.distribution);
    const VariationalResult limit = variational_pressure(cfg.model, ev);
    const LegendreSolution at_max = legendre_transform(ev, limit.maximizer);

    struct Task {
        int n;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int n : cfg.n_list)
        for (int s = 0; s < cfg.seed_count; ++s)
            tasks.push_back({n, cfg.seed_base + static_cast<std::uint64_t>(s)});

    std::vector<double> values(tasks.size());
    std::vector<int> audit_fail(tasks.size(), 0);
    std::vector<std::string> errors(tasks.size());
    parallel_tasks(static_cast<int>(tasks.size()), threads, [&](int i) {
        try {
            const FieldRealization r =
                sample_fields(cfg.distribution, tasks[static_cast<size_t>(i)].n,
                              tasks[static_cast<size_t>(i)].seed);
            const double p = exact_pressure(cfg.model, r);
            values[static_cast<size_t>(i)] = p;
            // Gibbs product trial state at the limiting maximizer must stay
            // below the exact pressure.
            const double bound = gibbs_trial_bound(cfg.model, r, at_max.h);
            if (bound > p + 1e-9) audit_fail[static_cast<size_t>(i)] = 1;
        } catch (const std::exception& e) {
            errors[static_cast<size_t>(i)] = e.what();
        }
    });

    int failed = 0, audit_violations = 0;
    size_t idx = 0;
    for (int n : cfg.n_list) {
        double mean = 0.0;
        std::vector<double> ok_values;
        for (int s = 0; s < cfg.seed_count; ++s, ++idx) {
            if (!errors[idx].empty()) {
                ++failed;
                continue;
            }
            ok_values.push_back(values[idx]);
            audit_violations += audit_fail[idx];
        }
        double stderr_v = 0.0;
        if (!ok_values.empty()) {
            for (double v : ok_values) mean += v;
            mean /= static_cast<double>(ok_values.size());
            if (ok_values.size() > 1) {
                double ss = 0.0;
                for (double v : ok_values) ss += (v - mean) * (v - mean);
                stderr_v = std::sqrt(ss / (ok_values.size() - 1.0)) /
                           std::sqrt(static_cast<double>(ok_values.size()));
            }
        } else {
            mean = std::nan("");
        }
        rep.rows.push_back({static_cast<long long>(n), mean, stderr_v, limit.pressure,
                            std::abs(mean - limit.pressure)});
    }
    if (rep.rows.empty()) throw ConfigError("empty result set");
    rep.metadata = {{"audit_violations", std::to_string(audit_violations)},
                    {"config_hash", hex64(rep.config_hash)},
                    {"failed_tasks", std::to_string(failed)},
                    {"maximizer", fmt_double(limit.maximizer.x()) + " " +
                                      fmt_double(limit.maximizer.y()) + " " +
                                      fmt_double(limit.maximizer.z())},
                    {"seeds", std::to_string(cfg.seed_count)}};
    rep.contract_violations = audit_violations;
    return rep;
}

TableReport run_fluctuation(const RunConfig& cfg, int threads) {
    TableReport rep;
    rep.kind = "fluct";
    rep.config_hash = cfg.hash();
    rep.columns = {"N", "var_mean", "var_stderr", "chain_bound"};

    struct Task {
        int n;
        std::uint64_t field_seed;
        std::uint64_t tilt_seed;
        bool tilted;
    };
    std::vector<Task> tasks;
    const int tilts = std::max(cfg.tilt_samples, 1);
    for (int n : cfg.n_list)
        for (int s = 0; s < cfg.seed_count; ++s)
            for (int t = 0; t < tilts; ++t)
                tasks.push_back({n, cfg.seed_base + static_cast<std::uint64_t>(s),
                                 cfg.tilt_base + static_cast<std::uint64_t>(t),
                                 cfg.tilt_samples > 0});

    std::vector<double> var_sum(tasks.size()), bound_sum(tasks.size());
    std::vector<int> chain_fail(tasks.size(), 0);
    std::vector<std::string> errors(tasks.size());
    parallel_tasks(static_cast<int>(tasks.size()), threads, [&](int i) {
        const Task& task = tasks[static_cast<size_t>(i)];
        try {
            const FieldRealization r =
                sample_fields(cfg.distribution, task.n, task.field_seed);
            AssembledHamiltonian h = assemble_full(cfg.model, r);
            if (task.tilted)
                h = assemble_perturbed(h, GaussianTilt::from_seed(task.tilt_seed));
            const SpectralData sd = diagonalize(h.matrix);
            double total_var = 0.0, total_bound = 0.0;
            int fails = 0;
            for (int ax = 0; ax < 3; ++ax) {
                const Operator m =
                    (2.0 / task.n) * dense_total_spin(task.n, static_cast<Axis>(ax));
                const FluctuationChain chain = fluctuation_chain(sd, h.matrix, m);
                total_var += chain.variance;
                const double holder = std::cbrt(std::max(0.0, -chain.commutator_sum)) *
                                      std::pow(std::max(0.0, 0.5 * chain.curvature), 2.0 / 3.0);
                total_bound += chain.curvature + holder;
                const double tol = 1e-10 * std::max(1.0, std::abs(chain.variance));
                if (std::abs(chain.variance - chain.variance_sum) > tol) ++fails;
                if (std::abs(chain.commutator - chain.commutator_sum) >
                    1e-10 * std::max(1.0, std::abs(chain.commutator)))
                    ++fails;
                if (chain.variance > chain.curvature + chain.remainder + 1e-10) ++fails;
                if (chain.remainder > holder + 1e-10) ++fails;
            }
            var_sum[static_cast<size_t>(i)] = total_var;
            bound_sum[static_cast<size_t>(i)] = total_bound;
            chain_fail[static_cast<size_t>(i)] = fails;
        } catch (const std::exception& e) {
            errors[static_cast<size_t>(i)] = e.what();
        }
    });

    int failed = 0, chain_violations = 0;
    size_t idx = 0;
    for (int n : cfg.n_list) {
        std::vector<double> vals, bounds;
        for (int s = 0; s < cfg.seed_count; ++s)
            for (int t = 0; t < tilts; ++t, ++idx) {
                if (!errors[idx].empty()) {
                    ++failed;
                    continue;
                }
                vals.push_back(var_sum[idx]);
                bounds.push_back(bound_sum[idx]);
                chain_violations += chain_fail[idx];
            }
        double mean = std::nan(""), se = 0.0, bound = std::nan("");
        if (!vals.empty()) {
            mean = 0.0;
            bound = 0.0;
            for (double v : vals) mean += v;
            mean /= static_cast<double>(vals.size());
            for (double b : bounds) bound += b;
            bound /= static_cast<double>(bounds.size());
            if (vals.size() > 1) {
                double ss = 0.0;
                for (double v : vals) ss += (v - mean) * (v - mean);
                se = std::sqrt(ss / (vals.size() - 1.0)) /
                     std::sqrt(static_cast<double>(vals.size()));
            }
        }
        rep.rows.push_back({static_cast<long long>(n), mean, se, bound});
    }
    if (rep.rows.empty()) throw ConfigError("empty result set");
    rep.metadata = {{"chain_violations", std::to_string(chain_violations)},
                    {"config_hash", hex64(rep.config_hash)},
                    {"failed_tasks", std::to_string(failed)},
                    {"tilt_samples", std::to_string(cfg.tilt_samples)}};
    rep.contract_violations = chain_violations;
    return rep;
}

TableReport run_duality(const RunConfig& cfg) {
    TableReport rep;
    rep.kind = "duality";
    rep.config_hash = cfg.hash();
    rep.columns = {"alpha_x", "alpha_y", "alpha_z", "inf_form", "dual_form", "gap"};
    const LambdaEvaluator ev = cfg.evaluator.build(cfg.distribution);
    int breaches = 0;
    for (const auto& alpha : cfg.alpha_battery) {
        const QuadraticDuality d = quadratic_inf_pressure(alpha, ev);
        const double gap = std::abs(d.inf_form - d.dual_form);
        if (gap > 1e-6) ++breaches;
        rep.rows.push_back({alpha.x(), alpha.y(), alpha.z(), d.inf_form, d.dual_form, gap});
    }
    rep.metadata = {{"breaches", std::to_string(breaches)},
                    {"config_hash", hex64(rep.config_hash)}};
    rep.contract_violations = breaches;
    return rep;
}

TableReport run_berezin(const RunConfig& cfg) {
    TableReport rep;
    rep.kind = "berezin";
    rep.config_hash = cfg.hash();
    rep.columns = {"J", "lower", "exact", "upper"};
    int violations = 0;
    for (const int two_j : cfg.two_j_list) {
        const SphereQuadrature q =
            cfg.quadrature
                ? SphereQuadrature::tensor(cfg.quadrature->first, cfg.quadrature->second)
                : SphereQuadrature::for_degree(
                      2 * two_j + std::max(4, cfg.berezin.poly.degree()) + 4);
        try {
            BerezinBounds b{};
            if (cfg.berezin.is_field) {
                const SpinOperatorSet ops = spin_irrep(two_j);
                const Vec3 h = cfg.berezin.h;
                const Operator g = 2.0 * (h.x() * ops.sx + h.y() * ops.sy + h.z() * ops.sz);
                const double jp1 = 0.5 * two_j + 1.0;
                b = berezin_lieb_bounds(
                    g,
                    [&](double theta, double phi) {
                        return 2.0 * jp1 * h.dot(sphere_direction(theta, phi));
                    },
                    two_j, q);
            } else {
                const int n = cfg.berezin.n_sites;
                const auto f = [&](const Vec3& m) { return cfg.berezin.poly(m); };
                const Operator g = upper_symbol_operator(f, two_j, n, q);
                const double radius = double(two_j) / n;
                b = berezin_lieb_bounds(
                    g,
                    [&](double theta, double phi) {
                        return n * cfg.berezin.poly(radius * sphere_direction(theta, phi));
                    },
                    two_j, q);
            }
            rep.rows.push_back({0.5 * two_j, b.lower, b.exact, b.upper});
        } catch (const std::exception&) {
            ++violations;
            rep.rows.push_back({0.5 * two_j, std::nan(""), std::nan(""), std::nan("")});
        }
    }
    rep.metadata = {{"config_hash", hex64(rep.config_hash)},
                    {"violations", std::to_string(violations)}};
    rep.contract_violations = violations;
    return rep;
}

TableReport run_lambda(const RunConfig& cfg) {
    TableReport rep;
    rep.kind = "lambda";
    rep.config_hash = cfg.hash();
    rep.columns = {"t",      "lambda", "grad_x",      "grad_y",
                   "grad_z", "lambda_star", "residual"};
    const LambdaEvaluator ev = cfg.evaluator.build(cfg.distribution);
    for (const double t : cfg.ray_ts) {
        const Vec3 h = t * cfg.ray_direction;
        const LambdaEval e = ev.eval(h);
        // Fenchel equality at m = grad Lambda(h); the Newton solve is the
        // independent confirmation.
        const LegendreSolution sol = legendre_transform(ev, e.gradient);
        rep.rows.push_back({t, e.value, e.gradient.x(), e.gradient.y(), e.gradient.z(),
                            e.gradient.dot(h) - e.value, sol.residual});
    }
    rep.metadata = {{"config_hash", hex64(rep.config_hash)}};
    return rep;
}

void emit(const TableReport& report, std::ostream& os, const std::string& format) {
    if (format == "csv") {
        for (size_t c = 0; c < report.columns.size(); ++c)
            os << report.columns[c] << (c + 1 < report.columns.size() ? "," : "\n");
        for (const auto& row : report.rows) {
            for (size_t c = 0; c < row.size(); ++c) {
                std::visit(
                    [&](const auto& v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>)
                            os << fmt_double(v);
                        else
                            os << v;
                    },
                    row[c]);
                os << (c + 1 < row.size() ? "," : "\n");
            }
        }
        return;
    }
    if (format == "json") {
        ordered_json j;
        j["kind"] = report.kind;
        j["config_hash"] = hex64(report.config_hash);
        j["columns"] = report.columns;
        auto rows = ordered_json::array();
        for (const auto& row : report.rows) {
            auto r = ordered_json::array();
            for (const auto& cell : row)
                std::visit([&](const auto& v) { r.push_back(v); }, cell);
            rows.push_back(r);
        }
        j["rows"] = rows;
        ordered_json meta;
        for (const auto& [k, v] : report.metadata) meta[k] = v;
        j["metadata"] = meta;
        os << j.dump(2) << "\n";
        return;
    }
    throw ConfigError("unknown output format '" + format + "'");
}

void emit_to_file(const TableReport& report, const std::filesystem::path& path,
                  const std::string& format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + path.string());
    emit(report, out, format);
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace qmf

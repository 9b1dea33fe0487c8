#pragma once

#include "qmf/coherent.hpp"
#include "qmf/thermo.hpp"
#include "qmf/varform.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qmf {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunKind { converge, fluct, duality, berezin, lambda_scan };

struct EvaluatorSpec {
    std::string method = "auto"; // auto|closed_form|atom_sum|gauss_hermite|gauss_legendre|sample_average
    int order = 40;
    int count = 20000;
    std::uint64_t seed = 1;
    LambdaEvaluator build(const FieldDistribution& dist, bool annealed = false) const;
};

struct BerezinModel {
    bool is_field = false;
    PolynomialSymbol poly; // symbol kind
    int n_sites = 8;       // symbol kind scaling
    Vec3 h = Vec3::Zero(); // field kind
};

/// Parsed, validated experiment configuration (strict: unknown keys are
/// rejected). Which sections are required depends on the subcommand.
struct RunConfig {
    RunKind kind = RunKind::converge;
    PolynomialSymbol model;
    FieldDistribution distribution = FieldDistribution::point_mass(Vec3::Zero());
    std::vector<int> n_list;
    int seed_count = 1;
    std::uint64_t seed_base = 1;
    int tilt_samples = 8;
    std::uint64_t tilt_base = 1;
    EvaluatorSpec evaluator;
    std::vector<Vec3> alpha_battery;
    BerezinModel berezin;
    std::vector<int> two_j_list;
    std::optional<std::pair<int, int>> quadrature; // (n_theta, n_phi)
    Vec3 ray_direction = Vec3::UnitZ();
    std::vector<double> ray_ts;
    std::string out_path;      // may be overridden by the CLI
    std::string format = "csv";

    static RunConfig parse_file(const std::filesystem::path& path, RunKind kind);
    static RunConfig parse(const std::string& text, RunKind kind);

    /// FNV-1a of the canonical config echo; stamped into every report.
    std::uint64_t hash() const;

private:
    std::string canonical_;
};

using Cell = std::variant<long long, double, std::string>;

struct TableReport {
    std::string kind;
    std::uint64_t config_hash = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata; // sorted by key
    int contract_violations = 0;
};

TableReport run_convergence(const RunConfig& cfg, int threads = 1);
TableReport run_fluctuation(const RunConfig& cfg, int threads = 1);
TableReport run_duality(const RunConfig& cfg);
TableReport run_berezin(const RunConfig& cfg);
TableReport run_lambda(const RunConfig& cfg);

/// Deterministic byte output: CSV with a mandatory header row and %.12e
/// floats, or a JSON document carrying the config hash.
void emit(const TableReport& report, std::ostream& os, const std::string& format);
void emit_to_file(const TableReport& report, const std::filesystem::path& path,
                  const std::string& format);

} // namespace qmf

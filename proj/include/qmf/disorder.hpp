#pragma once

#include "qmf/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qmf {

namespace rng {

/// splitmix64 finalizer; the basis of the counter-based generator.
std::uint64_t mix64(std::uint64_t x);

/// Pure word function of (seed, stream, site, slot); no state anywhere.
std::uint64_t word(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                   std::uint64_t slot);

/// Uniform in the open interval (0, 1), 53-bit resolution.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                 std::uint64_t slot);

/// Standard normal via the inverse CDF of the uniform draw (AS241-style,
/// accurate far beyond 1e-9).
double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                std::uint64_t slot);

double inverse_normal_cdf(double p);

inline constexpr std::uint64_t kFieldStream = 0x6669656c64ull; // "field"
inline constexpr std::uint64_t kTiltStream = 0x74696c74ull;    // "tilt"

} // namespace rng

enum class FieldKind { point_mass, axis_dichotomous, gaussian, uniform_box, empirical };

struct FieldAtom {
    Vec3 value;
    double weight;
};

/// Law of the random external field. Only finite-mean families are
/// constructible; every kind here also has a finite exponential moment.
class FieldDistribution {
public:
    static FieldDistribution point_mass(const Vec3& v);
    static FieldDistribution axis_dichotomous(Axis axis, double eps, double p = 0.5);
    static FieldDistribution gaussian(const Vec3& mean, double sigma);
    static FieldDistribution uniform_box(const Vec3& lo, const Vec3& hi);
    static FieldDistribution empirical(std::vector<FieldAtom> atoms);

    static FieldDistribution from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    FieldKind kind() const { return kind_; }
    Vec3 mean_field_vector() const;
    bool has_exponential_moment() const { return true; }
    bool is_zero() const;

    /// All fields supported on the z axis (including b == 0).
    bool z_axis_only() const;

    /// Atom list for kinds with finite support; throws otherwise.
    const std::vector<FieldAtom>& atoms() const;

    // gaussian / uniform_box parameters
    const Vec3& param_mean() const { return mean_; }
    double param_sigma() const { return sigma_; }
    const Vec3& param_lo() const { return lo_; }
    const Vec3& param_hi() const { return hi_; }

    /// One i.i.d. copy b(site), a pure function of (seed, site).
    Vec3 sample_site(std::uint64_t seed, std::uint64_t site) const;

    std::string describe() const;

private:
    FieldDistribution() = default;
    FieldKind kind_ = FieldKind::point_mass;
    std::vector<FieldAtom> atoms_; // point_mass / axis_dichotomous / empirical
    Vec3 mean_ = Vec3::Zero();     // gaussian
    double sigma_ = 0.0;           // gaussian
    Vec3 lo_ = Vec3::Zero(), hi_ = Vec3::Zero(); // uniform_box
    Axis axis_ = Axis::z;          // axis_dichotomous bookkeeping
    double eps_ = 0.0, prob_ = 0.5;
};

/// Sampled i.i.d. field sequence b(1..N). Regenerating with the same
/// (distribution, N, seed) is bit-identical, and the sequence for N is a
/// prefix of the sequence for N' > N.
struct FieldRealization {
    int n_sites = 0;
    std::vector<Vec3> fields;
    std::uint64_t seed = 0;
    FieldDistribution distribution = FieldDistribution::point_mass(Vec3::Zero());
};

FieldRealization sample_fields(const FieldDistribution& dist, int n_sites,
                               std::uint64_t seed);

/// (1/N) sum_n |b(n)|.
double bbar(const FieldRealization& r);

/// Three i.i.d. standard Gaussians, drawn from a stream that never
/// aliases the field stream.
struct GaussianTilt {
    Vec3 gamma = Vec3::Zero();
    std::uint64_t seed = 0;
    static GaussianTilt from_seed(std::uint64_t seed);
};

} // namespace qmf

#include "qmf/disorder.hpp"

#include <cmath>
#include <stdexcept>

namespace qmf {

namespace rng {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t word(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                   std::uint64_t slot) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ stream);
    k = mix64(k ^ site);
    k = mix64(k ^ slot);
    return k;
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                 std::uint64_t slot) {
    const std::uint64_t w = word(seed, stream, site, slot);
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

// Wichura's AS241 (PPND16) rational approximations.
double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p outside (0,1)");
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -v : v;
}

double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t site,
                std::uint64_t slot) {
    return inverse_normal_cdf(uniform01(seed, stream, site, slot));
}

} // namespace rng

FieldDistribution FieldDistribution::point_mass(const Vec3& v) {
    FieldDistribution d;
    d.kind_ = FieldKind::point_mass;
    d.atoms_ = {{v, 1.0}};
    return d;
}

FieldDistribution FieldDistribution::axis_dichotomous(Axis axis, double eps, double p) {
    if (!(eps >= 0.0)) throw std::invalid_argument("axis_dichotomous: eps must be >= 0");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("axis_dichotomous: p must lie in [0,1]");
    FieldDistribution d;
    d.kind_ = FieldKind::axis_dichotomous;
    d.axis_ = axis;
    d.eps_ = eps;
    d.prob_ = p;
    Vec3 up = Vec3::Zero(), down = Vec3::Zero();
    up[static_cast<int>(axis)] = eps;
    down[static_cast<int>(axis)] = -eps;
    d.atoms_ = {{up, p}, {down, 1.0 - p}};
    return d;
}

FieldDistribution FieldDistribution::gaussian(const Vec3& mean, double sigma) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian: sigma must be >= 0");
    FieldDistribution d;
    d.kind_ = FieldKind::gaussian;
    d.mean_ = mean;
    d.sigma_ = sigma;
    return d;
}

FieldDistribution FieldDistribution::uniform_box(const Vec3& lo, const Vec3& hi) {
    for (int k = 0; k < 3; ++k)
        if (!(lo[k] <= hi[k]))
            throw std::invalid_argument("uniform_box: needs lo <= hi componentwise");
    FieldDistribution d;
    d.kind_ = FieldKind::uniform_box;
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
}

FieldDistribution FieldDistribution::empirical(std::vector<FieldAtom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("empirical: needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.weight >= 0.0))
            throw std::invalid_argument("empirical: weights must be nonnegative");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("empirical: weights must sum to 1");
    FieldDistribution d;
    d.kind_ = FieldKind::empirical;
    d.atoms_ = std::move(atoms);
    return d;
}

Vec3 FieldDistribution::mean_field_vector() const {
    switch (kind_) {
        case FieldKind::gaussian:
            return mean_;
        case FieldKind::uniform_box:
            return 0.5 * (lo_ + hi_);
        default: {
            Vec3 m = Vec3::Zero();
            for (const auto& a : atoms_) m += a.weight * a.value;
            return m;
        }
    }
}

bool FieldDistribution::is_zero() const {
    switch (kind_) {
        case FieldKind::gaussian:
            return sigma_ == 0.0 && mean_.isZero(0.0);
        case FieldKind::uniform_box:
            return lo_.isZero(0.0) && hi_.isZero(0.0);
        default:
            for (const auto& a : atoms_)
                if (a.weight > 0.0 && !a.value.isZero(0.0)) return false;
            return true;
    }
}

bool FieldDistribution::z_axis_only() const {
    switch (kind_) {
        case FieldKind::gaussian:
            return mean_.x() == 0.0 && mean_.y() == 0.0 && sigma_ == 0.0;
        case FieldKind::uniform_box:
            return lo_.x() == 0.0 && hi_.x() == 0.0 && lo_.y() == 0.0 && hi_.y() == 0.0;
        default:
            for (const auto& a : atoms_)
                if (a.weight > 0.0 && (a.value.x() != 0.0 || a.value.y() != 0.0))
                    return false;
            return true;
    }
}

const std::vector<FieldAtom>& FieldDistribution::atoms() const {
    if (kind_ == FieldKind::gaussian || kind_ == FieldKind::uniform_box)
        throw std::logic_error("atoms(): distribution has no finite support");
    return atoms_;
}

Vec3 FieldDistribution::sample_site(std::uint64_t seed, std::uint64_t site) const {
    switch (kind_) {
        case FieldKind::point_mass:
            return atoms_[0].value;
        case FieldKind::axis_dichotomous: {
            const double u = rng::uniform01(seed, rng::kFieldStream, site, 0);
            Vec3 v = Vec3::Zero();
            v[static_cast<int>(axis_)] = u < prob_ ? eps_ : -eps_;
            return v;
        }
        case FieldKind::gaussian: {
            Vec3 v;
            for (int k = 0; k < 3; ++k)
                v[k] = mean_[k] +
                       sigma_ * rng::gaussian(seed, rng::kFieldStream, site,
                                              static_cast<std::uint64_t>(k));
            return v;
        }
        case FieldKind::uniform_box: {
            Vec3 v;
            for (int k = 0; k < 3; ++k) {
                const double u = rng::uniform01(seed, rng::kFieldStream, site,
                                                static_cast<std::uint64_t>(k));
                v[k] = lo_[k] + (hi_[k] - lo_[k]) * u;
            }
            return v;
        }
        case FieldKind::empirical: {
            const double u = rng::uniform01(seed, rng::kFieldStream, site, 0);
            double cum = 0.0;
            for (const auto& a : atoms_) {
                cum += a.weight;
                if (u < cum) return a.value;
            }
            return atoms_.back().value;
        }
    }
    throw std::logic_error("unreachable");
}

std::string FieldDistribution::describe() const { return to_json().dump(); }

FieldRealization sample_fields(const FieldDistribution& dist, int n_sites,
                               std::uint64_t seed) {
    if (n_sites < 1) throw std::invalid_argument("sample_fields: N must be >= 1");
    FieldRealization r;
    r.n_sites = n_sites;
    r.seed = seed;
    r.distribution = dist;
    r.fields.reserve(n_sites);
    for (int n = 1; n <= n_sites; ++n)
        r.fields.push_back(dist.sample_site(seed, static_cast<std::uint64_t>(n)));
    return r;
}

double bbar(const FieldRealization& r) {
    double s = 0.0;
    for (const auto& b : r.fields) s += b.norm();
    return r.fields.empty() ? 0.0 : s / static_cast<double>(r.fields.size());
}

GaussianTilt GaussianTilt::from_seed(std::uint64_t seed) {
    GaussianTilt t;
    t.seed = seed;
    for (int k = 0; k < 3; ++k)
        t.gamma[k] = rng::gaussian(seed, rng::kTiltStream, 0, static_cast<std::uint64_t>(k));
    return t;
}

namespace {

Vec3 vec3_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument(std::string(what) + " must be an array of 3 numbers");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Axis axis_from_string(const std::string& s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw std::invalid_argument("axis must be one of x, y, z");
}

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok)
            throw std::invalid_argument("unknown key '" + key +
                                        "' in distribution object");
    }
}

} // namespace

FieldDistribution FieldDistribution::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("distribution must be an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "point_mass") {
        reject_unknown_keys(j, {"kind", "value"});
        return point_mass(vec3_from_json(j.at("value"), "value"));
    }
    if (kind == "axis_dichotomous") {
        reject_unknown_keys(j, {"kind", "axis", "eps", "p"});
        return axis_dichotomous(axis_from_string(j.at("axis").get<std::string>()),
                                j.at("eps").get<double>(),
                                j.value("p", 0.5));
    }
    if (kind == "gaussian") {
        reject_unknown_keys(j, {"kind", "mean", "sigma"});
        return gaussian(vec3_from_json(j.at("mean"), "mean"), j.at("sigma").get<double>());
    }
    if (kind == "uniform_box") {
        reject_unknown_keys(j, {"kind", "lo", "hi"});
        return uniform_box(vec3_from_json(j.at("lo"), "lo"),
                           vec3_from_json(j.at("hi"), "hi"));
    }
    if (kind == "empirical") {
        reject_unknown_keys(j, {"kind", "atoms"});
        std::vector<FieldAtom> atoms;
        for (const auto& a : j.at("atoms")) {
            reject_unknown_keys(a, {"value", "weight"});
            atoms.push_back({vec3_from_json(a.at("value"), "atom value"),
                             a.at("weight").get<double>()});
        }
        return empirical(std::move(atoms));
    }
    throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

nlohmann::json FieldDistribution::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case FieldKind::point_mass:
            j["kind"] = "point_mass";
            j["value"] = {atoms_[0].value.x(), atoms_[0].value.y(), atoms_[0].value.z()};
            break;
        case FieldKind::axis_dichotomous:
            j["kind"] = "axis_dichotomous";
            j["axis"] = axis_name(axis_);
            j["eps"] = eps_;
            j["p"] = prob_;
            break;
        case FieldKind::gaussian:
            j["kind"] = "gaussian";
            j["mean"] = {mean_.x(), mean_.y(), mean_.z()};
            j["sigma"] = sigma_;
            break;
        case FieldKind::uniform_box:
            j["kind"] = "uniform_box";
            j["lo"] = {lo_.x(), lo_.y(), lo_.z()};
            j["hi"] = {hi_.x(), hi_.y(), hi_.z()};
            break;
        case FieldKind::empirical: {
            j["kind"] = "empirical";
            auto arr = nlohmann::json::array();
            for (const auto& a : atoms_) {
                nlohmann::json atom;
                atom["value"] = {a.value.x(), a.value.y(), a.value.z()};
                atom["weight"] = a.weight;
                arr.push_back(atom);
            }
            j["atoms"] = arr;
            break;
        }
    }
    return j;
}

} // namespace qmf

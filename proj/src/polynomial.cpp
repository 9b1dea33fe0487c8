#include "qmf/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qmf {

namespace {

std::vector<Monomial> merge(std::vector<Monomial> monos) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const auto& m : monos) {
        if (m.px < 0 || m.py < 0 || m.pz < 0)
            throw std::invalid_argument("monomial exponents must be nonnegative");
        if (!std::isfinite(m.coeff))
            throw std::invalid_argument("monomial coefficient must be finite");
        acc[{m.px, m.py, m.pz}] += m.coeff;
    }
    std::vector<Monomial> out;
    for (const auto& [key, c] : acc) {
        if (c == 0.0) continue;
        out.push_back({c, std::get<0>(key), std::get<1>(key), std::get<2>(key)});
    }
    return out;
}

} // namespace

PolynomialSymbol::PolynomialSymbol(std::vector<Monomial> monomials)
    : monos_(merge(std::move(monomials))) {}

int PolynomialSymbol::degree() const {
    int d = 0;
    for (const auto& m : monos_) d = std::max(d, m.degree());
    return d;
}

double PolynomialSymbol::operator()(const Vec3& m) const {
    double s = 0.0;
    for (const auto& mono : monos_)
        s += mono.coeff * std::pow(m.x(), mono.px) * std::pow(m.y(), mono.py) *
             std::pow(m.z(), mono.pz);
    return s;
}

double PolynomialSymbol::coeff_l1() const {
    double s = 0.0;
    for (const auto& m : monos_) s += std::abs(m.coeff);
    return s;
}

double PolynomialSymbol::gradient_bound() const {
    double s = 0.0;
    for (const auto& m : monos_) s += std::abs(m.coeff) * m.degree();
    return std::sqrt(3.0) * s;
}

bool PolynomialSymbol::depends_only_on_z() const {
    for (const auto& m : monos_)
        if (m.px != 0 || m.py != 0) return false;
    return true;
}

PolynomialSymbol PolynomialSymbol::scaled(double factor) const {
    std::vector<Monomial> out = monos_;
    for (auto& m : out) m.coeff *= factor;
    return PolynomialSymbol(std::move(out));
}

PolynomialSymbol PolynomialSymbol::plus(const PolynomialSymbol& other) const {
    std::vector<Monomial> out = monos_;
    out.insert(out.end(), other.monos_.begin(), other.monos_.end());
    return PolynomialSymbol(std::move(out));
}

std::string PolynomialSymbol::to_string() const {
    if (monos_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& m : monos_) {
        if (!first) os << "; ";
        first = false;
        os << m.coeff;
        if (m.px) os << "*x^" << m.px;
        if (m.py) os << "*y^" << m.py;
        if (m.pz) os << "*z^" << m.pz;
    }
    return os.str();
}

namespace {

struct Cursor {
    std::string_view s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }
};

[[noreturn]] void fail(const Cursor& c, const std::string& what) {
    throw std::invalid_argument("polynomial parse error at position " +
                                std::to_string(c.i) + ": " + what);
}

double parse_number(Cursor& c) {
    c.skip_ws();
    const char* begin = c.s.data() + c.i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail(c, "expected a number");
    c.i += static_cast<size_t>(end - begin);
    return v;
}

// One monomial: [number] {'*'? var ['^' uint]}*, at least one token.
Monomial parse_monomial(Cursor& c) {
    Monomial m;
    m.coeff = 1.0;
    bool saw_anything = false;
    c.skip_ws();
    if (!c.done() && (std::isdigit(static_cast<unsigned char>(c.peek())) ||
                      c.peek() == '+' || c.peek() == '-' || c.peek() == '.')) {
        m.coeff = parse_number(c);
        saw_anything = true;
    }
    while (true) {
        c.skip_ws();
        if (c.done() || c.peek() == ';') break;
        if (c.peek() == '*') {
            ++c.i;
            c.skip_ws();
        } else if (saw_anything && c.peek() != 'x' && c.peek() != 'y' && c.peek() != 'z') {
            fail(c, "expected '*', ';' or end of input");
        }
        if (c.done()) fail(c, "dangling '*'");
        const char var = c.peek();
        if (var != 'x' && var != 'y' && var != 'z') fail(c, "expected variable x, y or z");
        ++c.i;
        int expo = 1;
        c.skip_ws();
        if (!c.done() && c.peek() == '^') {
            ++c.i;
            c.skip_ws();
            if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek())))
                fail(c, "expected a nonnegative integer exponent");
            expo = 0;
            while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
                expo = expo * 10 + (c.peek() - '0');
                if (expo > 64) fail(c, "exponent too large");
                ++c.i;
            }
        }
        if (var == 'x') m.px += expo;
        else if (var == 'y') m.py += expo;
        else m.pz += expo;
        saw_anything = true;
    }
    if (!saw_anything) fail(c, "empty monomial");
    return m;
}

} // namespace

PolynomialSymbol PolynomialSymbol::parse(std::string_view text) {
    std::vector<Monomial> monos;
    size_t start = 0;
    while (start <= text.size()) {
        const size_t semi = text.find(';', start);
        const std::string_view piece =
            text.substr(start, semi == std::string_view::npos ? std::string_view::npos
                                                              : semi - start);
        bool blank = true;
        for (char ch : piece)
            if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
        if (!blank) {
            Cursor c{piece};
            monos.push_back(parse_monomial(c));
            c.skip_ws();
            if (!c.done()) fail(c, "trailing characters");
        }
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    return PolynomialSymbol(std::move(monos));
}

double symbol_eval(const PolynomialSymbol& p, const Vec3& m) {
    if (m.norm() > 1.0 + 1e-12)
        throw std::invalid_argument("symbol_eval: point outside the closed unit ball");
    return p(m);
}

double DirectionalDecomposition::operator()(const Vec3& m) const {
    double s = constant;
    for (const auto& t : terms) s += t.alpha * std::pow(t.w.dot(m), t.d);
    return s;
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

DirectionalDecomposition directional_decomposition(const PolynomialSymbol& p) {
    // Polarization: the symmetrized product of the axis factors of one
    // monomial equals 1/(2^d d!) sum over sign patterns eps of
    // (prod eps_i) <v_eps, .>^d with v_eps = sum_i eps_i e_{axis(i)}.
    // Powers of a fixed direction commute, so the identity holds for the
    // magnetization operators as well.
    DirectionalDecomposition out;
    std::map<std::tuple<long long, long long, long long, int>, double> acc;
    const double quant = 1e12; // direction dedup key resolution

    for (const auto& mono : p.monomials()) {
        const int d = mono.degree();
        if (d == 0) {
            out.constant += mono.coeff;
            continue;
        }
        std::vector<int> axes;
        axes.insert(axes.end(), mono.px, 0);
        axes.insert(axes.end(), mono.py, 1);
        axes.insert(axes.end(), mono.pz, 2);
        const double base = mono.coeff / (std::pow(2.0, d) * factorial(d));
        for (unsigned mask = 0; mask < (1u << d); ++mask) {
            Vec3 v = Vec3::Zero();
            int sign = 1;
            for (int i = 0; i < d; ++i) {
                const int eps = (mask >> i) & 1 ? -1 : 1;
                sign *= eps;
                v[axes[i]] += eps;
            }
            const double len = v.norm();
            if (len == 0.0) continue;
            Vec3 w = v / len;
            double alpha = base * sign * std::pow(len, d);
            // Canonical direction sign: first nonzero component positive.
            for (int k = 0; k < 3; ++k) {
                if (std::abs(w[k]) > 1e-14) {
                    if (w[k] < 0) {
                        w = -w;
                        if (d % 2 == 1) alpha = -alpha;
                    }
                    break;
                }
            }
            acc[{llround(w.x() * quant), llround(w.y() * quant),
                 llround(w.z() * quant), d}] += alpha;
        }
    }
    for (const auto& [key, alpha] : acc) {
        if (std::abs(alpha) < 1e-15) continue;
        Vec3 w(double(std::get<0>(key)) / quant, double(std::get<1>(key)) / quant,
               double(std::get<2>(key)) / quant);
        w.normalize();
        out.terms.push_back({alpha, w, std::get<3>(key)});
    }
    return out;
}

} // namespace qmf

#include "verblunsky/models.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace verblunsky {

RealSeq ModelSpec::phi_poly() const {
    RealSeq poly(p() + 1);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < p(); ++i) poly[i + 1] = -ar[i];
    return poly;
}

RealSeq ModelSpec::theta_poly() const {
    RealSeq poly(q() + 1);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < q(); ++i) poly[i + 1] = ma[i];
    return poly;
}

bool no_zeros_in_closed_disk(std::span<const double> poly) {
    // Step-down recursion on A(z) = poly: all reflection coefficients |k| < 1
    // iff all zeros lie strictly outside the closed unit disk.
    std::vector<double> a(poly.begin(), poly.end());
    while (a.size() > 1 && a.back() == 0.0) a.pop_back();
    while (a.size() > 1) {
        const std::size_t m = a.size() - 1;
        const double k = a[m] / a[0];
        if (!(std::abs(k) < 1.0)) return false;
        std::vector<double> b(m);
        const double denom = 1.0 - k * k;
        for (std::size_t i = 0; i < m; ++i) b[i] = (a[i] - k * a[m - i]) / denom;
        a = std::move(b);
    }
    return a[0] != 0.0;
}

double poly_eval(std::span<const double> poly, double x) {
    double acc = 0.0;
    for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
    return acc;
}

namespace {

// Resultant of two polynomials via LU on the Sylvester matrix.
double resultant(std::span<const double> f, std::span<const double> g) {
    const std::size_t m = f.size() - 1, n = g.size() - 1;
    if (m == 0 || n == 0) return 1.0;
    const std::size_t N = m + n;
    std::vector<double> s(N * N, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i <= m; ++i) s[r * N + r + i] = f[m - i];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i <= n; ++i) s[(n + r) * N + r + i] = g[n - i];
    double det = 1.0;
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(s[r * N + col]) > std::abs(s[piv * N + col])) piv = r;
        if (s[piv * N + col] == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t cc = 0; cc < N; ++cc) std::swap(s[piv * N + cc], s[col * N + cc]);
            det = -det;
        }
        det *= s[col * N + col];
        for (std::size_t r = col + 1; r < N; ++r) {
            const double fac = s[r * N + col] / s[col * N + col];
            if (fac == 0.0) continue;
            for (std::size_t cc = col; cc < N; ++cc) s[r * N + cc] -= fac * s[col * N + cc];
        }
    }
    return det;
}

double poly_norm(std::span<const double> p) {
    double s = 0.0;
    for (double x : p) s = std::max(s, std::abs(x));
    return s;
}

RealSeq binomial_series(double d, std::size_t length, bool negative_power) {
    // coefficients of (1-z)^{-d} when negative_power, else of (1-z)^{+d}
    return gamma_ratio_seq(1.0,
                           [d, negative_power](std::size_t n) {
                               const double num = negative_power ? double(n) + d : double(n) - d;
                               return num / (double(n) + 1.0);
                           },
                           length);
}

} // namespace

ValidationReport validate(const ModelSpec& spec) {
    ValidationReport rep;
    const RealSeq phi = spec.phi_poly();
    const RealSeq theta = spec.theta_poly();
    rep.phi_stable = no_zeros_in_closed_disk(phi);
    rep.theta_stable = no_zeros_in_closed_disk(theta);
    const double res = resultant(phi, theta);
    const double scale = std::pow(poly_norm(phi), double(spec.q())) *
                         std::pow(poly_norm(theta), double(spec.p()));
    rep.normalized_resultant = scale > 0.0 ? res / scale : res;
    rep.coprime = std::abs(rep.normalized_resultant) > 1e-10;
    rep.d_in_range = spec.d > -0.5 && spec.d < 0.5;
    return rep;
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    os << "phi_stable=" << (phi_stable ? "yes" : "no")
       << " theta_stable=" << (theta_stable ? "yes" : "no")
       << " coprime=" << (coprime ? "yes" : "no")
       << " d_in_range=" << (d_in_range ? "yes" : "no");
    return os.str();
}

void require_valid(const ModelSpec& spec) {
    const auto rep = validate(spec);
    if (!rep.ok()) throw std::invalid_argument("invalid model spec: " + rep.describe());
}

RealSeq ma_coeffs(const ModelSpec& spec, std::size_t length) {
    if (length < 1) throw std::invalid_argument("ma_coeffs: length must be >= 1");
    RealSeq rat = rational_series(spec.theta_poly(), spec.phi_poly(),
                                  std::min<std::size_t>(length, 4096));
    while (rat.size() > 1 && std::abs(rat.back()) < 1e-305) rat.pop_back();
    if (spec.d == 0.0) {
        if (rat.size() < length) {
            RealSeq full = rational_series(spec.theta_poly(), spec.phi_poly(), length);
            return full;
        }
        rat.resize(length);
        return rat;
    }
    const RealSeq cp = binomial_series(spec.d, length, true);
    if (rat.size() == 1 && rat[0] == 1.0) return cp;
    RealSeq out(length, 0.0);
    for (std::size_t n = 0; n < length; ++n) {
        double s = 0.0;
        const std::size_t kmax = std::min(n, rat.size() - 1);
        for (std::size_t k = 0; k <= kmax; ++k) s += rat[k] * cp[n - k];
        out[n] = s;
    }
    return out;
}

RealSeq ar_coeffs(const ModelSpec& spec, std::size_t length) {
    if (length < 1) throw std::invalid_argument("ar_coeffs: length must be >= 1");
    RealSeq rat = rational_series(spec.phi_poly(), spec.theta_poly(),
                                  std::min<std::size_t>(length, 4096));
    while (rat.size() > 1 && std::abs(rat.back()) < 1e-305) rat.pop_back();
    if (spec.d == 0.0) {
        RealSeq out = rat.size() < length
                          ? rational_series(spec.phi_poly(), spec.theta_poly(), length)
                          : std::move(rat);
        out.resize(length, 0.0);
        for (double& x : out) x = -x;
        return out;
    }
    const RealSeq gp = binomial_series(spec.d, length, false);
    RealSeq out(length, 0.0);
    for (std::size_t n = 0; n < length; ++n) {
        double s = 0.0;
        const std::size_t kmax = std::min(n, rat.size() - 1);
        for (std::size_t k = 0; k <= kmax; ++k) s += rat[k] * gp[n - k];
        out[n] = -s;
    }
    return out;
}

RealSeq farima00_autocov(double d, std::size_t length) {
    if (!(d > -0.5 && d < 0.5)) throw std::invalid_argument("farima00_autocov: d out of range");
    if (d == 0.0) {
        RealSeq g(length, 0.0);
        if (length) g[0] = 1.0;
        return g;
    }
    const double g0 = std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
    return gamma_ratio_seq(g0, [d](std::size_t m) { return (double(m) + d) / (double(m) + 1.0 - d); },
                           length);
}

RealSeq autocovariance(const ModelSpec& spec, std::size_t length) {
    if (length < 1) return {};
    if (spec.d == 0.0) {
        // gamma(n) = sum_v c_v c_{v+n}; geometric tails, extend until below 1e-12
        std::size_t L = std::max<std::size_t>(length + 64, 256);
        RealSeq c;
        for (;;) {
            c = ma_coeffs(spec, L);
            if (std::abs(c.back()) < 1e-18 || L > (1u << 22)) break;
            L *= 2;
        }
        if (std::abs(c.back()) >= 1e-12)
            throw std::runtime_error("autocovariance: impulse response does not decay; "
                                     "required length > " + std::to_string(L));
        RealSeq g(length, 0.0);
        for (std::size_t n = 0; n < length; ++n) {
            double s = 0.0;
            for (std::size_t v = 0; v + n < c.size(); ++v) s += c[v] * c[v + n];
            g[n] = s;
        }
        return g;
    }
    // gamma(k) = sum_{i,j} r_i r_j gamma'(k+i-j) with r the ARMA impulse response
    RealSeq r = rational_series(spec.theta_poly(), spec.phi_poly(), 4096);
    std::size_t R = r.size();
    while (R > 1 && std::abs(r[R - 1]) < 1e-15) --R;
    if (R == 4096 && std::abs(r[R - 1]) >= 1e-15)
        throw std::runtime_error("autocovariance: ARMA filter does not decay below 1e-15 "
                                 "within 4096 taps");
    r.resize(R);
    const RealSeq gp = farima00_autocov(spec.d, length + R + 1);
    RealSeq g(length, 0.0);
    for (std::size_t k = 0; k < length; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < R; ++i) {
            for (std::size_t j = 0; j < R; ++j) {
                const long m = long(k) + long(i) - long(j);
                s += r[i] * r[j] * gp[std::size_t(m < 0 ? -m : m)];
            }
        }
        g[k] = s;
    }
    return g;
}

double fitted_geometric_rate(std::span<const double> x) {
    // locate trailing support
    std::size_t last = x.size();
    while (last > 0 && x[last - 1] == 0.0) --last;
    if (last <= 2) return 0.0; // finitely supported (or trivially short)
    if (last < x.size()) {
        // exact zero tail within the table: finite sequence
        bool all_zero = true;
        for (std::size_t i = last; i < x.size(); ++i) all_zero = all_zero && x[i] == 0.0;
        if (all_zero && x.size() - last > 4) return 0.0;
    }
    const std::size_t w = std::min<std::size_t>(64, last / 2);
    double rate = 0.0;
    for (std::size_t i = last - w; i + 1 < last; ++i) {
        if (x[i] == 0.0) continue;
        rate = std::max(rate, std::abs(x[i + 1] / x[i]));
    }
    if (!(rate < 1.0))
        throw std::runtime_error("fitted_geometric_rate: tail does not decay geometrically");
    return rate;
}

CoeffTable coeff_table(const ModelSpec& spec, std::size_t length, std::size_t gamma_length) {
    CoeffTable ct;
    ct.c = ma_coeffs(spec, length);
    ct.a = ar_coeffs(spec, length);
    ct.gamma = gamma_length ? autocovariance(spec, gamma_length) : RealSeq{};
    ct.trunc_len = length;
    if (spec.d > 0.0) {
        ct.c_tail_exponent = spec.d - 1.0;
        ct.a_tail_exponent = -1.0 - spec.d;
    } else {
        ct.c_geo_rate = fitted_geometric_rate(ct.c);
        ct.a_geo_rate = fitted_geometric_rate(ct.a);
    }
    return ct;
}

namespace {

RealSeq parse_list(const std::string& text, const std::string& key) {
    RealSeq out;
    std::string tok;
    std::istringstream is(text);
    while (std::getline(is, tok, ',')) {
        // trim
        const auto b = tok.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = tok.find_last_not_of(" \t");
        tok = tok.substr(b, e - b + 1);
        if (tok.empty()) continue;
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: bad number '" + tok + "' for key " + key);
        }
        if (used != tok.size())
            throw std::invalid_argument("config: bad number '" + tok + "' for key " + key);
        out.push_back(v);
    }
    return out;
}

} // namespace

ModelSpec spec_from_config(std::istream& in) {
    ModelSpec spec;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        const auto kb = key.find_first_not_of(" \t");
        const auto ke = key.find_last_not_of(" \t");
        key = key.substr(kb, ke - kb + 1);
        if (key == "phi")
            spec.ar = parse_list(val, key);
        else if (key == "theta")
            spec.ma = parse_list(val, key);
        else if (key == "d") {
            const RealSeq v = parse_list(val, key);
            if (v.size() != 1)
                throw std::invalid_argument("config: d expects a single value");
            spec.d = v[0];
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    return spec;
}

} // namespace verblunsky

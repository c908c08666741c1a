#include "verblunsky/phase.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace verblunsky {

BetaTable beta(const ModelSpec& spec, const CoeffTable& ct, std::size_t n_max,
               const TruncationPolicy& policy) {
    const std::size_t V = policy.beta_inner_for(spec.d);
    const std::size_t n_beta = n_max + 1;
    const std::size_t need = V + n_max;
    if (ct.c.size() < V || ct.a.size() < need)
        throw std::invalid_argument("beta: coefficient tables too short, need c length >= " +
                                    std::to_string(V) + " and a length >= " +
                                    std::to_string(need));

    BetaTable bt;
    bt.spec = spec;
    bt.trunc_v = V;
    bt.tail_corrected = policy.tail_correction_for(spec.d);

    // one pass for every n: beta[n] = sum_{v<V} c_v a_{n+v}
    bt.beta = correlate_tail(std::span<const double>(ct.a.data(), need + 1 > ct.a.size()
                                                                      ? ct.a.size()
                                                                      : need + 1),
                             std::span<const double>(ct.c.data(), V), 0, n_beta,
                             CorrelateMode::fft);

    // |c| * |a| correlation for a rounding-error scale
    RealSeq cabs(ct.c.begin(), ct.c.begin() + V);
    RealSeq aabs(ct.a.begin(), ct.a.begin() + std::min(ct.a.size(), need + 1));
    for (double& x : cabs) x = std::abs(x);
    for (double& x : aabs) x = std::abs(x);
    const RealSeq mag = correlate_tail(aabs, cabs, 0, n_beta, CorrelateMode::fft);

    bt.est_error.assign(n_beta, 0.0);
    for (std::size_t n = 0; n < n_beta; ++n)
        bt.est_error[n] = 1e-13 * std::abs(mag[n]) + 1e-305;

    if (bt.tail_corrected && spec.d > 0.0) {
        const double d = spec.d;
        const std::size_t W = 64;
        for (std::size_t n = 0; n < n_beta; ++n) {
            // fit the summand window c_v a_{n+v}, v in [V-W, V), to
            // A v^{d-1} (n+v)^{-1-d} and integrate the model over [V, inf)
            double sum_s = 0.0, sum_m = 0.0, sum_r = 0.0, sum_r2 = 0.0;
            for (std::size_t v = V - W; v < V; ++v) {
                const double s = ct.c[v] * ct.a[n + v];
                const double m = std::pow(double(v), d - 1.0) *
                                 std::pow(double(n) + double(v), -1.0 - d);
                const double r = s / m;
                sum_s += s;
                sum_m += m;
                sum_r += r;
                sum_r2 += r * r;
            }
            if (sum_m == 0.0) continue;
            const double A = sum_s / sum_m;
            double tail;
            if (n == 0) {
                tail = A / double(V);
            } else {
                const double x0 = double(V) / (double(n) + double(V));
                tail = A * (1.0 - std::pow(x0, d)) / (d * double(n));
            }
            bt.beta[n] += tail;
            // residual estimate: model-compensated scatter over the window
            // plus the finite-window bias
            const double mean_r = sum_r / double(W);
            const double var_r = std::max(0.0, sum_r2 / double(W) - mean_r * mean_r);
            const double scatter = mean_r != 0.0 ? std::sqrt(var_r) / std::abs(mean_r) : 1.0;
            bt.est_error[n] += std::abs(tail) * (scatter + double(W) / double(V));
        }
    }
    return bt;
}

BetaTable beta(const ModelSpec& spec, std::size_t n_max, const TruncationPolicy& policy) {
    const std::size_t V = policy.beta_inner_for(spec.d);
    const CoeffTable ct = coeff_table(spec, V + n_max + 2, 0);
    return beta(spec, ct, n_max, policy);
}

RealSeq envelope_F(const CoeffTable& ct, std::size_t j_max) {
    if (ct.c_tail_exponent != 0.0)
        throw std::invalid_argument("envelope_F: F undefined under long memory");

    // sum |c| with geometric tail certificate
    double sum_c = 0.0;
    for (double x : ct.c) sum_c += std::abs(x);
    if (ct.c_geo_rate > 0.0)
        sum_c += std::abs(ct.c.back()) * ct.c_geo_rate / (1.0 - ct.c_geo_rate);

    if (ct.a.size() <= j_max)
        throw std::invalid_argument("envelope_F: a table shorter than j_max");
    // suffix sums of |a|
    RealSeq F(j_max + 1, 0.0);
    double tail = ct.a_geo_rate > 0.0
                      ? std::abs(ct.a.back()) * ct.a_geo_rate / (1.0 - ct.a_geo_rate)
                      : 0.0;
    for (std::size_t u = ct.a.size(); u-- > 0;) {
        tail += std::abs(ct.a[u]);
        if (u <= j_max) F[u] = sum_c * tail;
    }
    return F;
}

std::vector<FourierCheckRow> beta_fourier_check(const ModelSpec& spec,
                                                const std::vector<std::size_t>& n_list) {
    require_valid(spec);
    if (spec.d < 0.0)
        throw std::invalid_argument("beta_fourier_check: requires d >= 0");
    std::size_t n_max = 2;
    for (std::size_t n : n_list) n_max = std::max(n_max, n);
    const BetaTable bt = beta(spec, n_max);

    const RealSeq phi = spec.phi_poly();
    const RealSeq theta = spec.theta_poly();
    const auto poly_eval = [](const RealSeq& p, std::complex<double> z) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
        return acc;
    };
    // phase function at e^{i theta}: conj(h)/h with h = Theta/Phi (1-z)^{-d}
    const auto phase = [&](double th) {
        const std::complex<double> z(std::cos(th), std::sin(th));
        const std::complex<double> one_minus_z = 1.0 - z;
        std::complex<double> h = poly_eval(theta, z) / poly_eval(phi, z);
        if (spec.d != 0.0) h *= std::pow(one_minus_z, -spec.d);
        return std::conj(h) / h;
    };

    // panels on (0, pi]: dyadic refinement toward the theta = 0 jump plus a
    // uniform partition fine enough for the e^{-i n theta} oscillation
    std::vector<std::pair<double, double>> panels;
    const double theta0 = 1.0 / 64.0;
    double hi = theta0;
    for (int l = 0; l < 44; ++l) {
        panels.emplace_back(hi * 0.5, hi);
        hi *= 0.5;
    }
    const std::size_t uniform = std::max<std::size_t>(16, (n_max * 3 + 15) / 4);
    for (std::size_t i = 0; i < uniform; ++i) {
        const double a = theta0 + (std::numbers::pi - theta0) * double(i) / double(uniform);
        const double b = theta0 + (std::numbers::pi - theta0) * double(i + 1) / double(uniform);
        panels.emplace_back(a, b);
    }
    std::vector<double> gx, gw;
    detail::gauss_legendre(12, gx, gw);

    std::vector<FourierCheckRow> rows;
    rows.reserve(n_list.size());
    for (std::size_t n : n_list) {
        double integral = 0.0;
        for (const auto& [a, b] : panels) {
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int i = 0; i < 12; ++i) {
                const double th = mid + half * gx[i];
                const std::complex<double> val =
                    std::exp(std::complex<double>(0.0, -double(n) * th)) * phase(th);
                integral += half * gw[i] * val.real();
            }
        }
        // real even integrand: (1/2pi) int_{-pi}^{pi} = (1/pi) int_0^pi Re
        const double quad = -integral / std::numbers::pi;
        rows.push_back({n, quad, bt.beta[n], quad - bt.beta[n]});
    }
    return rows;
}

} // namespace verblunsky

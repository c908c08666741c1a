#include "verblunsky/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace verblunsky {

LevinsonResult levinson(const RealSeq& gamma, std::size_t n_max) {
    if (gamma.size() < n_max + 1)
        throw std::invalid_argument("levinson: gamma needs length >= n_max + 1");
    if (!(gamma[0] > 0.0))
        throw std::runtime_error("gamma not positive definite at step 0");

    LevinsonResult out;
    out.alpha.assign(n_max, 0.0);
    out.v.assign(n_max + 1, 0.0);
    out.phi.n_max = n_max;
    out.phi.rows.resize(n_max);
    out.phi.row_converged.assign(n_max, 1);
    out.v[0] = gamma[0];
    if (n_max == 0) return out;

    RealSeq phi(n_max + 1, 0.0); // phi[j] = phi_{n,j}, 1-based
    double v = gamma[0];
    for (std::size_t n = 0; n < n_max; ++n) {
        double num = gamma[n + 1];
        for (std::size_t j = 1; j <= n; ++j) num -= phi[j] * gamma[n + 1 - j];
        const double a = num / v;
        out.alpha[n] = a;
        RealSeq next(phi);
        next[n + 1] = a;
        for (std::size_t j = 1; j <= n; ++j) next[j] = phi[j] - a * phi[n + 1 - j];
        phi = std::move(next);
        v *= (1.0 - a * a);
        if (!(v > 0.0))
            throw std::runtime_error("gamma not positive definite at step " +
                                     std::to_string(n + 1));
        out.v[n + 1] = v;
        out.phi.rows[n].assign(phi.begin() + 1, phi.begin() + 1 + n + 1);
    }
    return out;
}

double brute_alpha_term(const BetaTable& bt, std::size_t n, std::size_t k, std::size_t V) {
    if (k % 2 == 0 || k > 5) throw std::invalid_argument("brute_alpha_term: k must be odd, <= 5");
    if (V > 4000) throw std::invalid_argument("brute_alpha_term: V <= 4000 required");
    const double cost = std::pow(double(V), double(k - 1));
    if (cost > 2e10)
        throw std::invalid_argument("brute_alpha_term: V^{k-1} too large for a literal sum");
    const auto& b = bt.beta;
    if (k == 1) {
        if (n >= b.size()) throw std::invalid_argument("brute_alpha_term: beta too short");
        return b[n];
    }
    const std::size_t need = n + 1 + 2 * (V - 1);
    if (b.size() <= need)
        throw std::invalid_argument("brute_alpha_term: beta too short, need length > " +
                                    std::to_string(need));
    if (k == 3) {
        // sum_{v1,v2} beta_{n+v1} beta_{n+1+v1+v2} beta_{n+1+v2}
        double total = 0.0;
        for (std::size_t v1 = 0; v1 < V; ++v1) {
            double inner = 0.0;
            for (std::size_t v2 = 0; v2 < V; ++v2)
                inner += b[n + 1 + v1 + v2] * b[n + 1 + v2];
            total += b[n + v1] * inner;
        }
        return total;
    }
    // k == 5: sum over v1..v4 of beta_{n+v1} beta_{n+1+v1+v2} beta_{n+1+v2+v3}
    //         beta_{n+1+v3+v4} beta_{n+1+v4}
    double total = 0.0;
    for (std::size_t v1 = 0; v1 < V; ++v1) {
        double s1 = 0.0;
        for (std::size_t v2 = 0; v2 < V; ++v2) {
            double s2 = 0.0;
            for (std::size_t v3 = 0; v3 < V; ++v3) {
                double s3 = 0.0;
                const double* b34 = b.data() + n + 1 + v3;
                const double* b4 = b.data() + n + 1;
                for (std::size_t v4 = 0; v4 < V; ++v4) s3 += b34[v4] * b4[v4];
                s2 += b[n + 1 + v2 + v3] * s3;
            }
            s1 += b[n + 1 + v1 + v2] * s2;
        }
        total += b[n + v1] * s1;
    }
    return total;
}

double brute_dk(const BetaTable& bt, std::size_t n, std::size_t j, std::size_t k,
                std::size_t V) {
    if (k > 4) throw std::invalid_argument("brute_dk: k <= 4 required");
    if (V > 4000) throw std::invalid_argument("brute_dk: V <= 4000 required");
    if (k >= 2 && std::pow(double(V), double(k - 1)) > 2e10)
        throw std::invalid_argument("brute_dk: V^{k-1} too large for a literal sum");
    const auto& b = bt.beta;
    if (k == 0) return j == 0 ? 1.0 : 0.0;
    const std::size_t need = k == 1 ? n + j : std::max(n + j + V - 1, n + 2 * (V - 1));
    if (b.size() <= need)
        throw std::invalid_argument("brute_dk: beta too short, need length > " +
                                    std::to_string(need));
    if (k == 1) return b[n + j];
    if (k == 2) {
        double total = 0.0;
        for (std::size_t v1 = 0; v1 < V; ++v1) total += b[n + j + v1] * b[n + v1];
        return total;
    }
    if (k == 3) {
        double total = 0.0;
        for (std::size_t v2 = 0; v2 < V; ++v2) {
            double inner = 0.0;
            for (std::size_t v1 = 0; v1 < V; ++v1) inner += b[n + v2 + v1] * b[n + v1];
            total += b[n + j + v2] * inner;
        }
        return total;
    }
    double total = 0.0;
    for (std::size_t v3 = 0; v3 < V; ++v3) {
        double s2 = 0.0;
        for (std::size_t v2 = 0; v2 < V; ++v2) {
            double s1 = 0.0;
            const double* b21 = b.data() + n + v2;
            const double* b1 = b.data() + n;
            for (std::size_t v1 = 0; v1 < V; ++v1) s1 += b21[v1] * b1[v1];
            s2 += b[n + v3 + v2] * s1;
        }
        total += b[n + j + v3] * s2;
    }
    return total;
}

} // namespace verblunsky

#include "verblunsky/engine.hpp"
#include "verblunsky/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <cstdint>
#include <thread>

namespace verblunsky {

namespace detail {

/*
 * Quadrature basis for the long-memory tail.
 *
 * For d > 0 the phase coefficients admit beta_J = int_0^1 t^{J-1} dmu(t) + e_J
 * with dmu(t) = (sin(pi d)/pi) t^{-d} rho(t) dt,
 * rho(t) = Theta(t) Phi(1/t) / (Phi(t) Theta(1/t)), and e_J decaying
 * geometrically (it is gone in double precision at the indices where the
 * basis is used, J >= base + W). Likewise the AR coefficients satisfy
 * a_J = int_0^1 t^{J-1} (1-t)^d t^{-d} (sin(pi d)/pi) Phi(1/t)/Theta(1/t) dt
 * plus a geometric part. Discretizing dmu on a mesh graded dyadically toward
 * t = 1 turns every infinite Hankel/correlation tail into finite geometric
 * sums, which is what makes the series engine accurate at power-law tails.
 *
 * Nodes are stored through u = 1 - t so that depth is not limited by the
 * spacing of doubles near 1.
 */
struct TailBasis {
    std::size_t M = 0;
    std::size_t W = 0;
    RealSeq u;      // 1 - t
    RealSeq log_t;  // log1p(-u)
    RealSeq mu_beta;
    RealSeq mu_ar;
    RealSeq tt;     // M x M: (t_i t_j)^W / (1 - t_i t_j)
    RealSeq pw;     // M x W: t_i^v

    static std::unique_ptr<TailBasis> build(const ModelSpec& spec, int levels, std::size_t W);
};

namespace {

int mesh_levels(std::size_t V) {
    const double lg = std::log2(double(V));
    const int L = int(std::lround(120.0 + 8.0 * (lg - 12.0)));
    return std::clamp(L, 72, 168);
}

} // namespace

std::unique_ptr<TailBasis> TailBasis::build(const ModelSpec& spec, int levels, std::size_t W) {
    const double d = spec.d;
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("TailBasis: requires d in (0, 1/2)");
    const RealSeq phi = spec.phi_poly();
    const RealSeq theta = spec.theta_poly();

    // Theta must not vanish on [1, inf): a zero there would sit on the cut.
    if (spec.q() > 0) {
        double prev = poly_eval(theta, 1.0);
        for (int i = 1; i <= 4096; ++i) {
            const double x = std::exp(std::log(1e9) * double(i) / 4096.0);
            const double val = poly_eval(theta, x);
            if (val == 0.0 || (val > 0) != (prev > 0))
                throw std::domain_error(
                    "long-memory engine requires Theta(z) != 0 on [1, inf)");
            prev = val;
        }
    }

    auto basis = std::make_unique<TailBasis>();
    basis->W = W;
    const double s_over_pi = std::sin(std::numbers::pi * d) / std::numbers::pi;

    std::vector<double> gx12, gw12, gx6, gw6;
    gauss_legendre(12, gx12, gw12);
    gauss_legendre(6, gx6, gw6);

    auto add_panel = [&](double a, double b, const std::vector<double>& gx,
                         const std::vector<double>& gw) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double uu = mid + half * gx[i];
            const double wq = half * gw[i];
            const double lt = std::log1p(-uu);
            const double t = 1.0 - uu;
            const double inv_t = 1.0 / t;
            const double th_t = poly_eval(theta, t);
            const double ph_t = poly_eval(phi, t);
            const double th_it = poly_eval(theta, inv_t);
            const double ph_it = poly_eval(phi, inv_t);
            const double rho = th_t * ph_it / (ph_t * th_it);
            const double sigma = ph_it / th_it;
            const double t_pow_md = std::exp(-d * lt); // t^{-d}
            basis->u.push_back(uu);
            basis->log_t.push_back(lt);
            basis->mu_beta.push_back(wq * s_over_pi * t_pow_md * rho);
            basis->mu_ar.push_back(wq * s_over_pi * t_pow_md * std::pow(uu, d) * sigma);
        }
    };

    for (int l = 1; l <= levels; ++l) {
        const double b = std::ldexp(1.0, -l);
        const double a = std::ldexp(1.0, -(l + 1));
        if (l <= 20)
            add_panel(a, b, gx12, gw12);
        else
            add_panel(a, b, gx6, gw6);
    }
    add_panel(0.0, std::ldexp(1.0, -(levels + 1)), gx12, gw12);

    const std::size_t M = basis->u.size();
    basis->M = M;

    basis->tt.assign(M * M, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double one_minus = basis->u[i] + basis->u[j] - basis->u[i] * basis->u[j];
            const double val =
                std::exp(double(W) * (basis->log_t[i] + basis->log_t[j])) / one_minus;
            basis->tt[i * M + j] = val;
            basis->tt[j * M + i] = val;
        }
    }
    basis->pw.assign(M * W, 0.0);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t v = 0; v < W; ++v)
            basis->pw[i * W + v] = std::exp(double(v) * basis->log_t[i]);
    return basis;
}

} // namespace detail

struct PacfEngine::State {
    RealSeq head;
    RealSeq xi;
};

struct PacfEngine::Ctx {
    std::size_t base = 0;
    detail::HankelPlan plan;
    RealSeq wbase; // mu_beta * t^{base-1}
};

namespace {

double plain_or_compensated_dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() > 10000) return compensated_dot(a, b);
    double s = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

} // namespace

PacfEngine::PacfEngine(const ModelSpec& spec, const CoeffTable* ct, const BetaTable& bt,
                       const TruncationPolicy& policy)
    : PacfEngine(spec, ct, bt, policy, 0) {}

PacfEngine::PacfEngine(const ModelSpec& spec, const CoeffTable* ct, const BetaTable& bt,
                       const TruncationPolicy& policy, int levels_override)
    : spec_(spec), ct_(ct), bt_(&bt), pol_(policy) {
    if (spec_.d < 0.0)
        throw std::invalid_argument("series engine supports d in [0, 1/2) only");
    if (spec_.d > 0.0) {
        head_ = std::max<std::size_t>(pol_.head, 64);
        const int levels =
            levels_override > 0 ? levels_override : detail::mesh_levels(pol_.V);
        tail_ = detail::TailBasis::build(spec_, levels, head_);
    } else {
        head_ = std::max<std::size_t>(pol_.V, 2);
    }
}

PacfEngine::~PacfEngine() = default;

void PacfEngine::make_ctx(std::size_t base, Ctx& ctx) const {
    const std::size_t W = head_;
    const std::size_t need = base + 2 * W - 1;
    if (bt_->beta.size() < need)
        throw std::invalid_argument("beta table too short: need length >= " +
                                    std::to_string(need) + ", have " +
                                    std::to_string(bt_->beta.size()));
    ctx.base = base;
    ctx.plan = detail::HankelPlan(
        std::span<const double>(bt_->beta.data() + base, 2 * W - 1), W, W);
    if (tail_) {
        const auto& tb = *tail_;
        ctx.wbase.resize(tb.M);
        for (std::size_t i = 0; i < tb.M; ++i)
            ctx.wbase[i] = tb.mu_beta[i] * std::exp(double(base - 1) * tb.log_t[i]);
    }
}

void PacfEngine::tail_gemv(const State& x, RealSeq& g) const {
    if (!tail_) return;
    const auto& tb = *tail_;
    g.assign(tb.M, 0.0);
    const double* tt = tb.tt.data();
    for (std::size_t i = 0; i < tb.M; ++i) {
        const double* row = tt + i * tb.M;
        double s = 0.0;
        for (std::size_t j = 0; j < tb.M; ++j) s += row[j] * x.xi[j];
        g[i] = s;
    }
}

void PacfEngine::apply(const Ctx& ctx, const State& x, State& y, const RealSeq& g) const {
    const std::size_t W = head_;
    y.head.resize(W);
    ctx.plan.apply(x.head, y.head);
    if (!tail_) return;
    const auto& tb = *tail_;
    y.xi.resize(tb.M);
    for (std::size_t i = 0; i < tb.M; ++i) {
        const double coef = ctx.wbase[i] * g[i];
        if (coef != 0.0) {
            const double* row = tb.pw.data() + i * W;
            for (std::size_t j = 0; j < W; ++j) y.head[j] += coef * row[j];
        }
        const double* row = tb.pw.data() + i * W;
        double h = 0.0;
        for (std::size_t v = 0; v < W; ++v) h += row[v] * x.head[v];
        y.xi[i] = ctx.wbase[i] * (h + g[i]);
    }
}

double PacfEngine::contract(std::size_t outer, const State& x, const RealSeq& g) const {
    const std::size_t W = head_;
    double s = plain_or_compensated_dot(
        std::span<const double>(bt_->beta.data() + outer, W),
        std::span<const double>(x.head.data(), W));
    if (tail_) {
        const auto& tb = *tail_;
        for (std::size_t i = 0; i < tb.M; ++i)
            s += tb.mu_beta[i] * std::exp(double(outer - 1) * tb.log_t[i]) * g[i];
    }
    return s;
}

RealSeq PacfEngine::a_row(const State& x, const RealSeq& g, std::size_t j_max) const {
    if (!ct_) throw std::logic_error("a_row: engine built without a coefficient table");
    const std::size_t W = head_;
    if (ct_->a.size() < j_max + W)
        throw std::invalid_argument("a table too short: need length >= " +
                                    std::to_string(j_max + W));
    RealSeq row = correlate_tail(ct_->a, std::span<const double>(x.head.data(), W), 1,
                                 j_max, CorrelateMode::automatic);
    if (tail_) {
        const auto& tb = *tail_;
        for (std::size_t i = 0; i < tb.M; ++i) {
            const double coef = tb.mu_ar[i] * g[i];
            if (coef == 0.0) continue;
            const double* pw = tb.pw.data() + i * W;
            const std::size_t jj = std::min(j_max, W);
            for (std::size_t j = 0; j < jj; ++j) row[j] += coef * pw[j];
        }
    }
    return row;
}

namespace {

struct SeriesAccum {
    double partial = 0.0;
    double prev_term = 0.0;
    double last_term = 0.0;
    std::size_t used = 0;
    bool converged = false;

    // returns true when the stop rule fires after adding term k
    bool add(double term, std::size_t k, const TruncationPolicy& pol) {
        partial += term;
        used = k;
        const double thr = pol.term_tol * std::max(std::abs(partial), pol.abs_floor);
        const bool small_now = std::abs(term) < thr;
        const bool small_prev = k >= 2 && std::abs(prev_term) < thr;
        last_term = term;
        const bool stop = k >= 2 && small_now && small_prev;
        prev_term = term;
        if (stop) converged = true;
        return stop;
    }
};

} // namespace

void PacfEngine::calibration() const {
    std::call_once(cal_once_, [&] {
        if (!tail_) {
            cal_delta_ = 0.0;
            eps_window_ = 0.0;
            return;
        }
        const auto& tb = *tail_;
        // certificate: the basis must reproduce the table beta at the first
        // indices where the tail blocks take over (J >= 3 + W)
        double worst = 0.0;
        const std::size_t J0 = 3 + head_ - 32, J1 = 3 + head_;
        for (std::size_t J = J0; J < J1 && J < bt_->beta.size(); ++J) {
            double cut = 0.0;
            for (std::size_t i = 0; i < tb.M; ++i)
                cut += tb.mu_beta[i] * std::exp(double(J - 1) * tb.log_t[i]);
            worst = std::max(worst, std::abs(cut - bt_->beta[J]));
        }
        eps_window_ = worst;

        // mesh-refinement delta at n = 2: rerun on a mesh 16 levels shallower
        const PacfEngine shallow(spec_, ct_, *bt_, pol_,
                                 detail::mesh_levels(pol_.V) - 16);
        const PacfResult fine = alpha_impl(2);
        const PacfResult rough = shallow.alpha_impl(2);
        cal_delta_ = std::abs(fine.alpha - rough.alpha);
    });
}

PacfResult PacfEngine::alpha_impl(std::size_t n) const {
    const std::size_t W = head_;
    Ctx ctx;
    make_ctx(n + 1, ctx);

    State x{RealSeq(W, 0.0), tail_ ? RealSeq(tail_->M, 0.0) : RealSeq{}};
    x.head[0] = 1.0;
    State y{RealSeq(W, 0.0), tail_ ? RealSeq(tail_->M, 0.0) : RealSeq{}};
    RealSeq g, g2;
    if (tail_) {
        g.assign(tail_->M, 0.0);
        g2.assign(tail_->M, 0.0);
    }

    SeriesAccum acc;
    double head_tail_mag = 0.0;
    for (std::size_t k = 1; k <= pol_.k_max; ++k) {
        if (tail_) tail_gemv(x, g);
        const double term = contract(n, x, g);
        if (acc.add(term, k, pol_)) break;
        if (k == pol_.k_max) break;
        apply(ctx, x, y, g);
        if (tail_) tail_gemv(y, g2);
        apply(ctx, y, x, g2);
        head_tail_mag = std::max(head_tail_mag, std::abs(x.head[W - 1]));
    }

    PacfResult res;
    res.n = n;
    res.alpha = acc.partial;
    res.terms_used = acc.used;
    res.last_term = acc.last_term;
    res.converged = acc.converged && std::abs(res.alpha) < 1.0;
    res.est_trunc_error =
        std::abs(acc.last_term) + std::abs(acc.prev_term) + 1e-15 * (1.0 + std::abs(res.alpha));
    if (!tail_) {
        // state truncation for geometric tails: bound by the last head entry
        double max_beta = 0.0;
        for (std::size_t v = n; v < std::min(bt_->beta.size(), n + 2 * W); ++v)
            max_beta = std::max(max_beta, std::abs(bt_->beta[v]));
        res.est_trunc_error += head_tail_mag * double(W) * max_beta;
    }
    return res;
}

PacfResult PacfEngine::alpha(std::size_t n) const {
    if (n < 2)
        throw std::invalid_argument(
            "alpha: the series applies for n >= 2; use oracle::levinson for n = 1");
    PacfResult res = alpha_impl(n);
    if (tail_) {
        calibration();
        res.est_trunc_error += 3.0 * cal_delta_ * std::sqrt(2.0 / double(n)) +
                               20.0 * eps_window_;
    }
    return res;
}

RealSeq PacfEngine::dk_head(std::size_t n, std::size_t k) const {
    const std::size_t W = head_;
    Ctx ctx;
    make_ctx(n, ctx);
    State x{RealSeq(W, 0.0), tail_ ? RealSeq(tail_->M, 0.0) : RealSeq{}};
    x.head[0] = 1.0;
    State y = x;
    RealSeq g;
    if (tail_) g.assign(tail_->M, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        if (tail_) tail_gemv(x, g);
        apply(ctx, x, y, g);
        std::swap(x, y);
    }
    return x.head;
}

double PacfEngine::alpha_term_value(std::size_t n, std::size_t k) const {
    const std::size_t W = head_;
    Ctx ctx;
    make_ctx(n + 1, ctx);
    State x{RealSeq(W, 0.0), tail_ ? RealSeq(tail_->M, 0.0) : RealSeq{}};
    x.head[0] = 1.0;
    State y = x;
    RealSeq g;
    if (tail_) g.assign(tail_->M, 0.0);
    for (std::size_t i = 0; i < 2 * k; ++i) {
        if (tail_) tail_gemv(x, g);
        apply(ctx, x, y, g);
        std::swap(x, y);
    }
    if (tail_) tail_gemv(x, g);
    return contract(n, x, g);
}

RealSeq PacfEngine::b_row(std::size_t n, std::size_t k, std::size_t j_max) const {
    if (k < 1) throw std::invalid_argument("b_row: k >= 1 required");
    const std::size_t W = head_;
    Ctx ctx;
    make_ctx(n + 1, ctx);
    State x{RealSeq(W, 0.0), tail_ ? RealSeq(tail_->M, 0.0) : RealSeq{}};
    x.head[0] = 1.0;
    State y = x;
    RealSeq g;
    if (tail_) g.assign(tail_->M, 0.0);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        if (tail_) tail_gemv(x, g);
        apply(ctx, x, y, g);
        std::swap(x, y);
    }
    if (tail_) tail_gemv(x, g);
    return a_row(x, g, j_max);
}

PredictorTable PacfEngine::predictors(std::size_t n_max) const {
    if (!ct_) throw std::logic_error("predictors: engine built without a coefficient table");
    if (n_max > head_)
        throw std::invalid_argument("predictors: n_max exceeds the head length");
    PredictorTable pt;
    pt.n_max = n_max;
    pt.rows.resize(n_max);
    pt.row_converged.assign(n_max, 0);

    const std::size_t W = head_;
    for (std::size_t n = 1; n <= n_max; ++n) {
        Ctx ctx;
        make_ctx(n + 1, ctx);
        RealSeq phi(n, 0.0);
        std::vector<std::uint8_t> small_streak(n, 0);

        State x{RealSeq(W, 0.0), tail_ ? RealSeq(tail_->M, 0.0) : RealSeq{}};
        x.head[0] = 1.0;
        State y = x;
        RealSeq g, g2;
        if (tail_) {
            g.assign(tail_->M, 0.0);
            g2.assign(tail_->M, 0.0);
        }

        bool all_done = false;
        for (std::size_t k = 1; k <= pol_.k_max && !all_done; ++k) {
            if (tail_) tail_gemv(x, g);
            const RealSeq odd = a_row(x, g, n); // b_{2k-1}(n, .)
            apply(ctx, x, y, g);
            if (tail_) tail_gemv(y, g2);
            const RealSeq even = a_row(y, g2, n); // b_{2k}(n, .)
            apply(ctx, y, x, g2);

            all_done = true;
            for (std::size_t j = 1; j <= n; ++j) {
                const double incr = odd[j - 1] + even[n - j]; // b_{2k}(n, n+1-j)
                phi[j - 1] += incr;
                const double thr =
                    pol_.term_tol * std::max(std::abs(phi[j - 1]), pol_.abs_floor);
                if (std::abs(incr) < thr) {
                    if (small_streak[j - 1] < 2) ++small_streak[j - 1];
                } else {
                    small_streak[j - 1] = 0;
                }
                all_done = all_done && small_streak[j - 1] >= 2;
            }
        }
        pt.rows[n - 1] = std::move(phi);
        pt.row_converged[n - 1] = all_done ? 1 : 0;
    }
    return pt;
}

double szego_residual_max(const PredictorTable& pt, std::span<const double> alpha_by_n) {
    double worst = 0.0;
    for (std::size_t n = 1; n + 1 <= pt.n_max; ++n) {
        if (n >= alpha_by_n.size()) break;
        const double a_next = alpha_by_n[n]; // alpha(n+1)
        for (std::size_t j = 1; j <= n; ++j) {
            const double r =
                pt.at(n, j) - pt.at(n + 1, j) - pt.at(n, n + 1 - j) * a_next;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

RealSeq dk_vector(const BetaTable& bt, std::size_t n, std::size_t k,
                  const TruncationPolicy& policy) {
    const std::size_t V = policy.V;
    const std::size_t need = n + 2 * V - 1;
    if (bt.beta.size() < need)
        throw std::invalid_argument("dk_vector: beta table too short, need length >= " +
                                    std::to_string(need));
    RealSeq x(V, 0.0);
    x[0] = 1.0;
    for (std::size_t i = 0; i < k; ++i) x = correlate_tail(bt.beta, x, n, V);
    return x;
}

double alpha_term(const BetaTable& bt, std::size_t n, std::size_t k,
                  const TruncationPolicy& policy) {
    const RealSeq d2k = dk_vector(bt, n + 1, 2 * k, policy);
    return plain_or_compensated_dot(
        std::span<const double>(bt.beta.data() + n, policy.V),
        std::span<const double>(d2k.data(), policy.V));
}

double b_coeff(const CoeffTable& ct, const BetaTable& bt, std::size_t n, std::size_t j,
               std::size_t k, const TruncationPolicy& policy) {
    if (j < 1 || k < 1) throw std::invalid_argument("b_coeff: requires j >= 1 and k >= 1");
    const std::size_t V = policy.V;
    if (ct.a.size() < j + V)
        throw std::invalid_argument("b_coeff: a table too short, need length >= " +
                                    std::to_string(j + V));
    const RealSeq dkm1 = dk_vector(bt, n + 1, k - 1, policy);
    return plain_or_compensated_dot(
        std::span<const double>(ct.a.data() + j, V),
        std::span<const double>(dkm1.data(), V));
}

PacfResult alpha(const BetaTable& bt, std::size_t n, const TruncationPolicy& policy) {
    PacfEngine eng(bt.spec, nullptr, bt, policy);
    return eng.alpha(n);
}

PredictorTable predictor_coeffs(const CoeffTable& ct, const BetaTable& bt,
                                std::size_t n_max, const TruncationPolicy& policy) {
    PacfEngine eng(bt.spec, &ct, bt, policy);
    return eng.predictors(n_max);
}

std::vector<PacfResult> pacf_sweep(const ModelSpec& spec, std::size_t n_max,
                                   const TruncationPolicy& policy, int threads) {
    require_valid(spec);
    if (n_max < 1) throw std::invalid_argument("pacf_sweep: n_max >= 1 required");
    const std::size_t W = spec.d > 0.0 ? std::max<std::size_t>(policy.head, 64) : policy.V;
    const std::size_t n_beta = n_max + 2 * W + 2;
    const std::size_t inner = policy.beta_inner_for(spec.d);
    const CoeffTable ct = coeff_table(spec, inner + n_beta + 2, n_max + 2);
    const BetaTable bt = beta(spec, ct, n_beta, policy);
    const PacfEngine eng(spec, &ct, bt, policy);

    std::vector<PacfResult> out(n_max);
    {
        const auto lev = levinson(ct.gamma, 1);
        out[0] = PacfResult{1, lev.alpha[0], 0, 0.0, 1e-14, true};
    }
    if (n_max == 1) return out;

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t T = threads > 0 ? std::size_t(threads) : std::size_t(hw ? hw : 1);
    T = std::min<std::size_t>(T, n_max - 1);
    if (T <= 1 || n_max < 8) {
        for (std::size_t n = 2; n <= n_max; ++n) out[n - 1] = eng.alpha(n);
        return out;
    }
    if (spec.d > 0.0) eng.alpha(2); // run calibration once before forking
    std::vector<std::thread> pool;
    pool.reserve(T);
    for (std::size_t t = 0; t < T; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t n = 2 + t; n <= n_max; n += T) out[n - 1] = eng.alpha(n);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

} // namespace verblunsky

#include "verblunsky/series_ops.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace verblunsky {

RealSeq gamma_ratio_seq(double start, const std::function<double(std::size_t)>& ratio,
                        std::size_t length) {
    if (length < 1) throw std::invalid_argument("gamma_ratio_seq: length must be >= 1");
    RealSeq out(length);
    out[0] = start;
    for (std::size_t n = 0; n + 1 < length; ++n) {
        out[n + 1] = out[n] * ratio(n);
        if (!std::isfinite(out[n + 1]))
            throw std::runtime_error("overflow in recurrence at index " + std::to_string(n + 1));
    }
    return out;
}

RealSeq rational_series(std::span<const double> numer, std::span<const double> denom,
                        std::size_t length) {
    if (denom.empty() || denom[0] == 0.0)
        throw std::invalid_argument("rational_series: non-invertible constant term");
    RealSeq r(length, 0.0);
    for (std::size_t n = 0; n < length; ++n) {
        double acc = n < numer.size() ? numer[n] : 0.0;
        const std::size_t kmax = std::min(n, denom.size() - 1);
        for (std::size_t k = 1; k <= kmax; ++k) acc -= denom[k] * r[n - k];
        r[n] = acc / denom[0];
    }
    return r;
}

double compensated_sum(std::span<const double> xs) {
    double s = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    return s + comp;
}

double compensated_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0, comp = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a[i] * b[i];
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    return s + comp;
}

namespace detail {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
    x.assign(q, 0.0);
    w.assign(q, 0.0);
    for (int i = 0; i < q; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            const double dp = q * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= q; ++k) {
            const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / double(k);
            p0 = p1;
            p1 = p2;
        }
        const double dp = q * (t * p1 - p0) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

namespace {

// twiddle tables per length, filled by direct sincos so long transforms do
// not accumulate recurrence drift
const std::vector<std::complex<double>>& twiddles(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::unique_ptr<std::vector<std::complex<double>>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto tw = std::make_unique<std::vector<std::complex<double>>>(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            const double ang = -2.0 * std::numbers::pi * double(j) / double(n);
            (*tw)[j] = {std::cos(ang), std::sin(ang)};
        }
        slot = std::move(tw);
    }
    return *slot;
}

} // namespace

void fft(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    const auto& tw = twiddles(n);
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> w = tw[j * stride];
                if (inverse) w = std::conj(w);
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / double(n);
        for (auto& z : a) z *= inv;
    }
}

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b) {
    const std::size_t out = a.size() + b.size() - 1;
    const std::size_t L = next_pow2(out);
    std::vector<std::complex<double>> fa(L), fb(L);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft(fa, false);
    fft(fb, false);
    for (std::size_t i = 0; i < L; ++i) fa[i] *= fb[i];
    fft(fa, true);
    std::vector<double> res(out);
    for (std::size_t i = 0; i < out; ++i) res[i] = fa[i].real();
    return res;
}

HankelPlan::HankelPlan(std::span<const double> seg, std::size_t x_len, std::size_t out_len)
    : x_len_(x_len), out_len_(out_len) {
    const std::size_t need = out_len + x_len - 1;
    if (seg.size() < need)
        throw std::invalid_argument("HankelPlan: segment shorter than out_len + x_len - 1");
    fft_len_ = next_pow2(need + x_len - 1);
    std::vector<std::complex<double>> tmp(fft_len_);
    for (std::size_t i = 0; i < need; ++i) tmp[i] = seg[i];
    fft(tmp, false);
    seg_hat_ = std::move(tmp);
}

void HankelPlan::apply(std::span<const double> x, std::span<double> y) const {
    std::vector<std::complex<double>> fx(fft_len_);
    for (std::size_t i = 0; i < x_len_; ++i) fx[i] = x[x_len_ - 1 - i];
    fft(fx, false);
    for (std::size_t i = 0; i < fft_len_; ++i) fx[i] *= seg_hat_[i];
    fft(fx, true);
    for (std::size_t j = 0; j < out_len_; ++j) y[j] = fx[x_len_ - 1 + j].real();
}

} // namespace detail

RealSeq correlate_tail(std::span<const double> b, std::span<const double> x,
                       std::size_t offset, std::size_t out_len, CorrelateMode mode) {
    const std::size_t need = offset + out_len - 1 + x.size() - 1;
    if (x.empty() || out_len == 0) return RealSeq(out_len, 0.0);
    if (need >= b.size())
        throw std::invalid_argument("correlate_tail: b too short, need length >= " +
                                    std::to_string(need + 1) + ", have " +
                                    std::to_string(b.size()));
    if (mode == CorrelateMode::automatic)
        mode = x.size() >= kCorrelateFftCrossover ? CorrelateMode::fft : CorrelateMode::naive;

    RealSeq y(out_len);
    if (mode == CorrelateMode::naive) {
        const bool comp = x.size() > 10000;
        for (std::size_t j = 0; j < out_len; ++j) {
            auto row = b.subspan(offset + j, x.size());
            if (comp) {
                y[j] = compensated_dot(row, x);
            } else {
                double s = 0.0;
                for (std::size_t v = 0; v < x.size(); ++v) s += row[v] * x[v];
                y[j] = s;
            }
        }
    } else {
        detail::HankelPlan plan(b.subspan(offset, out_len + x.size() - 1), x.size(), out_len);
        plan.apply(x, y);
    }
    return y;
}

} // namespace verblunsky

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace verblunsky {

using RealSeq = std::vector<double>;

enum class CorrelateMode { naive, fft, automatic };

/// Crossover input length above which CorrelateMode::automatic picks the FFT path.
inline constexpr std::size_t kCorrelateFftCrossover = 512;

/// Sequence defined by s[0] = start, s[n+1] = s[n] * ratio(n).
/// Throws std::runtime_error naming the index if an intermediate is not finite.
RealSeq gamma_ratio_seq(double start, const std::function<double(std::size_t)>& ratio,
                        std::size_t length);

/// Power-series expansion of numer(z)/denom(z) through degree length-1.
/// Requires denom[0] != 0 ("non-invertible constant term" otherwise).
RealSeq rational_series(std::span<const double> numer, std::span<const double> denom,
                        std::size_t length);

/// Hankel-type correlation sum y[j] = sum_{v < x.size()} b[offset + j + v] * x[v]
/// for 0 <= j < out_len. The naive path uses compensated summation for long
/// inputs; the FFT path evaluates the same sums as one zero-padded convolution
/// with x reversed.
RealSeq correlate_tail(std::span<const double> b, std::span<const double> x,
                       std::size_t offset, std::size_t out_len,
                       CorrelateMode mode = CorrelateMode::automatic);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> xs);

/// Compensated dot product of equal-length spans.
double compensated_dot(std::span<const double> a, std::span<const double> b);

namespace detail {

std::size_t next_pow2(std::size_t n);

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w);

/// In-place iterative radix-2 transform; a.size() must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

/// Linear convolution via zero-padded FFT.
std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

/// Fixed-segment Hankel operator: y[j] = sum_v seg[j + v] * x[v] with the
/// segment transform cached across applications.
class HankelPlan {
public:
    HankelPlan() = default;
    // seg must cover indices [0, out_len + x_len - 1)
    HankelPlan(std::span<const double> seg, std::size_t x_len, std::size_t out_len);
    void apply(std::span<const double> x, std::span<double> y) const;
    std::size_t x_len() const { return x_len_; }
    std::size_t out_len() const { return out_len_; }

private:
    std::size_t x_len_ = 0, out_len_ = 0, fft_len_ = 0;
    std::vector<std::complex<double>> seg_hat_;
};

} // namespace detail

} // namespace verblunsky

#pragma once

#include "verblunsky/series_ops.hpp"

#include <iosfwd>
#include <string>

namespace verblunsky {

/// ARMA(p,q) / FARIMA(p,d,q) process parameters in the usual time-series
/// convention:
///   Phi(z)   = 1 - ar[0] z - ... - ar[p-1] z^p
///   Theta(z) = 1 + ma[0] z + ... + ma[q-1] z^q
/// The memory parameter d lies in (-1/2, 1/2); d = 0 is plain ARMA.
/// Innovation variance is fixed to 1, i.e. the impulse response starts at 1.
struct ModelSpec {
    RealSeq ar;
    RealSeq ma;
    double d = 0.0;

    std::size_t p() const { return ar.size(); }
    std::size_t q() const { return ma.size(); }
    bool long_memory() const { return d > 0.0; }

    RealSeq phi_poly() const;   // [1, -ar[0], ..., -ar[p-1]]
    RealSeq theta_poly() const; // [1, +ma[0], ..., +ma[q-1]]
};

struct ValidationReport {
    bool phi_stable = false;    // Phi has no zeros in the closed unit disk
    bool theta_stable = false;
    bool coprime = false;       // Phi, Theta share no zero
    bool d_in_range = false;
    double normalized_resultant = 0.0;
    bool ok() const { return phi_stable && theta_stable && coprime && d_in_range; }
    std::string describe() const;
};

ValidationReport validate(const ModelSpec& spec);

/// Throws std::invalid_argument with the report text if validation fails.
void require_valid(const ModelSpec& spec);

/// Schur-Cohn test: true iff poly (constant term first, poly[0] != 0) has no
/// zeros in the closed unit disk.
bool no_zeros_in_closed_disk(std::span<const double> poly);

/// Horner evaluation, constant term first.
double poly_eval(std::span<const double> poly, double x);

/// Impulse-response (MA) coefficients of the model, c[0] = 1.
RealSeq ma_coeffs(const ModelSpec& spec, std::size_t length);

/// Coefficients of -1/h, a[0] = -1. For FARIMA(0,d,0) these are
/// a[n] = Gamma(n-d) d / (Gamma(n+1) Gamma(1-d)), positive for n >= 1.
RealSeq ar_coeffs(const ModelSpec& spec, std::size_t length);

/// Closed-form FARIMA(0,d,0) autocovariances: gamma'(0) = G(1-2d)/G(1-d)^2 and
/// gamma'(m) = gamma'(m-1) (m-1+d)/(m-d).
RealSeq farima00_autocov(double d, std::size_t length);

/// Autocovariances gamma(0..length-1) with unit innovation variance.
RealSeq autocovariance(const ModelSpec& spec, std::size_t length);

struct CoeffTable {
    RealSeq c, a, gamma;
    std::size_t trunc_len = 0;
    // tail metadata: power-law exponents when d > 0 (c ~ n^{d-1}, a ~ n^{-1-d});
    // fitted geometric |.| decay rates when d = 0 (0 when the sequence is finite)
    double c_tail_exponent = 0.0, a_tail_exponent = 0.0;
    double c_geo_rate = 0.0, a_geo_rate = 0.0;
};

CoeffTable coeff_table(const ModelSpec& spec, std::size_t length, std::size_t gamma_length);

/// Fitted geometric decay rate of |x| over its trailing window; 0 for finitely
/// supported sequences. Throws if the tail does not decay.
double fitted_geometric_rate(std::span<const double> x);

/// Parse a key-value config ("phi = 0.5", "theta = 0.4", "d = 0.3",
/// comma-separated lists, '#' comments). Unknown keys are an error.
ModelSpec spec_from_config(std::istream& in);

} // namespace verblunsky

"""Verblunsky coefficients (PACF) of ARMA/FARIMA models.

Thin wrapper over the C++ core: series evaluation of the partial
autocorrelation function through the phase-coefficient representation,
with a Levinson-Durbin oracle for cross-validation.
"""

from verblunsky._core import (  # noqa: F401
    ModelSpec,
    PacfResult,
    TruncationPolicy,
    ar_coeffs,
    autocovariance,
    beta,
    beta_est_error,
    levinson,
    ma_coeffs,
    pacf,
    predictor_table,
    tau,
    validate,
    verify,
)

__all__ = [
    "ModelSpec",
    "PacfResult",
    "TruncationPolicy",
    "ar_coeffs",
    "autocovariance",
    "beta",
    "beta_est_error",
    "levinson",
    "ma_coeffs",
    "pacf",
    "predictor_table",
    "tau",
    "validate",
    "verify",
]

"""Legendre polynomial evaluation and the pointwise defect bounds built on it.

Everything downstream (operator norms, Schatten sums, quadrature eigenvalue
checks) reduces to values of P_n on [-1, 1], normalized by P_n(1) = 1, so the
evaluation here is deliberately plain: the forward three-term recurrence in
double precision, which is stable on the interval.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "legendre_eval",
    "legendre_table",
    "legendre_at_zero",
    "holder_defect",
    "bernstein_envelope",
    "HOLDER_CONSTANT",
]

# |P_n(0) - P_n(d)| <= HOLDER_CONSTANT * sqrt(|d|) for all n and d in [-1, 1].
HOLDER_CONSTANT = 4.0

_ABSCISSA_SLACK = 1e-12


def _clamp_abscissa(x):
    """Clip abscissae to [-1, 1], allowing <= 1e-12 of rounding overshoot."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _ABSCISSA_SLACK):
        bad = float(np.max(np.abs(x)))
        raise ValueError(f"abscissa out of [-1, 1]: |x| = {bad}")
    return np.clip(x, -1.0, 1.0)


def legendre_eval(n: int, x) -> float | np.ndarray:
    """Evaluate P_n(x) by the three-term recurrence, P_n(1) = 1 normalization.

    Accepts a scalar or array abscissa in [-1, 1] (values beyond by at most
    1e-12 are clamped).
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    xc = _clamp_abscissa(x)
    scalar = xc.ndim == 0
    xc = np.atleast_1d(xc)
    p_prev = np.ones_like(xc)
    if n == 0:
        return float(p_prev[0]) if scalar else p_prev
    p_cur = xc.copy()
    for k in range(1, n):
        p_next = ((2 * k + 1) * xc * p_cur - k * p_prev) / (k + 1)
        p_prev, p_cur = p_cur, p_next
    return float(p_cur[0]) if scalar else p_cur


def legendre_table(max_degree: int, x) -> np.ndarray:
    """Table P_0(x) .. P_N(x) in one recurrence pass.

    Returns shape (N+1,) for scalar x, (N+1, len(x)) for array x.  The table
    satisfies values[0] = 1, |values[n]| <= 1, and values[:, x=1] = 1.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    xc = _clamp_abscissa(x)
    scalar = xc.ndim == 0
    xc = np.atleast_1d(xc)
    out = np.empty((max_degree + 1, xc.size))
    out[0] = 1.0
    if max_degree >= 1:
        out[1] = xc
    for n in range(1, max_degree):
        out[n + 1] = ((2 * n + 1) * xc * out[n] - n * out[n - 1]) / (n + 1)
    return out[:, 0] if scalar else out


def legendre_at_zero(max_degree: int) -> np.ndarray:
    """P_n(0) for n = 0..N via the pure recurrence P_{n+1}(0) = -n P_{n-1}(0)/(n+1).

    Odd degrees are exactly zero.
    """
    out = np.zeros(max_degree + 1)
    out[0] = 1.0
    for n in range(1, max_degree):
        out[n + 1] = -n * out[n - 1] / (n + 1)
    return out


def holder_defect(n: int, delta: float) -> float:
    """|P_n(0) - P_n(delta)|, guaranteed <= 4 * sqrt(|delta|)."""
    p0 = 0.0 if n % 2 else float(legendre_at_zero(n)[n])
    return abs(p0 - legendre_eval(n, delta))


def bernstein_envelope(n: int, x) -> float | np.ndarray:
    """Bernstein's bound sqrt(2 / (pi n sin theta)) on |P_n(cos theta)|, n >= 1.

    Used as the truncation-tail oracle; infinite at the endpoints x = +-1.
    """
    if n < 1:
        raise ValueError("envelope defined for n >= 1")
    xc = _clamp_abscissa(x)
    sin_theta = np.sqrt(np.maximum(0.0, 1.0 - xc * xc))
    with np.errstate(divide="ignore"):
        env = np.sqrt(2.0 / (np.pi * n * sin_theta))
    return float(env) if np.ndim(env) == 0 else env

"""Spectral model of the circle-averaging operators on L2 of the sphere.

The operator averaging f over the circle at inner product delta from each
point is diagonal in spherical harmonics: eigenvalue P_n(delta) on the
degree-n space, multiplicity 2n+1.  Everything here works on that diagonal
model: operator norms of differences, Schatten p-norms, decay fits in delta,
and the fourth-power divergence probe at the boundary exponent p = 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .legendre import (
    HOLDER_CONSTANT,
    bernstein_envelope,
    legendre_at_zero,
    legendre_table,
)

__all__ = [
    "SpectralOperator",
    "OpNormCertificate",
    "DecayFit",
    "op_norm_diff",
    "op_norm_diff_certificate",
    "schatten_norm_diff",
    "schatten_tail_bound",
    "diff_power_sums",
    "stabilized_norm",
    "fit_decay",
    "divergence_probe_p4",
]

# Difference of two averaging operators of norm one; a-priori certified bound.
_APRIORI_BOUND = 2.0


@dataclass(frozen=True)
class SpectralOperator:
    """Diagonal model: eigenvalue P_n(delta) with multiplicity 2n+1, n <= truncation."""

    delta: float
    truncation: int

    def __post_init__(self):
        if abs(self.delta) > 1.0 + 1e-12:
            raise ValueError("delta must lie in [-1, 1]")
        if self.truncation < 0:
            raise ValueError("truncation must be nonnegative")

    def eigenvalues(self) -> np.ndarray:
        return legendre_table(self.truncation, self.delta)

    def eigenvalue(self, n: int) -> float:
        if not 0 <= n <= self.truncation:
            raise ValueError("degree outside truncation")
        return float(self.eigenvalues()[n])

    def multiplicities(self) -> np.ndarray:
        return 2 * np.arange(self.truncation + 1) + 1

    def multiplicity(self, n: int) -> int:
        if not 0 <= n <= self.truncation:
            raise ValueError("degree outside truncation")
        return 2 * n + 1


@dataclass(frozen=True)
class OpNormCertificate:
    """Certified sup-norm value for the eigenvalue defects of a difference.

    head is the exact sup over degrees <= truncation; tail_bound dominates the
    sup over all higher degrees (Bernstein envelope, capped at the a-priori
    bound 2).  value = max(head, tail_bound), so the true operator norm of the
    difference is <= value, with equality whenever the head dominates.
    """

    head: float
    tail_bound: float

    @property
    def head_dominates(self) -> bool:
        return self.head >= self.tail_bound

    @property
    def value(self) -> float:
        return max(self.head, self.tail_bound)


def _difference_tail_bound(delta: float, truncation: int) -> float:
    """Upper bound for sup_{n > truncation} |P_n(0) - P_n(delta)|."""
    if delta == 0.0:
        return 0.0
    n1 = truncation + 1
    # sup over n > N of |P_n(0)|: attained at the first even degree past N.
    m = n1 if n1 % 2 == 0 else n1 + 1
    zero_part = abs(legendre_at_zero(m)[m])
    if 1.0 - delta * delta < 1e-12:
        delta_part = 1.0
    else:
        delta_part = float(bernstein_envelope(n1, delta))
    return min(zero_part + delta_part, _APRIORI_BOUND)


def op_norm_diff_certificate(delta: float, truncation: int) -> OpNormCertificate:
    """Head sup and tail envelope for the eigenvalue defects |P_n(0) - P_n(delta)|."""
    if abs(delta) > 1.0 + 1e-12:
        raise ValueError("delta must lie in [-1, 1]")
    if truncation < 2:
        raise ValueError("truncation must be >= 2")
    defects = np.abs(legendre_at_zero(truncation) - legendre_table(truncation, delta))
    return OpNormCertificate(
        head=float(defects.max()),
        tail_bound=_difference_tail_bound(float(np.clip(delta, -1, 1)), truncation),
    )


def op_norm_diff(delta: float, truncation: int) -> float:
    """Certified operator norm of the averaging-operator difference at delta.

    Guaranteed <= 4 sqrt(|delta|) (and <= 2 always).
    """
    return op_norm_diff_certificate(delta, truncation).value


def diff_power_sums(deltas, ps, checkpoints) -> np.ndarray:
    """Schatten partial sums (sum (2n+1) |P_n(d) - P_n(0)|^p)^(1/p) at given truncations.

    Single recurrence pass, vectorized over the delta grid.  Returns an array
    of shape (len(ps), len(deltas), len(checkpoints)) with checkpoints sorted
    ascending.
    """
    deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    checkpoints = sorted(int(c) for c in checkpoints)
    if checkpoints[0] < 1:
        raise ValueError("checkpoints must be >= 1")
    if np.any(ps <= 0):
        raise ValueError("p must be positive")
    nmax = checkpoints[-1]
    sums = np.zeros((ps.size, deltas.size))
    out = np.empty((ps.size, deltas.size, len(checkpoints)))
    ck = {c: i for i, c in enumerate(checkpoints)}

    p_prev = np.ones_like(deltas)
    p_cur = deltas.copy()
    z_prev, z_cur = 1.0, 0.0
    # n = 0 term vanishes (both eigenvalues are 1); start accumulating at n = 1.
    for n in range(1, nmax + 1):
        sums += (2 * n + 1) * np.abs(p_cur - z_cur)[None, :] ** ps[:, None]
        if n in ck:
            out[:, :, ck[n]] = sums
        p_next = ((2 * n + 1) * deltas * p_cur - n * p_prev) / (n + 1)
        z_next = -n * z_prev / (n + 1)
        p_prev, p_cur = p_cur, p_next
        z_prev, z_cur = z_cur, z_next
    return out ** (1.0 / ps[:, None, None])


def schatten_norm_diff(delta: float, p: float, truncation: int) -> float:
    """(sum_{n<=N} (2n+1) |P_n(delta) - P_n(0)|^p)^(1/p); p = inf gives op_norm_diff."""
    if abs(delta) > 1.0 + 1e-12:
        raise ValueError("delta must lie in [-1, 1]")
    if truncation < 2:
        raise ValueError("truncation must be >= 2")
    if np.isinf(p):
        return op_norm_diff(delta, truncation)
    return float(diff_power_sums([delta], [p], [truncation])[0, 0, 0])


def schatten_tail_bound(delta: float, p: float, truncation: int) -> float:
    """Closed-form bound on the p-th power tail sum_{n>N} (2n+1)|P_n(d)-P_n(0)|^p.

    Valid for p > 4 via the Bernstein envelope: terms are <= 3 amp^p n^(1-p/2).
    """
    if p <= 4:
        raise ValueError("tail bound requires p > 4")
    if delta == 0.0:
        return 0.0
    sin_theta = np.sqrt(max(0.0, 1.0 - delta * delta))
    if sin_theta < 1e-12:
        amp = 1.0 + np.sqrt(2.0 / np.pi)
    else:
        amp = np.sqrt(2.0 / np.pi) * (1.0 + sin_theta**-0.5)
    return 3.0 * amp**p * truncation ** (2.0 - p / 2.0) / (p / 2.0 - 2.0)


def stabilized_norm(
    delta: float,
    p: float,
    n_start: int = 1024,
    n_max: int = 2**18,
    rtol: float = 1e-6,
):
    """Schatten norm under truncation doubling from n_start up to n_max.

    Returns (value_at_final_N, relative_changes, converged) where
    relative_changes[k] compares the values at successive doublings and
    converged means the last change dropped below rtol before n_max.
    """
    checkpoints = []
    n = n_start
    while n <= n_max:
        checkpoints.append(n)
        n *= 2
    vals = diff_power_sums([delta], [p], checkpoints)[0, 0, :]
    rel = np.abs(np.diff(vals)) / vals[1:]
    converged = bool(rel.size and rel[-1] < rtol)
    return float(vals[-1]), rel, converged


@dataclass
class DecayFit:
    """Least-squares fit of log(norm) against log(delta).

    envelope_constant is the smallest C making value <= C * delta^theory_exponent
    hold across the grid (theory_exponent = 1/2 - 2/p, or 1/2 at p = inf).
    """

    exponent: float
    constant: float
    grid: list = field(default_factory=list)
    residual: float = 0.0
    theory_exponent: float = 0.0
    envelope_constant: float = 0.0


def fit_decay(p: float, delta_grid, n_max: int = 2**18) -> DecayFit:
    """Fit the delta-decay of the Schatten (or sup) norm of the difference."""
    deltas = np.asarray(sorted(set(float(d) for d in delta_grid)))
    if deltas.size < 3:
        raise ValueError("need at least 3 distinct deltas to fit")
    if np.any(deltas <= 0) or np.any(deltas > 0.5):
        raise ValueError("delta grid must lie in (0, 1/2]")
    if np.isinf(p):
        vals = np.array([op_norm_diff(d, n_max) for d in deltas])
        theory = 0.5
    else:
        vals = diff_power_sums(deltas, [p], [n_max])[0, :, 0]
        theory = 0.5 - 2.0 / p
    logd, logv = np.log(deltas), np.log(vals)
    slope, intercept = np.polyfit(logd, logv, 1)
    resid = float(np.max(np.abs(logv - (slope * logd + intercept))))
    env = float(np.max(np.exp(logv - theory * logd)))
    return DecayFit(
        exponent=float(slope),
        constant=float(np.exp(intercept)),
        grid=list(zip(deltas.tolist(), vals.tolist())),
        residual=resid,
        theory_exponent=theory,
        envelope_constant=env,
    )


def divergence_probe_p4(delta: float, n_list) -> np.ndarray:
    """Partial sums sum_{n<=N} (2n+1) P_n(delta)^4 at each N in n_list.

    At p = 4 these grow logarithmically for |delta| < 1; this probe records
    the growth, it does not assert divergence.
    """
    if abs(delta) >= 1.0:
        raise ValueError("probe requires |delta| < 1")
    checkpoints = sorted(int(n) for n in n_list)
    if checkpoints[0] < 0:
        raise ValueError("degrees must be nonnegative")
    nmax = checkpoints[-1]
    ck = {c: i for i, c in enumerate(checkpoints)}
    out = np.empty(len(checkpoints))
    s = 1.0  # n = 0 term
    if 0 in ck:
        out[ck[0]] = s
    p_prev, p_cur = 1.0, delta
    for n in range(1, nmax + 1):
        s += (2 * n + 1) * p_cur**4
        if n in ck:
            out[ck[n]] = s
        p_prev, p_cur = p_cur, ((2 * n + 1) * delta * p_cur - n * p_prev) / (n + 1)
    return out

"""Distribution CDFs for the significance tests.

Student's t and F go through the regularized incomplete beta function.
The studentized range has no closed form; its CDF is computed by nesting
two 64-point Gauss-Legendre rules: the inner integral is the range CDF of
k standard normals, the outer integrates over the chi-distributed scale
estimate on an interval wide enough that the truncated tails are below
the 1e-6 accuracy target.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betainc, gammaln, ndtr

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)

# beyond |z| = 8 the standard normal density is < 1e-14
_Z_LIMIT = 8.0


class DistributionError(Exception):
    pass


def student_t_cdf(df: float, x: float) -> float:
    if df <= 0:
        raise DistributionError(f"t distribution needs df > 0, got {df}")
    if x == 0.0:
        return 0.5
    tail = 0.5 * float(betainc(df / 2.0, 0.5, df / (df + x * x)))
    return 1.0 - tail if x > 0 else tail


def f_cdf(d1: float, d2: float, x: float) -> float:
    if d1 <= 0 or d2 <= 0:
        raise DistributionError(f"F distribution needs positive dfs, got {d1}, {d2}")
    if x <= 0.0:
        return 0.0
    return float(betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2)))


def _normal_range_cdf(w: np.ndarray, k: int) -> np.ndarray:
    """CDF of the range of k iid standard normals, vectorized over w."""
    half = 0.5 * (_Z_LIMIT - (-_Z_LIMIT))
    z = half * _GL_NODES  # midpoint is 0
    weights = half * _GL_WEIGHTS
    phi = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    w = np.asarray(w, dtype=float)
    # inner[i, j] over w[i], z[j]
    inner = ndtr(z[None, :]) - ndtr(z[None, :] - w[:, None])
    inner = np.clip(inner, 0.0, 1.0)
    out = k * np.sum(weights * phi * inner ** (k - 1), axis=1)
    out = np.where(w <= 0.0, 0.0, out)
    return np.clip(out, 0.0, 1.0)


def studentized_range_cdf(q: float, k: int, df: float) -> float:
    """P(Q <= q) for the studentized range with k groups and df error dof."""
    if k < 2:
        raise DistributionError(f"studentized range needs k >= 2, got {k}")
    if df <= 0:
        raise DistributionError(f"studentized range needs df > 0, got {df}")
    if q <= 0.0:
        return 0.0
    if df > 1e6 or math.isinf(df):
        return float(_normal_range_cdf(np.array([q]), k)[0])

    # outer variable u = sqrt(chi2_df / df); density concentrated near 1
    # with scale ~ 1/sqrt(2 df); the integration window covers +-12 scales
    scale = 1.0 / math.sqrt(2.0 * df)
    lo = max(0.0, 1.0 - 12.0 * scale)
    hi = 1.0 + 12.0 * scale
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    u = mid + half * _GL_NODES
    weights = half * _GL_WEIGHTS

    log_norm = (df / 2.0) * math.log(df) - gammaln(df / 2.0) - (df / 2.0 - 1.0) * math.log(2.0)
    with np.errstate(divide="ignore"):
        log_density = log_norm + (df - 1.0) * np.log(u) - df * u * u / 2.0
    density = np.where(u > 0.0, np.exp(log_density), 0.0)
    value = float(np.sum(weights * density * _normal_range_cdf(q * u, k)))
    return min(max(value, 0.0), 1.0)


def studentized_range_sf(q: float, k: int, df: float) -> float:
    return 1.0 - studentized_range_cdf(q, k, df)


def studentized_range_ppf(p: float, k: int, df: float) -> float:
    """Quantile by bisection on the CDF."""
    if not 0.0 < p < 1.0:
        raise DistributionError(f"quantile needs 0 < p < 1, got {p}")
    lo, hi = 0.0, 10.0
    while studentized_range_cdf(hi, k, df) < p:
        hi *= 2.0
        if hi > 1e6:
            raise DistributionError("quantile bracket failed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if studentized_range_cdf(mid, k, df) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-10:
            break
    return 0.5 * (lo + hi)


def dist_cdf(kind: str, params: dict, x: float) -> float:
    """CDF dispatcher: kind is 'student_t', 'f' or 'studentized_range'."""
    if kind == "student_t":
        return student_t_cdf(params["df"], x)
    if kind == "f":
        return f_cdf(params["d1"], params["d2"], x)
    if kind == "studentized_range":
        return studentized_range_cdf(x, params["k"], params["df"])
    raise DistributionError(f"unknown distribution kind {kind!r}")

"""Scaling-exponent and logical-error power-law fits, plus threshold bracketing."""

from __future__ import annotations

import math

import numpy as np


class FitError(ValueError):
    pass


def effective_distance(d: int) -> int:
    return (int(d) + 1) // 2


def fit_loglog_exponent(points) -> tuple[float, float]:
    """Least-squares line through ``(log N, log iterations)``; returns (slope, intercept)."""
    pts = np.asarray(list(points), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise FitError("need at least 3 (N, iterations) points")
    if np.any(pts <= 0) or not np.all(np.isfinite(pts)):
        raise FitError("log-log fit needs positive, finite values")
    slope, intercept = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)
    return float(slope), float(intercept)


def fit_power_law(p, P_L, d, p_th: float, p_min: float = 0.04, p_max: float = 0.08) -> tuple[float, float]:
    """Fit ``P_L = c1 (p / p_th) ** (c2 * d_e)`` over ``p_min <= p <= p_max``.

    ``d`` may be a scalar or one distance per point; several distances share
    the same (c1, c2). Returns (c1, c2).
    """
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    P_L = np.atleast_1d(np.asarray(P_L, dtype=np.float64))
    d = np.broadcast_to(np.asarray(d, dtype=np.int64), p.shape)
    if p.shape != P_L.shape:
        raise FitError("p and P_L must have the same length")
    if not 0.0 < p_th:
        raise FitError("p_th must be positive")
    tol = 1e-12
    keep = (p >= p_min - tol) & (p <= p_max + tol)
    if not keep.any():
        raise FitError(f"no points with {p_min} <= p <= {p_max}")
    p, P_L, d = p[keep], P_L[keep], d[keep]
    if np.any(P_L <= 0) or np.any(p <= 0):
        raise FitError("power-law fit needs positive p and P_L")
    x = ((d + 1) // 2) * np.log(p / p_th)
    if np.ptp(x) == 0:
        raise FitError("need at least two distinct abscissae")
    c2, logc1 = np.polyfit(x, np.log(P_L), 1)
    return float(math.exp(logc1)), float(c2)


def binomial_se(k: int, n: int) -> float:
    if n <= 0:
        return float("nan")
    f = k / n
    return math.sqrt(f * (1.0 - f) / n)


def threshold_bracket(p, small, large) -> tuple[float, float] | None:
    """Interval between adjacent error rates where ``large`` stops beating ``small``.

    ``small`` and ``large`` are logical error rates at the smallest and largest
    distance, sampled at the sorted rates ``p``. Returns None without a flip.
    """
    order = np.argsort(p)
    p = np.asarray(p, dtype=np.float64)[order]
    diff = np.asarray(large, dtype=np.float64)[order] - np.asarray(small, dtype=np.float64)[order]
    for k in range(len(p) - 1):
        if diff[k] < 0 <= diff[k + 1]:
            return float(p[k]), float(p[k + 1])
    return None

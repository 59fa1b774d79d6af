"""Sample aggregation, Welch two-sample t-tests and the mapping-share
log-linear law fit."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np
from scipy import special


class EmptySampleError(ValueError):
    pass


class SingularFitError(ValueError):
    pass


@dataclass(frozen=True)
class SampleStats:
    n: int
    mean: float
    sd: float  # unbiased, n-1 denominator; 0.0 for n == 1
    sem: float


@dataclass(frozen=True)
class ComparisonResult:
    t: float
    df: float
    p: float
    degenerate: bool = False


@dataclass(frozen=True)
class FitResult:
    ln_a: float
    ln_b: float
    r2: float
    n_points: int


def aggregate(values) -> SampleStats:
    values = [float(v) for v in values]
    n = len(values)
    if n == 0:
        raise EmptySampleError("cannot aggregate an empty sample")
    mean = sum(values) / n
    if n == 1:
        return SampleStats(1, mean, 0.0, 0.0)
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    sd = math.sqrt(var)
    return SampleStats(n, mean, sd, sd / math.sqrt(n))


def student_t_sf(t: float, df: float) -> float:
    """Two-sided tail probability of the Student-t distribution."""
    if df <= 0:
        raise ValueError("df must be > 0")
    if t == 0.0:
        return 1.0
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return float(special.betainc(df / 2.0, 0.5, x))


def welch_t(a: SampleStats, b: SampleStats) -> ComparisonResult:
    """Welch's unequal-variance t-test with Satterthwaite df."""
    if a.n < 2 or b.n < 2:
        raise ValueError("welch_t needs n >= 2 in both samples")
    va, vb = a.sd**2 / a.n, b.sd**2 / b.n
    diff = a.mean - b.mean
    if va + vb == 0.0:
        if diff == 0.0:
            return ComparisonResult(0.0, float(a.n + b.n - 2), 1.0)
        t = math.copysign(math.inf, diff)
        return ComparisonResult(t, float(a.n + b.n - 2), sys.float_info.min, degenerate=True)
    t = diff / math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va**2 / (a.n - 1) + vb**2 / (b.n - 1))
    return ComparisonResult(t, df, student_t_sf(t, df))


def fit_mapshare(points) -> FitResult:
    """No-intercept OLS of ln(ratio) on (p_sm, -k).

    ``points`` are (p_sm, k, ratio) triples; zero ratios are excluded
    before the precondition checks.
    """
    kept = [(p, k, r) for p, k, r in points if r > 0.0]
    if len(kept) < 3:
        raise SingularFitError("need at least 3 positive-ratio points")
    if len({p for p, _k, _r in kept}) < 2 or len({k for _p, k, _r in kept}) < 2:
        raise SingularFitError("need at least two distinct p_sm and k values")
    X = np.array([[p, -float(k)] for p, k, _r in kept])
    y = np.log([r for _p, _k, r in kept])
    if np.linalg.matrix_rank(X) < 2:
        raise SingularFitError("rank-deficient design")
    coef, _res, _rank, _sv = np.linalg.lstsq(X, y, rcond=None)
    ln_a, ln_b = float(coef[0]), float(coef[1])
    resid = y - X @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res <= 1e-24 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return FitResult(ln_a, ln_b, r2, len(kept))

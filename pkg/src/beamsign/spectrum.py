"""Spectral thresholds of u'''' - p u'' + m u with hinged end conditions.

For the operator on [a, b] with u(a) = u(b) = u''(a) = u''(b) = 0 the
eigenvalues of -c are explicit,

    lambda_k = (k pi / L)^4 + p (k pi / L)^2,   L = b - a,

and the inverse-positivity / inverse-negativity windows are bounded by two
further thresholds lambda2 < 0 < lambda3 that solve transcendental
tan/tanh equations coming from the clamped-hinged and interior-touching
boundary cases.  This module computes all of them plus the constants
delta1 and delta2 used by the contraction and uniqueness bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RootSearchError
from .fields import Interval, ScalarField, extrema

__all__ = [
    "SpectralData",
    "lambda_k",
    "lambda2",
    "lambda3",
    "delta1",
    "delta1_alt",
    "delta2",
    "resonance_check",
]

_LADDER_RATIO = 1.05
_LADDER_STEPS = 2000
_RESIDUAL_TOL = 1e-12


def _require_p(p: float) -> None:
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")


def lambda_k(p: float, interval: Interval, k: int) -> float:
    """k-th eigenvalue (k pi/L)^4 + p (k pi/L)^2 of the hinged operator."""
    _require_p(p)
    if k < 1:
        raise ValueError(f"mode number k must be a positive integer, got {k}")
    w = k * np.pi / interval.length
    return float(w**4 + p * w**2)


# ---------------------------------------------------------------------------
# bracketed searches for the transcendental thresholds


def _bisect(fn, lo: float, hi: float, s_lo: float) -> float:
    # run to floating-point exhaustion; the bracket is pole-free by construction
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        sm = fn(mid)
        if sm == 0.0:
            return mid
        if (sm < 0.0) == (s_lo < 0.0):
            lo, s_lo = mid, sm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _least_root(value, branch, start: float, what: str) -> float:
    """First positive root of ``value`` on a geometric ladder from ``start``.

    ``branch`` indexes the tan branch at a given abscissa; brackets whose
    endpoints sit on different branches straddle a pole and are rejected.
    """
    lam = start
    s0 = value(lam)
    b0 = branch(lam)
    for _ in range(_LADDER_STEPS):
        nxt = lam * _LADDER_RATIO
        s1 = value(nxt)
        b1 = branch(nxt)
        if (
            np.isfinite(s0)
            and np.isfinite(s1)
            and (s0 < 0.0) != (s1 < 0.0)
            and b0 == b1
        ):
            return _bisect(value, lam, nxt, s0)
        lam, s0, b0 = nxt, s1, b1
    raise RootSearchError(f"no sign change found for {what} within the search ceiling")


def _check_residual(value, root: float, what: str) -> None:
    res = abs(float(value(root)))
    if not res < _RESIDUAL_TOL:
        raise RootSearchError(f"{what} root residual {res:.3e} exceeds {_RESIDUAL_TOL}")


def lambda2(p: float, interval: Interval) -> float:
    """Negative positivity threshold.

    Returns minus the least positive root lam (with 2 sqrt(lam) > p) of

        tan((L/2) sqrt(2 sqrt(lam) - p)) / sqrt(2 sqrt(lam) - p)
          = tanh((L/2) sqrt(2 sqrt(lam) + p)) / sqrt(2 sqrt(lam) + p).
    """
    _require_p(p)
    L = interval.length

    def value(lam: float) -> float:
        s = np.sqrt(lam)
        q = np.sqrt(2.0 * s - p)
        r = np.sqrt(2.0 * s + p)
        return np.tan(0.5 * L * q) / q - np.tanh(0.5 * L * r) / r

    def branch(lam: float) -> int:
        q = np.sqrt(2.0 * np.sqrt(lam) - p)
        return int(np.floor(0.5 * L * q / np.pi + 0.5))

    start = 0.25 * p * p + 1e-9 * max(1.0, 0.25 * p * p)
    root = _least_root(value, branch, start, "the lambda2 threshold equation")
    _check_residual(value, root, "lambda2")
    return -root


def lambda3(p: float, interval: Interval) -> float:
    """Positive negativity threshold.

    Returns the least positive root lam of

        tan(L sqrt(sqrt(p^2 + 4 lam) - p) / sqrt(2)) / sqrt(sqrt(p^2 + 4 lam) - p)
          = tanh(L sqrt(sqrt(p^2 + 4 lam) + p) / sqrt(2)) / sqrt(sqrt(p^2 + 4 lam) + p).
    """
    _require_p(p)
    L = interval.length
    inv_sqrt2 = 1.0 / np.sqrt(2.0)

    def value(lam: float) -> float:
        w = np.sqrt(p * p + 4.0 * lam)
        q = np.sqrt(w - p)
        r = np.sqrt(w + p)
        return np.tan(L * q * inv_sqrt2) / q - np.tanh(L * r * inv_sqrt2) / r

    def branch(lam: float) -> int:
        w = np.sqrt(p * p + 4.0 * lam)
        q = np.sqrt(w - p)
        return int(np.floor(L * q * inv_sqrt2 / np.pi + 0.5))

    start = lambda_k(p, interval, 1) * 1e-8
    root = _least_root(value, branch, start, "the lambda3 threshold equation")
    _check_residual(value, root, "lambda3")
    return float(root)


# ---------------------------------------------------------------------------
# contraction constants


def delta1(p: float, interval: Interval) -> float:
    """Contraction threshold max{ 4 p / L, 4 pi^2 / L^3 }."""
    _require_p(p)
    L = interval.length
    return max(4.0 * p / L, 4.0 * np.pi**2 / L**3)


def delta1_alt(p: float, interval: Interval) -> float:
    """Variant reading of delta1 with the zero-p branch scaled by L^(3/2).

    All bounds in this package use :func:`delta1`, whose L^3 scaling is the
    one consistent with the norm inequality it certifies.  This variant is
    reported alongside it by the command line front end whenever the two
    differ, i.e. whenever L != 1.
    """
    _require_p(p)
    L = interval.length
    return max(4.0 * p / L, 4.0 * np.pi**2 / L**1.5)


def delta2(p: float, interval: Interval, c_m: float) -> float:
    """Uniqueness margin min{ -1 - c_m/lambda_1, 1 + c_m/lambda_1' }.

    Requires -lambda_1' < c_m < -lambda_1 (strictly), where lambda_1' is the
    second eigenvalue; the result then lies in (0, 1).
    """
    lam1 = lambda_k(p, interval, 1)
    lam1p = lambda_k(p, interval, 2)
    if not (-lam1p < c_m < -lam1):
        raise ValueError(
            f"c_m = {c_m} outside the window (-lambda_1', -lambda_1) = ({-lam1p}, {-lam1})"
        )
    return float(min(-1.0 - c_m / lam1, 1.0 + c_m / lam1p))


def resonance_check(c: ScalarField, p: float, interval: Interval) -> bool:
    """True when no -lambda_k lies inside the closed range of c.

    Eigenvalue scan stops at the smallest k with lambda_k > -c_min + 1, past
    which -lambda_k is below the range of c for good.
    """
    if c.grid.interval != interval:
        raise ValueError("c is not sampled on the given interval")
    c_m, c_sup = extrema(c)
    k = 1
    while True:
        lam = lambda_k(p, interval, k)
        if c_m <= -lam <= c_sup:
            return False
        if lam > -c_m + 1.0:
            return True
        k += 1


@dataclass(frozen=True)
class SpectralData:
    """All spectral thresholds of the operator for one (p, interval) pair."""

    p: float
    interval: Interval
    lambda1: float
    lambda1_prime: float
    lambda2: float
    lambda3: float
    delta1: float

    @classmethod
    def compute(cls, p: float, interval: Interval) -> "SpectralData":
        return cls(
            p=float(p),
            interval=interval,
            lambda1=lambda_k(p, interval, 1),
            lambda1_prime=lambda_k(p, interval, 2),
            lambda2=lambda2(p, interval),
            lambda3=lambda3(p, interval),
            delta1=delta1(p, interval),
        )

    def __post_init__(self):
        # ordering sanity: 0 < lambda1 < lambda3 <= -lambda2 and lambda1 < lambda1'
        if not (0.0 < self.lambda1 < self.lambda3 < -self.lambda2):
            raise ValueError("spectral thresholds violate their ordering")
        if not self.lambda1 < self.lambda1_prime:
            raise ValueError("spectral thresholds violate their ordering")

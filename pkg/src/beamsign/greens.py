"""Green's kernels of the hinged operator and sign scans over them.

Two constructions are provided: a sine-series kernel for constant
coefficients, where the eigenfunctions are explicit, and a discrete kernel
for variable coefficients obtained by solving against scaled unit loads so
that u(t_i) = sum_j w_j G[i, j] h(t_j) reproduces solutions with uniform
nodal weights w_j equal to the grid spacing.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ResonanceError
from .fields import Grid, ScalarField
from .solver import _interior_residual, _resonance_error, _resolve_grid, _solve_refined, assemble

__all__ = [
    "GreensMatrix",
    "GreensSignReport",
    "char_roots",
    "greens_constant",
    "greens_discrete",
    "y_boundary",
    "sign_scan",
]


@dataclass(eq=False)
class GreensMatrix:
    """Kernel samples G[i, j] ~ g(t_i, s_j) on a shared grid.

    Rows and columns at the boundary nodes are identically zero.  For the
    series construction ``tail_bound`` carries a bound on the truncated
    remainder at the returned entries.
    """

    grid: Grid
    values: np.ndarray
    tail_bound: float | None = None

    def __post_init__(self):
        m = self.grid.n + 1
        if np.asarray(self.values).shape != (m, m):
            raise ValueError(f"kernel matrix must be {m} x {m}")


@dataclass(frozen=True)
class GreensSignReport:
    """Outcome of a sign scan of a kernel matrix."""

    interior_sign: str  # positive | negative | mixed
    min_abs_interior: float
    boundary_slope_a: float
    boundary_slope_b: float
    conclusion: str  # strongly_inverse_positive | strongly_inverse_negative | inconclusive


def char_roots(p: float, m: float) -> tuple[complex, complex, complex, complex]:
    """The four roots of r^4 - p r^2 + m = 0, via the quadratic in r^2."""
    half = p / 2.0
    disc = cmath.sqrt(complex(half * half - m))
    roots = []
    for z in (half + disc, half - disc):
        r = cmath.sqrt(z)
        roots.extend((r, -r))
    return tuple(roots)


def greens_constant(p: float, m: float, grid: Grid, terms: int = 2000) -> GreensMatrix:
    """Series kernel (2/L) sum_k sin(k pi x/L) sin(k pi y/L) / (lambda_k + m).

    Requires at least 50 terms and a truncation order past the last sign
    change of the modal denominators.  A denominator within 1e-9 of zero is
    reported as resonance.
    """
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")
    if terms < 50:
        raise ValueError(f"the series needs at least 50 terms, got {terms}")
    L = grid.interval.length
    k = np.arange(1, terms + 1, dtype=np.float64)
    w = k * np.pi / L
    lam = w**4 + p * w**2
    denom = lam + m
    j = int(np.argmin(np.abs(denom)))
    if abs(denom[j]) < 1e-9:
        raise ResonanceError(
            f"m = {m} is resonant: lambda_{j + 1} + m = {denom[j]:.3e}",
            nearest_eigenvalue=-float(lam[j]),
            index=j + 1,
        )
    if denom[-1] <= 0.0:
        raise ValueError(
            f"terms = {terms} truncates before the modal denominators turn positive; increase it"
        )
    x = (grid.nodes - grid.interval.a) * (np.pi / L)
    phi = np.sin(np.outer(x, k))
    vals = (phi * (2.0 / (L * denom))) @ phi.T
    vals[0, :] = 0.0
    vals[-1, :] = 0.0
    vals[:, 0] = 0.0
    vals[:, -1] = 0.0
    # tail: remaining modes are summed crudely and then bounded by the integral test
    k_ext = np.arange(terms + 1, terms + 2001, dtype=np.float64)
    w_ext = k_ext * np.pi / L
    tail = float(np.sum(1.0 / (w_ext**4 + p * w_ext**2 + m)))
    tail += float((L / np.pi) ** 4 / (3.0 * (terms + 2000) ** 3))
    return GreensMatrix(grid, vals, tail_bound=(2.0 / L) * tail)


def greens_discrete(p: float, c: ScalarField, grid: Grid | None = None) -> GreensMatrix:
    """Discrete kernel from unit loads: column j solves T g = e_j / spacing.

    The 1/spacing scaling makes sum_j spacing * G[i, j] h(t_j) the discrete
    superposition identity, and keeps the matrix symmetric because the
    interior block of the operator is.
    """
    grid = _resolve_grid(c.grid, grid)
    op = assemble(p, c, grid)
    n = grid.n
    load = 1.0 / grid.spacing
    rhs = np.zeros((n + 1, n - 1))
    rhs[np.arange(1, n), np.arange(n - 1)] = load
    cols = _solve_refined(op, rhs)
    res = float(np.max(np.abs(
        np.asarray(op.apply(cols), dtype=np.float64)[1:-1, :] - rhs[1:-1, :]
    )))
    if not np.isfinite(res) or res > 1e-8 * (load + 1.0):
        raise _resonance_error(op)
    vals = np.zeros((n + 1, n + 1), dtype=cols.dtype)
    vals[:, 1:n] = cols
    return GreensMatrix(grid, vals)


def y_boundary(p: float, c: ScalarField, grid: Grid | None, side: str) -> ScalarField:
    """Moment response: the solution of T y = 0 with u''(side) = 1, other data zero.

    The end moments enter the discrete right-hand side through the ghost rows,
    so a unit moment at a puts -1/spacing^2 at the first interior node.
    """
    if side not in ("a", "b"):
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    grid = _resolve_grid(c.grid, grid)
    op = assemble(p, c, grid)
    inv2 = grid.spacing**-2
    rhs = np.zeros(grid.n + 1)
    if side == "a":
        rhs[1] = -inv2
    else:
        rhs[-2] = -inv2
    y = _solve_refined(op, rhs)
    res = _interior_residual(op, y, rhs)
    if not np.isfinite(res) or res > 2e-8:
        raise _resonance_error(op)
    return ScalarField(grid, y)


def sign_scan(G: GreensMatrix, grid: Grid | None = None, tol: float | None = None) -> GreensSignReport:
    """Scan a kernel for strict interior sign and correct boundary slopes.

    The slopes are one-sided differences of each interior column at the two
    ends; strongly_inverse_positive needs every interior entry above ``tol``,
    every column entering with positive slope at a and leaving with negative
    slope at b.  The default tolerance is 1e-9 * max|G|.
    """
    grid = _resolve_grid(G.grid, grid)
    vals = np.asarray(G.values, dtype=np.float64)
    scale = float(np.max(np.abs(vals)))
    if tol is None:
        tol = 1e-9 * scale
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    interior = vals[1:-1, 1:-1]
    dx = grid.spacing
    cols = slice(1, grid.n)
    slopes_a = (-3.0 * vals[0, cols] + 4.0 * vals[1, cols] - vals[2, cols]) / (2.0 * dx)
    slopes_b = (3.0 * vals[-1, cols] - 4.0 * vals[-2, cols] + vals[-3, cols]) / (2.0 * dx)
    if np.all(interior > tol):
        sign = "positive"
        slope_a = float(np.min(slopes_a))
        slope_b = float(np.max(slopes_b))
        ok = slope_a > 0.0 and slope_b < 0.0
        conclusion = "strongly_inverse_positive" if ok else "inconclusive"
    elif np.all(interior < -tol):
        sign = "negative"
        slope_a = float(np.max(slopes_a))
        slope_b = float(np.min(slopes_b))
        ok = slope_a < 0.0 and slope_b > 0.0
        conclusion = "strongly_inverse_negative" if ok else "inconclusive"
    else:
        sign = "mixed"
        slope_a = float(np.min(slopes_a))
        slope_b = float(np.max(slopes_b))
        conclusion = "inconclusive"
    return GreensSignReport(
        interior_sign=sign,
        min_abs_interior=float(np.min(np.abs(interior))),
        boundary_slope_a=slope_a,
        boundary_slope_b=slope_b,
        conclusion=conclusion,
    )

"""Finite-difference solves of u'''' - p u'' + c(t) u = h with hinged ends.

The operator is discretized on a uniform grid with the classical pentadiagonal
stencil for u'''' and the three-point stencil for u''.  The end conditions
u(a) = u(b) = 0 occupy the first and last matrix rows; the moment conditions
u''(a) = d1 and u''(b) = d2 are folded into the rows next to them by ghost-node
elimination, which keeps the matrix pentadiagonal and, for d1 = d2 = 0, keeps
the interior block symmetric.

Solves go through scipy's banded LU.  Because the stencil entries scale like
spacing**-4, a plain float64 solve leaves interior residuals around 1e-6 at
n = 400; every solve therefore runs a few iterative-refinement passes with the
residual accumulated in extended precision, which brings the residual down to
the 1e-10 range and keeps the strict residual contract checkable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConvergenceError, ResonanceError
from .fields import Grid, ProblemSpec, ScalarField, diff, extrema, integrate, sup_norm
from .spectrum import SpectralData, delta1, lambda_k

__all__ = [
    "OperatorMatrix",
    "SolutionField",
    "FixedPointRun",
    "SignCertificate",
    "assemble",
    "direct_solve",
    "superposition_solve",
    "fixed_point_solve",
    "sign_certificate",
    "operator_norm_bound",
    "rhs_norm_bound",
    "smallest_eigenvalue",
]

_REFINE_STEPS = 3


def _resolve_grid(own: Grid, given: Grid | None) -> Grid:
    if given is None:
        return own
    if given != own:
        raise ValueError("explicit grid does not match the grid the fields are sampled on")
    return own


# ---------------------------------------------------------------------------
# assembly


@dataclass(eq=False)
class OperatorMatrix:
    """Pentadiagonal matrix of the discrete operator in banded (2, 2) storage.

    ``band[2 + i - j, j]`` holds the matrix entry A[i, j].  Rows 0 and n are
    the boundary value conditions; rows 1 and n - 1 carry the ghost-eliminated
    stencils encoding the end moment conditions (their d1/d2 data lands on the
    right-hand side, not in the matrix).
    """

    grid: Grid
    p: float
    c: ScalarField
    band: np.ndarray
    _band_ld: np.ndarray | None = field(default=None, repr=False)

    def band_extended(self) -> np.ndarray:
        if self._band_ld is None:
            self._band_ld = self.band.astype(np.longdouble)
        return self._band_ld

    def apply(self, values) -> np.ndarray:
        """A @ values in the dtype of ``values`` (rows 0 and n return u(a), u(b))."""
        u = np.asarray(values)
        if u.dtype.kind != "f":
            u = u.astype(np.float64)
        if u.shape[0] != self.grid.n + 1:
            raise ValueError(f"expected {self.grid.n + 1} samples, got {u.shape[0]}")
        band = self.band_extended() if u.dtype == np.longdouble else self.band
        return _band_matvec(band, u)


def assemble(p: float, c: ScalarField, grid: Grid | None = None) -> OperatorMatrix:
    """Banded matrix of u'''' - p u'' + c(t) u with the hinged end rows."""
    grid = _resolve_grid(c.grid, grid)
    if p < 0:
        raise ValueError(f"p must be nonnegative, got {p}")
    n = grid.n
    dx = grid.spacing
    inv4 = dx**-4
    inv2 = dx**-2
    cv = np.asarray(c.values, dtype=np.float64)

    band = np.zeros((5, n + 1))
    band[2, 1:n] = 6.0 * inv4 + 2.0 * p * inv2 + cv[1:n]
    band[2, 1] -= inv4
    band[2, n - 1] -= inv4
    band[1, 2 : n + 1] = -4.0 * inv4 - p * inv2   # A[i, i+1], i = 1 .. n-1
    band[1, n] = -2.0 * inv4 - p * inv2           # A[n-1, n] after ghost elimination
    band[3, 0 : n - 1] = -4.0 * inv4 - p * inv2   # A[i, i-1], i = 1 .. n-1
    band[3, 0] = -2.0 * inv4 - p * inv2           # A[1, 0] after ghost elimination
    band[0, 3 : n + 1] = inv4                     # A[i, i+2], i = 1 .. n-2
    band[4, 0 : n - 2] = inv4                     # A[i, i-2], i = 2 .. n-1
    band[2, 0] = 1.0
    band[2, n] = 1.0
    return OperatorMatrix(grid=grid, p=float(p), c=c, band=band)


def _band_matvec(band: np.ndarray, u: np.ndarray) -> np.ndarray:
    # A @ u from the five stored diagonals; u may be a matrix of columns
    def w(d):
        return d if u.ndim == 1 else d[:, None]

    out = w(band[2]) * u
    out[:-1] += w(band[1, 1:]) * u[1:]
    out[1:] += w(band[3, :-1]) * u[:-1]
    out[:-2] += w(band[0, 2:]) * u[2:]
    out[2:] += w(band[4, :-2]) * u[:-2]
    return out


# ---------------------------------------------------------------------------
# resonance reporting


def _nearest_eigenvalue(p: float, interval, c: ScalarField) -> tuple[int, float]:
    """Mode k whose -lambda_k is closest to the range of c, and that value."""
    c_m, c_sup = extrema(c)
    best_k, best_gap, best_lam = 1, np.inf, lambda_k(p, interval, 1)
    k = 1
    while k < 100000:
        lam = lambda_k(p, interval, k)
        if c_m <= -lam <= c_sup:
            gap = 0.0
        else:
            gap = min(abs(-lam - c_m), abs(-lam - c_sup))
        if gap < best_gap:
            best_k, best_gap, best_lam = k, gap, lam
        if -lam < c_m and gap >= best_gap:
            break
        k += 1
    return best_k, -best_lam


def _resonance_error(op: OperatorMatrix) -> ResonanceError:
    k, val = _nearest_eigenvalue(op.p, op.grid.interval, op.c)
    c_m, c_sup = extrema(op.c)
    return ResonanceError(
        f"discrete operator is singular or near resonance: the coefficient range "
        f"[{c_m:.6g}, {c_sup:.6g}] sits nearest -lambda_{k} = {val:.10g}",
        nearest_eigenvalue=val,
        index=k,
    )


# ---------------------------------------------------------------------------
# solves


def _solve_refined(op: OperatorMatrix, rhs) -> np.ndarray:
    """Banded LU solve plus extended-precision iterative refinement."""
    rhs64 = np.asarray(rhs, dtype=np.float64)
    try:
        x = solve_banded((2, 2), op.band, rhs64)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise _resonance_error(op) from exc
    if not np.all(np.isfinite(x)):
        raise _resonance_error(op)
    band_ld = op.band_extended()
    x_ld = x.astype(np.longdouble)
    b_ld = rhs64.astype(np.longdouble)
    for _ in range(_REFINE_STEPS):
        r64 = np.asarray(_band_matvec(band_ld, x_ld) - b_ld, dtype=np.float64)
        if not np.all(np.isfinite(r64)):
            break
        x_ld = x_ld - solve_banded((2, 2), op.band, r64).astype(np.longdouble)
    # rows 0 and n are exact identity rows, so pin their components exactly
    x_ld[0] = b_ld[0]
    x_ld[-1] = b_ld[-1]
    return x_ld


def _rhs_vector(op: OperatorMatrix, problem: ProblemSpec) -> np.ndarray:
    b = np.array(problem.h.values, dtype=np.float64)
    b[0] = 0.0
    b[-1] = 0.0
    inv2 = op.grid.spacing**-2
    b[1] -= problem.d1 * inv2
    b[-2] -= problem.d2 * inv2
    return b


def _interior_residual(op: OperatorMatrix, x_ld: np.ndarray, rhs) -> float:
    r = _band_matvec(op.band_extended(), np.asarray(x_ld, dtype=np.longdouble))
    r -= np.asarray(rhs, dtype=np.longdouble)
    return float(np.max(np.abs(r[1:-1])))


def _residual_bound(problem: ProblemSpec) -> float:
    return 1e-8 * (sup_norm(problem.h) + abs(problem.d1) + abs(problem.d2) + 1.0)


@dataclass(eq=False)
class SolutionField:
    """A solve result: samples, achieved interior residual, and provenance."""

    u: ScalarField
    residual_norm: float
    method: str  # direct | superposition | fixed_point
    iterations: int


def direct_solve(problem: ProblemSpec, grid: Grid | None = None) -> SolutionField:
    """Solve the boundary value problem by one banded LU factorization.

    Raises :class:`~beamsign.errors.ResonanceError`, naming the nearest
    -lambda_k, when the matrix is singular or the refined residual still
    exceeds 1e-8 * (sup|h| + |d1| + |d2| + 1).
    """
    grid = _resolve_grid(problem.grid, grid)
    op = assemble(problem.p, problem.c, grid)
    rhs = _rhs_vector(op, problem)
    x = _solve_refined(op, rhs)
    res = _interior_residual(op, x, rhs)
    if not np.isfinite(res) or res > _residual_bound(problem):
        raise _resonance_error(op)
    return SolutionField(ScalarField(grid, x), res, "direct", 0)


def superposition_solve(problem: ProblemSpec, grid: Grid | None = None) -> SolutionField:
    """Solve through the discrete kernel: u = G h + d1 y_a + d2 y_b."""
    from .greens import greens_discrete, y_boundary  # deferred: greens builds on this module

    grid = _resolve_grid(problem.grid, grid)
    G = greens_discrete(problem.p, problem.c, grid)
    w = np.longdouble(grid.spacing)
    hv = np.asarray(problem.h.values, dtype=np.longdouble)
    u = np.asarray(G.values, dtype=np.longdouble)[:, 1:-1] @ (hv[1:-1] * w)
    if problem.d1 != 0.0:
        ya = y_boundary(problem.p, problem.c, grid, "a")
        u = u + np.longdouble(problem.d1) * np.asarray(ya.values, dtype=np.longdouble)
    if problem.d2 != 0.0:
        yb = y_boundary(problem.p, problem.c, grid, "b")
        u = u + np.longdouble(problem.d2) * np.asarray(yb.values, dtype=np.longdouble)
    op = assemble(problem.p, problem.c, grid)
    rhs = _rhs_vector(op, problem)
    res = _interior_residual(op, u, rhs)
    if not np.isfinite(res) or res > _residual_bound(problem):
        raise _resonance_error(op)
    return SolutionField(ScalarField(grid, u), res, "superposition", 0)


@dataclass(eq=False)
class FixedPointRun:
    """A fixed-point solve plus its full iterate history."""

    solution: SolutionField
    iterates: list
    diffs: list
    contraction_ratio: float


def fixed_point_solve(
    problem: ProblemSpec,
    grid: Grid | None = None,
    mode: str = "positive",
    tol: float = 1e-10,
    max_iter: int = 200,
    check_hypotheses: bool = True,
) -> FixedPointRun:
    """Iterate u_{k+1} = T[p, d]^{-1} (h - (c - d) u_k) from u_0 = 0.

    In ``positive`` mode the frozen coefficient is d = min{c, -lambda2}, in
    ``negative`` mode d = max{c, -lambda3}, which keeps every iterate on the
    sign-definite side while the correction term c - d contracts.  The
    iteration stops when the sup-norm step drops below ``tol`` and reports
    the largest observed step ratio as the contraction ratio.

    Only homogeneous end moments are supported (d1 = d2 = 0).  By default the
    matching amplified-load hypotheses are verified first and a ValueError is
    raised when they fail; pass ``check_hypotheses=False`` to iterate anyway.
    """
    grid = _resolve_grid(problem.grid, grid)
    if problem.d1 != 0.0 or problem.d2 != 0.0:
        raise ValueError("fixed-point iteration supports homogeneous end moments only (d1 = d2 = 0)")
    if mode not in ("positive", "negative"):
        raise ValueError(f"mode must be 'positive' or 'negative', got {mode!r}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")

    sd = SpectralData.compute(problem.p, grid.interval)
    if check_hypotheses:
        from .principles import check_amp_negative_h, check_amp_positive_h

        check = check_amp_positive_h if mode == "positive" else check_amp_negative_h
        rule = "Thm6_1_pos_h" if mode == "positive" else "Thm6_2_neg_h"
        if check(problem.c, problem.h, problem.p, grid.interval, sd) is None:
            raise ValueError(
                f"hypotheses of the {rule} rule do not hold for this problem; "
                "pass check_hypotheses=False to iterate anyway"
            )

    cv = np.asarray(problem.c.values, dtype=np.float64)
    if mode == "positive":
        frozen = np.minimum(cv, -sd.lambda2)
    else:
        frozen = np.maximum(cv, -sd.lambda3)
    correction = cv - frozen
    op = assemble(problem.p, ScalarField(grid, frozen), grid)
    hv = np.asarray(problem.h.values, dtype=np.float64)
    static_rhs = not np.any(correction)

    u = np.zeros(grid.n + 1, dtype=np.longdouble)
    iterates: list[ScalarField] = []
    diffs: list[float] = []
    converged = False
    for _ in range(max_iter):
        rhs = hv - correction * np.asarray(u, dtype=np.float64)
        rhs[0] = 0.0
        rhs[-1] = 0.0
        x = _solve_refined(op, rhs)
        step = float(np.max(np.abs(np.asarray(x - u, dtype=np.float64))))
        iterates.append(ScalarField(grid, x))
        diffs.append(step)
        u = x
        if static_rhs or step < tol:
            converged = True
            break
    ratios = [b / a for a, b in zip(diffs, diffs[1:]) if a > 0.0]
    ratio = max(ratios) if ratios else 0.0
    if not converged:
        raise ConvergenceError(
            f"fixed-point iteration did not reach tol = {tol} within {max_iter} steps",
            last_ratio=ratios[-1] if ratios else None,
        )
    op_true = assemble(problem.p, problem.c, grid)
    res = _interior_residual(op_true, u, _rhs_vector(op_true, problem))
    sol = SolutionField(ScalarField(grid, u), res, "fixed_point", len(iterates))
    return FixedPointRun(solution=sol, iterates=iterates, diffs=diffs, contraction_ratio=ratio)


# ---------------------------------------------------------------------------
# certificates and a-priori bounds


@dataclass(frozen=True)
class SignCertificate:
    """Numerical sign check of one solution field."""

    interior_sign: str  # positive | negative | mixed
    min_abs_interior: float
    slope_a: float
    slope_b: float
    verdict: str  # strongly_positive | strongly_negative | fails


def sign_certificate(u, tol: float | None = None) -> SignCertificate:
    """Classify the sign of a solution, endpoint slopes included.

    ``strongly_positive`` requires every interior sample above ``tol``, an
    inward slope at a (u'(a) > tol) and an outward one at b (u'(b) < -tol);
    ``strongly_negative`` mirrors that.  The default tolerance is
    1e-7 * sup|u|, so the zero field always fails.
    """
    fld = u.u if isinstance(u, SolutionField) else u
    vals = np.asarray(fld.values, dtype=np.float64)
    if tol is None:
        tol = 1e-7 * float(np.max(np.abs(vals)))
    if tol < 0:
        raise ValueError(f"tol must be nonnegative, got {tol}")
    interior = vals[1:-1]
    du = np.asarray(diff(fld, 1).values, dtype=np.float64)
    slope_a = float(du[0])
    slope_b = float(du[-1])
    if np.all(interior > tol):
        sign = "positive"
    elif np.all(interior < -tol):
        sign = "negative"
    else:
        sign = "mixed"
    if sign == "positive" and slope_a > tol and slope_b < -tol:
        verdict = "strongly_positive"
    elif sign == "negative" and slope_a < -tol and slope_b > tol:
        verdict = "strongly_negative"
    else:
        verdict = "fails"
    return SignCertificate(sign, float(np.min(np.abs(interior))), slope_a, slope_b, verdict)


def operator_norm_bound(f: ScalarField, p: float, interval) -> float:
    """Bound integrate(|f|) / delta1 on the norm of u -> T[p, 0]^{-1}(f u)."""
    if f.grid.interval != interval:
        raise ValueError("f is not sampled on the given interval")
    absf = ScalarField(f.grid, np.abs(np.asarray(f.values, dtype=np.float64)))
    return integrate(absf) / delta1(p, interval)


def rhs_norm_bound(h: ScalarField, p: float, interval, r_min: float = 0.0) -> float:
    """Bound sqrt(L / (lambda_1 + r_min)) * sup|h| on the solution sup-norm."""
    if h.grid.interval != interval:
        raise ValueError("h is not sampled on the given interval")
    lam1 = lambda_k(p, interval, 1)
    denom = lam1 + r_min
    if denom <= 0:
        raise ValueError(f"lambda_1 + r_min must be positive, got {denom}")
    return float(np.sqrt(interval.length / denom) * sup_norm(h))


def smallest_eigenvalue(op: OperatorMatrix, tol: float = 1e-12, max_iter: int = 500) -> float:
    """Smallest eigenvalue of the interior block by inverse power iteration.

    The Rayleigh quotient is accumulated in extended precision because the
    matrix norm grows like spacing**-4 and float64 products would drown the
    update in rounding noise.  The iteration returns either when the update
    drops below ``tol`` or when it stops shrinking, whichever comes first.
    """
    n = op.grid.n
    rng = np.random.default_rng(7)
    v = rng.standard_normal(n + 1)
    v[0] = 0.0
    v[-1] = 0.0
    v /= np.linalg.norm(v)
    band_ld = op.band_extended()
    lam = None
    prev_delta = np.inf
    for it in range(max_iter):
        try:
            w = solve_banded((2, 2), op.band, v)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise _resonance_error(op) from exc
        w[0] = 0.0
        w[-1] = 0.0
        norm = np.linalg.norm(w)
        if norm == 0.0 or not np.isfinite(norm):
            raise ConvergenceError("inverse power iteration broke down")
        w /= norm
        w_ld = w.astype(np.longdouble)
        aw = _band_matvec(band_ld, w_ld)
        new = float(w_ld[1:-1] @ aw[1:-1])  # Rayleigh quotient; w vanishes at the ends
        if lam is not None:
            delta = abs(new - lam)
            if delta <= tol * max(1.0, abs(new)):
                return new
            if it >= 3 and delta >= prev_delta:
                return new  # update stopped shrinking: at the rounding floor
            prev_delta = delta
        lam = new
        v = w
    raise ConvergenceError(f"inverse power iteration did not settle within {max_iter} steps")

"""Eigenvalue search for boundary-value problems and decay-rate fitting.

Eigenvalues are the positive roots of the characteristic function

    Phi(omega) = omega^{l+1} * BC(omega),

where BC is u_N(omega, b), u_N'(omega, b) or u_N' + H u_N according to
the boundary condition.  The omega^{l+1} regularizer keeps Phi O(1)
across wide scan windows (the solution amplitude itself decays like
omega^{-l-1}).  Roots are located by a sign-change scan and refined by
bisection (derivative-free; Phi is cheap to evaluate in bulk) with one
final secant step.  Tangential (double) roots are not resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EvaluationError, InsufficientDataError
from .solution import NsbfSolution, eval_u, eval_u_prime
from .spps import Potential

__all__ = [
    "BoundaryCondition",
    "SpectralProblem",
    "Eigenpair",
    "characteristic",
    "find_eigenvalues",
    "decay_fit",
]

_BOUNDARY_KINDS = ("dirichlet", "neumann", "robin")

#: target relative width of the bisection bracket
_REFINE_RTOL = 1e-13
#: brackets whose roots land closer than this are merged
_DEDUP_WIDTH = 1e-9


@dataclass(frozen=True)
class BoundaryCondition:
    """Boundary condition at x = b: u = 0, u' = 0, or u' + H u = 0."""

    kind: str
    H: float = 0.0

    def __post_init__(self):
        if self.kind not in _BOUNDARY_KINDS:
            raise DomainError(f"boundary kind must be one of {_BOUNDARY_KINDS}")
        if not np.isfinite(self.H):
            raise DomainError("Robin coefficient H must be finite")


@dataclass(frozen=True)
class SpectralProblem:
    """Eigenvalue problem definition: potential, boundary condition, scan window."""

    potential: Potential
    boundary: BoundaryCondition
    omega_window: tuple[float, float]
    scan_points: int = 0  # 0: auto (>= 20 samples per unit omega, >= 64)

    def __post_init__(self):
        lo, hi = self.omega_window
        if not (np.isfinite(lo) and np.isfinite(hi) and 0 <= lo < hi):
            raise DomainError(f"omega window needs 0 <= lo < hi, got {self.omega_window}")
        if self.scan_points < 0:
            raise DomainError("scan_points must be nonnegative")

    @property
    def effective_scan_points(self) -> int:
        if self.scan_points:
            return max(self.scan_points, 2)
        lo, hi = self.omega_window
        return max(64, int(math.ceil(20.0 * (hi - lo))) + 1)


@dataclass(frozen=True)
class Eigenpair:
    """One computed eigenvalue with refinement diagnostics."""

    index: int
    omega: float
    char_residual: float
    refinement_width: float


def characteristic(sol: NsbfSolution, prob: SpectralProblem, omega):
    """Phi(omega) = omega^{l+1} x boundary expression at b; omega > 0."""
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    if (om <= 0).any() or not np.isfinite(om).all():
        raise DomainError("characteristic requires omega > 0")
    kind = prob.boundary.kind
    b = sol.b
    if kind == "dirichlet":
        bc = eval_u(sol, om, b)
    elif kind == "neumann":
        bc = eval_u_prime(sol, om, b)
    else:
        bc = eval_u_prime(sol, om, b) + prob.boundary.H * eval_u(sol, om, b)
    out = om ** (sol.l + 1.0) * bc
    return float(out[0]) if np.ndim(omega) == 0 else out


def _bisect_brackets(phi, a, b, fa, fb):
    """Vectorized bisection of sign-change brackets to relative width."""
    a, b, fa, fb = (np.array(v, dtype=float) for v in (a, b, fa, fb))
    for _ in range(200):
        width = b - a
        if np.all(width <= _REFINE_RTOL * np.maximum(np.abs(b), 1.0)):
            break
        mid = 0.5 * (a + b)
        fm = phi(mid)
        left = np.sign(fm) == np.sign(fa)
        a = np.where(left, mid, a)
        fa = np.where(left, fm, fa)
        b = np.where(left, b, mid)
        fb = np.where(left, fb, fm)
    return a, b, fa, fb


def find_eigenvalues(sol: NsbfSolution, prob: SpectralProblem) -> list[Eigenpair]:
    """All eigenvalues in the scan window, sorted and deduplicated.

    Samples Phi on a uniform omega grid, refines every sign change by
    bisection to relative width 1e-13 and polishes with one secant step.
    An empty window or a window with no sign changes returns an empty
    list (no error).
    """
    lo, hi = prob.omega_window
    n_scan = prob.effective_scan_points
    grid = np.linspace(lo, hi, n_scan)
    if grid[0] == 0.0:
        grid[0] = grid[1] * 1e-6  # omega = 0 is never an eigenvalue (u(0,.) = u0 > 0)

    phi = lambda om: characteristic(sol, prob, om)
    values = phi(grid)
    if not np.isfinite(values).all():
        bad = grid[~np.isfinite(values)][0]
        raise EvaluationError(f"characteristic function not finite at omega={bad}")

    roots: list[tuple[float, float, float]] = []  # (omega, residual, width)

    exact = np.flatnonzero(values == 0.0)
    for i in exact:
        roots.append((float(grid[i]), 0.0, 0.0))

    sign_change = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    if sign_change.size:
        a, b, fa, fb = _bisect_brackets(
            phi, grid[sign_change], grid[sign_change + 1], values[sign_change], values[sign_change + 1]
        )
        for aj, bj, faj, fbj in zip(a, b, fa, fb):
            width = bj - aj
            if fbj != faj:
                om = bj - fbj * (bj - aj) / (fbj - faj)  # secant polish
                if not (aj <= om <= bj):
                    om = 0.5 * (aj + bj)
            else:
                om = 0.5 * (aj + bj)
            roots.append((float(om), abs(float(phi(om))), float(width)))

    roots.sort(key=lambda r: r[0])
    merged: list[tuple[float, float, float]] = []
    for r in roots:
        if merged and r[0] - merged[-1][0] < _DEDUP_WIDTH:
            if r[1] < merged[-1][1]:
                merged[-1] = r
            continue
        merged.append(r)
    return [
        Eigenpair(index=i + 1, omega=om, char_residual=res, refinement_width=w)
        for i, (om, res, w) in enumerate(merged)
    ]


def decay_fit(values, n_start: int) -> float:
    """Least-squares decay exponent r of |c_n| ~ c n^r over a log-log fit.

    ``values[i]`` is |c_n| at n = n_start + i.  Entries at or below ten
    times the detected floor (the smallest positive entry) are excluded
    so a machine-precision plateau cannot bias the slope.

    Raises
    ------
    InsufficientDataError
        If fewer than 10 usable points remain after floor exclusion.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 11:
        raise DomainError("decay_fit needs at least 11 values (n range >= 10)")
    if n_start < 1:
        raise DomainError("n_start must be >= 1 (log n fit)")
    ns = n_start + np.arange(v.size)
    positive = v > 0.0
    if not positive.any():
        raise InsufficientDataError("all values at the floor (nonpositive)")
    floor = v[positive].min()
    usable = v > 10.0 * floor
    if usable.sum() < 10:
        raise InsufficientDataError(
            f"only {int(usable.sum())} points above 10x the floor {floor:.3e}"
        )
    slope = np.polyfit(np.log(ns[usable]), np.log(v[usable]), 1)[0]
    return float(slope)

"""Particular solution u0 and the recursive-integral families built on it.

The seed of the whole method is the non-vanishing solution u0 of

    -u0'' + (l(l+1)/x^2 + q(x)) u0 = 0,   u0(x) ~ x^{l+1} as x -> 0,

from which two families of recursive integrals are constructed:

    Xt^(0) = 1,
    Xt^(n) = integral_0^x u0^2 Xt^(n-1)        (n odd),
    Xt^(n) = -integral_0^x Xt^(n-1) / u0^2     (n even),

    phi_n  = (-1)^n (2n)! u0 Xt^(2n).

u0 itself is produced by Picard iteration of the Volterra equation

    u0(x) = x^{l+1} + (2l+1)^{-1} integral_0^x (x^{l+1} s^{-l} - x^{-l} s^{l+1}) q(s) u0(s) ds,

written in the scaled variable w = u0/x^{l+1} so the x^{l+1} asymptotics
is built in exactly and the iteration works on O(1) quantities.  The
derivative comes from differentiating the same representation, never
from numerical differentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, DomainError, NonVanishingError
from .mesh import (
    DEFAULT_CUTOFF_SLACK,
    GridFunction,
    UniformMesh,
    _cumulative_values,
    _guarded_cumulative_values,
)

__all__ = ["Potential", "ParticularSolution", "PhiFamily", "build_u0", "build_phi_family"]


@dataclass(frozen=True)
class Potential:
    """Potential q on a mesh together with its antiderivative Q.

    Attributes
    ----------
    q : GridFunction
        Samples of q; a non-finite sample at x = 0 (singular potentials
        such as 1/x) is replaced by 0 during construction and flagged in
        ``origin_singular``.  That sample is never used on its own: all
        integrands are assembled as products with positive powers of x.
    l : float
        Angular parameter, l >= -1/2.
    Q : GridFunction
        Q(x) = integral_0^x q, by guarded cumulative quadrature.
    xq_limit : float
        lim_{x->0} x*q(x).  Zero for every potential finite at the
        origin; 1 for the Coulomb term 1/x.  Used to pin the origin
        sample of integrands that behave like (x q) * smooth.
    q_callable : callable, optional
        Analytic form of q, when known; required by the shooting
        reference solver, unused by the mesh pipeline.
    origin_singular : bool
        Whether the raw sample at x = 0 was non-finite.
    """

    q: GridFunction
    l: float
    Q: GridFunction
    xq_limit: float = 0.0
    q_callable: Optional[Callable] = None
    origin_singular: bool = False

    @property
    def mesh(self) -> UniformMesh:
        return self.q.mesh

    @staticmethod
    def from_samples(
        mesh: UniformMesh,
        values: np.ndarray,
        l: float,
        xq_limit: float = 0.0,
        q_callable: Optional[Callable] = None,
    ) -> "Potential":
        l = float(l)
        if not np.isfinite(l) or l < -0.5:
            raise DomainError(f"l >= -1/2 required, got l={l}")
        v = np.array(values, dtype=float)
        if v.shape != (mesh.m,):
            raise DomainError(f"expected {mesh.m} potential samples, got {v.shape}")
        singular = not np.isfinite(v[0])
        if singular:
            v[0] = 0.0
        if not np.isfinite(v).all():
            bad = int(np.flatnonzero(~np.isfinite(v))[0])
            raise DomainError(f"non-finite potential sample at x={mesh.x[bad]}")
        q = GridFunction(mesh, v)
        Qv, _ = _guarded_cumulative_values(v, mesh.h, DEFAULT_CUTOFF_SLACK)
        return Potential(
            q=q,
            l=l,
            Q=GridFunction(mesh, Qv),
            xq_limit=float(xq_limit),
            q_callable=q_callable,
            origin_singular=singular,
        )

    @staticmethod
    def from_callable(
        mesh: UniformMesh, func: Callable, l: float, xq_limit: float = 0.0
    ) -> "Potential":
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.asarray(func(mesh.x), dtype=float)
        return Potential.from_samples(mesh, values, l, xq_limit=xq_limit, q_callable=func)


@dataclass(frozen=True)
class ParticularSolution:
    """u0, its derivative, and construction diagnostics.

    ``residual`` is the scaled ODE defect max |u0'' - (l(l+1)/x^2 + q) u0|
    / (1 + |u0''|) over interior mesh points, u0'' by 5-point second
    differences.  Points inside a small origin layer are excluded: a
    centered stencil cannot resolve the fractional power x^{l+1} there
    and would report its own truncation error.
    """

    u0: GridFunction
    u0_prime: GridFunction
    l: float
    iterations: int
    residual: float

    @property
    def mesh(self) -> UniformMesh:
        return self.u0.mesh


def _picard_sweep(w, sq, s_pow, two_l_p1, h, weights=None):
    """One Picard update of w = u0/x^{l+1} for l > -1/2.

    Returns (w_new, A, B) with A = cum(s q w), B = cum(s^{2l+2} q w).
    Works in the dtype of its inputs (the extended-precision direct path
    reuses it with longdouble arrays and exact longdouble weights).
    """
    gA = sq * w
    A = _cumulative_values(gA, h, weights)
    B = _cumulative_values(gA * s_pow, h, weights)
    ratio = np.zeros_like(B)
    np.divide(B, s_pow, out=ratio, where=s_pow > 0.0)
    return 1.0 + (A - ratio) / two_l_p1, A, B


def _picard_sweep_log(w, sq, log_x, sq_log, h):
    """One Picard update for the degenerate case l = -1/2 (log kernel)."""
    A = _cumulative_values(sq * w, h)
    A_log = _cumulative_values(sq_log * w, h)
    w_new = 1.0 + log_x * A - A_log
    w_new[0] = 1.0
    return w_new, A


def _ode_defect(u0v, x, l, qv, h, skip):
    m = u0v.shape[0]
    i = np.arange(max(skip, 2), m - 2)
    upp = (-u0v[i - 2] + 16 * u0v[i - 1] - 30 * u0v[i] + 16 * u0v[i + 1] - u0v[i + 2]) / (
        12.0 * h * h
    )
    rhs = (l * (l + 1) / x[i] ** 2 + qv[i]) * u0v[i]
    return float(np.max(np.abs(upp - rhs) / (1.0 + np.abs(upp))))


def build_u0(p: Potential, tol: float = 1e-14, max_iter: int = 100) -> ParticularSolution:
    """Construct the non-vanishing particular solution with x^{l+1} asymptotics.

    Picard iteration of the Volterra integral equation in the scaled
    variable w = u0/x^{l+1}, until successive sweeps differ by less than
    ``tol`` in the weighted sup-norm (= plain sup-norm on w).

    Raises
    ------
    ConvergenceError
        If ``max_iter`` sweeps do not reach ``tol``.
    NonVanishingError
        If the converged u0 has a non-positive sample on (0, b].  The
        spectral-shift workaround for sign-changing potentials is out of
        scope; the caller must supply a potential with positive u0.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    mesh = p.mesh
    x, h, l = mesh.x, mesh.h, p.l
    sq = x * p.q.values
    sq[0] = p.xq_limit

    w = np.ones(mesh.m)
    iterations = 0
    converged = False
    if l == -0.5:
        with np.errstate(divide="ignore"):
            log_x = np.log(x)
        log_x[0] = 0.0  # multiplied by A(0) = 0; pinned for finiteness
        sq_log = sq * log_x
        sq_log[0] = 0.0
        A = np.zeros(mesh.m)
        for it in range(1, max_iter + 1):
            w_new, A = _picard_sweep_log(w, sq, log_x, sq_log, h)
            delta = float(np.max(np.abs(w_new - w)))
            w = w_new
            iterations = it
            if delta < tol * max(1.0, float(np.max(np.abs(w)))):
                converged = True
                break
        sqrt_x = np.sqrt(x)
        u0v = sqrt_x * w
        with np.errstate(divide="ignore", invalid="ignore"):
            u0pv = w / (2.0 * sqrt_x) + A / sqrt_x
        u0pv[0] = 0.0  # placeholder: u0' is unbounded at the origin for l < 0
    else:
        two_l_p1 = 2.0 * l + 1.0
        s_pow = x ** (2.0 * l + 1.0)  # s^{2l+1}; s_pow[0] = 0 for l > -1/2
        A = B = np.zeros(mesh.m)
        for it in range(1, max_iter + 1):
            w_new, A, B = _picard_sweep(w, sq, s_pow, two_l_p1, h)
            delta = float(np.max(np.abs(w_new - w)))
            w = w_new
            iterations = it
            if delta < tol * max(1.0, float(np.max(np.abs(w)))):
                converged = True
                break
        u0v = x ** (l + 1.0) * w
        with np.errstate(divide="ignore", invalid="ignore"):
            xl = x**l
            b_over = np.zeros_like(B)
            np.divide(B, x ** (l + 1.0), out=b_over, where=x > 0.0)
            u0pv = (l + 1.0) * xl * (1.0 + A / two_l_p1) + l * b_over / two_l_p1
        if l < 0:
            u0pv[0] = 0.0  # placeholder: unbounded at the origin
        elif l > 0:
            u0pv[0] = 0.0
        else:
            u0pv[0] = 1.0  # (l+1) x^l -> 1 for l = 0

    if not converged:
        raise ConvergenceError(
            f"Picard iteration for u0 did not reach tol={tol} in {max_iter} sweeps"
        )
    if not np.isfinite(u0v).all() or not np.isfinite(u0pv).all():
        raise ConvergenceError("Picard iteration for u0 produced non-finite samples")
    if np.any(u0v[1:] <= 0.0):
        bad = 1 + int(np.flatnonzero(u0v[1:] <= 0.0)[0])
        raise NonVanishingError(
            f"u0 is not positive at x={x[bad]}; the scheme requires a "
            "non-vanishing particular solution on (0, b]"
        )

    skip = max(2, mesh.m // 400)
    residual = _ode_defect(u0v, x, l, p.q.values, h, skip)
    return ParticularSolution(
        u0=GridFunction(mesh, u0v),
        u0_prime=GridFunction(mesh, u0pv),
        l=l,
        iterations=iterations,
        residual=residual,
    )


@dataclass(frozen=True)
class PhiFamily:
    """Recursive integrals Xt^(0)..Xt^(2N) and phi_0..phi_N.

    phi_k' is available analytically from the recursion structure:
    phi_k' = (-1)^k (2k)! (u0' Xt^(2k) - Xt^(2k-1)/u0); see
    :func:`pbessel.coefficients.gamma_direct`.
    """

    xtilde: list[GridFunction]
    phi: list[GridFunction]
    u0: ParticularSolution

    @property
    def order(self) -> int:
        return len(self.phi) - 1


def build_phi_family(u0: ParticularSolution, N: int) -> PhiFamily:
    """Xt^(n) for n <= 2N by alternating cumulative integrals, and phi_k.

    Odd n integrates u0^2 Xt^(n-1) plainly; even n integrates
    Xt^(n-1)/u0^2 through the guarded path (the division amplifies noise
    near the origin).
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    mesh = u0.mesh
    h = mesh.h
    u0v = u0.u0.values
    u0sq = u0v * u0v
    xt = [np.ones(mesh.m)]
    for n in range(1, 2 * N + 1):
        if n % 2 == 1:
            xt.append(_cumulative_values(u0sq * xt[-1], h))
        else:
            integrand = np.zeros(mesh.m)
            np.divide(xt[-1], u0sq, out=integrand, where=u0sq > 0.0)
            integrand[0] = 0.0
            vals, _ = _guarded_cumulative_values(integrand, h, DEFAULT_CUTOFF_SLACK)
            xt.append(-vals)
    phi = [
        GridFunction(mesh, ((-1.0) ** k) * float(math.factorial(2 * k)) * u0v * xt[2 * k])
        for k in range(N + 1)
    ]
    return PhiFamily(
        xtilde=[GridFunction(mesh, v) for v in xt],
        phi=phi,
        u0=u0,
    )

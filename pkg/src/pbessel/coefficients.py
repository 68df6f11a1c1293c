"""NSBF coefficient families beta_n (solution) and gamma_n (derivative).

The regular solution and its derivative are expanded as

    u(omega, x)  = d(omega) b_l(omega x)                + sum_n (-1)^n beta_n(x)  j_{2n}(omega x),
    u'(omega, x) = d(omega)(omega b_l' + (Q/2) b_l)(..) + sum_n (-1)^n gamma_n(x) j_{2n}(omega x).

This module computes the x-dependent coefficient tables once per
potential.  The production path is the recurrent integration scheme

    beta_0  = u0 - x^{l+1},
    eta_n   = int_0^x (t u0' + (2n-1) u0) t^{2n-2} beta_{n-1} dt,
    kappa_n = int_0^x u0 q t^{2n+l+1} dt,
    theta_n = int_0^x (eta_n - t^{2n-1} beta_{n-1} u0)/u0^2 dt,     (guarded)
    mu_n    = int_0^x kappa_n/u0^2 dt,                              (guarded)
    beta_n  = (4n+1)/(4n-3) [beta_{n-1} + u0 x^{-2n} (2(4n-1) theta_n
              + (-1)^n (4n-3) B_n mu_n)],

with the analogous start gamma_0 = beta_0' - x^{l+1} Q/2 and recurrence
for gamma_n; the auxiliaries eta, kappa, theta, mu are shared between
the two recurrences.  The direct Fourier-Legendre formulas

    beta_n(x)  = (4n+1) sum_k l_{2k,2n} x^{-2k} (phi_k - c_{k,l} x^{2k+l+1}),
    gamma_n(x) = (4n+1) sum_k l_{2k,2n} x^{-2k} (phi_k'
                 - c_{k,l}((2k+l+1) x^{2k+l} + (Q/2) x^{2k+l+1})),

lose roughly a digit per order in fixed precision and serve as an
independent cross-validation route for small n, not as the production
path.

All coefficients vanish at x = 0 (they are bounded by const * x^{l+1});
samples where x^{2n} underflows are defined as 0 rather than divided.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, NumericalBreakdownError, OrderCapError
from .mesh import (
    DEFAULT_CUTOFF_SLACK,
    GridFunction,
    _CUM_W_DEN,
    _CUM_W_NUM,
    _cumulative_values,
    _guarded_cumulative_values,
)
from .special import c_kl, gamma_ratio_Bn, gamma_ratio_Cn, legendre_even_coeffs
from .spps import ParticularSolution, PhiFamily, Potential, _picard_sweep

__all__ = [
    "RecurrenceAux",
    "CoefficientTables",
    "beta_recurrent",
    "gamma_recurrent",
    "beta_direct",
    "gamma_direct",
    "direct_coefficients_extended",
    "select_truncation",
    "build_coefficient_tables",
    "DIRECT_ORDER_CAP",
]

#: Direct Legendre-sum formulas are only served up to this order; beyond it
#: their fixed-precision cancellation outgrows the value itself.
DIRECT_ORDER_CAP = 12

_TINY = 1e-290  # below this, positive powers are treated as underflowed


@dataclass
class RecurrenceAux:
    """Auxiliary integral families of the recurrence, index n-1 holds order n."""

    eta: list[np.ndarray] = field(default_factory=list)
    kappa: list[np.ndarray] = field(default_factory=list)
    theta: list[np.ndarray] = field(default_factory=list)
    mu: list[np.ndarray] = field(default_factory=list)


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        np.divide(num, den, out=out, where=den > _TINY)
    return out


def _beta0(u0: ParticularSolution) -> np.ndarray:
    x = u0.mesh.x
    return u0.u0.values - x ** (u0.l + 1.0)


def _gamma0(u0: ParticularSolution, p: Potential) -> np.ndarray:
    # gamma_0 = beta_0' - x^{l+1} Q/2 with beta_0' = u0' - (l+1) x^l analytic.
    # (The sign makes the omega = 0 limit of the derivative series equal u0'.)
    x = u0.mesh.x
    l = u0.l
    with np.errstate(divide="ignore"):
        xl = x**l
    g0 = u0.u0_prime.values - (l + 1.0) * xl - p.Q.values * x ** (l + 1.0) / 2.0
    g0[0] = 0.0
    return g0


def beta_recurrent(
    u0: ParticularSolution,
    p: Potential,
    N: int,
    slack: float = DEFAULT_CUTOFF_SLACK,
) -> tuple[list[np.ndarray], RecurrenceAux]:
    """Coefficients beta_0..beta_N by the recurrent integration scheme.

    Returns the coefficient arrays and the auxiliary families, which
    :func:`gamma_recurrent` reuses verbatim.

    Raises
    ------
    NumericalBreakdownError
        If a non-finite value appears; the exception names the first bad
        order.
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    mesh = u0.mesh
    x, h, l = mesh.x, mesh.h, u0.l
    u0v = u0.u0.values
    u0pv = u0.u0_prime.values
    u0sq = u0v * u0v
    qv = p.q.values
    xl1 = x ** (l + 1.0)
    xu0p = x * u0pv

    betas = [_beta0(u0)]
    aux = RecurrenceAux()
    for n in range(1, N + 1):
        t2nm2 = x ** (2 * n - 2) if n > 1 else np.ones_like(x)
        t2nm1 = t2nm2 * x
        t2n = t2nm1 * x

        eta_int = (xu0p + (2 * n - 1) * u0v) * t2nm2 * betas[n - 1]
        eta_int[0] = 0.0
        eta = _cumulative_values(eta_int, h)

        kappa_int = u0v * qv * t2n * xl1
        kappa_int[0] = 0.0
        kappa = _cumulative_values(kappa_int, h)

        theta_int = _safe_div(eta - t2nm1 * betas[n - 1] * u0v, u0sq)
        theta_int[0] = 0.0
        theta, _ = _guarded_cumulative_values(theta_int, h, slack)

        mu_int = _safe_div(kappa, u0sq)
        mu_int[0] = 0.0
        mu, _ = _guarded_cumulative_values(mu_int, h, slack)

        sign = -1.0 if n % 2 else 1.0
        b_n = gamma_ratio_Bn(n, l)
        bracket = 2.0 * (4 * n - 1) * theta + sign * (4 * n - 3) * b_n * mu
        beta_n = (4 * n + 1) / (4 * n - 3) * (betas[n - 1] + u0v * _safe_div(bracket, t2n))
        beta_n[0] = 0.0
        if not np.isfinite(beta_n).all():
            raise NumericalBreakdownError(
                f"non-finite beta coefficient at order n={n}", order=n
            )
        betas.append(beta_n)
        aux.eta.append(eta)
        aux.kappa.append(kappa)
        aux.theta.append(theta)
        aux.mu.append(mu)
    return betas, aux


def gamma_recurrent(
    u0: ParticularSolution,
    p: Potential,
    betas: list[np.ndarray],
    aux: RecurrenceAux,
    N: int,
) -> list[np.ndarray]:
    """Coefficients gamma_0..gamma_N from the beta recurrence's auxiliaries."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    if len(betas) < N + 1 or len(aux.eta) < N:
        raise DomainError("betas/aux must come from beta_recurrent at the same N")
    mesh = u0.mesh
    x, l = mesh.x, u0.l
    u0v = u0.u0.values
    u0pv = u0.u0_prime.values
    xl1 = x ** (l + 1.0)
    Qxl1 = p.Q.values * xl1

    gammas = [_gamma0(u0, p)]
    for n in range(1, N + 1):
        t2n = x ** (2 * n)
        eta, kappa = aux.eta[n - 1], aux.kappa[n - 1]
        theta, mu = aux.theta[n - 1], aux.mu[n - 1]
        sign = -1.0 if n % 2 else 1.0
        b_n = gamma_ratio_Bn(n, l)
        c_n = gamma_ratio_Cn(n, l)

        inner = (4 * n - 1) * (
            2.0 * u0pv * _safe_div(theta, t2n)
            + 2.0 * _safe_div(eta, u0v * t2n)
            - _safe_div(betas[n - 1], x)
        )
        tail = b_n * _safe_div(mu * u0pv + _safe_div(kappa, u0v), t2n) - c_n * Qxl1
        gamma_n = (4 * n + 1) / (4 * n - 3) * (gammas[n - 1] + inner) + sign * (
            4 * n + 1
        ) * tail
        gamma_n[0] = 0.0
        if not np.isfinite(gamma_n).all():
            raise NumericalBreakdownError(
                f"non-finite gamma coefficient at order n={n}", order=n
            )
        gammas.append(gamma_n)
    return gammas


def beta_direct(phi: PhiFamily, l: float, n: int, x: float) -> float:
    """beta_n(x) from the direct Fourier-Legendre formula (n <= 12).

    Cross-validation path: exact-rational Legendre coefficients put all
    the cancellation into the phi_k differences, which limits the usable
    range to 10-15 orders in double precision.
    """
    if n > DIRECT_ORDER_CAP:
        raise OrderCapError(
            f"direct formula limited to n <= {DIRECT_ORDER_CAP}; use beta_recurrent"
        )
    if n > phi.order:
        raise DomainError(f"phi family holds orders 0..{phi.order}, need {n}")
    i = phi.u0.mesh.index_of(x)
    row = legendre_even_coeffs(n).coeffs
    total = 0.0
    for k in range(n + 1):
        diff = phi.phi[k].values[i] - c_kl(k, l) * x ** (2 * k + l + 1.0)
        total += row[2 * k] * x ** (-2.0 * k) * diff
    return (4 * n + 1) * total


def _phi_prime_at(phi: PhiFamily, k: int, i: int) -> float:
    # phi_k' = (-1)^k (2k)! (u0' Xt^(2k) - Xt^(2k-1)/u0), analytic from the recursion
    u0v = phi.u0.u0.values[i]
    u0pv = phi.u0.u0_prime.values[i]
    if k == 0:
        return u0pv
    import math

    fact = float(math.factorial(2 * k))
    term = u0pv * phi.xtilde[2 * k].values[i]
    if u0v > 0.0:
        term -= phi.xtilde[2 * k - 1].values[i] / u0v
    return ((-1.0) ** k) * fact * term


def gamma_direct(phi: PhiFamily, p: Potential, n: int, x: float) -> float:
    """gamma_n(x) from the direct Fourier-Legendre formula (n <= 12)."""
    if n > DIRECT_ORDER_CAP:
        raise OrderCapError(
            f"direct formula limited to n <= {DIRECT_ORDER_CAP}; use gamma_recurrent"
        )
    if n > phi.order:
        raise DomainError(f"phi family holds orders 0..{phi.order}, need {n}")
    l = p.l
    i = phi.u0.mesh.index_of(x)
    Q = p.Q.values[i]
    row = legendre_even_coeffs(n).coeffs
    total = 0.0
    for k in range(n + 1):
        unperturbed = c_kl(k, l) * (
            (2 * k + l + 1.0) * x ** (2 * k + l) + 0.5 * Q * x ** (2 * k + l + 1.0)
        )
        total += row[2 * k] * x ** (-2.0 * k) * (_phi_prime_at(phi, k, i) - unperturbed)
    return (4 * n + 1) * total


def direct_coefficients_extended(
    p: Potential, N: int, x: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """beta_n(x) and gamma_n(x), n = 0..N, by the direct formulas in 80-bit floats.

    In fixed double precision the direct Fourier-Legendre formulas lose
    about a digit per order (the Legendre coefficients grow while the
    values shrink), which caps them near n = 8-10; evaluated in extended
    precision they stay meaningful over the whole served range and give
    an independent reference for the recurrent path.  The entire chain
    (Picard iteration for u0, the Xt recursion, Q) is recomputed in
    ``numpy.longdouble`` on the same mesh.

    Requires l > -1/2; the degenerate log-kernel case has no extended
    path.  ``x`` defaults to the right endpoint b.
    """
    if N > DIRECT_ORDER_CAP:
        raise OrderCapError(f"direct formulas limited to n <= {DIRECT_ORDER_CAP}")
    if p.l == -0.5:
        raise DomainError("extended direct evaluation requires l > -1/2")
    ld = np.longdouble
    mesh = p.mesh
    l = ld(p.l)
    xv = mesh.x.astype(ld)
    h = ld(mesh.b) / ld(mesh.m - 1)
    W = np.array(_CUM_W_NUM, dtype=ld) / ld(_CUM_W_DEN)
    qv = p.q.values.astype(ld)
    sq = xv * qv
    sq[0] = ld(p.xq_limit)

    # u0 in extended precision (same Picard sweep, longdouble arithmetic);
    # iterate to the longdouble fixed point: the direct formulas amplify a
    # relative u0 perturbation by many orders at the top of the range, so
    # the sweep runs until its update drowns in longdouble rounding noise
    s_pow = xv ** (2.0 * p.l + 1.0)
    two_l_p1 = 2 * l + 1
    w = np.ones(mesh.m, dtype=ld)
    A = B = np.zeros(mesh.m, dtype=ld)
    prev_delta = np.inf
    for it in range(120):
        w_new, A, B = _picard_sweep(w, sq, s_pow, two_l_p1, h, weights=W)
        delta = float(np.max(np.abs(w_new - w)))
        w = w_new
        scale = max(1.0, float(np.max(np.abs(w))))
        if delta < 1e-19 * scale:
            break
        if delta < 1e-13 * scale and delta >= 0.5 * prev_delta:
            break  # update no longer contracting: rounding floor reached
        prev_delta = delta
    else:
        raise ConvergenceError("extended-precision Picard iteration stalled")
    xl1 = xv ** (p.l + 1.0)
    u0v = xl1 * w
    with np.errstate(divide="ignore", invalid="ignore"):
        xl = xv**p.l
        b_over = np.zeros_like(B)
        np.divide(B, xl1, out=b_over, where=xv > 0)
        u0pv = (l + 1) * xl * (1 + A / two_l_p1) + l * b_over / two_l_p1
    u0pv[0] = ld(1.0) if p.l == 0.0 else ld(0.0)

    Qv, _ = _guarded_cumulative_values(qv, h, DEFAULT_CUTOFF_SLACK, weights=W)

    # Xt chain
    u0sq = u0v * u0v
    xt = [np.ones(mesh.m, dtype=ld)]
    for j in range(1, 2 * N + 1):
        if j % 2 == 1:
            xt.append(_cumulative_values(u0sq * xt[-1], h, weights=W))
        else:
            integrand = np.zeros(mesh.m, dtype=ld)
            np.divide(xt[-1], u0sq, out=integrand, where=u0sq > 0)
            integrand[0] = 0.0
            vals, _ = _guarded_cumulative_values(integrand, h, DEFAULT_CUTOFF_SLACK, weights=W)
            xt.append(-vals)

    i = mesh.m - 1 if x is None else mesh.index_of(x)
    xi = xv[i]
    Qi = Qv[i]

    # c_{k,l} by its exact gamma recurrence, c_0 = 1
    cks = [ld(1.0)]
    for k in range(N):
        cks.append(cks[-1] * (k + ld(0.5)) / (k + l + ld(1.5)))

    import math as _math

    betas = np.empty(N + 1)
    gammas = np.empty(N + 1)
    for n in range(N + 1):
        exact_row = legendre_even_coeffs(n).exact
        tot_b = ld(0.0)
        tot_g = ld(0.0)
        for k in range(n + 1):
            lk = ld(exact_row[2 * k].numerator) / ld(exact_row[2 * k].denominator)
            fact = ld(_math.factorial(2 * k))
            phi_k = ((-1.0) ** k) * fact * u0v[i] * xt[2 * k][i]
            if k == 0:
                phi_kp = u0pv[i]
            else:
                phi_kp = ((-1.0) ** k) * fact * (
                    u0pv[i] * xt[2 * k][i] - xt[2 * k - 1][i] / u0v[i]
                )
            xpow = xi ** (2 * k + l + 1)
            tot_b += lk * xi ** (-2 * k) * (phi_k - cks[k] * xpow)
            unp = cks[k] * ((2 * k + l + 1) * xpow / xi + 0.5 * Qi * xpow)
            tot_g += lk * xi ** (-2 * k) * (phi_kp - unp)
        betas[n] = float((4 * n + 1) * tot_b)
        gammas[n] = float((4 * n + 1) * tot_g)
    return betas, gammas


def select_truncation(
    residuals: np.ndarray,
    window: int = 10,
    level_factor: float = 10.0,
    tail_flat: float = 1.25,
) -> tuple[int, bool]:
    """Truncation order where the residual sequence reaches its floor.

    Three shapes occur in practice.  A sequence that decays onto a flat
    noise floor (the trailing ``window`` samples span less than
    ``tail_flat``): the plateau starts at the first K whose residual is
    within ``level_factor`` of that floor.  A V shape, where the sum
    starts growing again by accumulating noise-level coefficients: the
    floor is the interior minimizer.  A sequence still decreasing at the
    end of the table has no floor; returns (N, False), meaning "not
    converged: increase N or refine the mesh".
    """
    r = np.asarray(residuals, dtype=float)
    N = r.size - 1
    if np.all(r == 0.0):
        return 0, True
    if N < window:
        return N, False
    tail = r[N - window :]
    tmax, tmin = float(tail.max()), float(tail.min())
    if tmin > 0.0 and tmax <= tail_flat * tmin:
        floor = float(np.median(tail))
        hits = np.flatnonzero(r <= level_factor * floor)
        return int(hits[0]), True
    k_min = int(np.argmin(r))
    if k_min < N - window:
        return k_min, True  # V shape: interior floor, noise growth afterwards
    return N, False


@dataclass(frozen=True)
class CoefficientTables:
    """beta_n and gamma_n tables with truncation diagnostics.

    ``beta_residual[K]`` is |sum_{n<=K} beta_n(b)| / b, the computable
    discrepancy of the truncated kernel diagonal from zero (its exact
    value); likewise for gamma.  ``N_opt`` is the plateau-selected
    truncation covering both families; ``converged`` is False when a
    residual sequence never flattens within the table.
    """

    beta: list[GridFunction]
    gamma: list[GridFunction]
    N: int
    beta_residual: np.ndarray
    gamma_residual: np.ndarray
    N_opt: int
    beta_floor: float
    gamma_floor: float
    beta_plateau: int
    gamma_plateau: int
    converged: bool

    @property
    def mesh(self):
        return self.beta[0].mesh

    def beta_matrix(self) -> np.ndarray:
        """Stacked (N+1, m) array of the beta tables."""
        return np.stack([g.values for g in self.beta])

    def gamma_matrix(self) -> np.ndarray:
        return np.stack([g.values for g in self.gamma])


def build_coefficient_tables(
    u0: ParticularSolution,
    p: Potential,
    N: int = 100,
    slack: float = DEFAULT_CUTOFF_SLACK,
) -> CoefficientTables:
    """Run both recurrences in one pass and attach residual diagnostics."""
    betas, aux = beta_recurrent(u0, p, N, slack=slack)
    gammas = gamma_recurrent(u0, p, betas, aux, N)
    b = u0.mesh.b
    beta_res = np.abs(np.cumsum([bn[-1] for bn in betas])) / b
    gamma_res = np.abs(np.cumsum([gn[-1] for gn in gammas])) / b
    k_beta, ok_beta = select_truncation(beta_res)
    k_gamma, ok_gamma = select_truncation(gamma_res)
    mesh = u0.mesh
    return CoefficientTables(
        beta=[GridFunction(mesh, bn) for bn in betas],
        gamma=[GridFunction(mesh, gn) for gn in gammas],
        N=N,
        beta_residual=beta_res,
        gamma_residual=gamma_res,
        N_opt=max(k_beta, k_gamma) if (ok_beta and ok_gamma) else N,
        beta_floor=float(beta_res.min()),
        gamma_floor=float(gamma_res.min()),
        beta_plateau=k_beta,
        gamma_plateau=k_gamma,
        converged=ok_beta and ok_gamma,
    )

"""Stable evaluation of the special functions the solver is built on.

Covers spherical Bessel functions j_0..j_n of a common argument
(forward recurrence where it is stable, Miller backward recurrence with
renormalization otherwise), the half-integer-order functions
b_l(z) = sqrt(z) J_{l+1/2}(z) and their derivative, the gamma-ratio
constants of the recurrent coefficient scheme, and exact-rational
Legendre polynomial coefficients.

All gamma ratios go through log-gamma differences; the gamma function is
never evaluated on its own above moderate arguments, which removes the
overflow ceiling that a naive ratio hits near order 170.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, gammasgn, jv

from .errors import DomainError, OrderCapError

__all__ = [
    "spherical_j_sequence",
    "b_l",
    "b_l_prime",
    "bl_scaled",
    "bl_prime_scaled",
    "c_kl",
    "gamma_ratio_Bn",
    "gamma_ratio_Cn",
    "LegendreCoeffRow",
    "legendre_even_coeffs",
    "LEGENDRE_ORDER_CAP",
]

_LOG_SQRT_PI = 0.5 * math.log(math.pi)

# ---------------------------------------------------------------------------
# spherical Bessel sequences
# ---------------------------------------------------------------------------

_SMALL_Z = 1e-2          # below this, the two-term ascending series is exact to eps
_RENORM_LIMIT = 1e250    # rescale trigger inside the backward recurrence
_RENORM_FACTOR = 1e-250


def _miller_offset(n_max: int) -> int:
    # Safe start order for the backward recurrence; generous for n_max <= ~400.
    return int(math.ceil(1.5 * math.sqrt(40.0 * max(n_max, 1)))) + 20


def _jseq_forward(n_max: int, z: np.ndarray) -> np.ndarray:
    out = np.empty((n_max + 1, z.size))
    sz, cz = np.sin(z), np.cos(z)
    out[0] = sz / z
    if n_max >= 1:
        out[1] = sz / z**2 - cz / z
    for n in range(1, n_max):
        out[n + 1] = (2 * n + 1) / z * out[n] - out[n - 1]
    return out


def _jseq_series(n_max: int, z: np.ndarray) -> np.ndarray:
    # Leading terms of j_n = z^n/(2n+1)!! (1 - z^2/(2(2n+3)) + z^4/(8(2n+3)(2n+5)));
    # truncation below 1e-16 relative for z <= _SMALL_Z.
    out = np.empty((n_max + 1, z.size))
    lead = np.ones_like(z)
    z2 = z * z
    for n in range(n_max + 1):
        out[n] = lead * (1.0 - z2 / (2 * (2 * n + 3)) + z2 * z2 / (8.0 * (2 * n + 3) * (2 * n + 5)))
        lead = lead * z / (2 * n + 3)  # underflows to 0 harmlessly for large n
    return out


def _jseq_miller(n_max: int, z: np.ndarray) -> np.ndarray:
    m_start = n_max + _miller_offset(n_max)
    out = np.zeros((n_max + 1, z.size))
    f_up = np.zeros(z.size)                 # f_{n+1}
    f_cur = np.full(z.size, 1e-250)         # f_n, starting at n = m_start
    for n in range(m_start, 0, -1):
        f_down = (2 * n + 1) / z * f_cur - f_up
        f_up, f_cur = f_cur, f_down
        row = n - 1
        if row <= n_max:
            out[row] = f_cur
        big = np.abs(f_cur) > _RENORM_LIMIT
        if big.any():
            f_cur[big] *= _RENORM_FACTOR
            f_up[big] *= _RENORM_FACTOR
            if row <= n_max:
                out[row:, big] *= _RENORM_FACTOR
    # Normalize against whichever of j_0, j_1 is larger in magnitude; j_0
    # vanishes at z = k*pi, so a fixed j_0 normalization would be unstable
    # there.  f_cur/f_up now hold the unnormalized f_0/f_1.
    j0 = np.sin(z) / z
    j1 = np.sin(z) / z**2 - np.cos(z) / z
    use_j1 = np.abs(j1) > np.abs(j0)
    scale = np.where(use_j1, j1, j0) / np.where(use_j1, f_up, f_cur)
    return out * scale


def spherical_j_sequence(n_max: int, z) -> np.ndarray:
    """Spherical Bessel functions j_0(z)..j_{n_max}(z) of one argument.

    Parameters
    ----------
    n_max : int
        Largest order, n_max >= 0.
    z : float or 1-D array
        Real argument(s).

    Returns
    -------
    ndarray
        Shape (n_max+1,) for scalar ``z``, (n_max+1, len(z)) otherwise.

    Notes
    -----
    For |z| >= n_max the upward recurrence is stable and used directly;
    for 0 < |z| < n_max a Miller-type backward recurrence with periodic
    renormalization is used; z = 0 gives (1, 0, 0, ...).
    """
    if n_max < 0:
        raise DomainError(f"order must be nonnegative, got {n_max}")
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if z_arr.ndim != 1:
        raise DomainError("z must be a scalar or 1-D array")
    if not np.isfinite(z_arr).all():
        raise DomainError("non-finite argument to spherical_j_sequence")

    za = np.abs(z_arr)
    out = np.empty((n_max + 1, z_arr.size))

    zero = za == 0.0
    small = (~zero) & (za <= _SMALL_Z)
    fwd = (~zero) & (~small) & (za >= n_max)
    mil = (~zero) & (~small) & (~fwd)

    if zero.any():
        out[:, zero] = 0.0
        out[0, zero] = 1.0
    if small.any():
        out[:, small] = _jseq_series(n_max, za[small])
    if fwd.any():
        out[:, fwd] = _jseq_forward(n_max, za[fwd])
    if mil.any():
        out[:, mil] = _jseq_miller(n_max, za[mil])

    neg = z_arr < 0.0
    if neg.any():
        out[1::2, neg] *= -1.0  # j_n(-z) = (-1)^n j_n(z)

    return out[:, 0] if np.isscalar(z) or np.ndim(z) == 0 else out


# ---------------------------------------------------------------------------
# b_l(z) = sqrt(z) J_{l+1/2}(z) and companions
# ---------------------------------------------------------------------------


def _check_l(l: float) -> float:
    l = float(l)
    if not np.isfinite(l) or l < -0.5:
        raise DomainError(f"l >= -1/2 required, got l={l}")
    return l


def _series_region(l: float, z: np.ndarray) -> np.ndarray:
    # Ascending series is cancellation-free while the term ratio stays < 1.
    return (z <= 2.0) | (z * z <= 3.0 * (l + 1.5))


def _bl_scaled_series(l: float, z: np.ndarray) -> np.ndarray:
    # S_l(z) = Gamma(l+3/2) sum_k (-1)^k (z/2)^{2k} / (k! Gamma(k+l+3/2)); S_l(0)=1.
    out = np.ones_like(z)
    term = np.ones_like(z)
    z2 = z * z
    k = 0
    while True:
        k += 1
        term = term * (-z2) / (4.0 * k * (k + l + 0.5))
        out += term
        if np.max(np.abs(term)) <= 1e-18 * max(np.max(np.abs(out)), 1e-30) or k > 200:
            return out


def _bl_prime_scaled_series(l: float, z: np.ndarray) -> np.ndarray:
    # D_l(z) = Gamma(l+3/2) sum_k (-1)^k (2k+l+1) (z/2)^{2k} / (k! Gamma(k+l+3/2)); D_l(0)=l+1.
    out = np.full_like(z, l + 1.0)
    term = np.ones_like(z)
    z2 = z * z
    k = 0
    while True:
        k += 1
        term = term * (-z2) / (4.0 * k * (k + l + 0.5))
        out += term * (2 * k + l + 1.0)
        if np.max(np.abs(term)) * (2 * k + l + 1.0) <= 1e-18 or k > 200:
            return out


def _log_fused(log_mag: np.ndarray, signed: np.ndarray) -> np.ndarray:
    """exp(log_mag) * signed with the magnitude of ``signed`` folded into the log."""
    mag = np.abs(signed)
    with np.errstate(divide="ignore"):
        lg = np.where(mag > 0.0, np.log(np.where(mag > 0.0, mag, 1.0)), -np.inf)
    return np.sign(signed) * np.exp(log_mag + lg)


def bl_scaled(l: float, z) -> np.ndarray | float:
    """S_l(z) = 2^{l+1/2} Gamma(l+3/2) z^{-l-1} b_l(z), with S_l(0) = 1.

    The leading NSBF term d(omega) b_l(omega x) equals x^{l+1} S_l(omega x),
    which removes the omega^{-l-1} pole analytically; large-l evaluation is
    fused in log space so neither factor overflows on its own.
    """
    l = _check_l(l)
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if (z_arr < 0).any() or not np.isfinite(z_arr).all():
        raise DomainError("bl_scaled requires finite z >= 0")
    out = np.empty_like(z_arr)
    ser = _series_region(l, z_arr)
    if ser.any():
        out[ser] = _bl_scaled_series(l, z_arr[ser])
    rest = ~ser
    if rest.any():
        zr = z_arr[rest]
        log_c = (l + 0.5) * math.log(2.0) + gammaln(l + 1.5) - (l + 0.5) * np.log(zr)
        out[rest] = _log_fused(log_c, jv(l + 0.5, zr))
    return float(out[0]) if np.ndim(z) == 0 else out


def bl_prime_scaled(l: float, z) -> np.ndarray | float:
    """D_l(z) = 2^{l+1/2} Gamma(l+3/2) z^{-l} b_l'(z), with D_l(0) = l + 1.

    The leading derivative term d(omega) omega b_l'(omega x) equals
    x^l D_l(omega x).
    """
    l = _check_l(l)
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    if (z_arr < 0).any() or not np.isfinite(z_arr).all():
        raise DomainError("bl_prime_scaled requires finite z >= 0")
    out = np.empty_like(z_arr)
    ser = _series_region(l, z_arr)
    if ser.any():
        out[ser] = _bl_prime_scaled_series(l, z_arr[ser])
    rest = ~ser
    if rest.any():
        zr = z_arr[rest]
        # b_l'(z) = sqrt(z) J_{l-1/2}(z) - l J_{l+1/2}(z)/sqrt(z)
        base = (l + 0.5) * math.log(2.0) + gammaln(l + 1.5)
        t1 = _log_fused(base + (0.5 - l) * np.log(zr), jv(l - 0.5, zr))
        if l != 0.0:
            t2 = _log_fused(base + (-0.5 - l) * np.log(zr), jv(l + 0.5, zr))
            out[rest] = t1 - l * t2
        else:
            out[rest] = t1
    return float(out[0]) if np.ndim(z) == 0 else out


def b_l(l: float, z: float) -> float:
    """b_l(z) = sqrt(z) J_{l+1/2}(z); the regular unperturbed solution in z = omega*x.

    Near the origin the ascending power series is used to avoid
    cancellation; b_l(0) = 0 for every l >= -1/2.
    """
    l = _check_l(l)
    if not np.isfinite(z) or z < 0.0:
        raise DomainError(f"b_l requires finite z >= 0, got z={z}")
    if z == 0.0:
        return 0.0
    if _series_region(l, np.atleast_1d(float(z)))[0]:
        # b_l = z^{l+1} S_l(z) / (2^{l+1/2} Gamma(l+3/2)), computed in logs
        s = _bl_scaled_series(l, np.atleast_1d(float(z)))[0]
        log_pre = (l + 1.0) * math.log(z) - (l + 0.5) * math.log(2.0) - gammaln(l + 1.5)
        return float(_log_fused(np.atleast_1d(log_pre), np.atleast_1d(s))[0])
    return math.sqrt(z) * float(jv(l + 0.5, z))


def b_l_prime(l: float, z: float) -> float:
    """d/dz of b_l(z).  At z = 0: 0 for l > 0, sqrt(2/pi) for l = 0, +inf for l < 0."""
    l = _check_l(l)
    if not np.isfinite(z) or z < 0.0:
        raise DomainError(f"b_l_prime requires finite z >= 0, got z={z}")
    if z == 0.0:
        if l > 0.0:
            return 0.0
        if l == 0.0:
            return math.sqrt(2.0 / math.pi)
        return math.inf
    if _series_region(l, np.atleast_1d(float(z)))[0]:
        d = _bl_prime_scaled_series(l, np.atleast_1d(float(z)))[0]
        log_pre = l * math.log(z) - (l + 0.5) * math.log(2.0) - gammaln(l + 1.5)
        return float(_log_fused(np.atleast_1d(log_pre), np.atleast_1d(d))[0])
    return math.sqrt(z) * float(jv(l - 0.5, z)) - l * float(jv(l + 0.5, z)) / math.sqrt(z)


# ---------------------------------------------------------------------------
# gamma ratios
# ---------------------------------------------------------------------------


def c_kl(k: int, l: float) -> float:
    """c_{k,l} = Gamma(l+3/2) Gamma(k+1/2) / (sqrt(pi) Gamma(k+l+3/2)).

    Computed through log-gamma differences; exact value 1 at k = 0.
    """
    if k < 0 or k != int(k):
        raise DomainError(f"k must be a nonnegative integer, got {k}")
    l = _check_l(l)
    k = int(k)
    return math.exp(gammaln(l + 1.5) + gammaln(k + 0.5) - _LOG_SQRT_PI - gammaln(k + l + 1.5))


def gamma_ratio_Bn(n: int, l: float) -> float:
    """Coupling constant B_n of the recurrent coefficient scheme.

    B_n = (4n-1) Gamma(l+2) Gamma(l+3/2) Gamma(n-1/2)
          / (2 sqrt(pi) Gamma(l-n+2) Gamma(n+1) Gamma(n+l+3/2)).

    For integer l the reciprocal of Gamma(l-n+2) makes B_n exactly zero
    for every n >= l+2; negative non-integer arguments get their sign
    from the reflection formula.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"n must be a positive integer, got {n}")
    l = _check_l(l)
    n = int(n)
    z = l - n + 2.0
    if z <= 0.0 and float(l).is_integer():
        return 0.0  # pole of Gamma(l-n+2): reciprocal vanishes
    log_mag = (
        math.log(4.0 * n - 1.0)
        - math.log(2.0)
        - _LOG_SQRT_PI
        + gammaln(l + 2.0)
        + gammaln(l + 1.5)
        + gammaln(n - 0.5)
        - gammaln(z)
        - gammaln(n + 1.0)
        - gammaln(n + l + 1.5)
    )
    return float(gammasgn(z)) * math.exp(log_mag)


def gamma_ratio_Cn(n: int, l: float) -> float:
    """C_n = B_n / 2, the coupling constant of the derivative scheme."""
    return 0.5 * gamma_ratio_Bn(n, l)


# ---------------------------------------------------------------------------
# Legendre polynomial coefficients (exact rationals internally)
# ---------------------------------------------------------------------------

#: Largest n for which legendre_even_coeffs(n) (order 2n) is served.
LEGENDRE_ORDER_CAP = 30


@dataclass(frozen=True)
class LegendreCoeffRow:
    """Coefficients l_{k,n} of P_n(x) = sum_k l_{k,n} x^k.

    ``coeffs[k]`` is the float coefficient of x^k; ``exact`` holds the same
    numbers as exact rationals.  Entries with k, n of opposite parity are
    exactly zero.
    """

    order: int
    coeffs: np.ndarray
    exact: tuple[Fraction, ...]

    def __post_init__(self):
        self.coeffs.flags.writeable = False


@lru_cache(maxsize=None)
def _legendre_exact(order: int) -> tuple[Fraction, ...]:
    # Bonnet recurrence (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1} in exact rationals.
    if order == 0:
        return (Fraction(1),)
    prev = [Fraction(1)]
    cur = [Fraction(0), Fraction(1)]
    for k in range(1, order):
        nxt = [Fraction(0)] * (k + 2)
        for p, c in enumerate(cur):
            nxt[p + 1] += Fraction(2 * k + 1, k + 1) * c
        for p, c in enumerate(prev):
            nxt[p] -= Fraction(k, k + 1) * c
        prev, cur = cur, nxt
    return tuple(cur)


def legendre_even_coeffs(n: int) -> LegendreCoeffRow:
    """Exact coefficients of the Legendre polynomial P_{2n}.

    The Bonnet recurrence is carried in exact rational arithmetic and
    converted to floating point only at this boundary, so the rapid
    growth of the coefficients costs no accuracy here.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    if n > LEGENDRE_ORDER_CAP:
        raise OrderCapError(
            f"P_{2 * n} coefficients not served (cap n={LEGENDRE_ORDER_CAP}); "
            "use the recurrent coefficient path for high orders"
        )
    exact = _legendre_exact(2 * int(n))
    return LegendreCoeffRow(order=2 * int(n), coeffs=np.array([float(c) for c in exact]), exact=exact)

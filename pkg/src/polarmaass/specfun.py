"""Scalar special functions.

The Gauss hypergeometric function is taken from :func:`scipy.special.hyp2f1`,
which is accurate to a few ulps on every parameter family used here
(including arguments close to 1 with integral ``c - a - b``).  Everything
else is assembled from it in closed form.  All functions accept numpy arrays
for their continuous argument.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import DomainError


def _is_nonpositive_integer(c: float) -> bool:
    return c <= 0 and float(c).is_integer()


def gauss_2f1(a: float, b: float, c: float, w):
    """Gauss hypergeometric function ``2F1(a, b; c; w)`` for real ``w < 1``.

    Parameters
    ----------
    a, b, c : float
        Parameters; ``c`` must not be a non-positive integer.
    w : float or ndarray
        Argument(s), all strictly below 1.

    Raises
    ------
    DomainError
        If ``w >= 1`` anywhere or ``c`` is a pole of the series.
    """
    if _is_nonpositive_integer(c):
        raise DomainError(f"c = {c} is a non-positive integer")
    w_arr = np.asarray(w, dtype=float)
    if np.any(w_arr >= 1.0):
        raise DomainError("2F1 argument must be < 1")
    out = special.hyp2f1(a, b, c, w_arr)
    return float(out) if np.ndim(out) == 0 else out


def gamma_half(k: int) -> float:
    """``Gamma(k + 1/2)`` by upward recursion from ``Gamma(1/2) = sqrt(pi)``."""
    g = math.sqrt(math.pi)
    for j in range(k):
        g *= j + 0.5
    return g


def _check_Z(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    if np.any(Z <= 1.0):
        raise DomainError("Legendre Q requires Z > 1")
    return Z


def legendre_q_assoc(k: int, j: int, Z):
    """Associated Legendre function of the second kind ``Q^j_{k-1}(Z)``, ``Z > 1``.

    Uses the hypergeometric representation

    ``(-1)^j (k+j-1)! sqrt(pi) / (2^k Gamma(k+1/2)) (Z^2-1)^{j/2} Z^{-k-j}
    2F1((k+j+1)/2, (k+j)/2; k+1/2; 1/Z^2)``.
    """
    if k < 1 or j < 0:
        raise DomainError("need k >= 1 and j >= 0")
    Z = _check_Z(Z)
    pref = (-1) ** j * math.factorial(k + j - 1) * math.sqrt(math.pi) / (2.0**k * gamma_half(k))
    F = special.hyp2f1((k + j + 1) / 2.0, (k + j) / 2.0, k + 0.5, 1.0 / Z**2)
    out = pref * (Z**2 - 1.0) ** (j / 2.0) * Z ** (-k - j) * F
    return float(out) if np.ndim(out) == 0 else out


def legendre_q(k: int, Z):
    """Legendre function of the second kind ``Q_{k-1}(Z)`` for ``Z > 1``."""
    return legendre_q_assoc(k, 0, Z)


def incomplete_beta(y, alpha: float, beta: float):
    """Incomplete beta function ``int_0^y t^(alpha-1) (1-t)^(beta-1) dt``.

    ``beta`` may be zero or negative; the integrand is then singular only at
    ``t = 1``, which is excluded by requiring ``0 <= y < 1``.  Computed as
    ``y^alpha / alpha * 2F1(1 - beta, alpha; alpha + 1; y)``.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0) or np.any(y >= 1.0):
        raise DomainError("incomplete beta requires 0 <= y < 1")
    out = y**alpha / alpha * special.hyp2f1(1.0 - beta, alpha, alpha + 1.0, y)
    return float(out) if np.ndim(out) == 0 else out


def c_const(a: int, b: int) -> float:
    """``C_{a,b} = sum_{0 <= j <= a-1, j != -b} binom(a-1, j) (-1)^j / (j + b)``."""
    if a < 1:
        raise DomainError("a must be a positive integer")
    return float(
        sum(math.comb(a - 1, j) * (-1) ** j / (j + b) for j in range(a) if j != -b)
    )


def beta0(y, a: int, b: int):
    """Regularised incomplete beta ``beta_0(y; a, b) = beta(y; a, b) - C_{a,b}``.

    For a positive integer ``b`` the constant is the complete beta ``B(a, b)``,
    so for ``y > 1/2`` the value ``-beta(1 - y; b, a)`` is returned instead of
    the difference, which would cancel catastrophically as ``y -> 1``.
    """
    y_arr = np.asarray(y, dtype=float)
    if b >= 1 and np.all((y_arr > 0.5) & (y_arr < 1.0)):
        return -incomplete_beta(1.0 - y_arr, b, a)
    return incomplete_beta(y, a, b) - c_const(a, b)


def complete_beta(k: int) -> float:
    """``beta(k, k) = Gamma(k)^2 / Gamma(2k)``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return math.factorial(k - 1) ** 2 / math.factorial(2 * k - 1)


def sinh_power_integral(k: int, one_minus_r2):
    """``int_0^{artanh((1-r^2)/(1+r^2))} sinh^(2k-2)(t) dt`` in closed form.

    The argument is ``Y = 1 - r^2`` in ``(0, 1]``; the value is
    ``2^(1-2k) beta(Y; 2k-1, 1-k)``.
    """
    return 2.0 ** (1 - 2 * k) * incomplete_beta(one_minus_r2, 2 * k - 1, 1 - k)

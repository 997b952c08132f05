"""Higher Green's functions ``G_k(z, zz)`` and their iterated raisings.

``G_k(z, zz) = -sum_{M in SL2(Z)} Q_{k-1}(cosh d(z, M zz))``.  The sum is over
all of SL2(Z), so every orbit point ``w`` of ``zz`` is hit by ``2 omega_zz``
matrices; near the diagonal this produces the singularity
``2 omega_zz log r_zz(z)``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from .errors import DomainError
from .hyperbolic import as_point, orbit_in_ball, stabilizer_order, x_coord
from .modforms import DEFAULT_POLICY, EvalResult, _check_k, _cosh, _finish, _guard, _radius
from .qform import SumPolicy, _as_form, cm_point
from .specfun import complete_beta, legendre_q


def _setup(k, z, zz, policy, center):
    k = _check_k(k)
    z = as_point(z)
    zz = as_point(zz)
    center = z if center is None else as_point(center)
    orb = orbit_in_ball(zz, center, _radius(policy))
    _guard(z, orb.w)
    return k, z, zz, orb


def eval_green(k: int, z, zz, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """Higher Green's function ``G_k(z, zz)``."""
    k, z, zz, orb = _setup(k, z, zz, policy, center)
    mult = 2 * stabilizer_order(zz)
    terms = -mult * legendre_q(k, np.atleast_1d(_cosh(z, orb.w))) + 0j
    c = z if center is None else as_point(center)
    return _finish(terms, _cosh(c, orb.w), k, policy)


def raised_legendre_term(k: int, j: int, z, w):
    """Closed form of ``R_{0,z}^j Q_{k-1}(cosh d(z, w))``.

    ``2^k (k-1)! (k+j-1)! / (2k-1)! * (-1)^j (R_0 cosh d)^j / (2 cosh^{k+j} d)
    * 2F1((k+j+1)/2, (k+j)/2; k+1/2; 1/cosh^2 d)`` with
    ``R_0 cosh d = -(conj z - w)^2 conj(X_w(z)) / (2 y^2 Im w)``.
    """
    ch = _cosh(z, w)
    y = np.imag(z)
    R0 = -((np.conj(z) - w) ** 2) * np.conj(x_coord(w, z)) / (2.0 * y**2 * np.imag(w))
    const = 2.0**k * math.factorial(k - 1) * math.factorial(k + j - 1) / math.factorial(2 * k - 1)
    F = special.hyp2f1((k + j + 1) / 2.0, (k + j) / 2.0, k + 0.5, 1.0 / ch**2)
    return const * (-1) ** j * R0**j / (2.0 * ch ** (k + j)) * F


def eval_raised_green(k: int, j: int, z, zz, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """``R_{0,z}^j G_k(z, zz)``, raised termwise in closed form."""
    j = int(j)
    if j < 0:
        raise DomainError("j must be >= 0")
    k, z, zz, orb = _setup(k, z, zz, policy, center)
    mult = 2 * stabilizer_order(zz)
    terms = -mult * np.atleast_1d(raised_legendre_term(k, j, z, orb.w)).astype(complex)
    c = z if center is None else as_point(center)
    return _finish(terms, _cosh(c, orb.w), k, policy)


def fn_from_green(k: int, n: int, z, zz, policy: SumPolicy = DEFAULT_POLICY, center=None) -> complex:
    """``F_n(z, zz)`` expressed through raised Green's functions.

    For ``n <= k``:
    ``-(2k-1)! / (2^k omega (k-1)! (2k-n-1)!) * y^{2k-2n} conj(R_0^{k-n} G_k)``;
    for ``n > k``: ``-(2k-1)! / (2^k omega (k-1)! (n-1)!) * R_0^{n-k} G_k``.
    """
    k = _check_k(k)
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    z = as_point(z)
    omega = stabilizer_order(zz)
    base = math.factorial(2 * k - 1) / (2.0**k * omega * math.factorial(k - 1))
    if n <= k:
        R = eval_raised_green(k, k - n, z, zz, policy, center).value
        return -base / math.factorial(2 * k - n - 1) * z.imag ** (2 * k - 2 * n) * R.conjugate()
    R = eval_raised_green(k, n - k, z, zz, policy, center).value
    return -base / math.factorial(n - 1) * R


def fkq_from_green(k: int, Q, z, policy: SumPolicy = DEFAULT_POLICY, center=None) -> complex:
    """``F_{k,Q}(z) = -G_k(z, tau_Q) / (2^k omega beta(k, k))``."""
    k =_check_k(k)
    tau = cm_point(_as_form(Q))
    G = eval_green(k, z, tau, policy, center).value
    return -G / (2.0**k * stabilizer_order(tau) * complete_beta(k))

"""Evaluators for the meromorphic and polar harmonic families.

Every infinite sum runs over an SL2(Z)-orbit ``{w}`` (CM points ``tau_Q`` of
the forms in a class, or images ``M zz`` of a second variable) truncated to
the hyperbolic ball ``cosh d(center, w) <= C`` with ``C`` the policy's
``coefficient_bound``.  ``center`` defaults to the evaluation point.  Passing
a fixed ``center`` freezes the set of terms, which is what finite-difference
and contour-integral consumers need.

Terms of all families decay like ``cosh(d)^(-k)`` while the number of orbit
points grows linearly in ``cosh d``.  The reported ``tail_bound`` compares
the truncated tail with the outermost shell ``C/2 < cosh d <= C``: each
further doubling shell is assumed to carry at most ``2^(1-k)`` times the
previous one, and the resulting geometric series is doubled to absorb the
fluctuation of the orbit-point count between shells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .errors import DomainError, SingularPointError
from .hyperbolic import as_point, orbit_in_ball, stabilizer, x_coord
from .qform import BinaryQuadraticForm, SumPolicy, _as_form, class_representatives, cm_point, reduce
from .specfun import sinh_power_integral

DEFAULT_POLICY = SumPolicy()
SINGULAR_RADIUS = 1e-6
TAIL_SAFETY = 2.0


@dataclass(frozen=True)
class EvalResult:
    """Value of a truncated lattice sum.

    Attributes
    ----------
    value : complex
        The truncated sum.
    tail_bound : float
        Integral-comparison estimate of the omitted tail.
    terms_used : int
        Number of summands.
    converged : bool
        ``tail_bound <= tail_tolerance * max(1, |value|)``.
    """

    value: complex
    tail_bound: float
    terms_used: int
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "tail_bound": self.tail_bound,
            "terms_used": self.terms_used,
            "converged": self.converged,
        }


def _check_k(k: int) -> int:
    k = int(k)
    if k < 2:
        raise DomainError("weight parameter k must be >= 2")
    return k


def _radius(policy: SumPolicy) -> float:
    return float(policy.coefficient_bound)


def _guard(z: complex, w: np.ndarray) -> None:
    if len(w) and np.min(np.abs(x_coord(w, z))) < SINGULAR_RADIUS:
        raise SingularPointError(f"z = {z} is a singular point (orbit point within r < {SINGULAR_RADIUS})")


def _finish(terms: np.ndarray, cosh_d: np.ndarray, k: int, policy: SumPolicy) -> EvalResult:
    C = _radius(policy)
    mags = np.abs(terms)
    order = np.argsort(-mags, kind="stable")
    value = complex(np.sum(terms[order]))
    shell = mags[cosh_d > C / 2.0].sum()
    tail = float(TAIL_SAFETY * shell / (2.0 ** (k - 1) - 1.0))
    converged = tail <= policy.tail_tolerance * max(1.0, abs(value))
    return EvalResult(value, tail, int(len(terms)), bool(converged))


# ---------------------------------------------------------------------------
# class sums over [Q]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassOrbit:
    """Forms ``[A, B, C]`` of a class with their CM points ``w``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    w: np.ndarray
    D: int


def class_orbit(Q, center: complex, cosh_radius: float) -> ClassOrbit:
    """Members of ``[Q]`` whose CM point lies in the ball around ``center``.

    Each member is ``Q o N^{-1}`` for the orbit matrix ``N`` with
    ``N tau_Q = tau_{Q o N^{-1}}``; coefficients are exact integers.
    """
    Q = _as_form(Q)
    if not Q.is_positive_definite():
        raise DomainError(f"{Q} is not positive definite")
    orb = orbit_in_ball(cm_point(Q), center, cosh_radius)
    a, b, c, d = orb.a, orb.b, orb.c, orb.d
    A = Q.a * d * d - Q.b * c * d + Q.c * c * c
    B = -2 * Q.a * b * d + Q.b * (a * d + b * c) - 2 * Q.c * a * c
    C = Q.a * b * b - Q.b * a * b + Q.c * a * a
    w = (-B + 1j * math.sqrt(Q.D)) / (2.0 * A)
    return ClassOrbit(A, B, C, w, Q.D)


def _class_setup(k, Q, z, policy, center):
    k = _check_k(k)
    z = as_point(z)
    center = z if center is None else as_point(center)
    orb = class_orbit(Q, center, _radius(policy))
    _guard(z, orb.w)
    Af, Bf, Cf = (orb.A.astype(float), orb.B.astype(float), orb.C.astype(float))
    q = (Af * z + Bf) * z + Cf
    qz = (Af * abs(z) ** 2 + Bf * z.real + Cf) / z.imag
    cosh_center = (Af * abs(center) ** 2 + Bf * center.real + Cf) / center.imag / math.sqrt(orb.D)
    return k, z, orb, q, qz, cosh_center


def eval_fQ(k: int, Q, z, policy: SumPolicy = DEFAULT_POLICY, center=None, summation: str = "ball") -> EvalResult:
    """``f_Q(z) = D^{k/2} sum_{Q' in [Q]} Q'(z, 1)^{-k}``.

    ``summation="ball"`` (default) keeps the class members whose CM point lies
    in the truncation ball; ``"strip"`` sums every translation class
    ``Q' o T^t`` exactly and truncates ``a' <= C``, which resolves the
    exponential decay at the cusp.
    """
    if _check_summation(summation) == "strip":
        k = _check_k(k)
        Q = _as_form(Q)
        if not Q.is_positive_definite():
            raise DomainError(f"{Q} is not positive definite")
        return _definite_strips(k, Q, as_point(z), policy)
    k, z, orb, q, qz, ch = _class_setup(k, Q, z, policy, center)
    terms = orb.D ** (k / 2.0) * q ** (-k)
    return _finish(terms, ch, k, policy)


def eval_f_kD(k: int, D: int, z, policy: SumPolicy = DEFAULT_POLICY, center=None, summation: str = "ball") -> EvalResult:
    """``f_{k,-D}``: sum of ``f_{k,-D,[Q]}`` over positive and negative definite classes.

    Negative-definite classes are the negatives of positive-definite ones;
    their terms ``(-Q')(z,1)^{-k}`` are summed directly.
    """
    k = _check_k(k)
    value, tail, used, conv = 0j, 0.0, 0, True
    if _check_summation(summation) == "strip":
        for Q in class_representatives(D):
            r = _definite_strips(k, Q, as_point(z), policy)
            # (-Q')(z,1)^{-k} = (-1)^k Q'(z,1)^{-k}
            value += (1 + (-1) ** k) * r.value
            tail += 2 * r.tail_bound
            used += 2 * r.terms_used
        conv = tail <= policy.tail_tolerance * max(1.0, abs(value))
        return EvalResult(value, tail, used, conv)
    for Q in class_representatives(D):
        _, _, orb, q, _, ch = _class_setup(k, Q, z, policy, center)
        pos = orb.D ** (k / 2.0) * q ** (-k)
        neg = orb.D ** (k / 2.0) * (-q) ** (-k)
        for terms in (pos, neg):
            r = _finish(terms, ch, k, policy)
            value += r.value
            tail += r.tail_bound
            used += r.terms_used
    conv = tail <= policy.tail_tolerance * max(1.0, abs(value))
    return EvalResult(value, tail, used, conv)


def eval_GQ(k: int, Q, z, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """Weight ``2-2k`` polar harmonic form ``G_Q``.

    ``D^{(1-k)/2} sum Q'(z,1)^{k-1} int_0^{artanh(sqrt(D)/Q'_z)} sinh^{2k-2}``,
    where the integral is ``2^{1-2k} beta(1-r^2; 2k-1, 1-k)`` with
    ``1 - r^2 = 2 y sqrt(D) / (a' |z - conj(tau_Q')|^2)``.
    """
    k, z, orb, q, qz, ch = _class_setup(k, Q, z, policy, center)
    one_minus_r2 = 2.0 * z.imag * math.sqrt(orb.D) / (orb.A * np.abs(z - np.conj(orb.w)) ** 2)
    integral = sinh_power_integral(k, one_minus_r2)
    terms = orb.D ** ((1.0 - k) / 2.0) * q ** (k - 1) * integral
    return _finish(terms, ch, k, policy)


def eval_g1mk(k: int, z) -> complex:
    """Disk test function ``g_{1-k}(z) = z^{k-1} int_0^{artanh((1-|z|^2)/(1+|z|^2))} sinh^{2k-2}``."""
    k = _check_k(k)
    z = np.asarray(z, dtype=complex)
    r2 = np.abs(z) ** 2
    if np.any(r2 >= 1.0) or np.any(r2 == 0.0):
        raise DomainError("g_{1-k} is defined for 0 < |z| < 1")
    out = z ** (k - 1) * sinh_power_integral(k, 1.0 - r2)
    return complex(out) if np.ndim(out) == 0 else out


def eval_GQ_poincare(k: int, Q, z, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """``G_Q`` as the Poincare series ``(i^{k-1}/2) sum g_{1-k} |_{2-2k} A M``.

    ``A = (2 v_Q)^{-1/2} [[1, -tau_Q], [-i, i conj(tau_Q)]]`` maps ``tau_Q``
    to the disk centre.  Cosets of ``Gamma_Q`` are indexed by orbit matrices
    ``N`` (``M = N^{-1}``); ``M`` and ``-M`` contribute equally.
    """
    k = _check_k(k)
    Q = _as_form(Q)
    z = as_point(z)
    center = z if center is None else as_point(center)
    tau = cm_point(Q)
    v = tau.imag
    orb = orbit_in_ball(tau, center, _radius(policy))
    _guard(z, orb.w)
    # M = N^{-1} = [[d, -b], [-c, a]]
    Ma, Mb, Mc, Md = orb.d, -orb.b, -orb.c, orb.a
    jM = Mc * z + Md
    u = (Ma * z + Mb) / jM
    jA = -1j * (u - np.conj(tau)) / math.sqrt(2.0 * v)
    X = (u - tau) / (u - np.conj(tau))
    slash = (jA * jM) ** (2 * k - 2) * eval_g1mk(k, 1j * X)
    terms = 2.0 * (1j ** (k - 1) / 2.0) * slash
    ch = np.real(1.0 + np.abs(center - orb.w) ** 2 / (2.0 * center.imag * orb.w.imag))
    return _finish(terms, ch, k, policy)


def eval_FnQ(k: int, n: int, Q, z, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """``F_{n,Q} = D^{k/2} sum Q'_z^{n-2k} Q'(z,1)^{k-n} 2F1(k-(n-1)/2, k-n/2; k+1/2; D/Q'_z^2)``."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    k, z, orb, q, qz, ch = _class_setup(k, Q, z, policy, center)
    F = special.hyp2f1(k - (n - 1) / 2.0, k - n / 2.0, k + 0.5, orb.D / qz**2)
    terms = orb.D ** (k / 2.0) * qz ** (n - 2 * k) * q ** (k - n) * F
    return _finish(terms, ch, k, policy)


# ---------------------------------------------------------------------------
# indefinite forms
# ---------------------------------------------------------------------------


def _indefinite_forms(delta: int, z: complex, L: float):
    """All forms of discriminant ``delta > 0`` with ``a > 0`` and ``|Q_z| <= L``."""
    x, y = z.real, z.imag
    As, Bs = [], []
    amax = int(math.ceil(L / y + math.sqrt(delta) / y + 1))
    for a in range(1, amax + 1):
        W2 = (L * y + delta / (4.0 * a)) / a - y * y
        if W2 < 0:
            continue
        W = math.sqrt(W2)
        blo = math.ceil(-2 * a * (x + W))
        bhi = math.floor(-2 * a * (x - W))
        b = np.arange(blo, bhi + 1, dtype=np.int64)
        b = b[(b * b - delta) % (4 * a) == 0]
        As.append(np.full(len(b), a, dtype=np.int64))
        Bs.append(b)
    A = np.concatenate(As) if As else np.zeros(0, dtype=np.int64)
    B = np.concatenate(Bs) if Bs else np.zeros(0, dtype=np.int64)
    C = (B * B - delta) // (4 * A)
    qz = (A * abs(z) ** 2 + B * x + C) / y
    keep = np.abs(qz) <= L
    return A[keep], B[keep], C[keep]


def eval_f_kdelta(k: int, delta: int, z, policy: SumPolicy = DEFAULT_POLICY, summation: str = "ball") -> EvalResult:
    """Cusp form ``f_{k,delta} = sum_{disc Q = delta} Q(z,1)^{-k}`` for ``delta > 0``.

    The sum runs over forms with ``|Q_z| <= sqrt(delta) * C``; ``Q_z/sqrt(delta)``
    is the hyperbolic sine of the distance from ``z`` to the geodesic of ``Q``,
    so the truncation region is again SL2(Z)-equivariant.  Negative-``a``
    forms are the negatives of the enumerated ones.  ``summation="strip"``
    sums translation classes exactly and truncates ``|a| <= C`` instead.
    """
    k = _check_k(k)
    delta = int(delta)
    if delta <= 0 or delta % 4 not in (0, 1):
        raise DomainError(f"{delta} is not a positive discriminant")
    if math.isqrt(delta) ** 2 == delta:
        raise DomainError("square discriminants are not supported")
    z = as_point(z)
    if _check_summation(summation) == "strip":
        return _indefinite_strips(k, delta, z, policy)
    L = math.sqrt(delta) * _radius(policy)
    A, B, C = _indefinite_forms(delta, z, L)
    q = (A * z + B) * z + C
    qz = (A * abs(z) ** 2 + B * z.real + C) / z.imag
    terms = np.concatenate([q ** (-k), (-q) ** (-k)])
    scale = np.concatenate([np.abs(qz), np.abs(qz)]) / math.sqrt(delta)
    return _finish(terms, scale, k, policy)


# ---------------------------------------------------------------------------
# strip summation (exact in the translation direction)
# ---------------------------------------------------------------------------
#
# All forms Q o T^t (t in Z) share the leading coefficient a, so
# sum_t Q(z + t, 1)^{-k} = a^{-k} sum_t ((u + t)(u + t - Delta))^{-k} with
# u = z - alpha, Delta = alpha' - alpha for the roots alpha, alpha' of Q(., 1).
# Partial fractions reduce this to the lattice sums sum_t (u + t)^{-j}, whose
# q-expansions (Lipschitz formula) are exponentially small at the cusp.  The
# only truncation is then |a| <= C, and every retained term decays like the
# form itself as y -> infinity.

_STRIP_MAX_TERMS = 20000
_STRIP_SERIES_EPS = 1e-18


def _lipschitz(u: np.ndarray, j: int) -> np.ndarray:
    """``sum_t (u + t)^{-j}``, omitting the constant ``-i pi sign(Im u)`` when ``j = 1``.

    Uses ``sum_t (u + t)^{-j} = (-2 pi i)^j / (j-1)! sum_{n>=1} n^{j-1} e^{2 pi i n u}``
    for ``Im u > 0`` and the reflection ``u -> -u`` otherwise; the weights are
    combined in log space so large ``j`` cannot overflow.
    """
    s = np.sign(u.imag)
    h = np.abs(u.imag)
    if np.any(h == 0):
        raise SingularPointError("strip summation needs z off the horizontal lines through the roots")
    n_terms = int(np.ceil((2.0 * (j - 1) + 90.0) / (2 * math.pi * h.min()))) + 1
    if n_terms > _STRIP_MAX_TERMS:
        raise DomainError("z is too close to the height of a root for strip summation")
    n = np.arange(1, n_terms + 1, dtype=float)
    logw = (j - 1) * np.log(n) + j * math.log(2 * math.pi) - math.lgamma(j)
    terms = np.exp(logw[None, :] + 2j * math.pi * np.outer(s * u, n))
    return s**j * (-1j) ** j * terms.sum(axis=1)


def _strip_values(k: int, a: np.ndarray, u: np.ndarray, Delta: np.ndarray) -> np.ndarray:
    """``sum_t (a (u + t)(u + t - Delta))^{-k}`` for arrays of strips.

    Strips whose roots are close compared with their distance to ``z``
    (``|Delta| <= |Im c|`` for the midpoint ``c = u - Delta/2``) use the
    midpoint expansion ``((c+t)^2 - Delta^2/4)^{-k} = sum_m binom(k+m-1, m)
    (Delta^2/4)^m (c+t)^{-2k-2m}``; the others use partial fractions in the
    two roots.  Both are free of cancellation in their own regime.
    """
    total = np.zeros(len(u), dtype=complex)
    c = u - Delta / 2.0
    mid = np.abs(Delta) <= np.abs(c.imag)

    if np.any(mid):
        cm, dm = c[mid], Delta[mid]
        ratio = np.abs(dm) / (2.0 * np.abs(cm.imag))
        with np.errstate(divide="ignore"):
            M = np.where(ratio > 0, np.ceil(math.log(_STRIP_SERIES_EPS) / (2.0 * np.log(np.maximum(ratio, 1e-300)))), 0)
        acc = np.zeros(len(cm), dtype=complex)
        for m in range(int(M.max()) + 1):
            sel = M >= m
            acc[sel] += math.comb(k + m - 1, m) * (dm[sel] ** 2 / 4.0) ** m * _lipschitz(cm[sel], 2 * k + 2 * m)
        total[mid] = acc

    far = ~mid
    if np.any(far):
        uf, df = u[far], Delta[far]
        acc = np.zeros(len(uf), dtype=complex)
        for j in range(1, k + 1):
            binom = math.comb(2 * k - j - 1, k - j)
            alpha = (-df) ** (-k) * binom * df ** (-(k - j))
            beta = df ** (-k) * binom * (-df) ** (-(k - j))
            acc += alpha * _lipschitz(uf, j) + beta * _lipschitz(uf - df, j)
        # the j = 1 constants cancel (alpha_1 + beta_1 = 0) unless the roots lie
        # on opposite sides of the horizontal line through z
        su, sw = np.sign(uf.imag), np.sign((uf - df).imag)
        alpha1 = (-df) ** (-k) * math.comb(2 * k - 2, k - 1) * df ** (1 - k)
        acc += np.where(su != sw, -1j * math.pi * (su - sw) * alpha1, 0.0)
        total[far] = acc
    return total * a.astype(float) ** (-k)


def _strip_residues(disc: int, A: int):
    """``(a, b)`` with ``1 <= a <= A``, ``-a <= b < a`` and ``b^2 = disc (mod 4a)``."""
    out_a, out_b = [], []
    for a in range(1, A + 1):
        b = np.arange(-a, a, dtype=np.int64)
        b = b[(b * b - disc) % (4 * a) == 0]
        out_a.append(np.full(len(b), a, dtype=np.int64))
        out_b.append(b)
    return np.concatenate(out_a), np.concatenate(out_b)


def _definite_strips(k: int, Q: BinaryQuadraticForm, z: complex, policy: SumPolicy) -> EvalResult:
    D = Q.D
    A, B = _strip_residues(-D, int(policy.coefficient_bound))
    target = reduce(Q)[0]
    keep = np.array([reduce(BinaryQuadraticForm(int(a), int(b), int((b * b + D) // (4 * a))))[0] == target for a, b in zip(A, B)])
    A, B = A[keep], B[keep]
    tau = (-B + 1j * math.sqrt(D)) / (2.0 * A)
    # guard: z on a translate of a CM point
    X = (z - tau - np.round((z - tau).real)) / (z - np.conj(tau) - np.round((z - tau).real))
    if len(X) and np.min(np.abs(X)) < SINGULAR_RADIUS:
        raise SingularPointError(f"z = {z} is a singular point")
    terms = D ** (k / 2.0) * _strip_values(k, A, z - tau, np.conj(tau) - tau)
    return _finish(terms, A.astype(float), k, policy)


def _indefinite_strips(k: int, delta: int, z: complex, policy: SumPolicy) -> EvalResult:
    A, B = _strip_residues(delta, int(policy.coefficient_bound))
    root = math.sqrt(delta)
    alpha = (-B + root) / (2.0 * A)
    alpha2 = (-B - root) / (2.0 * A)
    vals = _strip_values(k, A, z - alpha + 0j, alpha2 - alpha + 0j)
    # forms with a < 0 are the negatives of those with a > 0
    terms = np.concatenate([vals, (-1) ** k * vals])
    return _finish(terms, np.concatenate([A, A]).astype(float), k, policy)


def _check_summation(summation: str) -> str:
    if summation not in ("ball", "strip"):
        raise DomainError(f"unknown summation {summation!r} (use 'ball' or 'strip')")
    return summation


# ---------------------------------------------------------------------------
# two-variable families
# ---------------------------------------------------------------------------


def _cosh(z, w):
    return 1.0 + np.abs(z - w) ** 2 / (2.0 * np.imag(z) * np.imag(w))


def eval_fn_pair(k: int, n: int, z, zz):
    """Single term ``f_n(z, zz)`` of the two-variable family ``F_n``.

    ``(conj z - zz)^{2n-2k} / (2 cosh^n d) * (conj X_zz(z) / (2 y^2 Im zz))^{n-k}
    * 2F1(n/2, (n+1)/2; k+1/2; 1/cosh^2 d)``.  ``zz`` may be an array.
    """
    k = _check_k(k)
    ch = _cosh(z, zz)
    X = x_coord(zz, z)
    y = np.imag(z)
    F = special.hyp2f1(n / 2.0, (n + 1) / 2.0, k + 0.5, 1.0 / ch**2)
    out = (
        (np.conj(z) - zz) ** (2 * n - 2 * k)
        / (2.0 * ch**n)
        * (np.conj(X) / (2.0 * y**2 * np.imag(zz))) ** (n - k)
        * F
    )
    return complex(out) if np.ndim(out) == 0 else out


def eval_g_pair(k: int, z, zz):
    """Single term ``g(z, zz)`` of ``G_1``.

    ``(1/2) ((z - zz)(z - conj zz) / (2 Im zz))^{k-1} int_0^{arsinh(1/sinh d)} sinh^{2k-2}``,
    with the upper limit rewritten as ``artanh(1/cosh d) = artanh((1-r^2)/(1+r^2))``.
    """
    k = _check_k(k)
    zc = np.conj(zz)
    one_minus_r2 = 4.0 * np.imag(z) * np.imag(zz) / np.abs(z - zc) ** 2
    out = 0.5 * ((z - zz) * (z - zc) / (2.0 * np.imag(zz))) ** (k - 1) * sinh_power_integral(k, one_minus_r2)
    return complex(out) if np.ndim(out) == 0 else out


def _pair_setup(k, z, zz, policy, center):
    k = _check_k(k)
    z = as_point(z)
    zz = as_point(zz)
    center = z if center is None else as_point(center)
    orb = orbit_in_ball(zz, center, _radius(policy))
    _guard(z, orb.w)
    return k, z, orb, _cosh(center, orb.w)


def eval_Fn_pair(k: int, n: int, z, zz, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """``F_n(z, zz) = sum_{M in SL2(Z)/Gamma_zz} f_n(z, M zz)`` (each orbit point twice)."""
    k, z, orb, ch = _pair_setup(k, z, zz, policy, center)
    terms = 2.0 * eval_fn_pair(k, n, z, orb.w)
    return _finish(np.atleast_1d(terms), ch, k, policy)


def eval_G1_pair(k: int, z, zz, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """``G_1(z, zz) = sum_{M in SL2(Z)/Gamma_zz} g(z, M zz)`` (each orbit point twice)."""
    k, z, orb, ch = _pair_setup(k, z, zz, policy, center)
    terms = 2.0 * eval_g_pair(k, z, orb.w)
    return _finish(np.atleast_1d(terms), ch, k, policy)


def eval_psi(k2: int, m: int, z, zz, policy: SumPolicy = DEFAULT_POLICY, center=None) -> EvalResult:
    """Elliptic Poincare series ``Psi_{k2,m}(z, zz)``.

    ``sum_{M in SL2(Z)} ((z - conj zz)^{-k2} X_zz(z)^m) |_{k2} M``.  The
    matrices with ``M^{-1} zz = w`` for an orbit point ``w = N zz`` are
    ``gamma N^{-1}`` with ``gamma`` in the full stabiliser of ``zz`` (``+-``
    included), so each orbit point contributes ``2 omega`` summands.
    """
    k2 = int(k2)
    if k2 < 4 or k2 % 2:
        raise DomainError("Psi requires an even weight >= 4")
    m = int(m)
    k = k2 // 2
    z = as_point(z)
    zz = as_point(zz)
    center = z if center is None else as_point(center)
    orb = orbit_in_ball(zz, center, _radius(policy))
    if m < 0:
        _guard(z, orb.w)
    Na, Nb, Nc, Nd = orb.d, -orb.b, -orb.c, orb.a  # N^{-1}
    zzc = zz.conjugate()
    total = np.zeros(len(orb.w), dtype=complex)
    for g in stabilizer(zz):
        Ma = g.a * Na + g.b * Nc
        Mb = g.a * Nb + g.b * Nd
        Mc = g.c * Na + g.d * Nc
        Md = g.c * Nb + g.d * Nd
        j = Mc * z + Md
        u = (Ma * z + Mb) / j
        total += j ** (-k2) * (u - zzc) ** (-k2) * ((u - zz) / (u - zzc)) ** m
    return _finish(total, _cosh(center, orb.w), k, policy)


class _Variable:
    """Placeholder marking where :func:`field` inserts the evaluation point."""

    def __repr__(self) -> str:
        return "VAR"


VAR = _Variable()


def field(evaluator: Callable[..., EvalResult], *args, center, policy: SumPolicy = DEFAULT_POLICY) -> Callable[[complex], complex]:
    """Freeze an evaluator's truncation ball at ``center`` and return ``z -> value``.

    The point is appended to ``args`` unless one of them is :data:`VAR`, which
    is then replaced.  Examples: ``field(eval_GQ, 2, Q, center=2j)`` is
    ``z -> G_Q(z)``; ``field(eval_psi, 4, -2, VAR, zz, center=c)`` is
    ``z -> Psi_{4,-2}(z, zz)``; ``field(eval_green, 2, VAR, zz, center=c)``
    is ``z -> G_2(z, zz)``.
    """
    center = as_point(center)
    slots = [i for i, a in enumerate(args) if a is VAR]
    if len(slots) > 1:
        raise DomainError("at most one VAR placeholder")

    def f(z: complex) -> complex:
        if slots:
            full = list(args)
            full[slots[0]] = z
        else:
            full = list(args) + [z]
        return evaluator(*full, policy, center=center).value

    return f


# ---------------------------------------------------------------------------
# vectorised evaluators with a frozen truncation ball
# ---------------------------------------------------------------------------

_CHUNK = 256


def _chunked(z: np.ndarray, kernel: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for i in range(0, len(flat), _CHUNK):
        out[i : i + _CHUNK] = kernel(flat[i : i + _CHUNK])
    return out.reshape(z.shape)


def array_field(family: str, *args, center, policy: SumPolicy = DEFAULT_POLICY) -> Callable:
    """Vectorised weight ``2k`` meromorphic evaluator with a frozen term set.

    ``family`` is ``"fQ"`` (args ``k, Q``), ``"fkD"`` (args ``k, D``) or
    ``"psi"`` (args ``k2, m, zz``).  The returned callable accepts scalars or
    numpy arrays of points and sums over the orbit points in the ball around
    ``center``, exactly like :func:`field` does pointwise.
    """
    center = as_point(center)
    C = _radius(policy)
    if family in ("fQ", "fkD"):
        k = _check_k(args[0])
        if family == "fQ":
            forms = [(_as_form(args[1]), 1)]
        else:
            forms = [(R, s) for R in class_representatives(int(args[1])) for s in (1, -1)]
        blocks = []
        for Q, sign in forms:
            orb = class_orbit(Q, center, C)
            blocks.append((sign * orb.A.astype(float), sign * orb.B.astype(float), sign * orb.C.astype(float), orb.D))

        def kernel(z):
            total = np.zeros(z.shape, dtype=complex)
            for A, B, Cc, D in blocks:
                q = (A[:, None] * z[None, :] + B[:, None]) * z[None, :] + Cc[:, None]
                total += D ** (k / 2.0) * np.sum(q ** (-k), axis=0)
            return total

    elif family == "psi":
        k2, m, zz = int(args[0]), int(args[1]), as_point(args[2])
        if k2 < 4 or k2 % 2:
            raise DomainError("Psi requires an even weight >= 4")
        orb = orbit_in_ball(zz, center, C)
        Na, Nb, Nc, Nd = orb.d, -orb.b, -orb.c, orb.a
        mats = []
        for g in stabilizer(zz):
            mats.append(
                (
                    (g.a * Na + g.b * Nc).astype(float),
                    (g.a * Nb + g.b * Nd).astype(float),
                    (g.c * Na + g.d * Nc).astype(float),
                    (g.c * Nb + g.d * Nd).astype(float),
                )
            )
        zzc = zz.conjugate()

        def kernel(z):
            total = np.zeros(z.shape, dtype=complex)
            for Ma, Mb, Mc, Md in mats:
                j = Mc[:, None] * z[None, :] + Md[:, None]
                u = (Ma[:, None] * z[None, :] + Mb[:, None]) / j
                total += np.sum(j ** (-k2) * (u - zzc) ** (-k2) * ((u - zz) / (u - zzc)) ** m, axis=0)
            return total

    else:
        raise DomainError(f"unknown family {family!r}")

    def f(z):
        arr = np.asarray(z, dtype=complex)
        out = _chunked(np.atleast_1d(arr), kernel)
        return complex(out[0]) if arr.ndim == 0 else out

    return f

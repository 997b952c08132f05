"""Elliptic expansions around points of the upper half-plane.

A weight ``2k`` meromorphic form is expanded as
``f(z) = (z - conj rho)^{-2k} sum_n a_f(rho; n) X_rho(z)^n`` and a weight
``2 - 2k`` polar harmonic Maass form as
``F(z) = (z - conj rho)^{2k-2} sum_n [a^+(n) + a^-(n) beta_0(1 - r^2; 2k-1, -n)] X^n``.

Coefficients are extracted numerically from equispaced samples on circles
``X_rho(z) = R e^{i theta}``, using the exact preimage
``z(theta) = (rho - conj(rho) R e^{i theta}) / (1 - R e^{i theta})``.
The number of samples is doubled until the wanted coefficients stabilise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Tuple

import numpy as np

from .errors import ContourError, DomainError, SingularPointError
from .hyperbolic import as_point, point_to_json, reduce_point
from .modforms import DEFAULT_POLICY, _check_k, class_orbit, eval_FnQ
from .qform import SumPolicy, _as_form, cm_point
from .specfun import beta0, sinh_power_integral

FieldFunction = Callable[[complex], complex]

MIN_SAMPLES = 256
MAX_SAMPLES = 4096
STABILITY_TOL = 1e-9
ZERO_CUTOFF = 1e-12


@dataclass
class EllipticExpansion:
    """Elliptic expansion coefficients of a form around ``center``.

    ``plus_coeffs`` holds ``a_f(rho; n)`` (meromorphic forms) or ``a^+(n)``
    (polar harmonic Maass forms); ``minus_coeffs`` is empty for meromorphic
    input.  ``weight_k`` is ``k`` where the weight is ``2k`` or ``2 - 2k``.
    """

    center: complex
    weight_k: int
    plus_coeffs: Dict[int, complex] = field(default_factory=dict)
    minus_coeffs: Dict[int, complex] = field(default_factory=dict)
    radius_used: float = 0.0

    def principal_part(self) -> Dict[int, complex]:
        """Nonzero ``plus_coeffs`` with negative index."""
        return {n: a for n, a in self.plus_coeffs.items() if n < 0 and a != 0}

    def to_dict(self) -> dict:
        def enc(d):
            return {str(n): [complex(a).real, complex(a).imag] for n, a in sorted(d.items())}

        return {
            "center": point_to_json(self.center),
            "k": self.weight_k,
            "plus": enc(self.plus_coeffs),
            "minus": enc(self.minus_coeffs),
            "radius": self.radius_used,
        }


def preimage(rho: complex, R: float, theta) -> np.ndarray:
    """Points ``z`` with ``X_rho(z) = R e^{i theta}``."""
    X = R * np.exp(1j * np.asarray(theta, dtype=float))
    return (rho - np.conj(rho) * X) / (1.0 - X)


def evaluate_many(F: FieldFunction, z: np.ndarray) -> np.ndarray:
    """Evaluate ``F`` on an array of points, vectorised when ``F`` supports it."""
    try:
        vals = np.asarray(F(z), dtype=complex)
        if vals.shape == z.shape:
            return vals
    except Exception:  # scalar-only callables reject arrays
        pass
    return np.array([F(complex(p)) for p in z], dtype=complex)


def _check_radius(R: float) -> float:
    R = float(R)
    if not 0 < R < 1:
        raise DomainError("radius must lie in (0, 1)")
    return R


def _angular_modes(F: FieldFunction, rho: complex, weight: int, R: float, ns, samples: int) -> np.ndarray:
    """``mean_theta (z - conj rho)^weight F(z(theta)) e^{-i n theta}`` for n in ``ns``."""
    theta = 2.0 * np.pi * np.arange(samples) / samples
    z = preimage(rho, R, theta)
    vals = evaluate_many(F, z)
    if not np.all(np.isfinite(vals)):
        raise ContourError("non-finite values on the sampling circle")
    g = (z - np.conj(rho)) ** weight * vals
    spec = np.fft.fft(g) / samples
    return np.array([spec[n % samples] for n in ns]), float(np.mean(np.abs(g)))


def _stable_modes(F, rho, weight, R, ns, samples=MIN_SAMPLES) -> Tuple[np.ndarray, int]:
    """Angular modes, doubling ``samples`` until successive values agree."""
    if samples & (samples - 1) or samples < 16:
        raise DomainError("samples must be a power of two >= 16")
    if 2 * max(abs(n) for n in ns) >= samples:
        raise DomainError("too few samples for the requested index range")
    prev, _ = _angular_modes(F, rho, weight, R, ns, samples)
    while samples < MAX_SAMPLES:
        samples *= 2
        cur, size = _angular_modes(F, rho, weight, R, ns, samples)
        scale = max(np.max(np.abs(cur)), size, 1e-300)
        if np.max(np.abs(cur - prev)) <= STABILITY_TOL * scale:
            return cur, samples
        prev = cur
    raise ContourError("elliptic coefficients did not stabilise; a pole is probably near the circle")


def _zero_small(d: Dict[int, complex]) -> Dict[int, complex]:
    if not d:
        return d
    top = max(abs(a) for a in d.values())
    return {n: (0j if abs(a) < ZERO_CUTOFF * top else complex(a)) for n, a in d.items()}


def mero_coeffs(
    f: FieldFunction, rho, k: int, n_range: Iterable[int], R: float = 0.25, samples: int = MIN_SAMPLES
) -> EllipticExpansion:
    """Elliptic coefficients ``a_f(rho; n)`` of a weight ``2k`` meromorphic form.

    ``a_f(rho; n) = R^{-n} mean_theta (z - conj rho)^{2k} f(z(theta)) e^{-i n theta}``.
    The circle ``r_rho = R`` must avoid the poles of ``f``.
    """
    rho = as_point(rho)
    R = _check_radius(R)
    ns = list(n_range)
    modes, _ = _stable_modes(f, rho, 2 * k, R, ns, samples)
    coeffs = {n: modes[i] / R**n for i, n in enumerate(ns)}
    return EllipticExpansion(rho, k, _zero_small(coeffs), {}, R)


def polar_coeffs(
    F: FieldFunction,
    rho,
    k: int,
    n_range: Iterable[int],
    R1: float = 0.2,
    R2: float = 0.35,
    samples: int = MIN_SAMPLES,
) -> EllipticExpansion:
    """``a^+(n)`` and ``a^-(n)`` of a weight ``2 - 2k`` polar harmonic Maass form.

    At radius ``R`` the ``n``-th angular mode of ``(z - conj rho)^{2-2k} F`` is
    ``(a^+(n) + a^-(n) beta_0(1 - R^2; 2k-1, -n)) R^n``; two radii determine
    both coefficients.
    """
    rho = as_point(rho)
    R1, R2 = _check_radius(R1), _check_radius(R2)
    if R1 == R2:
        raise DomainError("the two radii must differ")
    ns = list(n_range)
    m1, _ = _stable_modes(F, rho, 2 - 2 * k, R1, ns, samples)
    m2, _ = _stable_modes(F, rho, 2 - 2 * k, R2, ns, samples)
    plus, minus = {}, {}
    for i, n in enumerate(ns):
        b1 = beta0(1.0 - R1 * R1, 2 * k - 1, -n)
        b2 = beta0(1.0 - R2 * R2, 2 * k - 1, -n)
        det = b2 - b1
        if abs(det) < 1e-10 * max(abs(b1), abs(b2), 1.0):
            raise DomainError(f"separation system singular at n={n}; choose other radii")
        c1, c2 = m1[i] / R1**n, m2[i] / R2**n
        minus[n] = (c2 - c1) / det
        plus[n] = (c1 * b2 - c2 * b1) / det
    return EllipticExpansion(rho, k, _zero_small(plus), _zero_small(minus), R2)


def residue_at(f: FieldFunction, rho, R: float = 0.25, samples: int = MIN_SAMPLES) -> complex:
    """``Res_{z=rho} f`` from the contour ``r_rho(z) = R``.

    With ``X = R e^{i theta}``, ``dz = (rho - conj rho) X / (1 - X)^2 i d theta``.
    """
    rho = as_point(rho)
    R = _check_radius(R)

    # the residue is the 0-th mode of f(z) (rho - conj rho) X / (1 - X)^2
    def integrand(z):
        X = (z - rho) / (z - rho.conjugate())
        return f(z) * (rho - rho.conjugate()) * X / (1.0 - X) ** 2

    modes, _ = _stable_modes(integrand, rho, 0, R, [0], samples)
    return complex(modes[0])


def residue_from_expansion(expansion: EllipticExpansion) -> complex:
    """Residue at the centre of a weight ``2k`` form from its principal part.

    ``(z - conj rho)^{-2k} X^{-m} = (z - rho)^{-m} (z - conj rho)^{m-2k}`` has
    residue ``binom(m - 2k, m - 1) (2 i eta)^{1-2k}``; for a simple pole this
    is ``a(-1) / (2 i eta)^{2k-1}``.
    """
    rho = expansion.center
    k = expansion.weight_k
    total = 0j
    for n, a in expansion.principal_part().items():
        m = -n
        total += a * _gbinom(m - 2 * k, m - 1)
    return total * (2j * rho.imag) ** (1 - 2 * k)


def _gbinom(x: int, j: int) -> float:
    """Generalised binomial coefficient ``x (x-1) ... (x-j+1) / j!``."""
    out = 1.0
    for i in range(j):
        out *= (x - i) / (i + 1)
    return out


def a_plus_closed(k: int, n: int, Q, rho, policy: SumPolicy = DEFAULT_POLICY) -> complex:
    """Meromorphic coefficient ``a^+_{Q,rho}(n) = eta^{n-2k+2} (-4)^{1-k}/(2k-1) F_{n+1,Q}(rho)``.

    ``eta = Im rho``; ``rho`` must not be equivalent to ``tau_Q``.
    """
    k = _check_k(k)
    n = int(n)
    if n < 0:
        raise DomainError("n must be >= 0")
    rho = as_point(rho)
    Q = _as_form(Q)
    if _same_orbit(rho, cm_point(Q)):
        raise SingularPointError("rho is equivalent to tau_Q; use gq_omitted")
    eta = rho.imag
    F = eval_FnQ(k, n + 1, Q, rho, policy).value
    return eta ** (n - 2 * k + 2) * (-4.0) ** (1 - k) / (2 * k - 1) * F


def gq_omitted(k: int, Q, policy: SumPolicy = DEFAULT_POLICY) -> complex:
    """Constant coefficient ``a^+_{Q,tau_Q}(0)`` of ``G_Q`` at its own CM point.

    ``(-4 v^2)^{1-k} D^{(1-k)/2} sum* Q'(tau_Q,1)^{k-1} int_0^{artanh(sqrt D / Q'_tau)} sinh^{2k-2}``
    where the sum runs over the class of ``Q`` without ``Q`` itself.
    """
    k = _check_k(k)
    Q = _as_form(Q)
    tau = cm_point(Q)
    D = Q.D
    orb = class_orbit(Q, tau, policy.coefficient_bound)
    A, B, C = orb.A.astype(float), orb.B.astype(float), orb.C.astype(float)
    # drop Q itself (the only member whose CM point is tau)
    keep = ~((orb.A == Q.a) & (orb.B == Q.b) & (orb.C == Q.c))
    A, B, C, w = A[keep], B[keep], C[keep], orb.w[keep]
    qv = (A * tau + B) * tau + C
    one_minus_r2 = 2.0 * tau.imag * math.sqrt(D) / (A * np.abs(tau - np.conj(w)) ** 2)
    integral = sinh_power_integral(k, one_minus_r2)
    terms = qv ** (k - 1) * integral
    order = np.argsort(-np.abs(terms))
    s = np.sum(terms[order])
    v = tau.imag
    return complex((-4.0 * v * v) ** (1 - k) * D ** ((1 - k) / 2.0) * s)


def _same_orbit(z, w) -> bool:
    zs, _ = reduce_point(z)
    ws, _ = reduce_point(w)
    return abs(zs - ws) < 1e-9

"""Geometry of the upper half-plane.

Points of the upper half-plane are plain Python/numpy complex numbers with
positive imaginary part.  Besides the elementary maps (Moebius action,
hyperbolic distance, the disk coordinate ``X_rho``) this module enumerates
SL2(Z)-orbits inside hyperbolic balls, which is how every lattice sum in the
package is truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from .errors import DomainError
from .qform import UnimodularMatrix

RHO = complex(-0.5, math.sqrt(3.0) / 2.0)
_ELLIPTIC_TOL = 1e-9
_TIE_TOL = 1e-12


def as_point(z) -> complex:
    """Validate and return ``z`` as a complex number in the upper half-plane."""
    if isinstance(z, dict):
        z = complex(z["x"], z["y"])
    elif isinstance(z, (tuple, list)):
        z = complex(z[0], z[1])
    z = complex(z)
    if not z.imag > 0 or not math.isfinite(z.real) or not math.isfinite(z.imag):
        raise DomainError(f"{z} is not in the upper half-plane")
    return z


def point_to_json(z) -> dict:
    """Serialize a point of the upper half-plane as ``{"x": ..., "y": ...}``."""
    z = complex(z)
    return {"x": z.real, "y": z.imag}


def moebius(M: UnimodularMatrix, z):
    """``(a z + b) / (c z + d)``; ``z`` may be a numpy array."""
    return (M.a * z + M.b) / (M.c * z + M.d)


def j_factor(M: UnimodularMatrix, z):
    """Automorphy factor ``c z + d``."""
    return M.c * z + M.d


def cosh_dist(z, w):
    """``cosh d(z, w) = 1 + |z - w|^2 / (2 Im z Im w)``."""
    return 1.0 + np.abs(z - w) ** 2 / (2.0 * np.imag(z) * np.imag(w))


def x_coord(rho, z):
    """Disk coordinate ``X_rho(z) = (z - rho) / (z - conj(rho))``."""
    return (z - rho) / (z - np.conj(rho))


def r_coord(rho, z):
    """``r_rho(z) = |X_rho(z)| = tanh(d(z, rho) / 2)``."""
    return np.abs(x_coord(rho, z))


def reduce_point(z) -> Tuple[complex, UnimodularMatrix]:
    """Move ``z`` into the closed standard fundamental domain.

    Returns ``(z_star, M)`` with ``moebius(M, z) == z_star``, ``|Re z_star| <=
    1/2`` and ``|z_star| >= 1``.  Boundary ties are resolved to the side with
    non-positive real part.
    """
    z = as_point(z)
    M = UnimodularMatrix.identity()
    S = UnimodularMatrix.S()
    for _ in range(10000):
        n = math.floor(z.real + 0.5)
        if n:
            z = z - n
            M = UnimodularMatrix.T(-n) @ M
        if z.real > 0.5 - _TIE_TOL:
            z = z - 1
            M = UnimodularMatrix.T(-1) @ M
        a2 = abs(z) ** 2
        if a2 < 1.0 - _TIE_TOL:
            z = -1.0 / z
            M = S @ M
            continue
        if a2 <= 1.0 + _TIE_TOL and z.real > _TIE_TOL:
            z = -1.0 / z
            M = S @ M
        break
    else:  # pragma: no cover - reduction provably terminates
        raise DomainError("point reduction did not terminate")
    return z, M


def stabilizer_order(z) -> int:
    """Order of the stabiliser of ``z`` in PSL2(Z) (1, 2 or 3)."""
    zs, _ = reduce_point(z)
    if abs(zs - 1j) < _ELLIPTIC_TOL:
        return 2
    if abs(zs - RHO) < _ELLIPTIC_TOL:
        return 3
    return 1


def _reduced_stabilizer(omega: int) -> List[UnimodularMatrix]:
    Id = UnimodularMatrix.identity()
    if omega == 2:
        S = UnimodularMatrix.S()
        gens = [Id, S]
    elif omega == 3:
        U = UnimodularMatrix(0, -1, 1, 1)
        gens = [Id, U, U @ U]
    else:
        gens = [Id]
    return gens + [-g for g in gens]


def stabilizer(z) -> List[UnimodularMatrix]:
    """All ``2 * omega_z`` matrices of SL2(Z) fixing ``z``."""
    zs, P = reduce_point(z)
    omega = stabilizer_order(z)
    Pi = P.inverse()
    return [Pi @ g @ P for g in _reduced_stabilizer(omega)]


def matrices_up_to_height(bound: int) -> List[UnimodularMatrix]:
    """One matrix from each pair ``{M, -M}`` with all ``|entries| <= bound``.

    The representative has ``c > 0``, or ``c == 0`` and ``d > 0``.
    """
    bound = int(bound)
    if bound < 1:
        raise DomainError("bound must be >= 1")
    out = []
    for c in range(0, bound + 1):
        for d in range(-bound, bound + 1):
            if c == 0 and d <= 0:
                continue
            if math.gcd(c, d) != 1:
                continue
            # particular solution of a d - b c = 1
            if c == 0:
                a0, b0 = 1, 0  # d == 1
            else:
                a0 = pow(d, -1, c) if c > 1 else 0
                b0 = (a0 * d - 1) // c
            # general solution (a0 + t c, b0 + t d)
            if c == 0:
                ts = range(-bound, bound + 1)
            else:
                lo = math.ceil((-bound - a0) / c)
                hi = math.floor((bound - a0) / c)
                ts = range(lo, hi + 1)
            for t in ts:
                a, b = a0 + t * c, b0 + t * d
                if abs(a) <= bound and abs(b) <= bound:
                    out.append(UnimodularMatrix(a, b, c, d))
    return out


@dataclass(frozen=True)
class OrbitPoints:
    """Distinct points ``w = N zz`` of an SL2(Z)-orbit, with matrices ``N``.

    ``a, b, c, d`` are integer arrays holding one matrix per point and ``w``
    the corresponding complex points.  ``base`` is the orbit's base point.
    """

    base: complex
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    w: np.ndarray

    def __len__(self) -> int:
        return len(self.w)


def _canonical_row(c: int, d: int) -> Tuple[int, int]:
    if c < 0 or (c == 0 and d < 0):
        return -c, -d
    return c, d


@lru_cache(maxsize=64)
def _coset_rows(zr: float, zi: float, omega: int, R: float):
    """Coset representatives ``N`` (modulo translations) of the orbit of the
    reduced point ``zr + i zi`` with ``|c z + d|^2 <= R``.

    Returns integer arrays ``(a, b, c, d)``; each orbit point modulo
    ``z -> z + 1`` appears exactly once.
    """
    stab = _reduced_stabilizer(omega)[:omega]
    rows = [(1, 0, 0, 1)]
    cmax = int(math.floor(math.sqrt(R) / zi))
    for c in range(1, cmax + 1):
        rem = R - (c * zi) ** 2
        if rem < 0:
            continue
        half = math.sqrt(rem)
        dlo = math.ceil(-c * zr - half)
        dhi = math.floor(-c * zr + half)
        for d in range(dlo, dhi + 1):
            if math.gcd(c, d) != 1:
                continue
            if omega > 1:
                key = (c, d)
                best = key
                for g in stab[1:]:
                    cand = _canonical_row(c * g.a + d * g.c, c * g.b + d * g.d)
                    if cand < best:
                        best = cand
                if best != key:
                    continue
            a = pow(d, -1, c) if c > 1 else 0
            b = (a * d - 1) // c
            rows.append((a, b, c, d))
    arr = np.array(rows, dtype=np.int64)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]


def orbit_in_ball(zz, center, cosh_radius: float) -> OrbitPoints:
    """All distinct points ``w`` of the orbit ``SL2(Z) zz`` with
    ``cosh d(center, w) <= cosh_radius``.

    Each point comes with an integer matrix ``N`` such that ``N zz = w``.
    Because the selection region is a hyperbolic ball, ``orbit_in_ball(zz,
    M center, C)`` is the image under ``M`` of ``orbit_in_ball(zz, center,
    C)``.
    """
    zz = as_point(zz)
    center = as_point(center)
    C = float(cosh_radius)
    if C < 1:
        raise DomainError("cosh radius must be >= 1")
    zs, P = reduce_point(zz)
    omega = stabilizer_order(zs)
    if omega == 2:
        zs = 1j
    elif omega == 3:
        zs = RHO
    x, y = center.real, center.imag
    s = math.sqrt(C * C - 1.0)
    v_min = y / (C + s)
    R = zs.imag / v_min * (1.0 + 1e-12)
    # round R up to a power of 2 so nearby centres share cached cosets
    R_key = 2.0 ** math.ceil(math.log2(max(R, 1.0)))
    a0, b0, c0, d0 = _coset_rows(zs.real, zs.imag, omega, R_key)
    w0 = (a0 * zs + b0) / (c0 * zs + d0)
    u, v = w0.real, w0.imag
    W2 = 2.0 * y * v * (C - 1.0) - (y - v) ** 2
    keep = W2 >= 0
    u, v, W2 = u[keep], v[keep], W2[keep]
    a0, b0, c0, d0 = a0[keep], b0[keep], c0[keep], d0[keep]
    W = np.sqrt(W2)
    tlo = np.ceil(x - u - W).astype(np.int64)
    thi = np.floor(x - u + W).astype(np.int64)
    counts = np.maximum(thi - tlo + 1, 0)
    idx = np.repeat(np.arange(len(u)), counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    t = tlo[idx] + offs
    a = a0[idx] + t * c0[idx]
    b = b0[idx] + t * d0[idx]
    c = c0[idx]
    d = d0[idx]
    # compose with P so that N zz = w
    Na = a * P.a + b * P.c
    Nb = a * P.b + b * P.d
    Nc = c * P.a + d * P.c
    Nd = c * P.b + d * P.d
    w = (Na * zz + Nb) / (Nc * zz + Nd)
    # final exact filter (guards rounding at the ball boundary)
    inside = cosh_dist(center, w) <= C
    return OrbitPoints(zz, Na[inside], Nb[inside], Nc[inside], Nd[inside], w[inside])


def ball_count_estimate(cosh_radius: float, omega: int = 1) -> float:
    """Expected number of orbit points in a ball: area / covolume.

    The hyperbolic area of a ball is ``2 pi (C - 1)`` and the covolume of
    PSL2(Z) is ``pi / 3``; elliptic orbits are ``omega`` times sparser.
    """
    return 6.0 * (cosh_radius - 1.0) / omega

"""Numerical differential operators on functions of the upper half-plane.

Two independent derivative engines are provided:

* :func:`d_z`, :func:`d_zbar` -- central differences in ``x`` and ``y`` with
  Richardson extrapolation (first derivatives only).
* :func:`wirtinger_coefficient` -- Taylor coefficients
  ``c_{m,n} = d_z^m d_zbar^n f / (m! n!)`` from angular Fourier modes of ``f``
  on small circles around ``z``, extrapolated to zero radius in ``rho^2``.
  On a circle of radius ``rho`` the mode ``e^{i p theta}`` of ``f`` equals
  ``sum_{m-n=p} c_{m,n} rho^{m+n}``, so dividing by ``rho^{|p|}`` leaves a
  polynomial in ``rho^2`` whose coefficients are the wanted ``c_{m,n}``.

Iterated raising, powers of ``D = (1/2 pi i) d/dz`` and the weight-``kappa``
Laplacian are assembled from these.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from .errors import DomainError, PrecisionError

FieldFunction = Callable[[complex], complex]


@dataclass(frozen=True)
class FDConfig:
    """Step configuration.

    Attributes
    ----------
    step : float
        Base step for central differences, relative to ``Im z``.
    richardson_levels : int
        Number of Richardson halvings for central differences.
    circle_radius : float
        Largest circle radius for the Fourier engine, relative to ``Im z``.
    circle_count : int
        Number of circles (radii ``circle_radius * (1 - i/circle_count)``).
    samples : int
        Angular samples per circle.
    """

    step: float = 1e-3
    richardson_levels: int = 2
    circle_radius: float = 0.05
    circle_count: int = 5
    samples: int = 32

    def __post_init__(self) -> None:
        if not self.step > 0 or self.richardson_levels < 1:
            raise DomainError("need step > 0 and richardson_levels >= 1")
        if not 0 < self.circle_radius < 0.5 or self.circle_count < 2 or self.samples < 8:
            raise DomainError("invalid circle configuration")


DEFAULT_FD = FDConfig()


def _richardson(f: FieldFunction, z: complex, direction: complex, h: float, levels: int) -> Tuple[complex, float]:
    """Central difference along ``direction`` with Richardson extrapolation."""
    table: List[List[complex]] = []
    for i in range(levels + 1):
        hi = h / 2**i
        row = [(f(z + hi * direction) - f(z - hi * direction)) / (2 * hi)]
        for j in range(1, i + 1):
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (4**j - 1))
        table.append(row)
    best = table[-1][-1]
    err = abs(best - table[-2][-1]) if levels >= 1 else 0.0
    return best, float(err)


def partials(f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> Tuple[complex, complex, float]:
    """``(df/dx, df/dy, error_estimate)`` by Richardson-extrapolated central differences."""
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("z must lie in the upper half-plane")
    h = cfg.step * z.imag
    fx, ex = _richardson(f, z, 1.0, h, cfg.richardson_levels)
    fy, ey = _richardson(f, z, 1j, h, cfg.richardson_levels)
    err = max(ex, ey)
    scale = max(abs(fx), abs(fy), 1e-300)
    if err > 1e-4 * scale and err > 1e-12:
        warnings.warn(f"Richardson levels disagree (error estimate {err:.2e})", RuntimeWarning)
    return fx, fy, err


def d_z(f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """Wirtinger derivative ``(d_x - i d_y) f / 2``."""
    fx, fy, _ = partials(f, z, cfg)
    return 0.5 * (fx - 1j * fy)


def d_zbar(f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """Wirtinger derivative ``(d_x + i d_y) f / 2``."""
    fx, fy, _ = partials(f, z, cfg)
    return 0.5 * (fx + 1j * fy)


def xi(kappa: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """``xi_kappa f = 2 i y^kappa conj(d_zbar f)``."""
    z = complex(z)
    return 2j * z.imag**kappa * np.conj(d_zbar(f, z, cfg))


# ---------------------------------------------------------------------------
# circle engine
# ---------------------------------------------------------------------------


def _circle_modes(f: FieldFunction, z: complex, cfg: FDConfig):
    radii = cfg.circle_radius * z.imag * (1.0 - np.arange(cfg.circle_count) / cfg.circle_count)
    theta = 2.0 * np.pi * np.arange(cfg.samples) / cfg.samples
    unit = np.exp(1j * theta)
    modes = []
    for rho in radii:
        vals = np.array([f(z + rho * u) for u in unit], dtype=complex)
        modes.append(np.fft.fft(vals) / cfg.samples)  # entry p -> mode e^{i p theta}
    return radii, np.array(modes)


def wirtinger_coefficients(
    f: FieldFunction, z: complex, wanted: List[Tuple[int, int]], cfg: FDConfig = DEFAULT_FD
) -> Dict[Tuple[int, int], complex]:
    """Taylor coefficients ``c_{m,n}`` of ``f`` at ``z`` for all pairs in ``wanted``.

    ``f(z + h) = sum c_{m,n} h^m conj(h)^n``, so
    ``d_z^m d_zbar^n f(z) = m! n! c_{m,n}``.
    """
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("z must lie in the upper half-plane")
    radii, modes = _circle_modes(f, z, cfg)
    N = cfg.samples
    out = {}
    L = len(radii)
    for m, n in wanted:
        p = m - n
        s = min(m, n)
        if abs(p) >= N // 2 or s >= L:
            raise DomainError(f"coefficient ({m},{n}) not resolvable with this configuration")
        A = modes[:, p % N] / radii ** abs(p)
        V = np.vander(radii**2, L, increasing=True)
        coef = np.linalg.solve(V, A)
        out[(m, n)] = complex(coef[s])
    return out


def dz_power(p: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """``d^p f / dz^p`` (Wirtinger) from the circle engine."""
    c = wirtinger_coefficients(f, z, [(p, 0)], cfg)[(p, 0)]
    return math.factorial(p) * c


def dee_power(p: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """``D^p f`` with ``D = (1/(2 pi i)) d/dz``."""
    if p < 1:
        raise DomainError("p must be >= 1")
    return dz_power(p, f, z, cfg) / (2j * math.pi) ** p


def _raising_polynomial(kappa: int, j: int) -> Dict[int, Dict[int, complex]]:
    """Write ``R_kappa^j = sum_m sum_l alpha[m][l] y^{-l} d_z^m``.

    Uses ``R_w = 2i d_z + w/y`` and ``d_z y^{-l} = (i l / 2) y^{-l-1}``.
    """
    ops: Dict[int, Dict[int, complex]] = {0: {0: 1.0}}
    w = kappa
    for _ in range(j):
        new: Dict[int, Dict[int, complex]] = {}

        def add(m, l, v):
            new.setdefault(m, {})
            new[m][l] = new[m].get(l, 0) + v

        for m, terms in ops.items():
            for l, a in terms.items():
                # 2i d_z (a y^{-l} d_z^m) = 2i a (i l/2) y^{-l-1} d_z^m + 2i a y^{-l} d_z^{m+1}
                if l:
                    add(m, l + 1, 2j * a * (1j * l / 2.0))
                add(m + 1, l, 2j * a)
                add(m, l + 1, w * a)
        ops = new
        w += 2
    return ops


def raise_op(kappa: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """Raising operator ``R_kappa f = 2i d_z f + kappa f / y`` (central differences)."""
    z = complex(z)
    return 2j * d_z(f, z, cfg) + kappa * f(z) / z.imag


def raise_iter(kappa: int, j: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """``R_kappa^j = R_{kappa+2j-2} o ... o R_kappa`` applied to ``f`` at ``z``."""
    if j < 1:
        raise DomainError("j must be >= 1")
    z = complex(z)
    ops = _raising_polynomial(kappa, j)
    coeffs = wirtinger_coefficients(f, z, [(m, 0) for m in ops], cfg)
    y = z.imag
    total = 0j
    for m, terms in ops.items():
        dm = math.factorial(m) * coeffs[(m, 0)]
        for l, a in terms.items():
            total += a * y ** (-l) * dm
    return total


def laplacian(kappa: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """``Delta_kappa f = -y^2 (f_xx + f_yy) + i kappa y (f_x + i f_y)``.

    Uses ``f_xx + f_yy = 4 d_z d_zbar f`` and ``f_x + i f_y = 2 d_zbar f``.
    """
    z = complex(z)
    c = wirtinger_coefficients(f, z, [(1, 1), (0, 1)], cfg)
    y = z.imag
    return -(y**2) * 4.0 * c[(1, 1)] + 1j * kappa * y * 2.0 * c[(0, 1)]


def laplacian_stencil(kappa: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """Same operator from a plain 9-point second-order stencil (fourth order in h)."""
    z = complex(z)
    h = 10 * cfg.step * z.imag
    f0 = f(z)

    def second(direction):
        a1 = f(z + h * direction) + f(z - h * direction)
        a2 = f(z + 2 * h * direction) + f(z - 2 * h * direction)
        return (-a2 + 16 * a1 - 30 * f0) / (12 * h * h)

    def first(direction):
        return (8 * (f(z + h * direction) - f(z - h * direction)) - (f(z + 2 * h * direction) - f(z - 2 * h * direction))) / (12 * h)

    y = z.imag
    lap = second(1.0) + second(1j)
    return -(y**2) * lap + 1j * kappa * y * (first(1.0) + 1j * first(1j))


def xi_composed_laplacian(kappa: int, f: FieldFunction, z: complex, cfg: FDConfig = DEFAULT_FD) -> complex:
    """``-xi_{2-kappa}(xi_kappa f)`` by nested central differences."""
    inner = lambda w: xi(kappa, f, w, cfg)  # noqa: E731
    return -xi(2 - kappa, inner, z, FDConfig(step=cfg.step * 10, richardson_levels=cfg.richardson_levels))


def check_richardson(value: complex, reference: complex, tol: float = 1e-4) -> None:
    """Raise :class:`PrecisionError` when two derivative estimates disagree."""
    if abs(value - reference) > tol * max(abs(reference), 1e-300):
        raise PrecisionError(f"derivative estimates disagree: {value} vs {reference}")

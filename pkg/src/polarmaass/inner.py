"""Regularised Petersson inner products of meromorphic cusp forms.

``<f, g>`` is the constant term at ``s = 0`` of
``int_{SL2(Z)\\H} f H_s conj(g) y^{2k} dmu`` where ``H_s`` vanishes to order
``2 s`` at the poles.  Two kinds of evaluation are provided:

* :func:`inner_hybrid` -- direct numerical evaluation.  Around every pole
  ``z_l`` a smooth radial cutoff ``chi_l`` (1 for ``r < delta/2``, 0 for
  ``r > delta``) splits the integrand.  The part ``h (1 - sum chi)`` is smooth
  on the fundamental domain and is integrated by adaptive cubature; the
  regularised integral over each ball ``r < delta`` is the analytic constant
  term ``8 pi / (omega (4 y)^{2k}) sum_n a_f(n) conj(a_g(n)) Phi_n(delta)``
  obtained from the elliptic expansions, and the overlap
  ``delta/2 < r < delta`` is corrected by polar quadrature of the true
  integrand.
* closed forms in terms of elliptic coefficients of ``G_Q``
  (:func:`inner_wnotz`, :func:`inner_residue`, :func:`inner_meromain`), the
  higher Green's function (:func:`inner_greens`) and the two-variable
  ``G_1`` (:func:`inner_psi_pair`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import cubature

from .ellexp import (
    EllipticExpansion,
    _gbinom,
    _same_orbit,
    a_plus_closed,
    evaluate_many,
    gq_omitted,
    mero_coeffs,
    polar_coeffs,
)
from .errors import DomainError
from .greens import eval_green
from .hyperbolic import as_point, cosh_dist, orbit_in_ball, reduce_point, stabilizer_order, x_coord
from .modforms import DEFAULT_POLICY, _check_k, array_field, eval_Fn_pair, eval_G1_pair, eval_GQ, field as frozen_field
from .qform import BinaryQuadraticForm, SumPolicy, _as_form, apply_matrix, cm_point
from .specfun import complete_beta

FieldFunction = Callable[[complex], complex]

_POINT_TOL = 1e-9


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature settings for :func:`inner_hybrid`.

    Attributes
    ----------
    y_cap : float
        Truncation height of the fundamental domain.
    cell_tolerance : float
        Relative and absolute tolerance of the adaptive cubature.
    delta : float
        Radius (in ``r = |X|``) of the balls around the poles.
    depth : int, optional
        Expansion depth ``N``; coefficients ``-N <= n <= N`` enter the ball
        terms.  Defaults to ``2k + 6``.
    max_subdivisions : int
        Cap on cubature subdivisions.
    """

    y_cap: float = 12.0
    cell_tolerance: float = 1e-8
    delta: float = 0.15
    depth: Optional[int] = None
    max_subdivisions: int = 2000

    def __post_init__(self) -> None:
        if self.y_cap < 3:
            raise DomainError("y_cap must be >= 3")
        if not 0 < self.delta < 0.4:
            raise DomainError("delta must lie in (0, 0.4)")
        if not self.cell_tolerance > 0:
            raise DomainError("cell_tolerance must be positive")
        if self.depth is not None and self.depth < 1:
            raise DomainError("depth must be >= 1")


@dataclass(frozen=True)
class PoleSpec:
    """A pole in the fundamental domain with the elliptic expansion there."""

    location: complex
    expansion: EllipticExpansion

    def __post_init__(self) -> None:
        loc = as_point(self.location)
        red, _ = reduce_point(loc)
        if abs(red - loc) > _POINT_TOL:
            raise DomainError(f"pole location {loc} is not reduced (reduced point {red})")
        if abs(self.expansion.center - loc) > _POINT_TOL:
            raise DomainError("expansion centre differs from the pole location")
        object.__setattr__(self, "location", loc)


@dataclass
class InnerProductResult:
    """Value of an inner product with the method that produced it."""

    value: complex
    method: str
    error_estimate: float = 0.0
    config: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.value = complex(self.value)
        if self.error_estimate < 0:
            raise ValueError("error_estimate must be non-negative")

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "method": self.method,
            "error_estimate": self.error_estimate,
            "config": dict(self.config),
        }


def pole_spec(f: FieldFunction, location, k: int, depth: int, R: float = 0.15) -> PoleSpec:
    """Expand ``f`` around ``location`` (indices ``-depth..depth``) and wrap as a PoleSpec."""
    loc = as_point(location)
    exp = mero_coeffs(f, loc, k, range(-depth, depth + 1), R=R)
    return PoleSpec(loc, exp)


def expansion_radius(location, cap: float = 0.35) -> float:
    """``0.6`` times the r-distance from ``location`` to the nearest other point of its orbit, capped."""
    loc = as_point(location)
    orb = orbit_in_ball(loc, loc, 50.0)
    others = orb.w[np.abs(orb.w - loc) > _POINT_TOL]
    rmin = float(np.min(np.abs(x_coord(loc, others)))) if len(others) else 1.0
    return min(cap, 0.6 * rmin)


def fq_input(k: int, Q, policy: SumPolicy = DEFAULT_POLICY, depth: Optional[int] = None, center=1.5j):
    """``f_Q`` as a vectorised callable together with its single pole in the fundamental domain.

    Returns ``(f, [PoleSpec])``; the expansion at the reduced CM point runs over
    ``-depth..depth`` (default ``2k + 6``).
    """
    k = _check_k(k)
    Q = _as_form(Q)
    loc, _ = reduce_point(cm_point(Q))
    N = 2 * k + 6 if depth is None else int(depth)
    f = array_field("fQ", k, Q, center=center, policy=policy)
    local = array_field("fQ", k, Q, center=loc, policy=policy)
    return f, [pole_spec(local, loc, k, N, R=expansion_radius(loc))]


# ---------------------------------------------------------------------------
# hybrid quadrature
# ---------------------------------------------------------------------------


def phi_constant(n: int, k: int, delta: float) -> float:
    """``Phi_n(delta)``: constant term of ``int_0^delta R^{1+2n+2s} (1-R^2)^{2k-2} dR`` at ``s = 0``."""
    total = 0.0
    for j in range(2 * k - 1):
        e = n + j + 1
        term = math.log(delta) if e == 0 else delta ** (2 * e) / (2 * e)
        total += (-1) ** j * math.comb(2 * k - 2, j) * term
    return total


def _smoothstep(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.clip(t, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


def _cutoff(r, delta: float):
    """``chi(r)``: 1 for ``r <= delta/2``, 0 for ``r >= delta``."""
    return 1.0 - _smoothstep((r - delta / 2.0) / (delta / 2.0))


def _unique_points(points: Sequence[complex]) -> List[complex]:
    out: List[complex] = []
    for p in points:
        if all(abs(p - q) > _POINT_TOL for q in out):
            out.append(p)
    return out


def _near_orbit_points(loc: complex, delta: float, y_cap: float) -> np.ndarray:
    """Orbit points of ``loc`` whose ``delta``-ball can meet the truncated fundamental domain."""
    probe = [complex(sx, y) for sx in (-1.0, 1.0) for y in (0.3, 2.0 * y_cap)]
    C = 4.0 * max(cosh_dist(2j, p) for p in probe) + 10.0
    w = orbit_in_ball(loc, 2j, C).w
    scale = (1 + delta**2) / (1 - delta**2)
    rad = 2.0 * w.imag * delta / (1 - delta**2)
    cy = w.imag * scale
    keep = (np.abs(w.real) <= 0.5 + rad) & (cy + rad >= 0.5) & (cy - rad <= y_cap)
    return w[keep]


def _merge_expansion(numeric: EllipticExpansion, given: Optional[EllipticExpansion]) -> Dict[int, complex]:
    coeffs = dict(numeric.plus_coeffs)
    if given is not None:
        coeffs.update(given.plus_coeffs)
    return coeffs


def inner_hybrid(
    f: FieldFunction,
    f_poles: Sequence[PoleSpec],
    g: FieldFunction,
    g_poles: Sequence[PoleSpec],
    k: int,
    cfg: QuadConfig = QuadConfig(),
) -> InnerProductResult:
    """Regularised ``<f, g>`` by cubature plus analytic ball terms.

    ``f`` and ``g`` are weight ``2k`` meromorphic cusp forms (callables, ideally
    accepting numpy arrays) whose poles in the fundamental domain are listed
    in ``f_poles``/``g_poles``.  Missing expansion coefficients are extracted
    numerically.  Each ``delta``-ball may contain no pole other than its centre.
    """
    k = _check_k(k)
    N = cfg.depth if cfg.depth is not None else 2 * k + 6
    delta = cfg.delta
    fmap = {p.location: p.expansion for p in f_poles}
    gmap = {p.location: p.expansion for p in g_poles}
    locs = _unique_points(list(fmap) + list(gmap))

    near = [(_near_orbit_points(loc, delta, cfg.y_cap), i) for i, loc in enumerate(locs)]
    all_w = np.concatenate([w for w, _ in near]) if near else np.zeros(0, dtype=complex)

    # each ball may contain only its own pole; find expansion radii on the way
    radii = []
    for i, loc in enumerate(locs):
        others = all_w[np.abs(all_w - loc) > _POINT_TOL]
        rmin = float(np.min(np.abs(x_coord(loc, others)))) if len(others) else 1.0
        if rmin <= delta:
            raise DomainError(f"delta = {delta} too large: the ball at {loc} contains another pole (r = {rmin:.3f})")
        radii.append(min(0.35, 0.6 * rmin))

    # ---- analytic ball terms
    ball_total = 0j
    ball_err = 0.0
    annulus_total = 0j
    for i, loc in enumerate(locs):
        y = loc.imag
        omega = stabilizer_order(loc)
        ns = range(-N, N + 1)
        a_f = _merge_expansion(mero_coeffs(f, loc, k, ns, R=radii[i]), fmap.get(_match(loc, fmap)))
        a_g = _merge_expansion(mero_coeffs(g, loc, k, ns, R=radii[i]), gmap.get(_match(loc, gmap)))
        pref = 8.0 * math.pi / (omega * (4.0 * y) ** (2 * k))
        terms = {n: a_f.get(n, 0j) * np.conj(a_g.get(n, 0j)) * phi_constant(n, k, delta) for n in ns}
        ball_total += pref * sum(terms.values())
        ball_err += abs(pref) * (abs(terms[N]) + abs(terms[N - 1]))
        annulus_total += _annulus(f, g, loc, k, delta) / omega

    smooth, quad_err, subdivisions = _smooth_part(f, g, k, all_w, delta, cfg)
    cap_err = _cap_error(f, g, k, cfg.y_cap)

    value = smooth - annulus_total + ball_total
    err = quad_err + cap_err + ball_err
    return InnerProductResult(
        value,
        "hybrid",
        float(err),
        {"delta": delta, "y_cap": cfg.y_cap, "depth": N, "subdivisions": subdivisions},
    )


def _match(loc: complex, mapping: Dict[complex, EllipticExpansion]):
    for key in mapping:
        if abs(key - loc) <= _POINT_TOL:
            return key
    return None


def _smooth_part(f, g, k: int, centers: np.ndarray, delta: float, cfg: QuadConfig):
    """Cubature of ``f conj(g) y^{2k-2} (1 - sum chi)`` over the truncated fundamental domain.

    The domain ``|x| <= 1/2, sqrt(1-x^2) <= y <= y_cap`` is mapped to the unit
    square by ``y = b (y_cap / b)^s`` with ``b = sqrt(1 - x^2)``.
    """
    y_cap = cfg.y_cap

    def integrand(xs):
        x, s = xs[:, 0], xs[:, 1]
        b = np.sqrt(1.0 - x * x)
        L = np.log(y_cap / b)
        y = b * np.exp(s * L)
        z = x + 1j * y
        weight = np.ones(len(z))
        if len(centers):
            r = np.abs(x_coord(centers[None, :], z[:, None]))
            weight = 1.0 - _cutoff(r, delta).sum(axis=1)
        out = np.zeros((len(z), 2))
        m = np.abs(weight) > 0
        if np.any(m):
            zm = z[m]
            h = evaluate_many(f, zm) * np.conj(evaluate_many(g, zm)) * zm.imag ** (2 * k - 2)
            val = h * weight[m] * y[m] * L[m]
            out[m, 0], out[m, 1] = val.real, val.imag
        return out

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = cubature(
            integrand,
            [-0.5, 0.0],
            [0.5, 1.0],
            rule="gk15",
            rtol=cfg.cell_tolerance,
            atol=cfg.cell_tolerance,
            max_subdivisions=cfg.max_subdivisions,
        )
    err = float(np.hypot(*res.error))
    if res.status != "converged":
        warnings.warn(f"cubature stopped before reaching tolerance (error estimate {err:.2e})", RuntimeWarning)
    return complex(res.estimate[0], res.estimate[1]), err, int(res.subdivisions)


def _cap_error(f, g, k: int, y_cap: float) -> float:
    """Size of the cuspidal tail above ``y_cap`` (``|f g| y^{2k-2}`` decays like ``e^{-4 pi y}``)."""
    zc = np.array([1j * y_cap])
    top = float(np.abs(evaluate_many(f, zc) * np.conj(evaluate_many(g, zc)))[0]) * y_cap ** (2 * k - 2)
    return top / (4.0 * math.pi)


def _polar_annulus(f, g, loc: complex, k: int, r_lo: float, r_hi: float, weight, n_r: int = 40, n_t: int = 256) -> complex:
    """``int_{r_lo < r < r_hi} f conj(g) y^{2k} weight(r) dmu`` around ``loc``.

    In the disk coordinate ``X = R e^{i theta}`` the measure is
    ``4 R dR dtheta / (1 - R^2)^2``.
    """
    t, wt = np.polynomial.legendre.leggauss(n_r)
    R = 0.5 * (r_hi - r_lo) * t + 0.5 * (r_hi + r_lo)
    wR = 0.5 * (r_hi - r_lo) * wt
    theta = 2.0 * np.pi * np.arange(n_t) / n_t
    X = R[:, None] * np.exp(1j * theta[None, :])
    z = (loc - np.conj(loc) * X) / (1.0 - X)
    zf = z.ravel()
    h = (evaluate_many(f, zf) * np.conj(evaluate_many(g, zf)) * zf.imag ** (2 * k)).reshape(z.shape)
    ang = 2.0 * np.pi * h.mean(axis=1)
    dens = 4.0 * R / (1.0 - R**2) ** 2 * weight(R)
    return complex(np.sum(wR * ang * dens))


def _annulus(f, g, loc: complex, k: int, delta: float) -> complex:
    """``int_{delta/2 < r < delta} f conj(g) y^{2k} (1 - chi) dmu``."""
    return _polar_annulus(f, g, loc, k, delta / 2.0, delta, lambda R: 1.0 - _cutoff(R, delta))


def excised_integral(
    f: FieldFunction,
    g: FieldFunction,
    locations: Sequence[complex],
    k: int,
    eps: float,
    cfg: QuadConfig = QuadConfig(),
) -> complex:
    """Plain integral of ``f conj(g) y^{2k}`` over the fundamental domain minus ``r < eps`` balls.

    No regularisation is involved; this is the classical excised integral
    whose ``eps -> 0`` limit exists when ``f`` and ``g`` have no common pole
    orders.  The cutoff is placed at ``delta = 2 eps`` and the region
    ``eps < r < 2 eps`` is integrated from true function values.
    """
    k = _check_k(k)
    locs = _unique_points([as_point(p) for p in locations])
    delta = 2.0 * eps
    if not 0 < delta < 0.4:
        raise DomainError("eps must lie in (0, 0.2)")
    near = [_near_orbit_points(loc, delta, cfg.y_cap) for loc in locs]
    centers = np.concatenate(near) if near else np.zeros(0, dtype=complex)
    total, _, _ = _smooth_part(f, g, k, centers, delta, cfg)
    for loc in locs:
        total += _polar_annulus(f, g, loc, k, eps, delta, lambda R: _cutoff(R, delta)) / stabilizer_order(loc)
    return total


# ---------------------------------------------------------------------------
# closed-form routes
# ---------------------------------------------------------------------------


def _class_member_at(Q: BinaryQuadraticForm, point: complex) -> BinaryQuadraticForm:
    """The member of ``[Q]`` whose CM point is ``point`` (which must be equivalent to ``tau_Q``)."""
    tau = cm_point(Q)
    zs, P = reduce_point(point)
    ts, T = reduce_point(tau)
    if abs(zs - ts) > _POINT_TOL:
        raise DomainError("point is not equivalent to tau_Q")
    # N = P^{-1} T maps tau to point; the member is Q o N^{-1}
    N = P.inverse() @ T
    R = apply_matrix(Q, N.inverse())
    if abs(cm_point(R) - point) > 1e-8:
        raise DomainError("could not locate the class member")  # pragma: no cover
    return R


def _a_plus_at(k: int, n: int, Q: BinaryQuadraticForm, loc: complex, policy: SumPolicy) -> complex:
    """``a^+_{Q,loc}(n)`` for any ``loc``, including points equivalent to ``tau_Q``."""
    if not _same_orbit(loc, cm_point(Q)):
        return a_plus_closed(k, n, Q, loc, policy)
    Qm = _class_member_at(Q, loc)
    if n == 0:
        return gq_omitted(k, Qm, policy)
    G = frozen_field(eval_GQ, k, Qm, center=loc, policy=policy)
    exp = polar_coeffs(G, loc, k, range(n, n + 1))
    return exp.plus_coeffs[n]


def _poles_from(f_poles: Sequence[PoleSpec]) -> List[PoleSpec]:
    if f_poles is None:
        raise DomainError("missing pole expansions")
    return list(f_poles)


def inner_wnotz(f_poles: Sequence[PoleSpec], k: int, Q, policy: SumPolicy = DEFAULT_POLICY) -> InnerProductResult:
    """``<f, f_Q> = pi sum_l 1/(y_l omega_l) sum_{n>=1} a_f(z_l; -n) a^+_{Q,z_l}(n-1)``."""
    k = _check_k(k)
    Q = _as_form(Q)
    total = 0j
    for pole in _poles_from(f_poles):
        loc = pole.location
        inner_sum = 0j
        for n, a in pole.expansion.principal_part().items():
            inner_sum += a * _a_plus_at(k, -n - 1, Q, loc, policy)
        total += inner_sum / (loc.imag * stabilizer_order(loc))
    return InnerProductResult(math.pi * total, "coeff", 0.0, {"bound": policy.coefficient_bound})


def inner_residue(f_poles: Sequence[PoleSpec], k: int, Q, policy: SumPolicy = DEFAULT_POLICY) -> InnerProductResult:
    """``2 pi i sum_l omega_l^{-1} Res_{z_l}(f G^+_{Q,z_l})`` from the elliptic expansions.

    ``f G^+ = (z - conj rho)^{-2} sum a_f(n) a^+(m) X^{n+m}`` and
    ``Res (z - conj rho)^{-2} X^{-p} = binom(p-2, p-1) (2 i eta)^{-1}``.
    """
    k = _check_k(k)
    Q = _as_form(Q)
    total = 0j
    for pole in _poles_from(f_poles):
        loc = pole.location
        pp = pole.expansion.principal_part()
        if not pp:
            continue
        order = -min(pp)
        aplus = {m: _a_plus_at(k, m, Q, loc, policy) for m in range(order)}
        res = 0j
        for n, a in pp.items():
            for m, b in aplus.items():
                p = -(n + m)
                if p >= 1:
                    res += a * b * _gbinom(p - 2, p - 1)
        res /= 2j * loc.imag
        total += res / stabilizer_order(loc)
    return InnerProductResult(2j * math.pi * total, "residue", 0.0, {"bound": policy.coefficient_bound})


def inner_meromain(f_poles: Sequence[PoleSpec], k: int, Q, policy: SumPolicy = DEFAULT_POLICY) -> InnerProductResult:
    """``pi (-4)^{1-k}/(2k-1) sum_l omega_l^{-1} sum_n y_l^{n-2k} a_f(z_l; -n) F_n(z_l, tau_Q)``.

    Valid when no pole is equivalent to ``tau_Q``.
    """
    k = _check_k(k)
    Q = _as_form(Q)
    tau = cm_point(Q)
    total = 0j
    for pole in _poles_from(f_poles):
        loc = pole.location
        if _same_orbit(loc, tau):
            raise DomainError("f has a pole at [tau_Q]; use inner_wnotz instead")
        s = 0j
        for n, a in pole.expansion.principal_part().items():
            m = -n
            s += loc.imag ** (m - 2 * k) * a * eval_Fn_pair(k, m, loc, tau, policy).value
        total += s / stabilizer_order(loc)
    value = math.pi * (-4.0) ** (1 - k) / (2 * k - 1) * total
    return InnerProductResult(value, "coeff", 0.0, {"bound": policy.coefficient_bound})


def inner_greens(k: int, Q1, Q2, policy: SumPolicy = DEFAULT_POLICY) -> InnerProductResult:
    """``<f_Q1, f_Q2> = -pi (-4)^{1-k} / ((2k-1) beta(k,k)) G_k(tau_1, tau_2) / (omega_1 omega_2)``."""
    k = _check_k(k)
    Q1, Q2 = _as_form(Q1), _as_form(Q2)
    t1, t2 = cm_point(Q1), cm_point(Q2)
    if _same_orbit(t1, t2):
        raise DomainError("the CM points are equivalent; the formula excludes the diagonal")
    G = eval_green(k, t1, t2, policy)
    w1, w2 = stabilizer_order(t1), stabilizer_order(t2)
    value = -math.pi * (-4.0) ** (1 - k) / ((2 * k - 1) * complete_beta(k)) * G.value / (w1 * w2)
    err = abs(math.pi * 4.0 ** (1 - k) / ((2 * k - 1) * complete_beta(k))) * G.tail_bound / (w1 * w2)
    return InnerProductResult(value, "greens", float(err), {"bound": policy.coefficient_bound})


def g1_a_plus(k: int, n: int, zz, rho, policy: SumPolicy = DEFAULT_POLICY) -> complex:
    """Meromorphic coefficient ``a^+_{zz,rho}(n)`` of ``G_1(., zz)`` around ``rho``.

    For ``[rho] != [zz]`` this is ``eta^{n-2k+2} (-4)^{1-k}/(2k-1) F_{n+1}(rho, zz)``;
    otherwise it is extracted from the two-radius separation.
    """
    k = _check_k(k)
    rho, zz = as_point(rho), as_point(zz)
    if not _same_orbit(rho, zz):
        if n < 0:
            return 0j
        F = eval_Fn_pair(k, n + 1, rho, zz, policy).value
        return rho.imag ** (n - 2 * k + 2) * (-4.0) ** (1 - k) / (2 * k - 1) * F
    def G1(z):
        return eval_G1_pair(k, z, zz, policy, center=rho).value

    exp = polar_coeffs(G1, rho, k, range(n, n + 1))
    return exp.plus_coeffs[n]


def inner_psi_pair(k: int, m: int, rho, zz, policy: SumPolicy = DEFAULT_POLICY) -> InnerProductResult:
    """``<Psi_{2k,m}(., rho), Psi_{2k,-k}(., zz)> = pi omega_zz / (2^{k-2} Im(zz)^k eta) a^+_{zz,rho}(-m-1)``."""
    k = _check_k(k)
    m = int(m)
    rho, zz = as_point(rho), as_point(zz)
    omega_rho = stabilizer_order(rho)
    if (m + k) % omega_rho:
        raise DomainError(f"m must be congruent to -k modulo omega_rho = {omega_rho}")
    idx = -m - 1
    same = _same_orbit(rho, zz)
    if same and m != -k:
        raise DomainError("only m = -k is supported when rho and zz are equivalent")
    if idx < 0 and not same:
        return InnerProductResult(0j, "coeff", 0.0, {"bound": policy.coefficient_bound})
    a = g1_a_plus(k, idx, zz, rho, policy)
    value = math.pi * stabilizer_order(zz) / (2.0 ** (k - 2) * zz.imag**k * rho.imag) * a
    return InnerProductResult(value, "coeff", 0.0, {"bound": policy.coefficient_bound})

"""Identity-verification suites.

Each suite evaluates both sides of a family of identities and returns a list
of :class:`Check` records.  Suites are deterministic for a fixed seed; the
report sorts checks by name.

Suites
------
modularity
    Weight ``2k``, ``2-2k`` and ``2n-2k`` transformation laws of ``f_Q``,
    ``G_Q`` and ``F_{n,Q}`` under random matrices with entries ``<= 5``.
xi, dee
    ``xi_{2-2k} G_Q = f_Q`` and ``D^{2k-1} G_Q = -(2k-2)!/(4 pi)^{2k-1} f_Q``
    by numerical differentiation, and ``D^{2k-1} g_{1-k}`` in closed form.
raise
    ``F_{n,Q} = (2k-1)/(n-1)! R^{n-1}_{2-2k} G_Q`` for ``n = 2..2k``.
almostmero
    ``F_{n,Q}`` against raised Green's functions, ``F_{2k,Q} = f_Q`` and
    numerical raising of ``G_k`` against the termwise closed form.
qrep
    Two-radius extraction of ``a^+_{Q,rho}(n)`` against its closed form and
    the principal coefficient of ``G_Q`` at its own CM point.
inner-routes
    The closed-form inner-product routes agree pairwise.
green-props
    Realness, symmetry, bi-invariance, Laplace eigenvalue, logarithmic
    singularity and cusp decay of ``G_k``.
specfun-identities
    Euler transformation, a contiguous relation, the sinh-integral identity
    and ``beta_0(1-r^2; 2k-1, m) = -beta(r^2; m, 2k-1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy import integrate, special

from . import ellexp, greens, inner, modforms, operators
from .errors import DomainError
from .hyperbolic import RHO, as_point, j_factor, matrices_up_to_height, moebius, reduce_point, stabilizer_order
from .qform import SumPolicy, class_representatives, cm_point
from .specfun import beta0, c_const, complete_beta, gauss_2f1, incomplete_beta, sinh_power_integral

MATRIX_HEIGHT = 5
# circle configuration for derivatives of order >= 5 (the default radius loses
# digits to cancellation there); only used at points far from every pole
HIGH_ORDER_FD = operators.FDConfig(circle_radius=0.15, samples=64)


@dataclass(frozen=True)
class Check:
    """One verified identity: ``|lhs - rhs| / scale <= tolerance``."""

    name: str
    lhs: complex
    rhs: complex
    rel_err: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.rel_err <= self.tolerance)

    def to_dict(self) -> dict:
        lhs, rhs = complex(self.lhs), complex(self.rhs)
        return {
            "name": self.name,
            "lhs": [lhs.real, lhs.imag],
            "rhs": [rhs.real, rhs.imag],
            "rel_err": self.rel_err,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def make_check(name: str, lhs, rhs, tol: float, scale: Optional[float] = None) -> Check:
    """Relative error against ``|rhs|`` (or against ``scale`` when given)."""
    lhs, rhs = complex(lhs), complex(rhs)
    denom = abs(rhs) if scale is None else scale
    diff = abs(lhs - rhs)
    err = diff / denom if denom > 0 else diff
    return Check(name, lhs, rhs, float(err), float(tol))


def _worst(name: str, pairs: Iterable, tol: float) -> Check:
    """Single check reporting the worst of several ``(lhs, rhs)`` pairs."""
    checks = [make_check(name, a, b, tol) for a, b in pairs]
    return max(checks, key=lambda c: c.rel_err)


def report(checks: Sequence[Check]) -> dict:
    ordered = sorted(checks, key=lambda c: c.name)
    npass = sum(c.passed for c in ordered)
    return {
        "checks": [c.to_dict() for c in ordered],
        "pass_count": npass,
        "fail_count": len(ordered) - npass,
    }


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------


def random_matrices(rng: np.random.Generator, count: int):
    pool = matrices_up_to_height(MATRIX_HEIGHT)
    idx = rng.choice(len(pool), size=count, replace=False)
    return [pool[i] for i in idx]


def random_points(rng: np.random.Generator, count: int) -> List[complex]:
    """Points of the fundamental domain with ``1.1 <= y <= 2.5`` (away from ``i`` and ``rho``)."""
    xs = rng.uniform(-0.5, 0.5, size=count)
    ys = rng.uniform(1.1, 2.5, size=count)
    return [complex(x, y) for x, y in zip(xs, ys)]


def representative(D: int):
    return class_representatives(D)[0]


def _tol(default: float, override: Optional[float]) -> float:
    return default if override is None else float(override)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_modularity(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    tol = _tol(1e-5, tolerance)
    rng = np.random.default_rng(seed)
    mats = random_matrices(rng, 10)
    pts = random_points(rng, 5)
    out = []
    for D in D_list:
        Q = representative(D)
        fams: Dict[str, tuple] = {
            "fQ": (lambda z: modforms.eval_fQ(k, Q, z, policy).value, 2 * k),
            "GQ": (lambda z: modforms.eval_GQ(k, Q, z, policy).value, 2 - 2 * k),
        }
        for n in range(1, 2 * k + 1):
            fams[f"FnQ n={n}"] = (lambda z, n=n: modforms.eval_FnQ(k, n, Q, z, policy).value, 2 * n - 2 * k)
        for label, (F, weight) in fams.items():
            pairs = []
            for z in pts:
                base = F(z)
                for M in mats:
                    pairs.append((F(moebius(M, z)), j_factor(M, z) ** weight * base))
            out.append(_worst(f"modularity k={k} D={D} {label}", pairs, tol))
    return out


_FIXED_POINTS = (0.3 + 1.5j, -0.2 + 1.2j, 0.1 + 2.2j)


def suite_xi(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    tol = _tol(1e-5, tolerance)
    out = []
    for D in D_list:
        Q = representative(D)
        pairs = []
        for z in _FIXED_POINTS:
            G = modforms.field(modforms.eval_GQ, k, Q, center=z, policy=policy)
            pairs.append((operators.xi(2 - 2 * k, G, z), modforms.eval_fQ(k, Q, z, policy).value))
        out.append(_worst(f"xi k={k} D={D} xi(G_Q)=f_Q", pairs, tol))
    return out


def _fd_config(order: int) -> operators.FDConfig:
    return HIGH_ORDER_FD if order >= 5 else operators.DEFAULT_FD


def suite_dee(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    tol = _tol(1e-3, tolerance)
    p = 2 * k - 1
    const = -math.factorial(2 * k - 2) / (4 * math.pi) ** p
    cfg = _fd_config(p)
    out = []
    for D in D_list:
        Q = representative(D)
        pairs = []
        for z in _FIXED_POINTS:
            G = modforms.field(modforms.eval_GQ, k, Q, center=z, policy=policy)
            pairs.append((operators.dee_power(p, G, z, cfg), const * modforms.eval_fQ(k, Q, z, policy).value))
        out.append(_worst(f"dee k={k} D={D} D^(2k-1)(G_Q)", pairs, tol))
    pairs = []
    for z in (0.1 + 0.5j, -0.2 + 0.6j, 0.3 + 0.4j):
        lhs = operators.dee_power(p, lambda u: modforms.eval_g1mk(k, u), z, cfg)
        rhs = -math.factorial(2 * k - 2) / (4j * math.pi) ** p * z ** (-k)
        pairs.append((lhs, rhs))
    out.append(_worst(f"dee k={k} D^(2k-1)(g_1-k)", pairs, tol))
    return out


def suite_raise(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    tol = _tol(1e-4, tolerance)
    out = []
    for D in D_list:
        Q = representative(D)
        for n in range(2, 2 * k + 1):
            cfg = _fd_config(n - 1)
            pairs = []
            for z in _FIXED_POINTS:
                G = modforms.field(modforms.eval_GQ, k, Q, center=z, policy=policy)
                lhs = (2 * k - 1) / math.factorial(n - 1) * operators.raise_iter(2 - 2 * k, n - 1, G, z, cfg)
                pairs.append((lhs, modforms.eval_FnQ(k, n, Q, z, policy).value))
            out.append(_worst(f"raise k={k} D={D} n={n}", pairs, tol))
    return out


def suite_almostmero(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    tol = _tol(1e-5, tolerance)
    tol_fd = _tol(1e-4, tolerance)
    rng = np.random.default_rng(seed)
    pts = random_points(rng, 10)
    out = []
    for D in D_list:
        Q = representative(D)
        tau = cm_point(Q)
        out.append(
            _worst(
                f"almostmero k={k} D={D} (1) F_k,Q=-G_k/(2^k w beta)",
                [(modforms.eval_FnQ(k, k, Q, z, policy).value, greens.fkq_from_green(k, Q, z, policy)) for z in pts],
                tol,
            )
        )
        for n in range(1, 2 * k + 1):
            tag = "(1)" if n <= k else "(2)"
            out.append(
                _worst(
                    f"almostmero k={k} D={D} {tag} n={n} via raised G_k",
                    [(modforms.eval_FnQ(k, n, Q, z, policy).value, greens.fn_from_green(k, n, z, tau, policy)) for z in pts],
                    tol,
                )
            )
        out.append(
            _worst(
                f"almostmero k={k} D={D} (3) F_2k,Q=f_Q",
                [(modforms.eval_FnQ(k, 2 * k, Q, z, policy).value, modforms.eval_fQ(k, Q, z, policy).value) for z in pts],
                tol,
            )
        )
        # FD-assisted: numerical raising of G_k(., tau_Q) against the closed form
        for j in (1, 2):
            pairs = []
            for z in pts[:3]:
                g = lambda w, z=z: greens.eval_green(k, w, tau, policy, center=z).value  # noqa: E731
                pairs.append((operators.raise_iter(0, j, g, z), greens.eval_raised_green(k, j, z, tau, policy).value))
            out.append(_worst(f"almostmero k={k} D={D} FD R^{j} G_k", pairs, tol_fd))
    return out


def suite_qrep(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    tol = _tol(1e-5, tolerance)
    tol_pp = _tol(1e-4, tolerance)
    rho = 0.1 + 2.5j  # r-distance > 0.4 from the CM points of D = 3, 4
    out = []
    for D in D_list:
        Q = representative(D)
        G = modforms.field(modforms.eval_GQ, k, Q, center=rho, policy=policy)
        exp = ellexp.polar_coeffs(G, rho, k, range(0, 3), R1=0.15, R2=0.3)
        for n in range(3):
            out.append(
                make_check(f"qrep k={k} D={D} a+({n}) at {rho}", exp.plus_coeffs[n], ellexp.a_plus_closed(k, n, Q, rho, policy), tol)
            )
        tau, _ = reduce_point(cm_point(Q))
        Qm = inner._class_member_at(Q, tau)
        Gt = modforms.field(modforms.eval_GQ, k, Qm, center=tau, policy=policy)
        exp_t = ellexp.polar_coeffs(Gt, tau, k, range(k - 1, k))
        out.append(
            make_check(
                f"qrep k={k} D={D} principal coefficient at tau_Q",
                exp_t.minus_coeffs[k - 1],
                2.0 ** (2 - 3 * k) * tau.imag ** (1 - k),
                tol_pp,
            )
        )
    return out


def suite_inner_routes(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    tol = _tol(1e-6, tolerance)
    out = []
    Ds = list(D_list)
    for a in range(len(Ds)):
        for b in range(len(Ds)):
            if a == b:
                continue
            Q1, Q2 = representative(Ds[a]), representative(Ds[b])
            if ellexp._same_orbit(cm_point(Q1), cm_point(Q2)):
                continue
            _, poles = inner.fq_input(k, Q1, policy, depth=k + 2)
            vals = {
                "greens": inner.inner_greens(k, Q1, Q2, policy).value,
                "wnotz": inner.inner_wnotz(poles, k, Q2, policy).value,
                "residue": inner.inner_residue(poles, k, Q2, policy).value,
                "meromain": inner.inner_meromain(poles, k, Q2, policy).value,
            }
            tag = f"inner-routes k={k} <f_{Q1},f_{Q2}>"
            for r in ("wnotz", "residue", "meromain"):
                out.append(make_check(f"{tag} {r}=greens", vals[r], vals["greens"], tol))
            out.append(make_check(f"{tag} residue=wnotz", vals["residue"], vals["wnotz"], tol))
    if Ds:
        zero = inner.inner_wnotz([], k, representative(Ds[0]), policy).value
        out.append(make_check(f"inner-routes k={k} pole-free input gives 0", zero, 0.0, 0.0))
    return out


def log_slope(k: int, zz, policy: SumPolicy) -> float:
    """Fitted slope of ``G_k(z, zz)`` against ``log r_zz(z)`` as ``z -> zz``."""
    zz = as_point(zz)
    ts = np.array([1e-3, 1e-4, 1e-5])
    z = zz + 1j * ts * zz.imag
    vals = [greens.eval_green(k, p, zz, policy).value.real for p in z]
    rs = np.abs((z - zz) / (z - np.conj(zz)))
    return float(np.polyfit(np.log(rs), vals, 1)[0])


def suite_green_props(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    rng = np.random.default_rng(seed)
    mats = random_matrices(rng, 5)
    zs = random_points(rng, 3)
    zzs = [1j, RHO, 0.1 + 1.7j]
    out = []

    def G(z, zz, center=None):
        return greens.eval_green(k, z, zz, policy, center=center).value

    for zz in zzs:
        label = f"green-props k={k} zz={complex(zz):.4f}"
        w = stabilizer_order(zz)
        vals = [G(z, zz) for z in zs]
        real = [make_check(f"{label} realness", v.imag, 0.0, _tol(1e-12, tolerance), scale=max(1.0, abs(v))) for v in vals]
        out.append(max(real, key=lambda c: c.rel_err))
        out.append(_worst(f"{label} symmetry", [(G(zz, z), v) for z, v in zip(zs, vals)], _tol(1e-7, tolerance)))
        pairs = []
        for z, v in zip(zs, vals):
            for M in mats:
                pairs.append((G(moebius(M, z), zz), v))
                pairs.append((G(z, moebius(M, zz)), v))
        out.append(_worst(f"{label} bi-invariance", pairs, _tol(1e-7, tolerance)))
        z = zs[0]
        g = lambda p, zz=zz, z=z: G(p, zz, center=z)  # noqa: E731
        out.append(make_check(f"{label} Laplace eigenvalue", operators.laplacian(0, g, z) / g(z), k * (1 - k), _tol(1e-3, tolerance)))
        out.append(make_check(f"{label} log-singularity slope", log_slope(k, zz, policy), 2 * w, _tol(0.05, tolerance)))
        ys = np.linspace(2.0, 10.0, 9)
        mags = [abs(G(0.1 + 1j * y, zz)) for y in ys]
        violations = sum(b >= a for a, b in zip(mags, mags[1:]))
        out.append(make_check(f"{label} cusp decay (monotonicity violations)", violations, 0.0, 0.0))
    return out


def suite_specfun(k: int, D_list: Sequence[int], seed: int, tolerance=None, policy=None) -> List[Check]:
    tol = _tol(1e-9, tolerance)
    rng = np.random.default_rng(seed)
    F = gauss_2f1
    euler, contiguous, star, bpos = [], [], [], []
    for _ in range(50):
        kk = int(rng.integers(2, 7))
        n = int(rng.integers(1, 2 * kk + 1))
        w = float(rng.uniform(0.0, 0.95))
        a, b, c = kk - (n - 1) / 2.0, kk - n / 2.0, kk + 0.5
        euler.append((F(a, b, c, w), (1 - w) ** (c - a - b) * F(c - a, c - b, c, w)))
        lhs = (c - a) * F(a - 1, b, c, w)
        rhs = (-b * w + (c - a)) * F(a, b, c, w) + w * (1 - w) * a * b / c * F(a + 1, b + 1, c + 1, w)
        contiguous.append((lhs, rhs))

        ks = int(rng.integers(2, 5))
        r = float(rng.uniform(0.1, 0.9))
        upper = math.atanh((1 - r * r) / (1 + r * r))
        quad, _ = integrate.quad(lambda t: math.sinh(t) ** (2 * ks - 2), 0.0, upper, epsabs=0, epsrel=1e-13)
        star.append((sinh_power_integral(ks, 1 - r * r), quad))

        # left side from the defining difference beta - C (not the reflected
        # evaluation inside beta0); r >= 0.5 keeps that difference well conditioned
        kb = int(rng.integers(2, 6))
        m = int(rng.integers(1, 5))
        rb = float(rng.uniform(0.5, 0.95))
        lhs = incomplete_beta(1 - rb * rb, 2 * kb - 1, m) - c_const(2 * kb - 1, m)
        bpos.append((lhs, -incomplete_beta(rb * rb, m, 2 * kb - 1)))
        bpos.append((beta0(1 - r * r, 2 * kb - 1, m), -incomplete_beta(r * r, m, 2 * kb - 1)))
    return [
        _worst("specfun Euler transformation", euler, tol),
        _worst("specfun contiguous relation", contiguous, tol),
        _worst("specfun sinh-integral identity", star, tol),
        _worst("specfun beta0 positive-index identity", bpos, tol),
        make_check("specfun complete beta(2,2)", complete_beta(2), special.beta(2, 2), tol),
    ]


SUITES: Dict[str, Callable[..., List[Check]]] = {
    "modularity": suite_modularity,
    "xi": suite_xi,
    "dee": suite_dee,
    "raise": suite_raise,
    "almostmero": suite_almostmero,
    "qrep": suite_qrep,
    "inner-routes": suite_inner_routes,
    "green-props": suite_green_props,
    "specfun-identities": suite_specfun,
}


def run_suite(name: str, ks: Sequence[int], D_list: Sequence[int], seed: int = 0, tolerance=None, policy=modforms.DEFAULT_POLICY) -> List[Check]:
    """Run suite ``name`` (or ``"all"``) for every ``k`` in ``ks``."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise DomainError(f"unknown suite {name!r}")
    checks: List[Check] = []
    for s in names:
        for k in ks:
            if s == "specfun-identities" and k != ks[0]:
                continue
            checks.extend(SUITES[s](k, D_list, seed, tolerance, policy))
    return checks

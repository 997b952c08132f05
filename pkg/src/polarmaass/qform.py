"""Exact arithmetic on integral binary quadratic forms.

Forms ``[a, b, c]`` stand for ``a x^2 + b x y + c y^2``.  Everything in this
module works on Python integers; floating point only appears in the two
evaluation helpers :func:`q_value` and :func:`q_z` and in :func:`cm_point`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

from .errors import DomainError


@dataclass(frozen=True)
class UnimodularMatrix:
    """Integer 2x2 matrix ``[[a, b], [c, d]]`` with determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise DomainError(f"matrix {self.as_list()} does not have determinant 1")

    @classmethod
    def identity(cls) -> "UnimodularMatrix":
        return cls(1, 0, 0, 1)

    @classmethod
    def S(cls) -> "UnimodularMatrix":
        return cls(0, -1, 1, 0)

    @classmethod
    def T(cls, t: int = 1) -> "UnimodularMatrix":
        return cls(1, t, 0, 1)

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "UnimodularMatrix":
        return UnimodularMatrix(-self.a, -self.b, -self.c, -self.d)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def as_list(self) -> List[List[int]]:
        return [[self.a, self.b], [self.c, self.d]]


@dataclass(frozen=True)
class BinaryQuadraticForm:
    """Integral binary quadratic form ``[a, b, c]``."""

    a: int
    b: int
    c: int

    @classmethod
    def from_seq(cls, seq) -> "BinaryQuadraticForm":
        a, b, c = (int(v) for v in seq)
        return cls(a, b, c)

    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def D(self) -> int:
        """``D = -discriminant`` (positive for definite forms)."""
        return -self.discriminant()

    def is_positive_definite(self) -> bool:
        return self.discriminant() < 0 and self.a > 0

    def is_negative_definite(self) -> bool:
        return self.discriminant() < 0 and self.a < 0

    def __neg__(self) -> "BinaryQuadraticForm":
        return BinaryQuadraticForm(-self.a, -self.b, -self.c)

    def __call__(self, x, y=1):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def as_list(self) -> List[int]:
        return [self.a, self.b, self.c]

    def __str__(self) -> str:
        return f"[{self.a},{self.b},{self.c}]"


@dataclass(frozen=True)
class SumPolicy:
    """Truncation policy for every infinite lattice sum.

    Attributes
    ----------
    coefficient_bound : int
        Size of the truncation region.  Lattice sums over orbit points keep
        exactly the points ``w`` with ``cosh d(center, w) <= coefficient_bound``
        (for class sums this is ``Q_z <= sqrt(D) * coefficient_bound``).  The
        region is a hyperbolic ball, so every truncated sum is still exactly
        modular.  :func:`enumerate_class` reads it as a bound on ``a``.
    tail_tolerance : float
        Target for the estimated truncation error; results whose tail
        estimate exceeds it are flagged as not converged.
    """

    coefficient_bound: int = 500
    tail_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.coefficient_bound < 1:
            raise DomainError("coefficient_bound must be >= 1")
        if not self.tail_tolerance > 0:
            raise DomainError("tail_tolerance must be positive")


def _as_form(Q) -> BinaryQuadraticForm:
    if isinstance(Q, BinaryQuadraticForm):
        return Q
    return BinaryQuadraticForm.from_seq(Q)


def apply_matrix(Q, M: UnimodularMatrix) -> BinaryQuadraticForm:
    """Return ``Q o M``, the form ``(x, y) -> Q(a x + b y, c x + d y)``."""
    Q = _as_form(Q)
    A, B, C = Q.a, Q.b, Q.c
    a, b, c, d = M.as_tuple()
    return BinaryQuadraticForm(
        A * a * a + B * a * c + C * c * c,
        2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
        A * b * b + B * b * d + C * d * d,
    )


def is_reduced(Q) -> bool:
    Q = _as_form(Q)
    a, b, c = Q.a, Q.b, Q.c
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce(Q) -> Tuple[BinaryQuadraticForm, UnimodularMatrix]:
    """Gauss reduction of a positive-definite form.

    Returns the reduced form ``R`` together with ``M`` such that
    ``apply_matrix(Q, M) == R``.
    """
    Q = _as_form(Q)
    if Q.discriminant() >= 0:
        raise DomainError(f"{Q} is not definite (discriminant {Q.discriminant()})")
    if Q.a <= 0:
        raise DomainError(f"{Q} is not positive definite")
    S = UnimodularMatrix.S()
    M = UnimodularMatrix.identity()
    a, b, c = Q.a, Q.b, Q.c
    while True:
        # translate b into (-a, a]
        t = (a - b) // (2 * a)
        if t:
            b, c = b + 2 * a * t, a * t * t + b * t + c
            M = M @ UnimodularMatrix.T(t)
        if a > c:
            a, b, c = c, -b, a
            M = M @ S
            continue
        break
    if a == c and b < 0:
        b = -b
        M = M @ S
    return BinaryQuadraticForm(a, b, c), M


def equivalent(Q1, Q2) -> bool:
    """Proper SL2(Z)-equivalence of two positive-definite forms."""
    return reduce(Q1)[0] == reduce(Q2)[0]


def _check_discriminant(D: int) -> None:
    if D <= 0 or (-D) % 4 not in (0, 1):
        raise DomainError(f"-{D} is not a negative discriminant")


def class_representatives(D: int) -> List[BinaryQuadraticForm]:
    """Reduced positive-definite forms of discriminant ``-D``, sorted."""
    D = int(D)
    _check_discriminant(D)
    out = []
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            num = b * b + D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            F = BinaryQuadraticForm(a, b, c)
            if is_reduced(F):
                out.append(F)
        a += 1
    return sorted(out, key=lambda F: (F.a, F.b, F.c))


def class_number(D: int) -> int:
    return len(class_representatives(D))


def enumerate_class(Q, policy) -> List[BinaryQuadraticForm]:
    """Forms ``[a', b', c']`` in the class of ``Q`` with ``0 < a' <= bound``.

    For each ``a'`` the middle coefficient runs over ``|b'| <= a'``, i.e. one
    window of width ``2a'`` of the translation action ``b' -> b' + 2a'``
    (both ends included).  Membership in the class is decided by reduction.
    ``policy`` is a :class:`SumPolicy` or a bare integer bound (``0`` gives
    the empty list).
    """
    Q = _as_form(Q)
    if not Q.is_positive_definite():
        raise DomainError(f"{Q} is not positive definite")
    D = Q.D
    target = reduce(Q)[0]
    out = []
    bound = policy.coefficient_bound if isinstance(policy, SumPolicy) else int(policy)
    for a in range(1, bound + 1):
        for b in range(-a, a + 1):
            if (b - Q.b) % 2:
                continue
            num = b * b + D
            if num % (4 * a):
                continue
            F = BinaryQuadraticForm(a, b, num // (4 * a))
            if reduce(F)[0] == target:
                out.append(F)
    return out


def cm_point(Q) -> complex:
    """CM point ``tau_Q = (-b + i sqrt(D)) / (2a)``."""
    Q = _as_form(Q)
    if not Q.is_positive_definite():
        raise DomainError(f"{Q} is not positive definite")
    return complex(-Q.b, math.sqrt(Q.D)) / (2 * Q.a)


def q_value(Q, z):
    """``Q(z, 1) = a z^2 + b z + c``; works elementwise on numpy arrays."""
    Q = _as_form(Q)
    return (Q.a * z + Q.b) * z + Q.c


def q_z(Q, z):
    """``Q_z = (a |z|^2 + b x + c) / y``."""
    Q = _as_form(Q)
    x, y = z.real, z.imag
    return (Q.a * (x * x + y * y) + Q.b * x + Q.c) / y


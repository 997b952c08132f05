import math

import pytest


def brute_reduced_forms(D):
    """Reduced positive-definite forms of discriminant -D by exhaustive search."""
    out = []
    for a in range(1, D + 1):
        for b in range(-a, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            out.append((a, b, c))
    return sorted(out)


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture
def rel():
    return rel_err


RHO = complex(-0.5, math.sqrt(3) / 2)

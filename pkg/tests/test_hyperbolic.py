import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarmaass import hyperbolic as hyp
from polarmaass import qform
from polarmaass.errors import DomainError
from polarmaass.qform import UnimodularMatrix as UM

from conftest import RHO

points = st.builds(complex, st.floats(-3, 3), st.floats(0.05, 5))


@st.composite
def matrices(draw):
    M = UM.identity()
    for t in draw(st.lists(st.integers(-3, 3), min_size=1, max_size=3)):
        M = M @ UM.T(t) @ UM.S()
    return M


def test_as_point_validation():
    assert hyp.as_point((0.5, 2.0)) == 0.5 + 2j
    assert hyp.as_point({"x": 0.5, "y": 2.0}) == 0.5 + 2j
    with pytest.raises(DomainError):
        hyp.as_point(1 - 1j)
    assert hyp.point_to_json(0.5 + 2j) == {"x": 0.5, "y": 2.0}


def test_moebius_examples():
    assert hyp.moebius(UM.identity(), 0.3 + 2j) == pytest.approx(0.3 + 2j)
    assert hyp.moebius(UM.S(), 1j) == pytest.approx(1j)
    assert hyp.moebius(UM.T(1), 1j) == pytest.approx(1 + 1j)


def test_cosh_dist_examples():
    assert hyp.cosh_dist(1j, 1j) == pytest.approx(1.0)
    assert hyp.cosh_dist(1j, 2j) == pytest.approx(1.25)


@pytest.mark.parametrize("Q,z", [([1, 1, 1], 0.2 + 1.3j), ([2, 1, 3], -0.7 + 0.4j), ([3, -2, 5], 1.5 + 2j)])
def test_cosh_dist_to_cm_point(Q, z):
    D = -qform.BinaryQuadraticForm.from_seq(Q).discriminant()
    assert hyp.cosh_dist(qform.cm_point(Q), z) == pytest.approx(qform.q_z(Q, z) / math.sqrt(D), rel=1e-12)


def test_x_coord_examples():
    assert hyp.x_coord(1j, 1j) == pytest.approx(0)
    assert hyp.x_coord(1j, 2j) == pytest.approx(1 / 3)


def test_reduce_point_examples():
    z, M = hyp.reduce_point(2j)
    assert z == pytest.approx(2j) and M == UM.identity()
    z, M = hyp.reduce_point(0.25j)
    assert z == pytest.approx(4j) and M == UM.S()
    z, M = hyp.reduce_point(1 + 2j)
    assert z == pytest.approx(2j) and M == UM.T(-1)


def test_stabilizer_order_examples():
    assert hyp.stabilizer_order(1j) == 2
    assert hyp.stabilizer_order(RHO) == 3
    assert hyp.stabilizer_order(RHO + 1) == 3
    assert hyp.stabilizer_order(2j) == 1
    assert hyp.stabilizer_order(hyp.moebius(UM(2, 1, 1, 1), 1j)) == 2


def test_stabilizer_fixes_point():
    for z in (1j, RHO, 0.3 + 1.7j):
        stab = hyp.stabilizer(z)
        assert len(stab) == 2 * hyp.stabilizer_order(z)  # SL2(Z) stabilizer contains -I
        for M in stab:
            assert hyp.moebius(M, z) == pytest.approx(z)


def test_matrices_up_to_height_one_matches_exhaustive_enumeration():
    oracle = set()
    for a, b, c, d in itertools.product((-1, 0, 1), repeat=4):
        if a * d - b * c == 1:
            oracle.add(max((a, b, c, d), (-a, -b, -c, -d)))
    out = hyp.matrices_up_to_height(1)
    assert len(out) == len(oracle) == 10
    assert {max(M.as_tuple(), tuple(-v for v in M.as_tuple())) for M in out} == oracle
    for M in (UM.identity(), UM.S(), UM.T(1), UM.T(-1), UM.S() @ UM.T(1), UM.T(1) @ UM.S()):
        t = M.as_tuple()
        assert max(t, tuple(-v for v in t)) in oracle


def test_matrices_up_to_height_determinant():
    assert all(M.a * M.d - M.b * M.c == 1 for M in hyp.matrices_up_to_height(4))


def test_orbit_in_ball_contains_all_orbit_points():
    # brute force over the height-8 matrices
    zz, center, C = 1j, 2j, 10.0
    orb = hyp.orbit_in_ball(zz, center, C)
    got = {(round(w.real, 9), round(w.imag, 9)) for w in orb.w}
    want = set()
    for M in hyp.matrices_up_to_height(8):
        w = hyp.moebius(M, zz)
        if hyp.cosh_dist(center, w) <= C:
            want.add((round(w.real, 9), round(w.imag, 9)))
    assert want <= got
    assert all(hyp.cosh_dist(center, w) <= C for w in orb.w)


@settings(max_examples=100, deadline=None)
@given(points, points, matrices())
def test_cosh_dist_invariant(z, w, M):
    assert hyp.cosh_dist(hyp.moebius(M, z), hyp.moebius(M, w)) == pytest.approx(hyp.cosh_dist(z, w), rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(points, points)
def test_r_coord_is_tanh_half_distance(rho, z):
    r = hyp.r_coord(rho, z)
    assert 0 <= r < 1
    d = math.acosh(max(1.0, hyp.cosh_dist(rho, z)))
    assert r == pytest.approx(math.tanh(d / 2), rel=1e-10, abs=1e-12)


def test_r_coord_zero_only_at_center():
    assert hyp.r_coord(0.3 + 1j, 0.3 + 1j) == 0
    assert hyp.r_coord(0.3 + 1j, 0.3 + 1.000001j) > 0


@settings(max_examples=100, deadline=None)
@given(points)
def test_reduce_point_lands_in_fundamental_domain(z):
    red, M = hyp.reduce_point(z)
    assert abs(red.real) <= 0.5 + 1e-12
    assert abs(red) >= 1 - 1e-12
    assert hyp.moebius(M, z) == pytest.approx(red, rel=1e-10, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(1, 1, 1), (1, 0, 1), (2, 1, 3), (3, 2, 5)]), points)
def test_one_minus_r2_identities(Q, z):
    a = Q[0]
    D = 4 * Q[0] * Q[2] - Q[1] ** 2
    tau = qform.cm_point(Q)
    r2 = hyp.r_coord(tau, z) ** 2
    denom = a * abs(z - tau.conjugate()) ** 2
    assert 1 - r2 == pytest.approx(2 * z.imag * math.sqrt(D) / denom, rel=1e-10, abs=1e-14)
    assert 1 + r2 == pytest.approx(2 * z.imag * qform.q_z(Q, z) / denom, rel=1e-10)


def test_vectorised_inputs():
    z = np.array([1j, 2j, 0.5 + 1j])
    assert np.allclose(hyp.cosh_dist(z, 1j), [1.0, 1.25, 1.125])

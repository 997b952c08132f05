import math

import numpy as np
import pytest

from polarmaass import modforms as mf
from polarmaass.errors import DomainError, SingularPointError
from polarmaass.hyperbolic import j_factor, moebius
from polarmaass.qform import BinaryQuadraticForm as BQF
from polarmaass.qform import SumPolicy, cm_point
from polarmaass.qform import UnimodularMatrix as UM

from conftest import rel_err

P500 = SumPolicy(coefficient_bound=500)
P1000 = SumPolicy(coefficient_bound=1000)
P2000 = SumPolicy(coefficient_bound=2000)
Q3 = BQF(1, 1, 1)
Q4 = BQF(1, 0, 1)
S = UM.S()

# Frozen values from tests/oracles/generate_golden.py (independent mpmath
# enumeration with the same truncation region).
GOLDEN_FQ_K2_D3_2I_C2000 = -0.026386845334616157
GOLDEN_FKD_K2_D4_C2000 = -0.11844321930683442
GOLDEN_GQ_K2_D3_2I_C1000 = -0.92348749513370166
GOLDEN_FNQ_K2_N2_D3_2I_C2000 = 2.7946682845225051
GOLDEN_FN_PAIR_K2_N2 = 0.55989804125270567
GOLDEN_G_PAIR_K2 = -0.4213537250827922
GOLDEN_G1MK_K2 = complex(0.13056997632204686, 0.087046650881364583)


def test_k_validation():
    with pytest.raises(DomainError):
        mf.eval_fQ(1, Q3, 2j)


# --------------------------------------------------------------------- f_Q


def test_fQ_golden():
    r = mf.eval_fQ(2, Q3, 2j, P2000)
    assert rel_err(r.value, GOLDEN_FQ_K2_D3_2I_C2000) < 1e-12
    assert r.tail_bound >= 0 and r.terms_used > 0


def test_fQ_translation_and_S():
    z = 0.3 + 2j
    assert rel_err(mf.eval_fQ(2, Q3, z + 1, P500).value, mf.eval_fQ(2, Q3, z, P500).value) < 1e-8
    lhs = mf.eval_fQ(2, Q3, moebius(S, z), P500).value * z ** (-4)
    assert rel_err(lhs, mf.eval_fQ(2, Q3, z, P500).value) < 1e-8


def test_fQ_singular_point():
    with pytest.raises(SingularPointError):
        mf.eval_fQ(2, Q3, cm_point(Q3) + 1)


def test_fQ_cusp_decay():
    ys = np.linspace(5, 20, 8)
    mags = [abs(mf.eval_fQ(2, Q3, 1j * y, P500, summation="strip").value) for y in ys]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    # decays like a cusp form: ratio e^{-2 pi dy}
    ratios = np.array(mags[1:]) / np.array(mags[:-1])
    assert np.allclose(ratios, math.exp(-2 * math.pi * (ys[1] - ys[0])), rtol=1e-3)


def test_strip_summation_agrees_with_ball():
    for k, Q, z in [(2, Q3, 0.3 + 1.1j), (3, BQF(2, 1, 3), -0.2 + 1.4j), (2, Q4, 2j)]:
        ball = mf.eval_fQ(k, Q, z, P2000)
        strip = mf.eval_fQ(k, Q, z, P2000, summation="strip")
        assert abs(ball.value - strip.value) <= ball.tail_bound + strip.tail_bound


def test_strip_summation_limit_and_symmetries():
    strip = mf.eval_fQ(2, Q3, 2j, P2000, summation="strip")
    assert abs(strip.value - GOLDEN_FQ_K2_D3_2I_C2000) <= mf.eval_fQ(2, Q3, 2j, P2000).tail_bound
    z = 0.3 + 1.3j
    f = lambda w: mf.eval_fQ(2, Q3, w, P500, summation="strip")  # noqa: E731
    assert rel_err(f(z + 1).value, f(z).value) < 1e-12
    assert abs(f(moebius(S, z)).value * z ** (-4) - f(z).value) <= 4 * f(z).tail_bound


def test_strip_summation_errors():
    with pytest.raises(DomainError):
        mf.eval_fQ(2, Q3, 2j, summation="bogus")
    with pytest.raises(SingularPointError):
        mf.eval_fQ(2, Q3, cm_point(Q3) + 2, summation="strip")


# ------------------------------------------------------------------ f_{k,-D}


def test_f_kD_golden_and_periodicity():
    z = 0.5 + 2j
    r = mf.eval_f_kD(2, 4, z, P2000)
    assert rel_err(r.value, GOLDEN_FKD_K2_D4_C2000) < 1e-12
    assert rel_err(mf.eval_f_kD(2, 4, z + 1, P500).value, mf.eval_f_kD(2, 4, z, P500).value) < 1e-8


def test_f_kD_is_sum_of_two_orientations():
    # (-Q)^{-k} = (-1)^k Q^{-k}: the orientations coincide for even k and cancel for odd k
    z = 0.2 + 1.6j
    for summation in ("ball", "strip"):
        pos = mf.eval_fQ(2, Q3, z, P500, summation=summation).value
        assert rel_err(mf.eval_f_kD(2, 3, z, P500, summation=summation).value, 2 * pos) < 1e-12
        assert abs(mf.eval_f_kD(3, 3, z, P500, summation=summation).value) < 1e-12


# ------------------------------------------------------------------ f_{k,delta}


def test_f_kdelta_real_on_imaginary_axis():
    v = mf.eval_f_kdelta(2, 5, 1j, P500).value
    assert abs(v.imag) < 1e-12 * max(1.0, abs(v))


def test_f_kdelta_translation():
    z = 0.2 + 1.3j
    a = mf.eval_f_kdelta(2, 5, z, P500).value
    b = mf.eval_f_kdelta(2, 5, z + 1, P500).value
    assert abs(a - b) < 1e-7


def test_f_kdelta_decay():
    ys = np.linspace(5, 20, 6)
    mags = [abs(mf.eval_f_kdelta(2, 5, 1j * y, P500, summation="strip").value) for y in ys]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    assert mags[-1] < 1e-50


def test_f_kdelta_weight_four_vanishes():
    # there are no cusp forms of weight 4, so both truncations are within their tail bounds of 0
    for summation in ("ball", "strip"):
        r = mf.eval_f_kdelta(2, 5, 0.2 + 0.7j, P500, summation=summation)
        assert abs(r.value) <= r.tail_bound


def test_f_kdelta_weight_twelve_is_multiple_of_delta():
    # S_12 is spanned by Delta; the ratio f_{6,5}/Delta is constant
    def delta_fn(z):
        q = np.exp(2j * math.pi * z)
        n = np.arange(1, 200)
        return q * np.prod((1 - q**n) ** 24)

    zs = [0.1 + 1.1j, -0.3 + 0.9j, 0.25 + 1.6j]
    ratios = [mf.eval_f_kdelta(6, 5, z, P2000, summation="strip").value / delta_fn(z) for z in zs]
    assert abs(ratios[0]) > 1
    assert all(rel_err(r, ratios[0]) < 1e-3 for r in ratios[1:])


def test_f_kdelta_rejects_bad_discriminant():
    with pytest.raises(DomainError):
        mf.eval_f_kdelta(2, 4, 1j)  # square
    with pytest.raises(DomainError):
        mf.eval_f_kdelta(2, 7, 1j)  # not 0, 1 mod 4


# ----------------------------------------------------------------------- G_Q


def test_GQ_golden():
    assert rel_err(mf.eval_GQ(2, Q3, 2j, P1000).value, GOLDEN_GQ_K2_D3_2I_C1000) < 1e-12


def test_GQ_modularity():
    z = 0.3 + 1.4j
    G = mf.eval_GQ(2, Q3, z, P500).value
    assert rel_err(mf.eval_GQ(2, Q3, z + 1, P500).value, G) < 1e-8
    assert rel_err(mf.eval_GQ(2, Q3, moebius(S, z), P500).value, z ** (-2) * G) < 1e-6


def test_GQ_poincare_agrees():
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(1.0, 2.5))
        assert rel_err(mf.eval_GQ_poincare(2, Q3, z, P500).value, mf.eval_GQ(2, Q3, z, P500).value) < 1e-6
    z = 1 / 3 + 1.5j
    assert rel_err(mf.eval_GQ_poincare(3, Q4, z, P500).value, mf.eval_GQ(3, Q4, z, P500).value) < 1e-6
    assert rel_err(mf.eval_GQ_poincare(2, Q3, z + 1, P500).value, mf.eval_GQ_poincare(2, Q3, z, P500).value) < 1e-8


def test_GQ_singular_point():
    with pytest.raises(SingularPointError):
        mf.eval_GQ(2, Q3, cm_point(Q3))


# ------------------------------------------------------------------ F_{n,Q}


def test_FnQ_golden():
    assert rel_err(mf.eval_FnQ(2, 2, Q3, 2j, P2000).value, GOLDEN_FNQ_K2_N2_D3_2I_C2000) < 1e-12


def test_FnQ_special_cases():
    z = 2j
    assert rel_err(mf.eval_FnQ(2, 1, Q3, z, P500).value, 3 * mf.eval_GQ(2, Q3, z, P500).value) < 1e-8
    for z in (2j, 0.3 + 1.2j, -0.4 + 3j):
        assert rel_err(mf.eval_FnQ(2, 4, Q3, z, P500).value, mf.eval_fQ(2, Q3, z, P500).value) < 1e-8


def test_FnQ_rejects_n0():
    with pytest.raises(DomainError):
        mf.eval_FnQ(2, 0, Q3, 2j)


# ---------------------------------------------------- two-variable families


def test_fn_pair_and_g_pair_golden():
    assert rel_err(mf.eval_fn_pair(2, 2, 2j, 1j), GOLDEN_FN_PAIR_K2_N2) < 1e-13
    assert rel_err(mf.eval_g_pair(2, 2j, 1j), GOLDEN_G_PAIR_K2) < 1e-13


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_Fn_pair_matches_FnQ(n):
    tau = cm_point(Q3)
    a = mf.eval_Fn_pair(2, n, 2j, tau, P500).value
    b = mf.eval_FnQ(2, n, Q3, 2j, P500).value
    assert rel_err(a, b) < 1e-6


def test_Fn_pair_and_G1_pair_second_variable_invariance():
    zz = 0.2 + 1.3j
    M = UM(2, 1, 1, 1)
    for ev in (lambda w: mf.eval_Fn_pair(2, 2, 2j, w, P500).value, lambda w: mf.eval_G1_pair(2, 2j, w, P500).value):
        assert rel_err(ev(moebius(M, zz)), ev(zz)) < 1e-6


def test_G1_pair_matches_GQ():
    assert rel_err(mf.eval_G1_pair(2, 2j, cm_point(Q3), P500).value, mf.eval_GQ(2, Q3, 2j, P500).value) < 1e-6


# ------------------------------------------------------------------------ Psi


def test_psi_reproduces_fQ():
    k, tau = 2, cm_point(Q3)
    omega = 3
    psi = mf.eval_psi(2 * k, -k, 2j, tau, P500).value
    assert rel_err((2 * tau.imag) ** k / (2 * omega) * psi, mf.eval_fQ(2, Q3, 2j, P500).value) < 1e-5


def test_psi_cusp_form_vanishes_in_weight_4():
    r = mf.eval_psi(4, 0, 0.1 + 1.3j, 2j, P500)
    assert abs(r.value) <= r.tail_bound


def test_psi_vanishes_off_congruence():
    # at zz = i (omega = 2) the sum vanishes unless m = -kappa/2 mod 2
    assert abs(mf.eval_psi(4, -1, 0.3 + 1.5j, 1j, P500).value) < 1e-12
    assert abs(mf.eval_psi(4, -2, 0.3 + 1.5j, 1j, P500).value) > 1e-3


def test_psi_translation():
    z = 0.1 + 1.4j
    a = mf.eval_psi(4, -2, z, 2j, P500).value
    assert rel_err(mf.eval_psi(4, -2, z + 1, 2j, P500).value, a) < 1e-8


def test_psi_rejects_small_weight():
    with pytest.raises(DomainError):
        mf.eval_psi(2, -1, 2j, 1j)


# ------------------------------------------------------------------ g_{1-k}


def test_g1mk():
    assert rel_err(mf.eval_g1mk(2, 0.3 + 0.2j), GOLDEN_G1MK_K2) < 1e-13
    assert abs(mf.eval_g1mk(2, 0.999999)) < 1e-12
    with pytest.raises(DomainError):
        mf.eval_g1mk(2, 1.2 + 0j)
    with pytest.raises(DomainError):
        mf.eval_g1mk(2, 0j)


# ------------------------------------------------------------ properties


@pytest.mark.parametrize("k", [2, 3])
def test_weight_transformations(k):
    rng = np.random.default_rng(7)
    mats = [UM(2, 1, 1, 1), UM(1, -2, 1, -1), UM(3, 2, 4, 3)]
    pts = [complex(rng.uniform(-0.5, 0.5), rng.uniform(1.1, 2.0)) for _ in range(2)]
    fams = [
        (lambda z: mf.eval_fQ(k, Q4, z, P500).value, 2 * k),
        (lambda z: mf.eval_GQ(k, Q4, z, P500).value, 2 - 2 * k),
        (lambda z: mf.eval_FnQ(k, 2, Q4, z, P500).value, 4 - 2 * k),
    ]
    for F, weight in fams:
        for z in pts:
            for M in mats:
                assert rel_err(F(moebius(M, z)), j_factor(M, z) ** weight * F(z)) < 1e-7


def test_tail_honesty():
    cases = [
        (lambda p: mf.eval_fQ(2, Q3, 0.3 + 1.7j, p)),
        (lambda p: mf.eval_GQ(2, Q4, -0.1 + 1.2j, p)),
        (lambda p: mf.eval_FnQ(3, 2, Q3, 0.2 + 2.1j, p)),
        (lambda p: mf.eval_Fn_pair(2, 1, 1.5j, 0.1 + 1.1j, p)),
    ]
    for ev in cases:
        small, big = ev(SumPolicy(coefficient_bound=250)), ev(P500)
        assert abs(small.value - big.value) <= small.tail_bound


def test_tail_bound_covers_limit():
    r = mf.eval_fQ(2, Q3, 2j, P500)
    assert abs(r.value - GOLDEN_FQ_K2_D3_2I_C2000) <= r.tail_bound
    assert not r.converged  # the tail estimate exceeds 1e-9 at this bound


def test_field_placeholder():
    c = 0.2 + 1.5j
    f = mf.field(mf.eval_psi, 4, -2, mf.VAR, 2j, center=c)
    assert f(c) == mf.eval_psi(4, -2, c, 2j, center=c).value
    g = mf.field(mf.eval_fQ, 2, Q3, center=c)
    assert g(c) == mf.eval_fQ(2, Q3, c, center=c).value
    with pytest.raises(DomainError):
        mf.field(mf.eval_psi, 4, mf.VAR, mf.VAR, 2j, center=c)


def test_array_field_matches_scalar():
    c = 0.1 + 1.5j
    zs = np.array([0.1 + 1.5j, 0.2 + 1.45j, -0.05 + 1.6j])
    f = mf.array_field("fQ", 2, Q3, center=c)
    want = [mf.eval_fQ(2, Q3, z, center=c).value for z in zs]
    assert np.allclose(f(zs), want, rtol=1e-12, atol=0)


def test_eval_result_serialisation():
    d = mf.eval_fQ(2, Q3, 2j).to_dict()
    assert set(d) == {"value", "tail_bound", "terms_used", "converged"}
    assert isinstance(d["value"], list) and len(d["value"]) == 2

import math

import numpy as np
import pytest

from polarmaass import inner
from polarmaass.errors import DomainError
from polarmaass.qform import BinaryQuadraticForm as BQF
from polarmaass.qform import SumPolicy

from conftest import RHO, rel_err

P500 = SumPolicy(coefficient_bound=500)
Q3, Q4, Q7 = BQF(1, 1, 1), BQF(1, 0, 1), BQF(1, 1, 2)

# Petersson norm of the discriminant function, int_F |Delta|^2 y^12 dmu
DELTA_NORM = 1.035362056804320e-6


def delta_form(z):
    z = np.asarray(z, dtype=complex)
    q = np.exp(2j * np.pi * z)
    p = q.copy()
    for n in range(1, 40):
        p = p * (1 - q**n) ** 24
    return p


@pytest.fixture(scope="module")
def poles():
    return {(k, D): inner.fq_input(k, Q, P500, depth=k + 2)[1] for k in (2, 3) for D, Q in ((3, Q3), (4, Q4), (7, Q7))}


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("D1,D2", [(3, 4), (4, 3), (3, 7), (7, 4)])
def test_routes_agree(poles, k, D1, D2):
    Q = {3: Q3, 4: Q4, 7: Q7}
    g = inner.inner_greens(k, Q[D1], Q[D2], P500).value
    p = poles[(k, D1)]
    for route in (inner.inner_wnotz, inner.inner_residue, inner.inner_meromain):
        assert rel_err(route(p, k, Q[D2], P500).value, g) < 1e-9


def test_frozen_values():
    assert inner.inner_greens(2, Q3, Q4, P500).value == pytest.approx(-2.3866441590400354, rel=1e-12)
    assert inner.inner_greens(3, Q3, Q4, P500).value == pytest.approx(0.647135450135256, rel=1e-12)


@pytest.mark.parametrize("k", [2, 3])
def test_greens_route_is_hermitian_and_real(k):
    a = inner.inner_greens(k, Q3, Q7, P500)
    b = inner.inner_greens(k, Q7, Q3, P500)
    assert a.value.imag == 0
    assert rel_err(a.value, b.value.conjugate()) < 1e-12
    assert a.method == "greens" and a.error_estimate > 0


def test_self_product_routes_agree(poles):
    # f_Q against itself: the pole sits at [tau_Q] and the omitted-term coefficient enters
    for k in (2, 3):
        w = inner.inner_wnotz(poles[(k, 3)], k, Q3, P500).value
        r = inner.inner_residue(poles[(k, 3)], k, Q3, P500).value
        assert rel_err(w, r) < 1e-10
        assert abs(w.imag) < 1e-12 * abs(w)


def test_diagonal_and_meromain_restrictions(poles):
    with pytest.raises(DomainError):
        inner.inner_greens(2, Q3, BQF(1, -1, 1), P500)
    with pytest.raises(DomainError):
        inner.inner_meromain(poles[(2, 3)], 2, Q3, P500)
    with pytest.raises(DomainError):
        inner.inner_wnotz(None, 2, Q3, P500)


def test_pole_free_input_gives_zero():
    for route in (inner.inner_wnotz, inner.inner_residue, inner.inner_meromain):
        assert route([], 2, Q3, P500).value == 0


def test_psi_pair_values():
    assert inner.inner_psi_pair(2, -2, 1j, 1j, P500).value == pytest.approx(-2.063113608151544, rel=1e-8)
    assert inner.inner_psi_pair(2, 0, 1j, RHO, P500).value == 0
    with pytest.raises(DomainError):
        inner.inner_psi_pair(2, -1, 1j, 1j, P500)  # m + k must be divisible by omega_i = 2
    with pytest.raises(DomainError):
        inner.inner_psi_pair(2, -4, 1j, 1j, P500)


def test_hybrid_reproduces_petersson_norm_of_delta():
    r = inner.inner_hybrid(delta_form, [], delta_form, [], 6, inner.QuadConfig(cell_tolerance=1e-10))
    assert r.method == "hybrid"
    assert rel_err(r.value, DELTA_NORM) < 1e-9
    plain = inner.excised_integral(delta_form, delta_form, [], 6, 0.05, inner.QuadConfig(cell_tolerance=1e-10))
    assert rel_err(plain, DELTA_NORM) < 1e-9


def test_hybrid_matches_greens_route():
    f, fp = inner.fq_input(2, Q3, P500)
    g, gp = inner.fq_input(2, Q4, P500)
    r = inner.inner_hybrid(f, fp, g, gp, 2, inner.QuadConfig(cell_tolerance=1e-6))
    ref = inner.inner_greens(2, Q3, Q4, P500)
    # the closed form carries the lattice truncation error of G_2 at C = 500
    assert abs(r.value - ref.value) < ref.error_estimate
    assert rel_err(r.value, ref.value) < 1e-2


def test_quad_config_validation():
    for kw in ({"y_cap": 2}, {"delta": 0.5}, {"delta": 0}, {"cell_tolerance": 0}, {"depth": 0}):
        with pytest.raises(DomainError):
            inner.QuadConfig(**kw)


def test_hybrid_rejects_oversized_delta():
    f, fp = inner.fq_input(2, Q3, P500)
    g, gp = inner.fq_input(2, Q4, P500)
    with pytest.raises(DomainError):
        inner.inner_hybrid(f, fp, g, gp, 2, inner.QuadConfig(delta=0.39))


def test_pole_spec_requires_reduced_location():
    f, fp = inner.fq_input(2, Q4, P500)
    with pytest.raises(DomainError):
        inner.PoleSpec(1j + 1, fp[0].expansion)
    with pytest.raises(DomainError):
        inner.PoleSpec(RHO, fp[0].expansion)


def test_expansion_radius():
    # nearest other orbit point of 5i is 5i + 1; of i it is i + 1 (r = 1/sqrt 5)
    assert inner.expansion_radius(5j) == pytest.approx(0.6 / abs(1 + 10j), rel=1e-12)
    assert inner.expansion_radius(1j) == pytest.approx(0.6 / math.sqrt(5), rel=1e-12)
    assert inner.expansion_radius(1j, cap=0.1) == 0.1


def test_result_serialisation():
    d = inner.inner_greens(2, Q3, Q4, P500).to_dict()
    assert d["method"] == "greens" and len(d["value"]) == 2
    with pytest.raises(ValueError):
        inner.InnerProductResult(1.0, "coeff", -1.0)


def test_phi_constant_matches_direct_integral():
    from scipy.integrate import quad

    for n, k, d in ((0, 2, 0.15), (2, 3, 0.1)):
        val, _ = quad(lambda R: R ** (1 + 2 * n) * (1 - R * R) ** (2 * k - 2), 0, d)
        assert inner.phi_constant(n, k, d) == pytest.approx(val, rel=1e-12)
    assert math.isfinite(inner.phi_constant(-1, 2, 0.15))

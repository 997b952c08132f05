import numpy as np
import pytest

from polarmaass import verify
from polarmaass.errors import DomainError


def test_make_check():
    c = verify.make_check("x", 1.0 + 1e-9, 1.0, 1e-8)
    assert c.passed and c.rel_err == pytest.approx(1e-9, rel=1e-6)
    assert not verify.make_check("y", 2.0, 1.0, 0.5).passed
    # zero reference falls back to the absolute error
    assert verify.make_check("z", 1e-13, 0.0, 1e-12).passed
    assert verify.make_check("s", 1.0, 1.1, 0.01, scale=100.0).passed


def test_report_is_sorted_and_counts():
    checks = [verify.make_check(n, 1, 1, 0.1) for n in ("b", "a")] + [verify.make_check("c", 2, 1, 0.1)]
    doc = verify.report(checks)
    assert [c["name"] for c in doc["checks"]] == ["a", "b", "c"]
    assert doc["pass_count"] == 2 and doc["fail_count"] == 1
    assert doc["checks"][2]["pass"] is False


def test_unknown_suite():
    with pytest.raises(DomainError):
        verify.run_suite("nope", [2], [3])


def test_suites_are_deterministic():
    a = verify.report(verify.run_suite("modularity", [2], [3], seed=7))
    b = verify.report(verify.run_suite("modularity", [2], [3], seed=7))
    assert a == b


def test_random_points_lie_in_fundamental_domain():
    pts = verify.random_points(np.random.default_rng(1), 50)
    assert all(abs(z.real) <= 0.5 and abs(z) >= 1 for z in pts)


@pytest.mark.parametrize("name", ["xi", "inner-routes", "specfun-identities", "almostmero"])
def test_fast_suites_pass(name):
    checks = verify.run_suite(name, [2], [3, 4])
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_tolerance_override_can_fail_a_suite():
    checks = verify.run_suite("xi", [2], [3], tolerance=0.0)
    assert any(not c.passed for c in checks)


def test_log_slope_matches_stabilizer():
    from polarmaass.qform import SumPolicy

    # G_k(z, zz) ~ 2 omega log r near zz; omega = 2 at i
    assert verify.log_slope(2, 1j, SumPolicy(coefficient_bound=500)) == pytest.approx(4.0, rel=1e-2)

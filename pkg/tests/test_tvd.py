import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hybridtvd.errors import DegenerateSpeedError
from hybridtvd.models import builtin_model
from hybridtvd.tvd import (BoundParams, bounds_bw, bounds_lxw, interface_speed, lmp_check,
                           lmp_mask, ratio_fields, safe_ratio, signum, smoothness_ratio,
                           split_flux_diffs, split_speeds)

burgers = builtin_model("burgers")
adv = builtin_model("advection", a=1.0)


def test_interface_speed_examples():
    assert interface_speed(0.0, 1.0, burgers) == 0.5
    assert interface_speed(2.0, 2.0, burgers) == 2.0
    a3 = builtin_model("advection", a=3.0)
    assert interface_speed(np.array([0.0, 5.0]), np.array([1.0, -2.0]), a3).tolist() == [3.0, 3.0]


def test_split_speeds_signs():
    s = split_speeds(np.array([-2.0, 0.0, 3.0]))
    assert s.a_plus.tolist() == [0.0, 0.0, 3.0]
    assert s.a_minus.tolist() == [-2.0, 0.0, 0.0]


def test_signum_zero_is_plus():
    assert signum(0.0) == 1.0 and signum(-1e-300) == -1.0


def _ratio(u, lam, i, sign, model=adv):
    speeds, diffs = split_flux_diffs(np.asarray(u, float), model)
    return smoothness_ratio(diffs, speeds, lam, i, sign)


def test_ratio_at_peak():
    assert _ratio([0, 1, 0], 0.5, 1, "+") == -1.0


def test_ratio_constant_is_one():
    assert _ratio([2, 2, 2], 0.5, 1, "+") == 1.0
    neg = builtin_model("advection", a=-1.0)
    assert _ratio([2, 2, 2], 0.5, 1, "-", neg) == 1.0


def test_ratio_linear_data():
    assert _ratio([0, 1, 2], 0.5, 1, "+") == pytest.approx(1.0)


def test_ratio_minus_part_mirrors_plus():
    neg = builtin_model("advection", a=-1.0)
    u = np.array([0.0, 1.0, 3.0])
    # for a < 0 the upwind side is on the right: r- = du_{i+1/2} / du_{i-1/2}
    assert _ratio(u, 0.4, 1, "-", neg) == pytest.approx(2.0)
    assert _ratio(u, 0.4, 1, "+") == pytest.approx(0.5)


def test_ratio_zero_denominator():
    assert _ratio([0, 1, 1], 0.5, 1, "+") == np.inf
    assert _ratio([1, 0, 0], 0.5, 1, "+") == -np.inf


def test_safe_ratio_conventions():
    assert safe_ratio(0.0, 0.0) == 1.0
    assert safe_ratio(-2.0, 0.0) == -np.inf
    assert safe_ratio(3.0, 2.0) == 1.5


def test_ratio_fields_matches_pointwise(rng):
    u = rng.standard_normal(12)
    speeds, diffs = split_flux_diffs(u, burgers)
    rp, rp1, rm, rm1 = ratio_fields(diffs, speeds, 0.3)
    for i in range(1, 11):
        assert rp[i] == smoothness_ratio(diffs, speeds, 0.3, i, "+")
        assert rm[i] == smoothness_ratio(diffs, speeds, 0.3, i, "-")
    np.testing.assert_array_equal(rp1[2:], rp[1:-1])
    np.testing.assert_array_equal(rm1[:-2], rm[1:-1])


def test_bounds_lxw_examples():
    assert bounds_lxw(1.0) == (0.0, pytest.approx(1 / 3, abs=1e-12))
    k, g = bounds_lxw(1e-12)
    assert k == pytest.approx(-1.0, abs=1e-11) and g == pytest.approx(0.0, abs=1e-12)
    k, g = bounds_lxw(0.5)
    assert k == pytest.approx(-1 / 3) and g == pytest.approx(0.2)


def test_bounds_bw_examples():
    assert bounds_bw(0.5) == (pytest.approx(-3.0), pytest.approx(5.0))
    k, g = bounds_bw(1e-9)
    assert k < -1e8 and g == pytest.approx(3.0, abs=1e-8)
    k, g = bounds_bw(1 - 1e-12)
    assert k == pytest.approx(-1.0, abs=1e-11) and g > 1e11
    assert bounds_bw(1.0)[1] == np.inf
    with pytest.raises(DegenerateSpeedError):
        bounds_bw(0.0)


def test_bound_params():
    b = BoundParams.at(0.5)
    assert (b.kappa1, b.gamma1, b.kappa2, b.gamma2) == pytest.approx((-1 / 3, 0.2, -3.0, 5.0))


nus = st.floats(1e-6, 1 - 1e-6)


@given(nu=nus, dnu=st.floats(1e-4, 0.5))
def test_bound_shapes(nu, dnu):
    k1, g1 = bounds_lxw(nu)
    k2, g2 = bounds_bw(nu)
    assert -1 < k1 < 0 < g1 < 1 / 3
    assert k2 <= -1 and g2 >= 3
    nu2 = min(nu + dnu, 1 - 1e-7)
    if nu2 > nu:
        assert bounds_lxw(nu2)[0] > k1 and bounds_lxw(nu2)[1] > g1


@given(nu=nus)
def test_bounds_sign_symmetric(nu):
    assert bounds_lxw(nu) == bounds_lxw(-nu)
    assert bounds_bw(nu) == bounds_bw(-nu)


def test_bounds_vectorised():
    nu = np.array([0.25, 0.5, 0.75])
    k1, g1 = bounds_lxw(nu)
    assert k1.shape == (3,)
    np.testing.assert_allclose(bounds_bw(nu)[0], [-7.0, -3.0, -5 / 3])


def test_lmp_check_examples():
    assert lmp_check(1.5, (2.0, 1.0, 0.0), +1)
    assert not lmp_check(2.1, (2.0, 1.0, 0.0), +1)
    assert lmp_check(1.0, (5.0, 1.0, -3.0), -1)
    assert not lmp_check(1.5, (2.0, 1.0, 0.0), -1)
    with pytest.raises(ValueError):
        lmp_check(1.0, (0, 1, 2), 0)


def test_lmp_mask_agrees_with_pointwise(rng):
    old = rng.standard_normal(20)
    new = old + 0.3 * rng.standard_normal(20)
    a = rng.choice([-1.0, 1.0], 19)
    mask = lmp_mask(new, old, a[:-1], a[1:])
    for k in range(1, 19):
        if a[k - 1] > 0 and a[k] > 0:
            assert mask[k - 1] == lmp_check(new[k], old[k - 1:k + 2], +1)
        elif a[k - 1] < 0 and a[k] < 0:
            assert mask[k - 1] == lmp_check(new[k], old[k - 1:k + 2], -1)


@given(arrays(np.float64, 16, elements=st.floats(-10, 10)))
@settings(max_examples=60)
def test_splitting_consistency(u):
    for model in (burgers, adv, builtin_model("buckley", alpha=0.5)):
        speeds, diffs = split_flux_diffs(u, model)
        np.testing.assert_array_equal(speeds.a_plus + speeds.a_minus, speeds.a)
        assert np.all(speeds.a_plus >= 0) and np.all(speeds.a_minus <= 0)
        df = np.diff(model.flux(u))
        np.testing.assert_allclose(diffs.total, speeds.a * np.diff(u), rtol=1e-15, atol=0)
        close = np.abs(np.diff(u)) > 1e-6
        np.testing.assert_allclose(diffs.total[close], df[close], rtol=1e-9, atol=1e-12)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hybridtvd.errors import ConfigurationError
from hybridtvd.models import builtin_ic
from hybridtvd.sensor import (SensorParams, compact_derivatives, dilate, local_ratio,
                              local_ratio_field, multigrid_ratio, shock_switch, truncation_sum)


def test_params_validation():
    with pytest.raises(ConfigurationError):
        SensorParams(epsilon=0.0)
    with pytest.raises(ConfigurationError):
        SensorParams(delta=1.5)
    with pytest.raises(ConfigurationError):
        SensorParams(mr_threshold=-1)


@pytest.mark.parametrize("periodic", [True, False])
def test_constant_field_derivatives_vanish(periodic):
    d = compact_derivatives(np.full(32, 3.0), 0.1, periodic=periodic)
    for k in (4, 5, 6):
        assert np.max(np.abs(d[k])) <= 1e-10 * 3.0 / 0.1 ** k


def test_sine_fourth_derivative():
    n, k = 64, 2.0
    h = 2 * np.pi / n
    x = np.arange(n) * h
    d = compact_derivatives(np.sin(k * x), h, (1, 4), periodic=True)
    assert k * h <= 0.5
    np.testing.assert_allclose(d[1], k * np.cos(k * x), atol=1e-6)
    np.testing.assert_allclose(d[4], k ** 4 * np.sin(k * x), atol=1e-4 * k ** 4)


def test_bounded_first_derivative_accuracy():
    x = np.linspace(0, 1, 41)
    h = x[1] - x[0]
    d = compact_derivatives(np.sin(3 * x), h, (1,), periodic=False)[1]
    # the zero-gradient padding only disturbs a narrow ring at the ends
    np.testing.assert_allclose(d[10:-10], 3 * np.cos(3 * x[10:-10]), atol=1e-4)


def test_linear_ramp_high_derivatives_vanish_inside():
    u = np.linspace(0, 1, 100)
    d = compact_derivatives(u, 1.0, periodic=False)
    # the padding kink decays geometrically into the interior
    assert np.max(np.abs(d[4][30:-30])) < 1e-6


def test_too_few_points():
    with pytest.raises(ConfigurationError):
        compact_derivatives(np.zeros(4), 1.0, periodic=True)
    with pytest.raises(ConfigurationError):
        compact_derivatives(np.zeros(7), 1.0, periodic=False)


def test_multigrid_ratio_smooth_is_large():
    x = np.linspace(-1, 1, 100, endpoint=False)
    mr = multigrid_ratio(np.sin(np.pi * x), 0.02, 1e-8, periodic=True)
    assert np.median(mr) == pytest.approx(16.0, rel=0.1)
    assert mr.min() > 4.0


def test_multigrid_ratio_step_is_small():
    u = np.where(np.arange(100) < 50, 1.0, 0.0)
    mr = multigrid_ratio(u, 1.0, 1e-8, periodic=False)
    assert mr[48:52].min() <= 4.0


def test_truncation_sum_constant():
    assert np.all(truncation_sum(np.ones(20)) == 0.0)


def test_local_ratio_examples():
    sym = np.array([1.0, 3.0, 5.0, 3.0, 1.0])
    assert local_ratio(sym, 2) == 0.0
    step = np.array([0.0, 0.0, 0.0, 1.0, 1.0])
    # u'_L = 0, u'_R = -4 + 1 = -3
    assert local_ratio(step, 2) == pytest.approx(9.0 / (9.0 + 1e-8))
    ramp = np.arange(5.0)
    uL = 3 * 2 - 4 * 1 + 0
    uR = 3 * 2 - 4 * 3 + 4
    assert local_ratio(ramp, 2, 1e-8) == pytest.approx(abs((uR ** 2 - uL ** 2) / (uL ** 2 + uR ** 2 + 1e-8)))
    with pytest.raises(IndexError):
        local_ratio(ramp, 1)


def test_local_ratio_field_matches_pointwise(rng):
    u = rng.standard_normal(30)
    lr = local_ratio_field(u, 1e-8, periodic=False)
    for i in range(2, 28):
        assert lr[i] == pytest.approx(local_ratio(u, i, 1e-8), rel=1e-14, abs=1e-15)


@given(arrays(np.float64, 12, elements=st.floats(-1, 1)).filter(lambda u: np.ptp(u) > 1e-3))
@settings(max_examples=50)
def test_local_ratio_scale_invariant(u):
    a = local_ratio_field(u, 1e-14)
    b = local_ratio_field(1000.0 * u, 1e-14)
    ok = np.abs(np.diff(u)).min() > 1e-6
    if ok:
        np.testing.assert_allclose(a, b, atol=1e-6)
    assert np.all((a >= 0) & (a <= 1 + 1e-12))


def test_switch_smooth_sine_unflagged():
    x = np.linspace(-1, 1, 100, endpoint=False)
    assert not shock_switch(np.sin(np.pi * x), 0.02, SensorParams(1e-8, 0.8)).any()


@pytest.mark.parametrize("periodic", [True, False])
def test_switch_flags_heaviside(periodic):
    u = np.where(np.arange(100) < 50, 1.0, 0.0)
    if periodic:
        u = np.where((np.arange(100) >= 25) & (np.arange(100) < 75), 1.0, 0.0)
    flags = shock_switch(u, 0.01, SensorParams(1e-8, 0.8), periodic=periodic)
    jump = 74 if periodic else 49
    band = np.flatnonzero(flags)
    assert band.size >= 3
    assert flags[jump] and flags[jump + 1]


def test_switch_constant_unflagged():
    assert not shock_switch(np.full(50, 2.0), 0.1, SensorParams()).any()


def test_dilation():
    f = np.zeros(10, bool)
    f[[0, 5]] = True
    assert np.flatnonzero(dilate(f, periodic=True)).tolist() == [0, 1, 4, 5, 6, 9]
    assert np.flatnonzero(dilate(f, periodic=False)).tolist() == [0, 1, 4, 5, 6]


@given(arrays(np.bool_, 20))
def test_dilation_grows_by_one_ring(f):
    d = dilate(f)
    assert np.all(d[f])
    ring = f | np.roll(f, 1) | np.roll(f, -1)
    np.testing.assert_array_equal(d, ring)


def test_sensitivity_ordering_on_harten():
    x = np.linspace(-1, 1, 160, endpoint=False) + 1 / 160
    u = builtin_ic("harten")(x)
    strong = shock_switch(u, 2 / 160, SensorParams(1e-2, 0.8)).sum()
    mild = shock_switch(u, 2 / 160, SensorParams(1e-8, 0.2)).sum()
    assert strong <= mild
    assert mild > 0


def test_batched_rows_match_single():
    x = np.linspace(0, 1, 40, endpoint=False)
    rows = np.stack([np.sin(2 * np.pi * x), np.where(x < 0.5, 1.0, 0.1)])
    both = shock_switch(rows, 1 / 40, SensorParams(), periodic=False)
    for k in range(2):
        np.testing.assert_array_equal(both[k], shock_switch(rows[k], 1 / 40, SensorParams(), periodic=False))

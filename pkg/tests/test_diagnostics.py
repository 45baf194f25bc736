import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hybridtvd.diagnostics import (TABLE_HEADER, ConvergenceTable, TVTrace, convergence_sweep,
                                   error_norms, lmp_violations, rates, total_variation)
from hybridtvd.errors import UnsupportedTimeError
from hybridtvd.mesh import BoundaryPolicy

PER, OUT = BoundaryPolicy("periodic"), BoundaryPolicy("outflow")


def test_total_variation_examples():
    assert total_variation(np.full(7, 3.0), PER) == 0.0
    assert total_variation([0.0, 1.0, 0.0], OUT) == 2.0
    assert total_variation([0.0, 1.0, 2.0], PER) == 4.0


def test_total_variation_sine_matches_dense_arc():
    # one period of amplitude 1: variation 4
    dense = np.sin(np.pi * np.linspace(-1, 1, 200001))
    oracle = np.sum(np.abs(np.diff(dense)))
    x = np.linspace(-1, 1, 4000, endpoint=False)
    tv = total_variation(np.sin(np.pi * x), PER)
    assert oracle == pytest.approx(4.0, abs=1e-8)
    assert tv == pytest.approx(oracle, abs=1e-5)


@given(arrays(np.float64, st.integers(2, 60), elements=st.floats(-1e6, 1e6)))
@settings(max_examples=60)
def test_total_variation_pairwise_oracle(u):
    brute = sum(abs(u[k + 1] - u[k]) for k in range(len(u) - 1))
    assert total_variation(u, OUT) == pytest.approx(brute, rel=1e-13, abs=1e-13)
    wrap = brute + abs(u[0] - u[-1])
    assert total_variation(u, PER) == pytest.approx(wrap, rel=1e-13, abs=1e-13)


def test_tv_trace():
    tr = TVTrace()
    for t, v in [(0, 2.0), (0.1, 1.5), (0.2, 1.6), (0.3, 1.6 + 1e-13)]:
        tr.append(t, v)
    assert tr.violations() == [2]
    assert tr.max_increase() == pytest.approx(0.1)
    assert tr.to_csv().splitlines()[0] == "t,tv"
    with pytest.raises(ValueError):
        tr.append(1.0, -1.0)


def test_error_norms_examples():
    x = np.linspace(0, 1, 11)
    assert error_norms(x, x, 0.1) == (0.0, 0.0)
    l1, linf = error_norms(x + 0.25, lambda: x, 0.1)
    assert linf == 0.25 and l1 == pytest.approx(0.25 * 11 * 0.1)
    with pytest.raises(UnsupportedTimeError):
        error_norms(x, np.full(11, np.nan), 0.1)


def test_rates():
    np.testing.assert_array_equal(rates([1.0, 0.25, 0.0625]), [np.nan, 2.0, 2.0])
    r = rates([1.0, 0.0, 0.0])
    assert np.all(np.isnan(r))


def test_convergence_sweep_and_csv():
    table = convergence_sweep(lambda n: (1.0 / n ** 2, 2.0 / n ** 2), [10, 20, 40])
    assert table.N == [10, 20, 40]
    np.testing.assert_allclose(table.Linf_rate[1:], 2.0)
    lines = table.to_csv().splitlines()
    assert lines[0] == ",".join(TABLE_HEADER)
    assert lines[1].split(",")[2] == "nan"
    with pytest.raises(ValueError):
        convergence_sweep(lambda n: (1, 1), [10, 30])


def test_convergence_zero_errors_give_nan_rates():
    table = convergence_sweep(lambda n: (0.0, 0.0), [8, 16, 32])
    assert np.all(np.isnan(table.L1_rate)) and np.all(np.isnan(table.Linf_rate))


def test_convergence_partial_table():
    def run(n):
        if n > 20:
            raise FloatingPointError("blew up")
        return 1.0 / n, 1.0 / n

    table = convergence_sweep(run, [10, 20, 40, 80])
    assert table.N == [10, 20] and not table.complete
    assert 40 in table.failed and "FAILED" in table.to_csv()


def test_single_row_table():
    t = ConvergenceTable()
    t.add(10, 0.1, 0.2)
    assert np.isnan(t.L1_rate[0]) and np.isnan(t.Linf_rate[0])


def test_lmp_violations_flags_overshoot():
    old = np.array([0.0, 0.0, 1.0, 2.0, 3.0, 3.0, 3.0])
    a = np.ones(6)
    new_ok = np.array([0.5, 1.5, 2.5])
    assert lmp_violations(new_ok, old, a, np.zeros(3), 2, 5).size == 0
    new_bad = np.array([0.5, 2.5, 2.5])
    assert lmp_violations(new_bad, old, a, np.zeros(3), 2, 5).tolist() == [1]
    assert lmp_violations(new_bad, old, a, np.array([0, 3, 0]), 2, 5).size == 0

import numpy as np
import pytest

from hybridtvd.errors import ConfigurationError
from hybridtvd.mesh import BoundaryPolicy, Grid1D
from hybridtvd.models import builtin_model
from hybridtvd.schemes import (CellChoice, SchemeId, SchemeState, flux_bw, flux_flic,
                               flux_force, flux_fromm, flux_lf, flux_lxw, flux_upwind,
                               interface_fluxes, minbee, step_hybrid, superbee, upwind_ratio)
from hybridtvd.sensor import SensorParams

adv = builtin_model("advection", a=1.0)
PERIODIC = BoundaryPolicy("periodic")


def test_flux_consistency_constant_state():
    u = np.full(8, 0.7)
    for model in (adv, builtin_model("burgers"), builtin_model("buckley")):
        F = model.flux(u)
        a = np.full(7, float(model.flux_deriv(0.7)))
        f0 = float(model.flux(0.7))
        assert flux_lxw(F[2], F[3], a[2], 0.4, 0.0) == f0
        assert flux_lf(F[2], F[3], 0.4, 0.0) == f0
        assert flux_upwind(F[2], F[3], a[2], 0.0) == f0
        assert flux_force(F[2], F[3], 0.7, 0.7, 0.4, a[2]) == f0
        assert flux_bw(u, F, a, 0.4, 3, +1) == f0
        assert flux_bw(u, F, a, 0.4, 3, -1) == f0
        assert flux_fromm(u, F, a, 0.4, 3, +1) == f0
        assert flux_flic(u, F, a, 0.4, 3) == f0
        for name in ("upwind1", "lax_wendroff", "force", "flic(minbee)", "tvd_lw(superbee)",
                     "beam_warming", "fromm"):
            fl = interface_fluxes(SchemeId.parse(name), u, F, a, 0.4)
            np.testing.assert_array_equal(fl[1:-1], f0)


def test_flux_lxw_examples():
    assert flux_lxw(0.0, 1.0, 1.0, 1.0, 1.0) == 0.0
    assert flux_lxw(0.0, 1.0, 1.0, 0.5, 1.0) == 0.25


def test_flux_bw_examples():
    u = np.array([0.0, 1.0, 1.0])
    a = np.ones(2)
    assert flux_bw(u, u, a, 1.0, 1, +1) == 1.0
    assert flux_bw(u, u, a, 0.5, 1, +1) == pytest.approx(1.0 + 0.25 * 1.0)


def test_flux_fromm_is_average():
    u = np.array([0.0, 1.0, 2.0, 3.0])
    a = np.ones(3)
    lxw = flux_lxw(u[1], u[2], 1.0, 0.5, 1.0)
    bw = flux_bw(u, u, a, 0.5, 1, +1)
    assert flux_fromm(u, u, a, 0.5, 1, +1) == pytest.approx(0.5 * (lxw + bw))


def test_flux_force_examples():
    assert flux_force(0.0, 1.0, 0.0, 1.0, 0.5, 1.0) == pytest.approx(-0.125)
    # unit CFL: LF and LxW both reduce to the upwind flux
    assert flux_force(0.0, 1.0, 0.0, 1.0, 1.0, 1.0) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        flux_force(0, 1, 0, 1, 0.0, 1.0)


def test_flic_limits():
    lam = 0.5
    lin = np.arange(6, dtype=float)
    a = np.ones(5)
    assert flux_flic(lin, lin, a, lam, 2) == pytest.approx(flux_lxw(2.0, 3.0, 1.0, lam, 1.0))
    peak = np.array([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    force = flux_force(1.0, 0.0, 1.0, 0.0, lam, 1.0)
    assert flux_flic(peak, peak, a, lam, 2) == pytest.approx(force)
    assert minbee(0.5) == 0.5 and superbee(0.5) == 1.0 and superbee(3.0) == 2.0


def test_upwind_ratio_direction():
    du = np.array([1.0, 2.0, 4.0])
    np.testing.assert_allclose(upwind_ratio(du, np.ones(3))[1], 0.5)
    np.testing.assert_allclose(upwind_ratio(du, -np.ones(3))[1], 2.0)


@pytest.mark.parametrize("text", ["upwind1", "force", "flic(minbee)", "tvd_lw(superbee)",
                                  "hybrid_flwbw(force)", "hybrid_lw(upwind1)",
                                  "shock_corrected(hybrid_flwbw(flic(minbee)))",
                                  "shock_corrected(hybrid_bw(tvd_lw(minbee)))"])
def test_scheme_roundtrip(text):
    s = SchemeId.parse(text)
    assert SchemeId.parse(str(s)) == s
    assert str(s) == text


def test_scheme_aliases():
    assert SchemeId.parse("flwbw(upwind)") == SchemeId.parse("hybrid_flwbw(upwind1)")
    assert SchemeId.parse("flic").limiter == "minbee"


@pytest.mark.parametrize("bad", ["hybrid_lw", "hybrid_lw(hybrid_bw(force))", "shock_corrected(force)",
                                 "force(minbee)", "flic(vanleer)", "warp", "(", "upwind1(force)"])
def test_scheme_rejects(bad):
    with pytest.raises(ConfigurationError):
        SchemeId.parse(bad)


def _step(u, scheme, cfl=0.5, model=adv, bc=PERIODIC, sensor=None, policy="theorem", backend=None):
    g = Grid1D(len(u), 0.0, 1.0)
    dt = cfl * g.dx / max(model.max_speed(u), 1e-300)
    return step_hybrid(SchemeState(np.asarray(u, float)), model, g, SchemeId.parse(scheme), dt, bc,
                       sensor, policy, backend)


def test_shock_corrected_needs_sensor():
    with pytest.raises(ConfigurationError):
        _step(np.zeros(16), "shock_corrected(hybrid_flwbw(force))")


@pytest.mark.parametrize("scheme", ["hybrid_lw(force)", "hybrid_bw(upwind1)",
                                    "hybrid_flwbw(flic(minbee))", "lax_wendroff", "fromm"])
def test_constant_state_unchanged(scheme):
    st, _, _ = _step(np.full(16, 0.3), scheme)
    np.testing.assert_allclose(st.u, 0.3, rtol=0, atol=1e-15)


@pytest.mark.parametrize("scheme", ["lax_wendroff", "upwind1"])
def test_unit_cfl_exact_shift(scheme, rng):
    u = rng.standard_normal(20)
    g = Grid1D(20, 0, 1)
    st, _, _ = step_hybrid(SchemeState(u), adv, g, SchemeId.parse(scheme), g.dx, PERIODIC)
    np.testing.assert_allclose(st.u, np.roll(u, 1), atol=1e-14)


def test_monotone_linear_data_is_fromm():
    u = np.linspace(0, 1, 24)
    bc = BoundaryPolicy("outflow")
    hyb, choice, _ = _step(u, "hybrid_flwbw(upwind1)", 0.6, bc=bc)
    fromm, _, _ = _step(u, "fromm", 0.6, bc=bc)
    np.testing.assert_allclose(hyb.u[3:-3], fromm.u[3:-3], atol=1e-14)
    assert np.all(choice[3:-3] == CellChoice.FROMM)


@pytest.mark.parametrize("cfl", [0.2, 0.5, 0.9])
def test_peak_takes_lxw_and_stays_in_hull(cfl):
    u = np.zeros(16)
    u[8] = 1.0
    st, choice, _ = _step(u, "hybrid_lw(upwind1)", cfl)
    assert choice[8] == CellChoice.LXW
    assert 0.0 <= st.u[8] <= 1.0
    assert st.u[8] == pytest.approx(1 - cfl ** 2)
    # the FLWBW family also accepts Beam-Warming there and averages
    _, choice, _ = _step(u, "hybrid_flwbw(upwind1)", cfl)
    assert choice[8] == CellChoice.FROMM


@pytest.mark.parametrize("a", [1.0, -1.0])
@pytest.mark.parametrize("family,pure", [("hybrid_lw", "lax_wendroff"),
                                         ("hybrid_bw", "beam_warming"),
                                         ("hybrid_flwbw", "fromm")])
def test_accept_all_degrades_to_base_scheme(family, pure, a, rng):
    model = builtin_model("advection", a=a)
    u = rng.standard_normal(32)
    hyb, _, _ = _step(u, f"{family}(force)", 0.7, model=model, policy="accept-all")
    ref, _, _ = _step(u, pure, 0.7, model=model)
    np.testing.assert_allclose(hyb.u, ref.u, atol=1e-13)


@pytest.mark.parametrize("ccs", ["upwind1", "force", "flic(minbee)"])
def test_reject_all_degrades_to_ccs(ccs, rng):
    u = rng.standard_normal(32)
    hyb, choice, _ = _step(u, f"hybrid_flwbw({ccs})", 0.7, policy="reject-all")
    ref, _, _ = _step(u, ccs, 0.7)
    np.testing.assert_allclose(hyb.u, ref.u, atol=1e-14)
    assert np.all(choice == CellChoice.CCS)


def test_sonic_stencil_routes_to_ccs():
    burgers = builtin_model("burgers")
    u = np.arange(-9, 11) / 10.0  # u = 0 at cell 9, wind changes sign across it
    _, choice, _ = _step(u, "hybrid_flwbw(force)", 0.5, model=burgers, bc=BoundaryPolicy("outflow"))
    assert choice[9] == CellChoice.CCS
    assert choice[5] != CellChoice.CCS and choice[14] != CellChoice.CCS


def test_sensor_flags_force_ccs():
    u = np.where(np.arange(64) < 32, 1.0, 0.0)
    st, choice, flags = _step(u, "shock_corrected(hybrid_flwbw(upwind1))", 0.5,
                              bc=BoundaryPolicy("outflow"), sensor=SensorParams(1e-8, 0.8))
    assert flags.any()
    assert np.all(choice[flags] == CellChoice.CCS)


def test_ccs_cells_are_conservative(rng):
    u = rng.uniform(0.2, 1.0, 40)
    st, _, _ = _step(u, "force", 0.8)
    assert st.u.sum() == pytest.approx(u.sum(), rel=1e-13)

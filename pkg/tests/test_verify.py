import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eulerheat import analytic
from eulerheat.analytic import ACubic, BTravel, BZk, CGauss, CTravel, DVirial, Mode
from eulerheat.errors import ConvergenceError, DomainError, PoleError
from eulerheat.pdesolver import Grid1D, PorousSnapshot
from eulerheat.verify import (
    ResidualReport,
    VerifyConfig,
    collapse_test,
    convergence_order,
    dumps,
    erratum_report,
    front_fit,
    pde_residual,
    pointwise_residual,
    residual_study,
)


def _report(h, norm):
    return ResidualReport("x", "corrected", ("heat",), {"heat": {"Linf": norm, "L2": norm}}, h, h, ((0, 1), (1, 2)))


def test_convergence_order_examples():
    reps = [_report(h, n) for h, n in [(0.1, 1e-2), (0.05, 2.5e-3), (0.025, 6.25e-4)]]
    assert convergence_order(reps) == pytest.approx(2.0, rel=1e-12)
    assert convergence_order([_report(0.1, 1e-2), _report(0.05, 5e-3)]) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ConvergenceError):
        convergence_order([_report(0.1, 1e-2)])


def test_convergence_order_exact_zero():
    assert convergence_order([_report(0.1, 0.0), _report(0.05, 0.0)]) == math.inf


def test_acubic_exact_residuals():
    rep = pde_residual(ACubic(), dx=1e-3, dt=1e-3)
    assert set(rep.eq_names) == {"continuity", "momentum", "heat"}
    assert rep.linf() < 1e-6


def test_acubic_printed_temperature_fails():
    rep = pde_residual(ACubic(alpha=2, lam=1), dx=1e-3, dt=1e-3, mode=Mode.AS_PRINTED)
    assert rep.linf("heat") > 1e-2


def test_bzk_quasi_stationary():
    rep = pde_residual(BZk(), dx=1e-3, dt=1e-3)
    assert rep.linf("continuity") < 1e-6 and rep.linf("heat") < 1e-6
    assert rep.neglected_norms["Linf"] < 1e-6
    assert rep.linf("momentum") > 1e-2  # reported, not zero


def test_dvirial_exact_order():
    reps = residual_study(DVirial(), [0.04, 0.02, 0.01])
    assert 1.9 <= reps[0].order_estimate <= 4.2


def test_region_guards():
    with pytest.raises(PoleError):
        pde_residual(BZk(), region=((0.0, 5.0), (1.0, 2.0)))
    with pytest.raises(PoleError):
        pde_residual(ACubic(), region=((0.1, 1.0), (0.0, 1.0)))
    with pytest.raises(PoleError):
        pde_residual(DVirial(c1=0, c2=1), region=((1.5, 1.6), (1.0, 1.0)))


def test_pointwise_matches_report():
    fam = ACubic(alpha=2, lam=1)
    r = pointwise_residual(fam, 0.5, 1.5, 1e-3, 1e-3, Mode.AS_PRINTED, "heat")
    assert abs(float(r)) > 1e-3


@pytest.mark.parametrize("family", [ACubic(), BZk(), CGauss(), DVirial()])
def test_collapse_exact(family):
    assert collapse_test(family, (1.0, 2.0, 4.0)).max_pairwise_deviation < 1e-10


def test_bzk_collapse_exponents_third():
    sc = analytic.field_scalings(BZk())["rho"]
    assert sc.amp == pytest.approx(1 / 3) and sc.spread == pytest.approx(1 / 3)


def test_collapse_rejects_travelling():
    with pytest.raises(DomainError):
        collapse_test(BTravel())


@given(st.floats(0.5, 3.0), st.floats(0.3, 2.0))
def test_collapse_invariant_under_rescaling(k, t0):
    fam = ACubic(c1=0.2, alpha=1.3)
    base = collapse_test(fam, (t0, 2 * t0))
    scaled = collapse_test(fam, (k * k * t0, 2 * k * k * t0), eta_grid=np.linspace(0.1, 1.0, 64))
    assert base.max_pairwise_deviation < 1e-10 and scaled.max_pairwise_deviation < 1e-10


@pytest.mark.parametrize("m", [2, 3])
def test_front_fit_on_exact_data(m):
    grid = Grid1D.from_interval(-30.0, 30.0, 6000)
    traj = [PorousSnapshot(t1, analytic.zk_profile(grid.x, t1, 1.0, m)) for t1 in np.geomspace(1.0, 8.0, 6)]
    fit = front_fit(traj, grid)
    assert fit.moving and abs(fit.exponent - 1.0 / (m + 1)) < 1e-3


def test_front_fit_flags_stationary_profile():
    grid = Grid1D.from_interval(-5.0, 5.0, 200)
    rho = np.where(np.abs(grid.x) < 2.0, 1.0, 0.0)
    fit = front_fit([PorousSnapshot(t, rho) for t in (1.0, 4.0, 8.0)], grid)
    assert not fit.moving and fit.fit_residual == math.inf


def test_front_fit_needs_span():
    grid = Grid1D.from_interval(-5.0, 5.0, 200)
    snaps = [PorousSnapshot(t, analytic.zk_profile(grid.x, t)) for t in (1.0, 2.0)]
    with pytest.raises(DomainError):
        front_fit(snaps, grid)


@pytest.fixture(scope="module")
def erratum():
    return erratum_report()


def test_erratum_all_verdicts(erratum):
    assert erratum.all_pass
    assert erratum.entry("acubic_temperature_alpha_eq_lambda").forms_coincide
    assert not erratum.entry("acubic_temperature").forms_coincide


def test_erratum_ctravel_exact_gap(erratum):
    e = erratum.entry("ctravel_temperature")
    assert e.exact_check < 1e-10
    assert max(e.corrected) < 1e-10


def test_erratum_printed_residuals_do_not_vanish(erratum):
    for e in erratum.entries:
        if e.forms_coincide:
            continue
        assert min(e.printed) > 0.5 * max(e.printed), e.name


def test_ctravel_printed_heat_residual_closed_form():
    fam = CTravel()
    X, T = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(1, 2, 4), indexing="ij")
    r = pointwise_residual(fam, X, T, 0.05, 0.05, Mode.AS_PRINTED, "heat")
    assert np.max(np.abs(r + 2 * fam.a * T * fam.tc2)) < 1e-10


def test_erratum_deterministic(erratum):
    assert dumps(erratum) == dumps(erratum_report())


def test_json_roundtrip(erratum):
    doc = json.loads(dumps(erratum))
    assert {e["name"] for e in doc["entries"]} >= {"acubic_temperature", "dvirial_density"}
    assert json.loads(dumps({"x": float("nan")}))["x"] == "nan"


def test_config_validation():
    with pytest.raises(ValueError):
        VerifyConfig(t_order=3)

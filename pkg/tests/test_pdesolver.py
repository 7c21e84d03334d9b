import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from eulerheat import analytic
from eulerheat.analytic import ACubic, BZk, CGauss
from eulerheat.eos import Linear, Polytropic, Quadratic
from eulerheat.errors import ConfigError, DomainError
from eulerheat.pdesolver import (
    DirichletFromFamily,
    Grid1D,
    Outflow,
    Periodic,
    SimConfig,
    State,
    porous_media_mode,
    simulate,
    stable_dt,
    state_from_family,
    step,
)


def _uniform(n=10, dx=0.1, rho=1.0, v=0.0, T=None):
    g = Grid1D(0.0, dx, n)
    return State(g, 0.0, np.full(n, rho), np.full(n, v), None if T is None else np.full(n, T))


def test_stable_dt_diffusive_limit():
    # vacuum, no motion: only diffusion limits the step
    s = _uniform(rho=0.0, T=1.0)
    assert stable_dt(s, Polytropic(a=1, n=3), lam=1.0, cfl=0.4) == pytest.approx(0.002, rel=1e-14)


def test_stable_dt_advective_limit():
    s = _uniform(v=1.0)
    assert stable_dt(s, Linear(A=1.0), lam=0.0, cfl=0.5) == pytest.approx(0.025, rel=1e-14)


def test_stable_dt_needs_cap_without_wave_speed():
    s = _uniform(rho=0.0)
    with pytest.raises(ConfigError):
        stable_dt(s, Polytropic(a=1, n=3), lam=0.0, cfl=0.4)
    assert stable_dt(s, Polytropic(a=1, n=3), lam=0.0, cfl=0.4, dt_max=0.3) == 0.3


@pytest.mark.parametrize("cfl", [0.0, 1.5, -0.1])
def test_stable_dt_rejects_bad_cfl(cfl):
    with pytest.raises(ConfigError):
        stable_dt(_uniform(v=1.0), Linear(A=1), 0.0, cfl)


def test_uniform_state_is_fixed_point():
    s = _uniform(rho=1.7, T=2.3)
    out = step(s, Polytropic(a=1, n=3), lam=0.5, dt=1e-3, bc=Periodic())
    assert np.array_equal(out.rho, s.rho) and np.array_equal(out.v, s.v) and np.array_equal(out.T, s.T)


def test_negative_dt_rejected():
    with pytest.raises(ConfigError):
        step(_uniform(), Linear(A=1), 0.0, -1e-3, Periodic())


def test_state_validation():
    g = Grid1D(0.0, 0.1, 5)
    with pytest.raises(DomainError):
        State(g, 0.0, np.ones(4), np.zeros(5))
    with pytest.raises(DomainError):
        State(g, 0.0, -np.ones(5), np.zeros(5))
    with pytest.raises(DomainError):
        Grid1D(0.0, 0.1, 2)


@given(arrays(float, 32, elements=st.floats(0.5, 2.0)), arrays(float, 32, elements=st.floats(-0.5, 0.5)))
def test_periodic_mass_conservation(rho, v):
    g = Grid1D.from_interval(0.0, 1.0, 32)
    s = State(g, 0.0, rho, v, np.ones(32))
    eos = Quadratic(b=1.0)
    m0 = s.mass()
    for _ in range(5):
        s = step(s, eos, 0.1, stable_dt(s, eos, 0.1, 0.4), Periodic())
        assert abs(s.mass() - m0) <= 1e-14 * 5 * m0


def test_simulate_t_end_equals_start():
    s = _uniform(v=1.0)
    assert simulate(s, Linear(A=1), 0.0, s.t, bc=Periodic()) == [s]


def test_simulate_rejects_backwards():
    s = _uniform(v=1.0)
    with pytest.raises(ConfigError):
        simulate(s, Linear(A=1), 0.0, -1.0)


def test_simulate_hits_output_times():
    s = _uniform(v=1.0)
    traj = simulate(s, Linear(A=1), 0.0, 0.05, bc=Outflow(), output_times=[0.013, 0.02])
    assert [st_.t for st_ in traj] == [0.0, 0.013, 0.02, 0.05]


def _acubic_error(fam, n, t_end=1.1):
    g = Grid1D.from_interval(0.5, 1.5, n)
    ic = state_from_family(fam, g, 1.0)
    traj = simulate(ic, analytic.family_eos(fam), fam.lam, t_end, bc=DirichletFromFamily(fam))
    ref = analytic.eval_state(fam, g.x, traj[-1].t)
    return np.sum(np.abs(traj[-1].rho - ref.rho)) * g.dx


def test_acubic_refinement_reduces_error():
    fam = ACubic(a=1, c1=0.5, c2=1, c3=0.5, alpha=1, lam=0.1)
    e1, e2 = _acubic_error(fam, 50), _acubic_error(fam, 100)
    assert e2 < 0.65 * e1


def _cgauss_rho_error(n):
    fam = CGauss()
    g = Grid1D.from_interval(-3.0, 3.0, n)
    ic = state_from_family(fam, g, 1.0)
    traj = simulate(ic, analytic.family_eos(fam), fam.lam, 1.2, bc=DirichletFromFamily(fam))
    ref = analytic.eval_state(fam, g.x, 1.2)
    return np.sum(np.abs(traj[-1].rho - ref.rho)) * g.dx


def test_cgauss_two_grid_density_error_decreases():
    # quasi-stationary family: the decrease levels off at the model error
    e1, e2 = _cgauss_rho_error(60), _cgauss_rho_error(120)
    assert e2 < 0.9 * e1


def test_wall_clock_budget():
    fam = ACubic(c1=0.5, c3=0.5, lam=0.1)
    g = Grid1D.from_interval(0.5, 1.5, 400)
    ic = state_from_family(fam, g, 1.0)
    with pytest.raises(ArithmeticError):
        simulate(ic, analytic.family_eos(fam), fam.lam, 100.0, bc=DirichletFromFamily(fam), config=SimConfig(wall_clock=0.05))


def test_porous_zero_initial_data():
    out = porous_media_mode(np.zeros(16), 1.0)
    assert all(np.all(s.rho == 0) for s in out)


def test_porous_zk_front_and_mass():
    g = Grid1D.from_interval(-8.0, 8.0, 800)
    ic = analytic.zk_profile(g.x, 1.0)
    out = porous_media_mode(ic, 2.0, g, t1_start=1.0)
    m0 = np.sum(ic) * g.dx
    assert abs(np.sum(out[-1].rho) * g.dx - m0) <= 1e-12 * m0
    err = np.sum(np.abs(out[-1].rho - analytic.zk_profile(g.x, 2.0))) * g.dx
    assert err < 5e-3
    support = g.x[out[-1].rho > 1e-6 * out[-1].rho.max()]
    assert support.max() == pytest.approx(float(analytic.front_position(2.0)), rel=2e-2)


@given(arrays(float, 24, elements=st.floats(0.0, 3.0)), st.sampled_from([0.5, 1.0]))
def test_porous_positivity(ic, cfl):
    out = porous_media_mode(ic, 0.05, Grid1D.from_interval(0.0, 2.4, 24), cfl=cfl)
    assert np.all(out[-1].rho >= 0)
    assert np.sum(out[-1].rho) == pytest.approx(np.sum(ic), rel=1e-12, abs=1e-300)


def test_bzk_state_has_vacuum_velocity_zero():
    g = Grid1D.from_interval(-10, 10, 50)
    s = state_from_family(BZk(), g, 1.0)
    assert np.all(np.isfinite(s.v)) and np.all(s.v[s.rho == 0] == 0)

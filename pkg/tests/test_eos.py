from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eulerheat.eos import (
    SYMBOLS,
    ConstraintResult,
    Linear,
    Polytropic,
    Quadratic,
    VanDerWaals,
    Virial,
    exponent_constraints,
    pressure,
    sound_speed_sq,
    term_powers,
)
from eulerheat.errors import DomainError, PoleError

HALF = Fraction(1, 2)


def test_pressure_examples():
    assert pressure(Polytropic(a=1, n=3), 2.0) == 8.0
    assert pressure(Quadratic(b=2), 3.0) == 9.0
    assert pressure(Virial(A=1, B=0, C=0), 2.0, 3.0) == 6.0
    assert pressure(Linear(A=2.5), 2.0) == 5.0


def test_pressure_domain():
    with pytest.raises(DomainError):
        pressure(Linear(A=1), 0.0)
    with pytest.raises(DomainError):
        pressure(Virial(A=1), 1.0)  # missing T
    vdw = VanDerWaals(a=1, b=2, c=1)
    with pytest.raises(PoleError):
        pressure(vdw, 2.0, 1.0)
    with pytest.raises(DomainError):
        pressure(vdw, 3.0, 1.0)


def test_constants_validated():
    with pytest.raises(DomainError):
        Polytropic(a=-1, n=3)
    with pytest.raises(DomainError):
        Quadratic(b=0)


def test_sound_speed_vacuum_is_zero():
    assert sound_speed_sq(Polytropic(a=1, n=3), 0.0) == 0.0
    assert sound_speed_sq(Quadratic(b=2), 1.5) == pytest.approx(3.0)


rhos = st.floats(0.01, 50.0)


@given(rhos, rhos, st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_pressure_monotone(r1, r2, n, coef):
    lo, hi = sorted((r1, r2))
    if hi - lo < 1e-9 * hi:
        return
    for eos in (Polytropic(a=coef, n=n), Quadratic(b=coef), Linear(A=coef)):
        assert pressure(eos, hi) > pressure(eos, lo)


def test_polytropic_cubic():
    res = exponent_constraints(Polytropic(a=1, n=3))
    assert res.feasible
    e = res.exponents
    assert (e.beta, e.gamma, e.delta) == (HALF, HALF, HALF)
    assert e.alpha is None and res.free_params == ("alpha",)


def test_virial_truncated():
    e = exponent_constraints(Virial(A=1, B=0, C=0)).exponents
    assert (e.alpha, e.beta, e.gamma, e.delta) == (1, HALF, HALF, HALF)


@pytest.mark.parametrize("model", [VanDerWaals(a=1, b=1, c=1), Virial(A=1, B=1), Virial(A=1, C=2), Linear(A=1)])
def test_infeasible(model):
    res = exponent_constraints(model)
    assert not res.feasible and res.exponents is None
    assert res.reason.startswith("contradictory")


def test_quadratic_matches_polytropic_two():
    q = exponent_constraints(Quadratic(b=3)).exponents
    p = exponent_constraints(Polytropic(a=1, n=2)).exponents
    assert q == p and q.gamma == 1


def test_result_invariant():
    with pytest.raises(ValueError):
        ConstraintResult(True, None)


fractions_gt1 = st.builds(
    lambda p, q: Fraction(p, q), st.integers(2, 40), st.integers(1, 12)
).filter(lambda f: f > 1)


@given(fractions_gt1, st.fractions(-5, 5))
def test_feasible_results_balance_every_equation(n, free_value):
    model = Polytropic(a=1, n=n)
    res = exponent_constraints(model)
    assert res.feasible
    assert res.exponents.gamma == 1 / (n - 1)
    values = {s: getattr(res.exponents, s) for s in SYMBOLS}
    values = {s: (free_value if v is None else v) for s, v in values.items()}
    for eq, terms in term_powers(model).items():
        powers = {p.at(values) for _, p in terms}
        assert len(powers) == 1, (eq, powers)


def test_virial_balance_exact():
    model = Virial(A=2)
    e = exponent_constraints(model).exponents
    values = {s: getattr(e, s) for s in SYMBOLS}
    for eq, terms in term_powers(model).items():
        assert len({p.at(values) for _, p in terms}) == 1, eq


def test_as_dict_round_trip():
    d = exponent_constraints(Polytropic(a=1, n=3)).as_dict()
    assert d["exponents"]["gamma"] == "1/2" and d["exponents"]["alpha"] is None
    assert np.isclose(float(Fraction(d["exponents"]["beta"])), 0.5)

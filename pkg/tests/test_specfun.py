import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from eulerheat import specfun
from eulerheat.errors import DomainError, PoleError
from eulerheat.specfun import DilogConvention, dilog, kummer_m, kummer_u, lambert_w0, log_gamma

mp.mp.dps = 30

# Frozen from mpmath at 30 digits.
W0_OF_1 = 0.56714329040978387299996866221
ERF_HALF_SQRT_PI = 0.746824132812427025399467436132  # M(1/2, 3/2, -1)
U_1_15_100_TIMES_Z = 0.995073187824469747380737196781


def test_lambert_examples():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(-1.0 / math.e) == pytest.approx(-1.0, abs=1e-7)
    assert lambert_w0(1.0) == pytest.approx(W0_OF_1, rel=1e-14)


def test_lambert_below_branch_point_rejected():
    with pytest.raises(DomainError):
        lambert_w0(-0.5)


def test_lambert_vectorised_against_mpmath():
    xs = np.concatenate([np.linspace(-0.35, 1.0, 50), np.logspace(0, 300, 50)])
    w = lambert_w0(xs)
    ref = np.array([float(mp.lambertw(mp.mpf(x))) for x in xs])
    assert np.max(np.abs(w - ref) / np.maximum(1.0, np.abs(ref))) < 1e-13


@given(st.floats(min_value=-1 / math.e, max_value=20.0))
def test_lambert_defining_identity(x):
    w = lambert_w0(x)
    assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x))


@given(st.floats(min_value=-0.2, max_value=0.2))
def test_lambert_series_agrees(x):
    assert abs(specfun.lambert_w0_series(x) - lambert_w0(x)) <= 1e-10


def test_lambert_log_argument_matches_direct():
    for lx in (-3.0, 0.0, 5.0, 50.0):
        assert specfun.lambert_w0_exp(lx) == pytest.approx(lambert_w0(math.exp(lx)), rel=1e-13)
    # exp(1000) overflows a float but the log form does not
    w = specfun.lambert_w0_exp(1000.0)
    assert w + math.log(w) == pytest.approx(1000.0, rel=1e-14)


def test_kummer_m_examples():
    assert kummer_m(0.3, 1.7, 0.0) == 1.0
    assert kummer_m(1.0, 1.0, 1.0) == pytest.approx(math.e, rel=1e-14)
    assert kummer_m(0.5, 1.5, -1.0) == pytest.approx(ERF_HALF_SQRT_PI, rel=1e-13)


@given(st.floats(-5.0, 5.0), st.floats(-20.0, 20.0))
def test_kummer_m_matches_mpmath(a, z):
    ref = float(mp.hyp1f1(a, 1.5, z))
    assert abs(kummer_m(a, 1.5, z) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_kummer_m_pole_in_b():
    with pytest.raises(PoleError):
        kummer_m(0.5, -2.0, 1.0)


def test_kummer_u_examples():
    assert kummer_u(0.0, 1.5, 2.0) == 1.0
    # U(a, a + 1, z) = z^-a; the integral representation oracle gives the same
    ref = float(mp.quad(lambda t: mp.exp(-t) * t ** -0.5, [0, mp.inf]) / mp.gamma(0.5))
    assert kummer_u(0.5, 1.5, 1.0) == pytest.approx(ref, rel=1e-12)
    assert kummer_u(1.0, 1.5, 100.0) * 100.0 == pytest.approx(U_1_15_100_TIMES_Z, rel=1e-12)
    assert abs(kummer_u(1.0, 1.5, 100.0) * 100.0 - 1.0) < 5e-2


@given(st.floats(-3.0, 3.0), st.floats(0.05, 30.0))
def test_kummer_u_matches_mpmath(a, z):
    ref = float(mp.hyperu(a, 1.5, z))
    assert abs(kummer_u(a, 1.5, z) - ref) <= 1e-9 * max(1.0, abs(ref))


def test_kummer_u_rejects_nonpositive_z():
    with pytest.raises(DomainError):
        kummer_u(0.5, 1.5, 0.0)


def _ode_residual(fun, a, b, z, h=1e-2):
    # fourth-order central differences
    fm2, fm1, f0, fp1, fp2 = (fun(a, b, z + k * h) for k in (-2, -1, 0, 1, 2))
    fp = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    fpp = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h**2)
    scale = max(1.0, abs(f0), abs(z * fpp), abs((b - z) * fp))
    return abs(z * fpp + (b - z) * fp - a * f0) / scale


@given(st.floats(-3.0, 3.0), st.floats(0.5, 10.0))
def test_kummer_m_ode(a, z):
    assert _ode_residual(kummer_m, a, 1.5, z) <= 1e-6


@given(st.floats(-3.0, 3.0), st.floats(0.5, 10.0))
def test_kummer_u_ode(a, z):
    assert _ode_residual(kummer_u, a, 1.5, z) <= 1e-6


def test_dilog_examples():
    assert dilog(0.0) == 0.0
    assert dilog(1.0).real == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert dilog(-1.0).real == pytest.approx(-math.pi**2 / 12, abs=1e-12)


def test_dilog_shifted_convention():
    z = np.array([0.3 + 0.4j, -2.0 + 1.0j, 1.0 + 1.0j])
    assert np.allclose(dilog(z, DilogConvention.SHIFTED_LI2), dilog(1.0 - z), rtol=0, atol=1e-15)


@given(st.floats(-10.0, 10.0), st.floats(-10.0, 10.0))
def test_dilog_complex_matches_mpmath(re, im):
    z = complex(re, im)
    if z.real > 1.0 and abs(z.imag) < 1e-12:
        return  # on the cut the branch choice is a convention
    ref = complex(mp.polylog(2, z))
    assert abs(dilog(z) - ref) <= 1e-12 * max(1.0, abs(ref))


@given(st.floats(1e-6, 1.0 - 1e-6))
def test_dilog_reflection(z):
    lhs = dilog(z).real + dilog(1.0 - z).real
    rhs = math.pi**2 / 6 - math.log(z) * math.log(1.0 - z)
    assert abs(lhs - rhs) <= 1e-10


def test_log_gamma_examples():
    assert log_gamma(1.0)[0] == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(0.5)[0] == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert log_gamma(5.0)[0] == pytest.approx(math.log(24.0), rel=1e-14)
    assert specfun.rgamma(-3.0) == 0.0

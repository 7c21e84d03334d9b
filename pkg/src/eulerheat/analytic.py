"""Closed-form solution families of the continuity / Euler / heat system.

    rho_t + (rho v)_x = 0
    v_t + v v_x = -p_x / rho
    T_t + v T_x = lambda T_xx

Six families are provided.  Four are self-similar in eta = x / sqrt(t)
(``ACubic``, ``BZk``, ``CGauss``, ``DVirial``); two are traveling waves in the
accelerating frame zeta = x + a t^2 / 2 (``BTravel``, ``CTravel``).  Families
B and C come from the quasi-stationary closure v = -t p_x / rho, which
satisfies continuity exactly but leaves a momentum residual; see
:func:`neglected_momentum`.

Every evaluator takes a :class:`Mode`.  ``CORRECTED`` gives fields that
satisfy their own equations; ``AS_PRINTED`` keeps the literal historical
formulas (several of which do not) so the verifier can show the difference.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import quad

from . import specfun
from .eos import EosModel, Exponents, Linear, Polytropic, Quadratic, Virial
from .errors import DomainError, PoleError


class Mode(str, enum.Enum):
    CORRECTED = "corrected"
    AS_PRINTED = "as_printed"


class DensityPath(str, enum.Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"


def _require_positive(obj, *names):
    for n in names:
        v = getattr(obj, n)
        if not v > 0:
            raise DomainError(f"{type(obj).__name__}.{n} must be > 0, got {v!r}")


@dataclass(frozen=True)
class ACubic:
    """p = a rho^3; g = eta/2, h^2 = (eta^2/4 + 2 c1) / (3a), trig temperature."""

    a: float = 1.0
    c1: float = 0.0
    c2: float = 1.0
    c3: float = 0.0
    alpha: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        _require_positive(self, "a", "lam")
        if self.alpha < 0:
            raise DomainError("ACubic.alpha must be >= 0 (oscillatory temperature)")


@dataclass(frozen=True)
class BZk:
    """p = (b/2) rho^2; porous-medium density in t1 = b t^2 / 4, Kummer temperature."""

    b: float = 1.0
    A: float = 1.0
    gamma: float = 1.0
    c1: float = 1.0
    c2: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        _require_positive(self, "b", "A", "lam")


@dataclass(frozen=True)
class BTravel:
    """p = (b/2) rho^2; Lambert-W front.  Carries no temperature."""

    a: float = 1.0
    b: float = 1.0
    c1: float = 1.0
    c2: float = 1.0

    def __post_init__(self):
        _require_positive(self, "a", "b", "c1")


@dataclass(frozen=True)
class CGauss:
    """p = A rho; Gaussian density, Kummer temperature."""

    A: float = 1.0
    gamma: float = 1.0
    c1: float = 1.0
    c2: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        _require_positive(self, "A", "lam")


@dataclass(frozen=True)
class CTravel:
    """p = A rho; exponential wave, temperature linear in zeta."""

    a: float = 1.0
    A: float = 1.0
    c1: float = 0.0
    c2: float = 1.0
    tc1: float = 1.0
    tc2: float = 1.0

    def __post_init__(self):
        _require_positive(self, "a", "A")


@dataclass(frozen=True)
class DVirial:
    """p = A T rho; trig temperature f = c1 sin + c2 cos, quadrature density."""

    A: float = 1.0
    lam: float = 1.0
    c1: float = 0.0
    c2: float = 1.0
    c3: float = 1.0

    def __post_init__(self):
        _require_positive(self, "A", "lam")
        if self.c2 == 0:
            raise DomainError("DVirial.c2 must be nonzero: f(0) = c2 enters the density as 1/f")


SolutionFamily = Union[ACubic, BZk, BTravel, CGauss, CTravel, DVirial]
SELF_SIMILAR = (ACubic, BZk, CGauss, DVirial)
TRAVELING = (BTravel, CTravel)
FAMILIES = {
    "a-cubic": ACubic,
    "b-zk": BZk,
    "b-travel": BTravel,
    "c-gauss": CGauss,
    "c-travel": CTravel,
    "d-virial": DVirial,
}


def family_name(family: SolutionFamily) -> str:
    for k, cls in FAMILIES.items():
        if isinstance(family, cls):
            return k
    raise TypeError(f"not a solution family: {family!r}")


def family_eos(family: SolutionFamily) -> EosModel:
    if isinstance(family, ACubic):
        return Polytropic(a=family.a, n=3.0)
    if isinstance(family, (BZk, BTravel)):
        return Quadratic(b=family.b)
    if isinstance(family, (CGauss, CTravel)):
        return Linear(A=family.A)
    if isinstance(family, DVirial):
        return Virial(A=family.A)
    raise TypeError(f"not a solution family: {family!r}")


def family_lambda(family: SolutionFamily) -> Optional[float]:
    """Heat diffusivity; ``None`` for BTravel, 1 for CTravel (T_xx = 0 there)."""
    if isinstance(family, BTravel):
        return None
    if isinstance(family, CTravel):
        return 1.0
    return family.lam


@dataclass(frozen=True)
class Shape:
    f: Optional[np.ndarray]
    g: np.ndarray
    h: np.ndarray


@dataclass(frozen=True)
class StatePoint:
    """Sampled fields.  ``v`` is NaN where undefined (outside the ZK support)."""

    rho: np.ndarray
    v: np.ndarray
    T: Optional[np.ndarray]


def _arr(x):
    return np.asarray(x, dtype=float)


# ---------------------------------------------------------------------------
# porous-medium (Zeldovich-Kompaneets) profile
# ---------------------------------------------------------------------------


def zk_width_sq(m: int = 2) -> Fraction:
    """B^2 = (m - 1) / (2 m (m + 1))."""
    if m < 2:
        raise DomainError("zk: m must be >= 2")
    return Fraction(m - 1, 2 * m * (m + 1))


def zk_profile(x, t1, A: float = 1.0, m: int = 2):
    """rho with rho^(m-1) = t1^(-(m-1)/(m+1)) (A^2 - B^2 x^2 t1^(-2/(m+1)))_+."""
    t1 = _arr(t1)
    if (t1 <= 0).any():
        raise DomainError("zk_profile: t1 must be > 0")
    if not A > 0:
        raise DomainError("zk_profile: A must be > 0")
    B2 = float(zk_width_sq(m))
    k = 1.0 / (m + 1)
    x = _arr(x)
    inner = np.maximum(A * A - B2 * x * x * t1 ** (-2.0 * k), 0.0)
    return t1 ** (-k) * inner ** (1.0 / (m - 1))


def front_position(t1, A: float = 1.0, m: int = 2):
    """Right edge of the ZK support, (A / B) t1^(1/(m+1))."""
    t1 = _arr(t1)
    if (t1 <= 0).any():
        raise DomainError("front_position: t1 must be > 0")
    return A / math.sqrt(zk_width_sq(m)) * t1 ** (1.0 / (m + 1))


def zk_mass(A: float = 1.0) -> float:
    """Mass of the m = 2 profile, (4/3) A^3 / B, independent of t1."""
    return 4.0 / 3.0 * A**3 / math.sqrt(zk_width_sq(2))


# ---------------------------------------------------------------------------
# temperature shapes
# ---------------------------------------------------------------------------


def _kummer_params(family, mode):
    """(a, kappa) with f = eta [c1 M(a, 3/2, kappa eta^2) + c2 U(...)]."""
    if isinstance(family, BZk):
        return 0.5 - 3.0 * family.gamma, 1.0 / (12.0 * family.lam)
    if mode is Mode.AS_PRINTED:
        return 0.5 - family.gamma / 3.0, 3.0 / (4.0 * family.lam)
    return 0.5 - family.gamma, 1.0 / (4.0 * family.lam)


def _kummer_w(a, z, c1, c2, order):
    """w(z) = c1 M(a,3/2,z) + c2 U(a,3/2,z) and its derivatives up to ``order``."""
    b = 1.5
    out = []
    for k in range(order + 1):
        poch_a = math.prod(a + j for j in range(k))
        poch_b = math.prod(b + j for j in range(k))
        w = np.zeros_like(z)
        if c1:
            w = w + c1 * poch_a / poch_b * specfun.kummer_m(a + k, b + k, z)
        if c2:
            pos = z > 0
            u = np.zeros_like(z)
            if pos.any():
                u[pos] = specfun.kummer_u(a + k, b + k, z[pos])
            w = w + c2 * (-1.0) ** k * poch_a * u
        out.append(w)
    return out


def kummer_temperature_shape(family, eta, mode: Mode = Mode.CORRECTED, order: int = 0):
    """f and derivatives for BZk / CGauss.  Returns a list [f, f', f''][:order+1].

    The U part is singular in its derivative at eta = 0 and is set to 0 there.
    """
    eta = np.atleast_1d(_arr(eta))
    a, kap = _kummer_params(family, Mode(mode))
    z = kap * eta * eta
    w = _kummer_w(a, z, family.c1, family.c2, min(order, 2))
    res = [eta * w[0]]
    if order >= 1:
        res.append(w[0] + 2.0 * kap * eta * eta * w[1])
    if order >= 2:
        res.append(6.0 * kap * eta * w[1] + 4.0 * kap * kap * eta**3 * w[2])
    return res


def _trig(c_cos, c_sin, k, eta, order):
    s = k * eta
    out = [c_cos * np.cos(s) + c_sin * np.sin(s)]
    if order >= 1:
        out.append(k * (-c_cos * np.sin(s) + c_sin * np.cos(s)))
    if order >= 2:
        out.append(-k * k * out[0])
    return out


def trig_temperature_shape(family, eta, mode: Mode = Mode.CORRECTED, order: int = 0):
    """f and derivatives for ACubic / DVirial."""
    eta = np.atleast_1d(_arr(eta))
    if isinstance(family, ACubic):
        if Mode(mode) is Mode.AS_PRINTED:
            k = family.alpha / family.lam
        else:
            k = math.sqrt(family.alpha / family.lam)
        return _trig(family.c2, family.c3, k, eta, order)
    if isinstance(family, DVirial):
        return _trig(family.c2, family.c1, 1.0 / math.sqrt(family.lam), eta, order)
    raise TypeError("trig temperature only for ACubic / DVirial")


def temperature_shape(family, eta, mode: Mode = Mode.CORRECTED, order: int = 0):
    if isinstance(family, (BZk, CGauss)):
        return kummer_temperature_shape(family, eta, mode, order)
    return trig_temperature_shape(family, eta, mode, order)


# ---------------------------------------------------------------------------
# density shapes
# ---------------------------------------------------------------------------


def acubic_h(family: ACubic, eta, mode: Mode = Mode.CORRECTED):
    eta = _arr(eta)
    if Mode(mode) is Mode.AS_PRINTED:
        rad = (4.0 * eta * eta + 2.0 * family.c1) / (3.0 * family.a)
    else:
        rad = (0.25 * eta * eta + 2.0 * family.c1) / (3.0 * family.a)
    if (rad < 0).any():
        raise DomainError("ACubic: negative radicand in h (c1 < 0 near eta = 0)")
    return np.sqrt(rad)


def cgauss_h(family: CGauss, xi, mode: Mode = Mode.CORRECTED):
    """Density shape in xi = x / t (rho = h / t)."""
    xi = _arr(xi)
    width = 1.0 if Mode(mode) is Mode.AS_PRINTED else 2.0
    return math.sqrt(2.0 / family.A) * np.exp(-xi * xi / (width * family.A))


def _virial_f0(p: DVirial):
    return p.c2


def _check_f_zero_free(p: DVirial, eta):
    """PoleError if f = c1 sin(s) + c2 cos(s), s = eta/sqrt(lam), vanishes on [0, s]."""
    s = np.abs(_arr(eta)) / math.sqrt(p.lam)
    sgn = np.sign(_arr(eta))
    # zeros of f in signed s: s0 + k pi with tan(s0) = -c2 / c1
    s0 = math.atan2(-p.c2, p.c1) % math.pi  # first positive zero
    s0_neg = s0 - math.pi  # first negative zero
    bad = np.where(sgn >= 0, s >= s0, s >= -s0_neg)
    if bad.any():
        raise PoleError("virial_density: f vanishes inside [0, eta]")


_GL64 = np.polynomial.legendre.leggauss(64)
_GL32 = np.polynomial.legendre.leggauss(32)


def _virial_moment(p: DVirial, eta):
    """I(eta) = int_0^eta z / (4 A f(z)) dz with f the DVirial temperature shape."""
    eta = np.atleast_1d(_arr(eta))

    def f_of(z):
        return trig_temperature_shape(p, z)[0]

    def gl(rule):
        nodes, weights = rule
        s = 0.5 * (nodes + 1.0)
        z = eta[:, None] * s[None, :]
        return 0.5 * eta * ((z / (4.0 * p.A * f_of(z))) @ weights)

    fine = gl(_GL64)
    coarse = gl(_GL32)
    poor = np.abs(fine - coarse) > 1e-13 * np.maximum(np.abs(fine), 1e-300)
    for i in np.flatnonzero(poor):
        # steep near a zero of f: fall back to adaptive quadrature
        fine[i], _ = quad(
            lambda z: z / (4.0 * p.A * f_of(np.array([z]))[0]),
            0.0,
            float(eta[i]),
            epsabs=1e-15,
            epsrel=1e-13,
            limit=200,
        )
    return fine


def _virial_closed_form(eta, convention):
    """Complex dilog expression valid for c1 = 0, c2 = c3 = A = lam = 1."""
    eta = np.atleast_1d(_arr(eta)).astype(complex)
    e = np.exp(1j * eta)
    zp = 1.0 + 1j * e
    zm = 1.0 - 1j * e

    def cpow(base, w):  # principal branch
        return np.exp(w * np.log(base))

    d_plus = specfun.dilog(zp, convention)
    d_minus = specfun.dilog(zm, convention)
    num = cpow(zp, -eta / 4.0) * cpow(zm, eta / 4.0) * np.exp(-0.25j * (-4.0 * eta - d_plus + d_minus))
    return num / (np.exp(2j * eta) + 1.0)


@dataclass(frozen=True)
class ClosedFormResult:
    """Closed-form virial density under each dilog convention.

    ``values`` holds the raw complex expression; ``normalized`` divides by its
    value at eta = 0 so that h(0) = c3 as for the quadrature path.
    ``mismatch`` flags conventions that disagree with quadrature beyond
    ``tol``.
    """

    eta: np.ndarray
    quadrature: np.ndarray
    values: dict
    normalized: dict
    real_part: dict
    rel_dev: dict
    mismatch: dict
    selected: Optional[specfun.DilogConvention]
    tol: float


CLOSED_FORM_POINT = dict(c1=0.0, c2=1.0, c3=1.0, A=1.0, lam=1.0)


def virial_density(
    eta,
    params: DVirial,
    path: DensityPath = DensityPath.QUADRATURE,
    mode: Mode = Mode.CORRECTED,
    tol: float = 1e-6,
):
    """Density shape h of the virial family.

    QUADRATURE integrates h'/h = (eta/(4A) - f') / f:

        h = c3 (f(0) / f(eta)) exp(int_0^eta z / (4 A f) dz)

    (``AS_PRINTED`` drops the exponential and returns c3 times the integral).
    CLOSED_FORM is only defined at c1 = 0, c2 = c3 = A = lam = 1 and returns a
    :class:`ClosedFormResult` comparing both dilog conventions to quadrature.
    """
    path = DensityPath(path)
    mode = Mode(mode)
    scalar = np.ndim(eta) == 0
    shape = np.shape(eta)
    eta_a = np.atleast_1d(_arr(eta)).ravel()
    _check_f_zero_free(params, eta_a)
    f = trig_temperature_shape(params, eta_a)[0]
    log_ratio = np.log(np.abs(_virial_f0(params) / f))
    integral = log_ratio + _virial_moment(params, eta_a)
    if mode is Mode.AS_PRINTED:
        h = params.c3 * integral
    else:
        h = params.c3 * np.exp(integral)
    if path is DensityPath.QUADRATURE:
        return h.item() if scalar else h.reshape(shape)

    if any(getattr(params, k) != v for k, v in CLOSED_FORM_POINT.items()):
        raise DomainError("virial_density: CLOSED_FORM only at c1=0, c2=c3=A=lam=1")
    values, normed, real, dev, bad = {}, {}, {}, {}, {}
    selected = None
    for conv in specfun.DilogConvention:
        val = _virial_closed_form(eta_a, conv)
        ref0 = _virial_closed_form(0.0, conv)[0]
        n = params.c3 * val / ref0
        values[conv] = val
        normed[conv] = n
        real[conv] = n.real
        dev[conv] = float(np.max(np.abs(n - h) / np.abs(h)))
        bad[conv] = dev[conv] > tol
        if not bad[conv] and selected is None:
            selected = conv
    return ClosedFormResult(eta_a, h, values, normed, real, dev, bad, selected, tol)


# ---------------------------------------------------------------------------
# Lambert-W traveling wave
# ---------------------------------------------------------------------------


def btravel_log_arg(family: BTravel, zeta):
    """log of the Lambert-W argument, (-b^2 c1 + zeta a^2 + c2 a)/(b^2 c1) - ln(b c1)."""
    a, b, c1, c2 = family.a, family.b, family.c1, family.c2
    return (-b * b * c1 + _arr(zeta) * a * a + c2 * a) / (b * b * c1) - math.log(b * c1)


def btravel_profile(family: BTravel, zeta, order: int = 0):
    """h(zeta) = (b c1 / a)(1 + W) and its zeta-derivatives up to ``order``.

    Uses W' = k W / (1 + W) with k = a^2 / (b^2 c1).
    """
    zeta = np.atleast_1d(_arr(zeta))
    W = specfun.lambert_w0_exp(btravel_log_arg(family, zeta))
    C = family.b * family.c1 / family.a
    k = family.a**2 / (family.b**2 * family.c1)
    out = [C * (1.0 + W)]
    if order >= 1:
        Wp = k * W / (1.0 + W)
        out.append(C * Wp)
    if order >= 2:
        out.append(C * Wp * k / (1.0 + W) ** 2)
    return out


# ---------------------------------------------------------------------------
# shape functions and field assembly
# ---------------------------------------------------------------------------


def shape_functions(family: SolutionFamily, eta, mode: Mode = Mode.CORRECTED) -> Shape:
    """(f, g, h) at similarity coordinate eta.

    f and g are always functions of eta = x / sqrt(t).  h uses the family's
    own density variable: eta for ACubic / DVirial, x t1^(-1/3) for BZk
    (t1 = b t^2 / 4) and x / t for CGauss.
    """
    if not isinstance(family, SELF_SIMILAR):
        raise TypeError(f"{type(family).__name__} is not self-similar")
    mode = Mode(mode)
    eta = np.atleast_1d(_arr(eta))
    if isinstance(family, ACubic):
        return Shape(trig_temperature_shape(family, eta, mode)[0], 0.5 * eta, acubic_h(family, eta, mode))
    if isinstance(family, DVirial):
        return Shape(
            trig_temperature_shape(family, eta, mode)[0], 0.5 * eta, virial_density(eta, family, mode=mode)
        )
    if isinstance(family, BZk):
        B2 = float(zk_width_sq(2))
        h = np.maximum(family.A**2 - B2 * eta * eta, 0.0)
        return Shape(kummer_temperature_shape(family, eta, mode)[0], 2.0 * eta / 3.0, h)
    g = (2.0 if mode is Mode.AS_PRINTED else 1.0) * eta
    return Shape(kummer_temperature_shape(family, eta, mode)[0], g, cgauss_h(family, eta, mode))


def zeta_of(family, x, t, mode: Mode = Mode.CORRECTED):
    """Traveling coordinate.  AS_PRINTED uses the literal frames of the final formulas."""
    x, t = _arr(x), _arr(t)
    if Mode(mode) is Mode.CORRECTED:
        return x + 0.5 * family.a * t * t
    if isinstance(family, BTravel):
        return x - family.a * t * t
    return x - 0.5 * family.a * t * t


def eval_state(family: SolutionFamily, x, t, mode: Mode = Mode.CORRECTED) -> StatePoint:
    """Evaluate (rho, v, T) at broadcast (x, t)."""
    mode = Mode(mode)
    x, t = np.broadcast_arrays(_arr(x), _arr(t))
    x = np.array(x, dtype=float)
    t = np.array(t, dtype=float)
    if isinstance(family, SELF_SIMILAR) and (t <= 0).any():
        raise DomainError("eval_state: t must be > 0 for self-similar families")
    sq = np.sqrt(np.where(t > 0, t, 1.0))
    eta = x / sq

    if isinstance(family, ACubic):
        rho = acubic_h(family, eta, mode) / sq
        v = x / (2.0 * t)
        T = t ** (-family.alpha) * trig_temperature_shape(family, eta, mode)[0]
    elif isinstance(family, BZk):
        t1 = family.b * t * t / 4.0
        rho = zk_profile(x, t1, family.A, 2)
        v = np.where(rho > 0, 2.0 * x / (3.0 * t), np.nan)
        T = t ** (-family.gamma) * kummer_temperature_shape(family, eta, mode)[0]
    elif isinstance(family, CGauss):
        rho = cgauss_h(family, x / t, mode) / t
        v = (2.0 if mode is Mode.AS_PRINTED else 1.0) * x / t
        T = t ** (-family.gamma) * kummer_temperature_shape(family, eta, mode)[0]
    elif isinstance(family, DVirial):
        rho = virial_density(eta, family, mode=mode) / sq
        v = x / (2.0 * t)
        T = trig_temperature_shape(family, eta, mode)[0] / t
    elif isinstance(family, BTravel):
        W = specfun.lambert_w0_exp(btravel_log_arg(family, zeta_of(family, x, t, mode)))
        W = np.reshape(W, x.shape)
        rho = family.b * family.c1 / family.a * (1.0 + W)
        scale = family.a if mode is Mode.CORRECTED else 1.0
        v = -scale * t * W / (1.0 + W)
        T = None
    elif isinstance(family, CTravel):
        fam = family
        if mode is Mode.CORRECTED:
            e = fam.c2 * np.exp(fam.a * zeta_of(fam, x, t) / fam.A)
            rho = fam.c1 + e
            v = -fam.a * t * e / rho  # -A t rho_x / rho
            T = fam.tc1 + fam.tc2 * zeta_of(fam, x, t)
        else:
            rho = fam.c1 + fam.c2 * np.exp(fam.a * (x - fam.a**2 * t / 2.0) / fam.A)
            v = -fam.a * t
            T = fam.tc1 + fam.tc2 * zeta_of(fam, x, t, mode)
    else:
        raise TypeError(f"not a solution family: {family!r}")
    return StatePoint(_fit(rho, x.shape), _fit(v, x.shape), None if T is None else _fit(T, x.shape))


def _fit(a, shape):
    # shape helpers return 1-d arrays; constants broadcast
    a = np.asarray(a, dtype=float)
    if a.size == int(np.prod(shape)):
        return a.reshape(shape)
    return np.broadcast_to(a, shape).astype(float)


# ---------------------------------------------------------------------------
# quasi-stationary momentum defect
# ---------------------------------------------------------------------------


def neglected_momentum(family: SolutionFamily, x, t):
    """v_t + v v_x + p_x / rho for the quasi-stationary families, in closed form.

    With v = -t p_x / rho the momentum residual is v v_x - t d/dt (p_x / rho).
    Zero for the exact families (ACubic, DVirial).
    """
    x, t = np.broadcast_arrays(_arr(x), _arr(t))
    if isinstance(family, (ACubic, DVirial)):
        return np.zeros(x.shape)
    if isinstance(family, BZk):
        rho = zk_profile(x, family.b * t * t / 4.0, family.A, 2)
        return np.where(rho > 0, -8.0 * x / (9.0 * t * t), np.nan)
    if isinstance(family, CGauss):
        return -x / (t * t)
    if isinstance(family, CTravel):
        # q = rho_x / rho = (a/A) e / (c1 + e), v = -A t q
        a, A = family.a, family.A
        zeta = zeta_of(family, x, t)
        e = family.c2 * np.exp(a * zeta / A)
        s = e / (family.c1 + e)
        q = a / A * s
        q_x = a / A * s * (1.0 - s) * a / A
        q_t = q_x * a * t  # zeta_t = a t
        v = -A * t * q
        v_x = -A * t * q_x
        return v * v_x - t * A * q_t
    if isinstance(family, BTravel):
        # v = -b t h', p_x/rho = b h'; zeta_t = a t
        zeta = zeta_of(family, x, t)
        _, hp, hpp = btravel_profile(family, zeta, order=2)
        hp = hp.reshape(x.shape)
        hpp = hpp.reshape(x.shape)
        b, a = family.b, family.a
        return (b * t * hp) * (b * t * hpp) - t * b * hpp * a * t
    raise TypeError(f"not a solution family: {family!r}")


# ---------------------------------------------------------------------------
# similarity scalings (used by the collapse test)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldScaling:
    """field(x, t) = clock(t)^-amp * shape(x / clock(t)^spread)."""

    clock: Callable[[float], float]
    amp: float
    spread: float


def _identity_clock(t):
    return t


def field_scalings(family: SolutionFamily) -> dict[str, FieldScaling]:
    if not isinstance(family, SELF_SIMILAR):
        raise TypeError(f"{type(family).__name__} is not self-similar")
    half = FieldScaling(_identity_clock, 0.5, 0.5)
    if isinstance(family, ACubic):
        return {"rho": half, "v": half, "T": FieldScaling(_identity_clock, family.alpha, 0.5)}
    if isinstance(family, BZk):
        b = family.b
        return {
            "rho": FieldScaling(lambda t: b * t * t / 4.0, 1.0 / 3.0, 1.0 / 3.0),
            "v": half,
            "T": FieldScaling(_identity_clock, family.gamma, 0.5),
        }
    if isinstance(family, CGauss):
        return {
            "rho": FieldScaling(_identity_clock, 1.0, 1.0),
            "v": half,
            "T": FieldScaling(_identity_clock, family.gamma, 0.5),
        }
    return {"rho": half, "v": half, "T": FieldScaling(_identity_clock, 1.0, 0.5)}


def similarity_exponents(family: SolutionFamily) -> Exponents:
    """(alpha, beta, gamma, delta[, omega]) of the family's ansatz.

    For BZk, beta and gamma refer to the density in the t1 clock and omega
    is the temperature spread exponent.  For CGauss the density spreads
    like x / t (beta = gamma = 1).
    """
    F = lambda v: Fraction(v).limit_denominator(10**9)  # noqa: E731
    half = Fraction(1, 2)
    if isinstance(family, ACubic):
        return Exponents(F(family.alpha), half, half, half)
    if isinstance(family, BZk):
        third = Fraction(1, 3)
        return Exponents(F(family.gamma), third, third, half, half)
    if isinstance(family, CGauss):
        return Exponents(F(family.gamma), Fraction(1), Fraction(1), half, half)
    if isinstance(family, DVirial):
        return Exponents(Fraction(1), half, half, half)
    raise TypeError(f"{type(family).__name__} is not self-similar")

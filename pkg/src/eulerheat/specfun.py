"""Special functions needed by the analytic solution families.

Lambert W (principal branch), Kummer's confluent hypergeometric functions
M and U, the complex dilogarithm and log-gamma.  Every array-valued
function accepts scalars or numpy arrays, broadcasts its arguments and
returns a Python scalar when all inputs were scalars.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "SpecFunConfig",
    "DEFAULT_CONFIG",
    "DilogConvention",
    "lambert_w0",
    "lambert_w0_exp",
    "lambert_w0_series",
    "kummer_m",
    "kummer_u",
    "dilog",
    "log_gamma",
    "rgamma",
]

INV_E = math.exp(-1.0)
PI2_6 = math.pi**2 / 6.0


@dataclass(frozen=True)
class SpecFunConfig:
    rel_tol: float = 1e-13
    max_terms: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_CONFIG = SpecFunConfig()


class DilogConvention(str, enum.Enum):
    SPENCE_LI2 = "spence_li2"  # Li2(z) = -int_0^z ln(1-s)/s ds
    SHIFTED_LI2 = "shifted_li2"  # dilog(z) = Li2(1-z), computer-algebra style


def _out(arr, scalar):
    if scalar:
        return arr.item()
    return arr


def _is_scalar(*args):
    return all(np.ndim(a) == 0 for a in args)


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------


def _w0_guess(x):
    w = np.empty_like(x)
    near = x < -0.32
    mid = (~near) & (x <= 1e3)
    big = x > 1e3
    if near.any():
        p = np.sqrt(np.maximum(2.0 * (math.e * x[near] + 1.0), 0.0))
        w[near] = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    if mid.any():
        # Winitzki's global approximation
        l1 = np.log1p(x[mid])
        w[mid] = l1 * (1.0 - np.log1p(l1) / (2.0 + l1))
    if big.any():
        l1 = np.log(x[big])
        l2 = np.log(l1)
        w[big] = l1 - l2 + l2 / l1
    return w


def lambert_w0(x, config: SpecFunConfig = DEFAULT_CONFIG):
    """Principal branch W0 of the Lambert W function, ``w * exp(w) = x``.

    Initial guesses come from the branch-point series near -1/e, Winitzki's
    approximation in the bulk and ``ln x - ln ln x`` for large arguments;
    each is then polished with Halley's iteration.

    Raises
    ------
    DomainError
        if any ``x < -1/e`` beyond a slack of ``rel_tol / e``.
    ConvergenceError
        if Halley's iteration has not settled after ``max_terms`` steps.
    """
    scalar = _is_scalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.isnan(x).any():
        raise DomainError("lambert_w0: NaN argument")
    slack = config.rel_tol * INV_E
    if (x < -INV_E - slack).any():
        raise DomainError(f"lambert_w0: argument below -1/e (min {x.min()!r})")
    at_branch = x <= -INV_E
    w = _w0_guess(x)
    active = ~at_branch & np.isfinite(x)
    w[np.isposinf(x)] = np.inf
    for _ in range(config.max_terms):
        if not active.any():
            break
        wa = w[active]
        xa = x[active]
        ew = np.exp(wa)
        f = wa * ew - xa
        wp1 = wa + 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            denom = ew * wp1 - (wa + 2.0) * f / (2.0 * wp1)
            dw = np.where((denom != 0.0) & (np.abs(wp1) > 1e-12), f / denom, 0.0)
        w[active] = wa - dw
        done = np.abs(dw) <= config.rel_tol * (1.0 + np.abs(wa))
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    else:
        if active.any():
            raise ConvergenceError("lambert_w0: Halley iteration did not converge")
    w[at_branch] = -1.0
    return _out(w, scalar)


def lambert_w0_exp(log_x, config: SpecFunConfig = DEFAULT_CONFIG):
    """``W0(exp(log_x))`` without overflowing for large ``log_x``."""
    scalar = _is_scalar(log_x)
    L = np.atleast_1d(np.asarray(log_x, dtype=float))
    w = np.empty_like(L)
    small = L <= 20.0
    if small.any():
        w[small] = lambert_w0(np.exp(L[small]), config)
    large = ~small
    if large.any():
        # w + ln w = L is well conditioned here
        Ll = L[large]
        wl = Ll - np.log(Ll)
        for _ in range(config.max_terms):
            g = wl + np.log(wl) - Ll
            dw = g / (1.0 + 1.0 / wl)
            wl = wl - dw
            if np.all(np.abs(dw) <= config.rel_tol * wl):
                break
        else:
            raise ConvergenceError("lambert_w0_exp: Newton iteration did not converge")
        w[large] = wl
    return _out(w, scalar)


def lambert_w0_series(x, config: SpecFunConfig = DEFAULT_CONFIG):
    """Taylor series of W0 about 0: sum (-1)^(n-1) n^(n-2) x^n / (n-1)!.

    Only valid for ``|x| < 1/e``; convergence is slow close to the radius.
    """
    scalar = _is_scalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if (np.abs(x) >= INV_E).any():
        raise DomainError("lambert_w0_series: |x| must be < 1/e")
    total = np.zeros_like(x)
    ax = np.abs(x)
    with np.errstate(divide="ignore"):
        logx = np.log(ax)
    for n in range(1, config.max_terms + 1):
        mag = np.exp((n - 2) * math.log(n) + n * logx - math.lgamma(n))
        term = (-1.0) ** (n - 1) * mag * np.sign(x) ** n
        total += term
        if np.all(np.abs(term) <= config.rel_tol * np.abs(total)):
            break
    else:
        raise ConvergenceError("lambert_w0_series: too few terms for requested tolerance")
    return _out(total, scalar)


# ---------------------------------------------------------------------------
# Gamma helpers
# ---------------------------------------------------------------------------


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``.

    Raises PoleError at non-positive integers.
    """
    x = float(x)
    if _is_nonpos_int(x):
        raise PoleError(f"log_gamma: pole at {x}")
    if x > 0:
        return math.lgamma(x), 1
    sign = -1 if math.floor(x) % 2 else 1
    return math.lgamma(x), sign


def rgamma(x: float) -> float:
    """1/Gamma(x), which is zero (not singular) at non-positive integers."""
    if _is_nonpos_int(x):
        return 0.0
    lg, sign = log_gamma(x)
    return sign * math.exp(-lg)


# ---------------------------------------------------------------------------
# Kummer M
# ---------------------------------------------------------------------------


def _m_series(a, b, z, config):
    term = np.ones_like(z)
    total = np.ones_like(z)
    for n in range(config.max_terms):
        term = term * (a + n) / (b + n) * z / (n + 1)
        total = total + term
        if np.all(np.abs(term) <= config.rel_tol * np.abs(total)):
            return total
    raise ConvergenceError(
        f"kummer_m: series not converged in {config.max_terms} terms (max |z| = {np.abs(z).max():g})"
    )


def kummer_m(a, b, z, config: SpecFunConfig = DEFAULT_CONFIG):
    """Kummer's function M(a, b, z) = sum (a)_n / (b)_n z^n / n!.

    Negative ``z`` goes through Kummer's transformation
    ``M(a, b, z) = e^z M(b - a, b, -z)`` so that the summed series never
    alternates in the sign of z.
    """
    scalar = _is_scalar(a, b, z)
    a, b, z = np.broadcast_arrays(
        np.atleast_1d(np.asarray(a, dtype=float)),
        np.atleast_1d(np.asarray(b, dtype=float)),
        np.atleast_1d(np.asarray(z, dtype=float)),
    )
    if ((b <= 0) & (b == np.round(b))).any():
        raise PoleError("kummer_m: b must not be a non-positive integer")
    neg = z < 0
    aa = np.where(neg, b - a, a)
    s = _m_series(aa, b, np.abs(z), config)
    out = np.where(neg, np.exp(np.minimum(z, 0.0)) * s, s)
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# Kummer U
# ---------------------------------------------------------------------------

_U_NODES = 160
_EPS = np.finfo(float).eps


@lru_cache(maxsize=64)
def _laguerre_rule(alpha: float, n: int):
    s, w = roots_genlaguerre(n, alpha)
    return s, w / w.sum()


def _u_laguerre(a: float, b: float, z, n: int = _U_NODES):
    """U for a > 0 from the Laplace-type integral, by Gauss-Laguerre.

    U(a,b,z) = z^-a / Gamma(a) int_0^inf e^-s s^(a-1) (1 + s/z)^(b-a-1) ds.
    """
    s, w = _laguerre_rule(a - 1.0, n)
    ratio = s[None, :] / z[:, None]
    vals = np.exp((b - a - 1.0) * np.log1p(ratio)) @ w
    return z ** (-a) * vals


def _u_laguerre_any_a(a, b, z, n=_U_NODES):
    if a > 0:
        return _u_laguerre(a, b, z, n)
    # shift a into (1, 2] and recur downwards, the stable direction for U;
    # (0, 1] would put the Laguerre weight exponent a - 1 next to -1
    k = int(math.floor(-a)) + 2
    a0 = a + k
    u_hi = _u_laguerre(a0 + 1.0, b, z, n)
    u = _u_laguerre(a0, b, z, n)
    ak = a0
    for _ in range(k):
        u_lo = (z + 2.0 * ak - b) * u - ak * (ak - b + 1.0) * u_hi
        u_hi, u = u, u_lo
        ak -= 1.0
    return u


def _u_connection(a, b, z, config):
    """Two-M connection formula; also returns an error estimate from cancellation."""
    g1 = rgamma(a - b + 1.0) * math.gamma(1.0 - b)
    g2 = rgamma(a) * math.gamma(b - 1.0)
    t1 = g1 * kummer_m(a, b, z, config) if g1 else np.zeros_like(z)
    t2 = g2 * z ** (1.0 - b) * kummer_m(a - b + 1.0, 2.0 - b, z, config) if g2 else np.zeros_like(z)
    u = t1 + t2
    with np.errstate(divide="ignore", invalid="ignore"):
        err = 8.0 * _EPS * (np.abs(t1) + np.abs(t2)) / np.abs(u)
    return u, np.nan_to_num(err, nan=np.inf)


def _u_quad(a, b, z):
    from scipy.integrate import quad

    # t = s^(1/a) removes the t^(a-1) endpoint singularity
    out = np.empty_like(z)
    for i, zi in enumerate(z):
        val, _ = quad(
            lambda s: math.exp(-zi * s ** (1.0 / a)) * (1.0 + s ** (1.0 / a)) ** (b - a - 1.0),
            0.0,
            math.inf,
            epsabs=0.0,
            epsrel=1e-13,
            limit=400,
        )
        out[i] = val * rgamma(a) / a
    return out


def _u_asymptotic(a, b, z, config):
    """z^-a sum (a)_n (a-b+1)_n (-1/z)^n / n!; returns (value, converged mask)."""
    term = np.ones_like(z)
    total = np.ones_like(z)
    ok = np.zeros(z.shape, dtype=bool)
    alive = np.ones(z.shape, dtype=bool)
    prev = np.abs(term)
    for n in range(1, config.max_terms + 1):
        term = term * (a + n - 1.0) * (a - b + n) / n * (-1.0 / z)
        mag = np.abs(term)
        alive &= mag <= prev  # past the smallest term the series diverges
        total = np.where(alive, total + term, total)
        ok |= alive & (mag <= config.rel_tol * np.abs(total))
        alive &= ~ok
        prev = mag
        if not alive.any():
            break
    return z ** (-a) * total, ok


def kummer_u(a: float, b: float, z, config: SpecFunConfig = DEFAULT_CONFIG):
    """Tricomi's confluent hypergeometric function U(a, b, z) for z > 0.

    Polynomial cases (``a`` or ``a - b + 1`` a non-positive integer) are
    summed exactly.  Elsewhere the asymptotic series is used wherever it
    reaches ``rel_tol`` before its terms start growing.  Remaining points
    take whichever of the two-M connection formula or a Gauss-Laguerre rule
    for the integral representation has the smaller error estimate; the
    connection formula cancels badly once z is moderate, the Laguerre rule
    is poor for small z.  Adaptive quadrature backs up both.

    Only non-integer ``b`` is supported.
    """
    scalar = _is_scalar(z)
    a = float(a)
    b = float(b)
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if not (z > 0).all():
        raise DomainError("kummer_u: z must be > 0")
    if b.is_integer():
        raise PoleError("kummer_u: integer b hits a pole of the connection formula")
    if _is_nonpos_int(a):
        k = int(-a)
        poch = math.prod(b + j for j in range(k))
        return _out((-1.0) ** k * poch * kummer_m(a, b, z, config), scalar)
    if _is_nonpos_int(a - b + 1.0):
        a1, b1 = a - b + 1.0, 2.0 - b
        k = int(-a1)
        poch = math.prod(b1 + j for j in range(k))
        return _out(z ** (1.0 - b) * (-1.0) ** k * poch * kummer_m(a1, b1, z, config), scalar)

    out = np.empty_like(z)
    asym, ok = _u_asymptotic(a, b, z, config)
    out[ok] = asym[ok]
    rest = np.flatnonzero(~ok)
    if rest.size:
        zr = z[rest]
        conn, err_c = _u_connection(a, b, zr, config)
        lag = _u_laguerre_any_a(a, b, zr)
        with np.errstate(divide="ignore", invalid="ignore"):
            err_l = np.abs(lag - _u_laguerre_any_a(a, b, zr, _U_NODES // 2)) / np.abs(lag)
        err_l = np.nan_to_num(err_l, nan=np.inf)
        best = np.where(err_c <= err_l, conn, lag)
        poor = np.minimum(err_c, err_l) > 1e3 * config.rel_tol
        if a > 0 and poor.any():
            best[poor] = _u_quad(a, b, zr[poor])
        out[rest] = best
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# Dilogarithm
# ---------------------------------------------------------------------------


def _bernoulli(n_max: int) -> list[Fraction]:
    # B_1 = -1/2 convention
    B = [Fraction(0)] * (n_max + 1)
    B[0] = Fraction(1)
    for m in range(1, n_max + 1):
        B[m] = -sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1)
    return B


_DILOG_TERMS = 40
# Li2(z) = sum_n B_n u^(n+1) / (n+1)!,  u = -ln(1 - z)
_DILOG_COEF = np.array(
    [float(Bn / math.factorial(n + 1)) for n, Bn in enumerate(_bernoulli(_DILOG_TERMS))]
)


def _li2_core(z):
    """Li2 on |z| <= 1, Re z <= 1/2 via the Bernoulli series in -ln(1-z)."""
    u = -np.log1p(-z)
    total = np.zeros_like(u)
    for c in _DILOG_COEF[::-1]:
        total = (total + c) * u
    return total


def _li2(z):
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    zero = z == 0
    one = z == 1
    work = ~zero & ~one
    zz = z[work]
    res = np.zeros_like(zz)

    # inversion for |z| > 1
    inv = np.abs(zz) > 1.0
    neg = -zz
    neg = neg.real + 1j * (neg.imag + 0.0)  # drop signed zeros: principal log
    log_neg = np.log(neg)
    w = np.where(inv, 1.0 / np.where(inv, zz, 1.0), zz)
    sign = np.where(inv, -1.0, 1.0)
    add = np.where(inv, -PI2_6 - 0.5 * log_neg**2, 0.0)

    # reflection for Re w > 1/2
    refl = w.real > 0.5
    w_safe = np.where(refl & (w == 1), 0.5, w)
    lw = np.log(np.where(refl, w_safe, 1.0))
    l1w = np.log(np.where(refl, 1.0 - w_safe, 1.0))
    core_arg = np.where(refl, 1.0 - w_safe, w_safe)
    core = _li2_core(core_arg)
    inner = np.where(refl, PI2_6 - lw * l1w - core, core)
    inner = np.where(refl & (w == 1), PI2_6, inner)

    res = add + sign * inner
    out[work] = res
    out[one] = PI2_6
    return out


def dilog(z, convention: DilogConvention | str = DilogConvention.SPENCE_LI2):
    """Complex dilogarithm.

    ``SPENCE_LI2`` returns Li2(z) = -int_0^z ln(1 - s)/s ds on the principal
    branch (cut along [1, inf); on the cut itself the principal log of the
    integrand is used, giving Im Li2(x) = -pi ln x for real x > 1).
    ``SHIFTED_LI2`` returns Li2(1 - z), the convention of several
    computer-algebra systems.
    """
    scalar = _is_scalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.isfinite(z).all():
        raise DomainError("dilog: non-finite argument")
    conv = DilogConvention(convention)
    if conv is DilogConvention.SHIFTED_LI2:
        z = 1.0 - z
    return _out(_li2(z), scalar)

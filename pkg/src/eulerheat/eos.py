"""Equation-of-state closures and the exponent power count.

Substituting the similarity ansatz

    T = t^-alpha f(x / t^beta),  v = t^-delta g(.),  rho = t^-gamma h(.)

into continuity / Euler / heat conduction turns every term into a power of
t times a function of eta.  The ansatz closes to an ODE system only if the
powers agree within each equation; :func:`exponent_constraints` solves those
equalities exactly over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import DomainError, PoleError

SYMBOLS = ("alpha", "beta", "gamma", "delta")


@dataclass(frozen=True)
class Polytropic:
    a: float = 1.0
    n: float = 3.0

    def __post_init__(self):
        _positive(a=self.a)


@dataclass(frozen=True)
class Quadratic:
    """p = (b/2) rho^2."""

    b: float = 1.0

    def __post_init__(self):
        _positive(b=self.b)


@dataclass(frozen=True)
class Linear:
    A: float = 1.0

    def __post_init__(self):
        _positive(A=self.A)


@dataclass(frozen=True)
class Virial:
    """p = A T rho (1 + B rho + C rho^2)."""

    A: float = 1.0
    B: float = 0.0
    C: float = 0.0

    def __post_init__(self):
        _positive(A=self.A)


@dataclass(frozen=True)
class VanDerWaals:
    """p = a T rho / (b - rho) - c rho^2."""

    a: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        _positive(a=self.a, b=self.b, c=self.c)


EosModel = Union[Polytropic, Quadratic, Linear, Virial, VanDerWaals]


def _positive(**kw):
    for name, val in kw.items():
        if not val > 0:
            raise DomainError(f"EOS constant {name} must be > 0, got {val!r}")


def pressure(eos: EosModel, rho, T=None):
    """Closed-form pressure.  T is ignored by the barotropic closures."""
    rho = np.asarray(rho, dtype=float)
    if (rho <= 0).any():
        raise DomainError("pressure: rho must be > 0")
    if isinstance(eos, Polytropic):
        return eos.a * rho**eos.n
    if isinstance(eos, Quadratic):
        return 0.5 * eos.b * rho**2
    if isinstance(eos, Linear):
        return eos.A * rho
    T = _need_T(T, eos)
    if isinstance(eos, Virial):
        return eos.A * T * rho * (1.0 + eos.B * rho + eos.C * rho**2)
    if isinstance(eos, VanDerWaals):
        gap = eos.b - rho
        if (gap == 0).any():
            raise PoleError("pressure: van der Waals pole at rho = b")
        if (gap < 0).any():
            raise DomainError("pressure: van der Waals requires rho < b")
        return eos.a * T * rho / gap - eos.c * rho**2
    raise TypeError(f"unknown EOS {eos!r}")


def _need_T(T, eos):
    if T is None:
        raise DomainError(f"{type(eos).__name__} pressure needs a temperature")
    return np.asarray(T, dtype=float)


def sound_speed_sq(eos: EosModel, rho, T=None):
    """dp/drho at fixed T, clipped at zero; vacuum cells (rho <= 0) give 0."""
    rho = np.asarray(rho, dtype=float)
    r = np.maximum(rho, 0.0)
    if isinstance(eos, Polytropic):
        with np.errstate(divide="ignore", invalid="ignore"):
            cs2 = np.where(r > 0, eos.a * eos.n * r ** (eos.n - 1.0), 0.0)
    elif isinstance(eos, Quadratic):
        cs2 = eos.b * r
    elif isinstance(eos, Linear):
        cs2 = np.where(r > 0, eos.A, 0.0)
    elif isinstance(eos, Virial):
        T = _need_T(T, eos)
        cs2 = np.where(r > 0, eos.A * T * (1.0 + 2.0 * eos.B * r + 3.0 * eos.C * r**2), 0.0)
    elif isinstance(eos, VanDerWaals):
        T = _need_T(T, eos)
        cs2 = eos.a * T * eos.b / (eos.b - r) ** 2 - 2.0 * eos.c * r
    else:
        raise TypeError(f"unknown EOS {eos!r}")
    return np.maximum(cs2, 0.0)


# ---------------------------------------------------------------------------
# power counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Exponents:
    """Similarity exponents; ``None`` marks a free (undetermined) exponent."""

    alpha: Optional[Fraction]
    beta: Optional[Fraction]
    gamma: Optional[Fraction]
    delta: Optional[Fraction]
    omega: Optional[Fraction] = None

    def as_dict(self) -> dict:
        return {k: (None if v is None else str(v)) for k, v in vars(self).items()}


@dataclass(frozen=True)
class ConstraintResult:
    feasible: bool
    exponents: Optional[Exponents]
    free_params: tuple[str, ...] = ()
    reason: str = ""

    def __post_init__(self):
        if self.feasible != (self.exponents is not None):
            raise ValueError("feasible results carry exponents, infeasible ones do not")

    def as_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "exponents": None if self.exponents is None else self.exponents.as_dict(),
            "free_params": list(self.free_params),
            "reason": self.reason,
        }


@dataclass(frozen=True)
class Power:
    """Affine form in the exponents: the power of t carried by one term."""

    coef: tuple[Fraction, Fraction, Fraction, Fraction]
    const: Fraction = Fraction(0)

    @classmethod
    def of(cls, const=0, **kw) -> "Power":
        return cls(tuple(Fraction(kw.get(s, 0)) for s in SYMBOLS), Fraction(const))

    def __sub__(self, other: "Power") -> "Power":
        return Power(tuple(a - b for a, b in zip(self.coef, other.coef)), self.const - other.const)

    def at(self, values: dict) -> Fraction:
        return sum((c * values[s] for c, s in zip(self.coef, SYMBOLS)), self.const)


@dataclass(frozen=True)
class Constraint:
    label: str
    lhs: Power  # lhs == 0


def _eos_terms(eos: EosModel):
    """(pressure monomials rho^m T^l, extra homogeneity constraints)."""
    if isinstance(eos, Polytropic):
        return [(Fraction(eos.n), 0)], []
    if isinstance(eos, Quadratic):
        return [(Fraction(2), 0)], []
    if isinstance(eos, Linear):
        return [(Fraction(1), 0)], []
    if isinstance(eos, Virial):
        mono = [(Fraction(1), 1)]
        if eos.B != 0:
            mono.append((Fraction(2), 1))
        if eos.C != 0:
            mono.append((Fraction(3), 1))
        return mono, []
    if isinstance(eos, VanDerWaals):
        # b - rho mixes t^0 with t^-gamma unless gamma = 0
        homog = Constraint("momentum: repulsive denominator b - rho homogeneous (gamma = 0)", Power.of(gamma=1))
        return [(Fraction(1), 1), (Fraction(2), 0)], [homog]
    raise TypeError(f"unknown EOS {eos!r}")


def term_powers(eos: EosModel) -> dict[str, list[tuple[str, Power]]]:
    """Power of t carried by each term of the three equations under the ansatz."""
    monomials, _ = _eos_terms(eos)
    momentum = [
        ("v_t", Power.of(-1, delta=-1)),
        ("v v_x", Power.of(delta=-2, beta=-1)),
    ]
    for m, l in monomials:
        # (rho^m T^l)_x / rho
        momentum.append(
            (f"(rho^{m} T^{l})_x/rho", Power.of(gamma=-(m - 1), alpha=-l, beta=-1))
        )
    return {
        "continuity": [
            ("rho_t", Power.of(-1, gamma=-1)),
            ("(rho v)_x", Power.of(gamma=-1, delta=-1, beta=-1)),
        ],
        "heat": [
            ("T_t", Power.of(-1, alpha=-1)),
            ("v T_x", Power.of(alpha=-1, delta=-1, beta=-1)),
            ("lambda T_xx", Power.of(alpha=-1, beta=-2)),
        ],
        "momentum": momentum,
    }


def _constraints(eos: EosModel) -> list[Constraint]:
    terms = term_powers(eos)
    _, homog = _eos_terms(eos)
    out: list[Constraint] = []
    for eq in ("continuity", "heat"):
        (l0, p0), *rest = terms[eq]
        out += [Constraint(f"{eq}: {l0} ~ {l}", p0 - p) for l, p in rest]
    out += homog
    (l0, p0), *rest = terms["momentum"]
    out += [Constraint(f"momentum: {l0} ~ {l}", p0 - p) for l, p in rest]
    return out


def _solve(cons: list[Constraint]):
    """RREF over Fractions.  Returns (consistent, {symbol: value}, free symbols)."""
    rows = [list(c.lhs.coef) + [-c.lhs.const] for c in cons]
    pivots = []
    r = 0
    for col in range(len(SYMBOLS)):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for row in rows[r:]:
        if row[-1] != 0:
            return False, {}, ()
    free = tuple(SYMBOLS[c] for c in range(len(SYMBOLS)) if c not in pivots)
    values = {}
    for i, col in enumerate(pivots):
        # determined only if no free symbol remains in the row
        if all(rows[i][c] == 0 for c in range(len(SYMBOLS)) if c not in pivots):
            values[SYMBOLS[col]] = rows[i][-1]
    return True, values, free


def _irreducible_conflict(cons: list[Constraint]) -> list[Constraint]:
    # deletion filter: drop every constraint not needed for the contradiction
    core = list(cons)
    for c in list(core):
        trial = [k for k in core if k is not c]
        if not _solve(trial)[0]:
            core = trial
    return core


def exponent_constraints(eos: EosModel) -> ConstraintResult:
    """Decide whether the similarity ansatz closes the system for ``eos``.

    The density must genuinely decay (gamma != 0); a power count that forces
    gamma = 0 is reported as infeasible together with the constraints that
    force it.

    When the power count leaves gamma undetermined (pressure homogeneous of
    degree one in rho), it is fixed by requiring the continuity equation to
    be a total derivative in eta, gamma = beta, which is what makes
    g = eta/2 available.
    """
    cons = _constraints(eos)
    for k in range(1, len(cons) + 1):
        ok, _, _ = _solve(cons[:k])
        if not ok:
            core = _irreducible_conflict(cons[:k])
            return ConstraintResult(
                False, None, (), "contradictory: " + "; ".join(c.label for c in core)
            )
    _, values, free = _solve(cons)
    if values.get("gamma") == 0:
        # a density that does not decay is not a self-similar family here
        pin = Constraint("density decays: gamma != 0", Power.of(-1, gamma=1))
        core = [c for c in _irreducible_conflict(cons + [pin]) if c is not pin]
        return ConstraintResult(
            False,
            None,
            (),
            "contradictory: gamma forced to 0 by " + "; ".join(c.label for c in core)
            + " (conflicts with a decaying density, gamma != 0)",
        )
    notes = []
    if "gamma" in free:
        cons = cons + [Constraint("continuity integrable in eta: gamma = beta", Power.of(gamma=1, beta=-1))]
        _, values, free = _solve(cons)
        notes.append("gamma fixed by the conservation-law reduction (gamma = beta)")
    exps = Exponents(*(values.get(s) for s in SYMBOLS))
    reason = "all terms balance"
    if free:
        reason += "; free: " + ", ".join(free)
    if notes:
        reason += "; " + "; ".join(notes)
    return ConstraintResult(True, exps, free, reason)

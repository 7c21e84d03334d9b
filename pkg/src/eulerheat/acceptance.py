"""Release acceptance checks, one function per criterion.

Each check returns a :class:`CriterionResult`; :func:`run` executes a
selection and is shared by ``eulerheat verify`` and the test-suite.
Independent oracles come from scipy (``hyp1f1``, ``quad``) or from
elementary identities; the package's own evaluators are never used to
check themselves.
"""

from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, special

from . import analytic, specfun, tables, verify
from .analytic import ACubic, BTravel, BZk, CGauss, CTravel, DensityPath, DVirial
from .eos import Polytropic, VanDerWaals, Virial, exponent_constraints
from .pdesolver import DirichletFromFamily, Grid1D, porous_media_mode, simulate, state_from_family


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f}s)"


REGION = ((0.1, 1.0), (1.0, 2.0))
ORDER_LADDER = (0.04, 0.02, 0.01)


def c1_special_functions() -> tuple[bool, dict]:
    x = np.linspace(-math.exp(-1.0) + 1e-9, 20.0, 10_000)
    w = specfun.lambert_w0(x)
    w_err = float(np.max(np.abs(w * np.exp(w) - x) / np.maximum(1.0, np.abs(x))))

    rng = np.random.default_rng(20240601)
    a = rng.uniform(-3.0, 3.0, 1000)
    z = rng.uniform(-20.0, 20.0, 1000)
    ours = specfun.kummer_m(a, 1.5, z)
    ref = special.hyp1f1(a, 1.5, z)
    m_err = float(np.max(np.abs(ours - ref) / np.maximum(1.0, np.abs(ref))))
    # Euler integral oracle where it converges (0 < a < b)
    sub = (a > 0.05) & (a < 1.45)
    q_err = 0.0
    for ai, zi in list(zip(a[sub], z[sub]))[:100]:
        # algebraic endpoint weights s^(a-1) (1-s)^(b-a-1) integrated exactly (QAWS)
        val, _ = integrate.quad(
            lambda s: math.exp(zi * s), 0.0, 1.0,
            weight="alg", wvar=(ai - 1.0, 0.5 - ai), epsabs=0.0, epsrel=1e-13, limit=200,
        )
        mq = val * math.gamma(1.5) / (math.gamma(ai) * math.gamma(1.5 - ai))
        mo = specfun.kummer_m(ai, 1.5, zi)
        q_err = max(q_err, abs(mo - mq) / max(1.0, abs(mq)))

    li2_one = abs(specfun.dilog(1.0) - math.pi**2 / 6.0)
    zz = np.linspace(1e-3, 1 - 1e-3, 999)
    refl = specfun.dilog(zz) + specfun.dilog(1 - zz) - (math.pi**2 / 6 - np.log(zz) * np.log(1 - zz))
    refl_err = float(np.max(np.abs(refl)))
    ok = w_err <= 1e-12 and m_err <= 1e-10 and q_err <= 1e-10 and li2_one <= 1e-12 and refl_err <= 1e-10
    return ok, dict(lambert=w_err, kummer_m_vs_hyp1f1=m_err, kummer_m_vs_quad=q_err, li2_1=li2_one, reflection=refl_err)


def _exact_families():
    return [ACubic(c1=0.5, c3=0.5, alpha=2.0), DVirial()]


def c2_exact_residuals() -> tuple[bool, dict]:
    det, ok = {}, True
    for fam in _exact_families():
        rep = verify.pde_residual(fam, REGION, 1e-3, 1e-3)
        order = verify.residual_study(fam, ORDER_LADDER, REGION)[0].order_estimate
        name = analytic.family_name(fam)
        det[name] = dict(linf={e: rep.linf(e) for e in rep.eq_names}, order=order)
        ok &= rep.linf() < 1e-6 and order >= 1.9
    return ok, det


def c3_quasi_stationary() -> tuple[bool, dict]:
    det, ok = {}, True
    for fam in (BZk(), CGauss(), CTravel()):
        rep = verify.pde_residual(fam, REGION, 1e-3, 1e-3)
        name = analytic.family_name(fam)
        gap = rep.neglected_norms["Linf"]
        det[name] = dict(
            continuity=rep.linf("continuity"), heat=rep.linf("heat"),
            momentum=rep.linf("momentum"), momentum_minus_neglected=gap,
        )
        ok &= rep.linf("continuity") < 1e-6 and rep.linf("heat") < 1e-6 and gap < 1e-6
    return ok, det


def c4_ode_residuals() -> tuple[bool, dict]:
    bt = verify.ode_residual(BTravel(), (-5.0, 5.0))["density"]
    bz = verify.ode_residual(BZk(), (0.0, 5.0))["heat"]
    cg = verify.ode_residual(CGauss(), (0.0, 5.0))["heat"]
    eta = np.linspace(0.0, 1.4, 57)
    cf = analytic.virial_density(eta, DVirial(), DensityPath.CLOSED_FORM)
    sel = cf.selected
    dev = cf.rel_dev[sel] if sel is not None else min(cf.rel_dev.values())
    ok = bt < 1e-8 and bz < 1e-8 and cg < 1e-8 and sel is not None and dev < 1e-6
    return ok, dict(
        btravel=bt, bzk_heat=bz, cgauss_heat=cg,
        dvirial_convention=None if sel is None else sel.value,
        dvirial_rel_dev={k.value: v for k, v in cf.rel_dev.items()},
    )


def c5_zk_front() -> tuple[bool, dict]:
    grid = Grid1D.from_interval(-8.0, 8.0, 4000)
    A = 1.0
    ic = analytic.zk_profile(grid.x, 1.0, A)
    outs = [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0]
    traj = porous_media_mode(ic, 8.0, grid, t1_start=1.0, output_times=outs)
    fit = verify.front_fit(traj, grid)
    m0 = float(np.sum(traj[0].rho))
    mass_dev = max(abs(float(np.sum(s.rho)) - m0) / m0 for s in traj)
    target = math.sqrt(12.0) * A
    amp_dev = abs(fit.amplitude - target) / target
    ok = abs(fit.exponent - 1.0 / 3.0) <= 0.02 and amp_dev <= 0.03 and mass_dev <= 1e-10
    return ok, dict(exponent=fit.exponent, amplitude=fit.amplitude, amplitude_rel_dev=amp_dev, mass_rel_dev=mass_dev)


SIM_FAMILY = ACubic(a=1.0, c1=0.5, c2=1.0, c3=0.5, alpha=1.0, lam=0.1)


def c6_simulator_convergence(ns: Sequence[int] = (100, 200, 400)) -> tuple[bool, dict]:
    fam = SIM_FAMILY
    errs = {"rho": [], "v": [], "T": []}
    dxs = []
    for n in ns:
        g = Grid1D.from_interval(0.5, 1.5, n)
        ic = state_from_family(fam, g, 1.0)
        end = simulate(ic, analytic.family_eos(fam), fam.lam, 1.2, cfl=0.4, bc=DirichletFromFamily(fam))[-1]
        ex = state_from_family(fam, g, 1.2)
        for k in errs:
            errs[k].append(float(np.sum(np.abs(getattr(end, k) - getattr(ex, k))) * g.dx))
        dxs.append(g.dx)
    orders = {k: verify._slope(dxs, v) for k, v in errs.items()}
    ok = all(o >= 0.9 for o in orders.values())
    return ok, dict(l1=errs, orders=orders)


def c7_collapse() -> tuple[bool, dict]:
    det = {}
    for fam in (ACubic(c1=0.5, c3=0.5, alpha=2.0), BZk(), CGauss(), DVirial()):
        det[analytic.family_name(fam)] = verify.collapse_test(fam, (1.0, 2.0, 4.0)).max_pairwise_deviation
    return all(v < 1e-10 for v in det.values()), det


def c8_erratum() -> tuple[bool, dict]:
    rep = verify.erratum_report(REGION)
    at = rep.entry("acubic_temperature")
    ct = rep.entry("ctravel_temperature")
    ok = (
        all(p > 1e-2 for p in at.printed)
        and all(c < 1e-6 for c in at.corrected)
        and ct.exact_check is not None
        and ct.exact_check <= 1e-8
        and all(c < 1e-10 for c in ct.corrected)
        and rep.all_pass
    )
    return ok, {e.name: dict(printed=e.printed, corrected=e.corrected, verdict=e.verdict) for e in rep.entries}


def _eval_columns(argv: list[str]) -> dict:
    """Run ``eulerheat eval`` and parse its CSV output."""
    from . import cli  # cli imports this module

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "eval.csv")
        code = cli.main(["eval", *argv, "--output", path])
        if code != 0:
            raise RuntimeError(f"eval exited with status {code}")
        with open(path, encoding="utf-8") as fh:
            return tables.read_csv(fh.read())


def c9_figures() -> tuple[bool, dict]:
    t = 1.0
    tab = _eval_columns(
        ["--family", "b-travel", "--a", "1", "--b", "1", "--c1", "1", "--c2", "1",
         "--x-min", "-20", "--x-max", "400", "--nx", "4201", "--times", repr(t)]
    )
    rho, v = tab["rho"], tab["v"]
    mono = bool(np.all(np.diff(rho) >= 0))
    plateau = abs(rho[0] - 1.0)
    v_left = abs(v[0])
    v_right = abs(v[-1] + t) / t
    v_mono = bool(np.all(np.diff(v) <= 0))

    odd, decay = 0.0, True
    for mode_flag in ([], ["--as-printed"]):
        peaks = []
        for tt in (1.0, 2.0, 3.0, 4.0):
            T = _eval_columns(
                ["--family", "c-gauss", "--gamma", "1", "--lam", "1", "--c1", "1", "--c2", "0",
                 "--x-min", "-5", "--x-max", "5", "--nx", "201", "--times", repr(tt), *mode_flag]
            )["T"]
            odd = max(odd, float(np.max(np.abs(T + T[::-1])) / np.max(np.abs(T))))
            peaks.append(float(np.max(np.abs(T))))
        decay &= all(p1 < p0 for p0, p1 in zip(peaks, peaks[1:]))
    ok = mono and plateau < 1e-6 and v_left < 1e-6 and v_right < 1e-2 and v_mono and odd < 1e-12 and decay
    return ok, dict(
        density_monotone=mono, left_plateau_dev=plateau, v_left=v_left, v_right_rel_dev=v_right,
        v_monotone=v_mono, cgauss_odd_dev=odd, cgauss_decays=decay,
    )


def c10_constraints() -> tuple[bool, dict]:
    half = Fraction(1, 2)
    p3 = exponent_constraints(Polytropic(a=1.0, n=3))
    vir = exponent_constraints(Virial(A=1.0))
    vdw = exponent_constraints(VanDerWaals(a=1.0, b=1.0, c=1.0))
    ok = (
        p3.feasible and p3.exponents.gamma == half and p3.exponents.beta == half and p3.exponents.delta == half
        and "alpha" in p3.free_params
        and vir.feasible and vir.exponents.alpha == 1
        and vir.exponents.beta == vir.exponents.gamma == vir.exponents.delta == half
        and not vdw.feasible
    )
    return ok, dict(polytropic_3=p3.as_dict(), virial=vir.as_dict(), vdw=vdw.as_dict())


CRITERIA: dict[int, tuple[str, Callable[[], tuple[bool, dict]]]] = {
    1: ("special-function oracles", c1_special_functions),
    2: ("exact-family PDE residuals and order", c2_exact_residuals),
    3: ("quasi-stationary residuals and momentum defect", c3_quasi_stationary),
    4: ("reduced ODE residuals and virial closed form", c4_ode_residuals),
    5: ("ZK front law from porous-media simulation", c5_zk_front),
    6: ("simulator convergence against ACubic", c6_simulator_convergence),
    7: ("self-similar collapse", c7_collapse),
    8: ("erratum detection", c8_erratum),
    9: ("figure-shape reproduction", c9_figures),
    10: ("exponent constraints", c10_constraints),
}

SUITES = {
    "all": tuple(CRITERIA),
    "specfun": (1,),
    "residual": (2, 3, 4),
    "front": (5,),
    "simulate": (6,),
    "collapse": (7,),
    "erratum": (8,),
    "figures": (9,),
    "constraints": (10,),
}


def run_one(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    try:
        ok, det = fn()
    except Exception as exc:  # a crash is a failed criterion, reported not raised
        ok, det = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CriterionResult(number, title, bool(ok), det, time.perf_counter() - start)


def run(numbers: Optional[Sequence[int]] = None, echo: Optional[Callable[[str], None]] = None) -> list[CriterionResult]:
    out = []
    for n in numbers or tuple(CRITERIA):
        res = run_one(n)
        if echo:
            echo(res.line())
        out.append(res)
    return out

"""Explicit finite-difference integrator for the coupled system.

First order in time (forward Euler).  Continuity uses a local Lax-Friedrichs
flux, momentum is advanced in primitive form (upwind v v_x, central p_x),
temperature with upwind advection and central diffusion.  The scheme is a
referee for the analytic families, not a production solver.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np

from . import analytic
from .eos import EosModel, pressure, sound_speed_sq
from .errors import ConfigError, DomainError, InstabilityError

VACUUM = 1e-14


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centred grid; cell i has centre x0 + (i + 1/2) dx."""

    x0: float
    dx: float
    n: int

    def __post_init__(self):
        if not (self.dx > 0 and math.isfinite(self.dx)):
            raise DomainError("Grid1D: dx must be finite and > 0")
        if self.n < 3:
            raise DomainError("Grid1D: need at least 3 cells")

    @classmethod
    def from_interval(cls, lo: float, hi: float, n: int) -> "Grid1D":
        return cls(lo, (hi - lo) / n, n)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + (np.arange(self.n) + 0.5) * self.dx

    @property
    def length(self) -> float:
        return self.n * self.dx


@dataclass(frozen=True)
class State:
    grid: Grid1D
    t: float
    rho: np.ndarray
    v: np.ndarray
    T: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("rho", "v", "T"):
            arr = getattr(self, name)
            if arr is None:
                continue
            if np.shape(arr) != (self.grid.n,):
                raise DomainError(f"State.{name} must have shape ({self.grid.n},)")
        if (self.rho < 0).any():
            raise DomainError("State.rho must be >= 0")

    def mass(self) -> float:
        return float(np.sum(self.rho) * self.grid.dx)


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class Outflow:
    pass


@dataclass(frozen=True)
class DirichletFromFamily:
    family: analytic.SolutionFamily
    mode: analytic.Mode = analytic.Mode.CORRECTED


BcSpec = Union[Periodic, Outflow, DirichletFromFamily]


def state_from_family(family, grid: Grid1D, t: float, mode=analytic.Mode.CORRECTED) -> State:
    """Sample an analytic family onto ``grid`` at time ``t``."""
    sp = analytic.eval_state(family, grid.x, t, mode)
    v = np.nan_to_num(sp.v, nan=0.0)
    return State(grid, float(t), np.array(sp.rho), np.array(v), None if sp.T is None else np.array(sp.T))


def stable_dt(state: State, eos: EosModel, lam: float, cfl: float, dt_max: float = math.inf) -> float:
    """cfl * min(dx / max(|v| + c_s), dx^2 / (2 lam)), capped by ``dt_max``."""
    if not 0 < cfl <= 1:
        raise ConfigError("cfl must be in (0, 1]")
    if lam < 0:
        raise ConfigError("lambda must be >= 0")
    dx = state.grid.dx
    speed = float(np.max(np.abs(state.v) + np.sqrt(sound_speed_sq(eos, state.rho, state.T))))
    cands = [dt_max]
    if speed > 0:
        cands.append(cfl * dx / speed)
    if lam > 0 and state.T is not None:
        cands.append(cfl * dx * dx / (2.0 * lam))
    dt = min(cands)
    if not (dt > 0 and math.isfinite(dt)):
        raise ConfigError("no finite time step: set dt_max when the state has no wave speed")
    return dt


def _pad(arr, ghost_lo, ghost_hi, bc):
    if isinstance(bc, Periodic):
        return np.concatenate(([arr[-1]], arr, [arr[0]]))
    if isinstance(bc, Outflow):
        return np.concatenate(([arr[0]], arr, [arr[-1]]))
    return np.concatenate(([ghost_lo], arr, [ghost_hi]))


def _ghosts(state: State, bc):
    """Ghost values (rho, v, T) at both ends, or Nones for non-Dirichlet."""
    if not isinstance(bc, DirichletFromFamily):
        return None
    g = state.grid
    xs = np.array([g.x0 - 0.5 * g.dx, g.x0 + (g.n + 0.5) * g.dx])
    sp = analytic.eval_state(bc.family, xs, state.t, bc.mode)
    T = None if sp.T is None else np.asarray(sp.T)
    return np.asarray(sp.rho), np.nan_to_num(np.asarray(sp.v)), T


def step(state: State, eos: EosModel, lam: float, dt: float, bc: BcSpec) -> State:
    """Advance one forward-Euler step of size ``dt``."""
    if not dt > 0:
        raise ConfigError("dt must be > 0")
    dx = state.grid.dx
    gh = _ghosts(state, bc)
    lo = (lambda k: gh[k][0]) if gh else (lambda k: None)
    hi = (lambda k: gh[k][1]) if gh else (lambda k: None)

    rho = _pad(state.rho, lo(0), hi(0), bc)
    v = _pad(state.v, lo(1), hi(1), bc)
    T = None
    if state.T is not None:
        if gh and gh[2] is None:
            raise DomainError("Dirichlet family has no temperature trace")
        T = _pad(state.T, lo(2) if gh else None, hi(2) if gh else None, bc)

    vac = rho < VACUUM
    v = np.where(vac, 0.0, v)
    cs = np.sqrt(sound_speed_sq(eos, rho, T))

    # continuity: local Lax-Friedrichs
    flux = rho * v
    s = np.maximum(np.abs(v[:-1]) + cs[:-1], np.abs(v[1:]) + cs[1:])
    F = 0.5 * (flux[:-1] + flux[1:]) - 0.5 * s * (rho[1:] - rho[:-1])
    rho_new = state.rho - dt / dx * (F[1:] - F[:-1])

    # momentum, primitive form
    vi = v[1:-1]
    dv_back = (v[1:-1] - v[:-2]) / dx
    dv_fwd = (v[2:] - v[1:-1]) / dx
    adv = vi * np.where(vi > 0, dv_back, dv_fwd)
    p = _pressure_safe(eos, rho, T)
    px = (p[2:] - p[:-2]) / (2.0 * dx)
    inner_vac = vac[1:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        grad = np.where(inner_vac, 0.0, px / np.where(inner_vac, 1.0, rho[1:-1]))
    v_new = state.v - dt * (adv + grad)

    T_new = None
    if T is not None:
        Ti = T[1:-1]
        dT = np.where(vi > 0, (Ti - T[:-2]) / dx, (T[2:] - Ti) / dx)
        lap = (T[2:] - 2.0 * Ti + T[:-2]) / (dx * dx)
        T_new = Ti - dt * vi * dT + dt * lam * lap

    rho_new = np.where(rho_new < 0, 0.0, rho_new) if (rho_new > -1e-12).all() else rho_new
    v_new = np.where(rho_new < VACUUM, 0.0, v_new)
    for name, arr in (("rho", rho_new), ("v", v_new), ("T", T_new)):
        if arr is not None and not np.isfinite(arr).all():
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InstabilityError(f"step: non-finite {name} at cell {bad}, t = {state.t + dt:g}")
    if (rho_new < 0).any():
        raise InstabilityError(f"step: negative density {rho_new.min():g} at t = {state.t + dt:g}")
    return State(state.grid, state.t + dt, rho_new, v_new, T_new)


def _pressure_safe(eos, rho, T):
    # pressure() rejects rho <= 0; vacuum cells carry p = 0
    out = np.zeros_like(rho)
    pos = rho > 0
    if pos.any():
        out[pos] = pressure(eos, rho[pos], None if T is None else T[pos])
    return out


@dataclass(frozen=True)
class SimConfig:
    cfl: float = 0.4
    dt_max: float = math.inf
    wall_clock: float = 600.0

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ConfigError("cfl must be in (0, 1]")
        if not self.dt_max > 0:
            raise ConfigError("dt_max must be > 0")


def _output_times(t0, t_end, outputs):
    if outputs is None:
        return [t_end]
    outs = sorted(float(t) for t in outputs)
    if outs and (outs[0] < t0 or outs[-1] > t_end):
        raise ConfigError("output times must lie within [ic.t, t_end]")
    if not outs or outs[-1] != t_end:
        outs.append(t_end)
    outs = [t for t in outs if t > t0]
    return outs


def simulate(
    ic: State,
    eos: EosModel,
    lam: float,
    t_end: float,
    cfl: float = 0.4,
    bc: BcSpec = Periodic(),
    output_times: Optional[Sequence[float]] = None,
    config: Optional[SimConfig] = None,
) -> list[State]:
    """Integrate to ``t_end``, returning [ic] plus a state per output time.

    The last step before each output time is shortened to land on it.
    """
    cfg = config or SimConfig(cfl=cfl)
    if t_end < ic.t:
        raise ConfigError("t_end must be >= ic.t")
    if t_end == ic.t:
        return [ic]
    traj = [ic]
    state = ic
    start = _time.monotonic()
    for t_out in _output_times(ic.t, t_end, output_times):
        while state.t < t_out:
            dt = stable_dt(state, eos, lam, cfg.cfl, cfg.dt_max)
            remaining = t_out - state.t
            if dt >= remaining or remaining - dt < 1e-12 * max(1.0, abs(t_out)):
                dt = remaining
            state = step(state, eos, lam, dt, bc)
            if _time.monotonic() - start > cfg.wall_clock:
                raise InstabilityError(f"simulate: wall-clock budget of {cfg.wall_clock:g}s exceeded")
        state = replace(state, t=t_out)
        traj.append(state)
    return traj


# ---------------------------------------------------------------------------
# porous-media reduction rho_t1 = (rho^2)_xx
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PorousSnapshot:
    t1: float
    rho: np.ndarray


def porous_media_mode(
    ic,
    t1_end: float,
    grid: Optional[Grid1D] = None,
    t1_start: float = 0.0,
    output_times: Optional[Sequence[float]] = None,
    cfl: float = 0.9,
    m: int = 2,
) -> list[PorousSnapshot]:
    """Integrate rho_t1 = (rho^m)_xx with no-flux walls.

    The update is the conservative difference of the face fluxes
    ((rho^m)_{i+1} - (rho^m)_i) / dx, so the discrete mass is conserved to
    roundoff; dt = cfl dx^2 / (2 max m rho^(m-1)) keeps rho >= 0.
    """
    rho = np.array(ic, dtype=float)
    if rho.ndim != 1 or rho.size < 3:
        raise DomainError("porous_media_mode: ic must be a 1-D array of >= 3 cells")
    if (rho < 0).any():
        raise DomainError("porous_media_mode: ic must be >= 0")
    if not 0 < cfl <= 1:
        raise ConfigError("cfl must be in (0, 1]")
    if t1_end < t1_start:
        raise ConfigError("t1_end must be >= t1_start")
    dx = grid.dx if grid is not None else 1.0
    outs = _output_times(t1_start, t1_end, output_times)
    traj = [PorousSnapshot(t1_start, rho.copy())]
    t = t1_start
    flux = np.zeros(rho.size + 1)
    inv_dx2 = 1.0 / (dx * dx)
    for t_out in outs:
        while t < t_out:
            rmax = rho.max()
            if rmax <= 0:
                t = t_out
                break
            dt = cfl * dx * dx / (2.0 * m * rmax ** (m - 1))
            if t + dt >= t_out:
                dt = t_out - t
            q = rho**m
            np.subtract(q[1:], q[:-1], out=flux[1:-1])
            rho += (dt * inv_dx2) * (flux[1:] - flux[:-1])
            t += dt
            if not np.isfinite(rho[0]) or not np.isfinite(rho[-1]):
                raise InstabilityError("porous_media_mode: non-finite density")
        if not np.isfinite(rho).all():
            raise InstabilityError("porous_media_mode: non-finite density")
        t = t_out
        traj.append(PorousSnapshot(t_out, rho.copy()))
    return traj

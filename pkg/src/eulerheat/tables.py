"""Tabulation of sampled fields and CSV / JSON writers."""

from __future__ import annotations

import io
import json
from typing import Iterable, Optional, Sequence

import numpy as np

from . import analytic

COLUMNS = ("x", "t", "rho", "v", "T")


def tabulate(family, xs: Sequence[float], ts: Sequence[float], mode=analytic.Mode.CORRECTED) -> dict:
    """Columns x, t, rho, v, T over the product grid, t-major.  T is None if absent."""
    xs = np.asarray(xs, dtype=float)
    cols = {k: [] for k in COLUMNS}
    for t in ts:
        sp = analytic.eval_state(family, xs, np.full_like(xs, float(t)), mode)
        cols["x"].append(xs)
        cols["t"].append(np.full_like(xs, float(t)))
        cols["rho"].append(sp.rho)
        cols["v"].append(sp.v)
        cols["T"].append(None if sp.T is None else sp.T)
    out = {k: np.concatenate(cols[k]) for k in ("x", "t", "rho", "v")}
    out["T"] = None if cols["T"][0] is None else np.concatenate(cols["T"])
    return out


def states_table(states: Iterable) -> dict:
    """Same column layout for a list of pdesolver.State snapshots."""
    cols = {k: [] for k in COLUMNS}
    has_T = True
    for s in states:
        x = s.grid.x
        cols["x"].append(x)
        cols["t"].append(np.full_like(x, s.t))
        cols["rho"].append(s.rho)
        cols["v"].append(s.v)
        has_T = has_T and s.T is not None
        cols["T"].append(s.T)
    out = {k: np.concatenate(cols[k]) for k in ("x", "t", "rho", "v")}
    out["T"] = np.concatenate(cols["T"]) if has_T else None
    return out


def _fmt(v: float) -> str:
    return repr(float(v))


def to_csv(table: dict) -> str:
    buf = io.StringIO()
    buf.write(",".join(COLUMNS) + "\n")
    n = len(table["x"])
    T = table["T"]
    for i in range(n):
        row = [_fmt(table[k][i]) for k in ("x", "t", "rho", "v")]
        row.append("" if T is None else _fmt(T[i]))
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def to_json(table: dict, meta: Optional[dict] = None) -> str:
    def col(a):
        if a is None:
            return None
        return [None if not np.isfinite(v) else float(v) for v in a]

    doc = {"columns": list(COLUMNS), "data": {k: col(table[k]) for k in COLUMNS}}
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=1, sort_keys=True)


def read_csv(text: str) -> dict:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    if tuple(header) != COLUMNS:
        raise ValueError(f"unexpected header {header}")
    cols = {k: [] for k in COLUMNS}
    for ln in lines[1:]:
        parts = ln.split(",")
        for k, p in zip(COLUMNS, parts):
            cols[k].append(float(p) if p != "" else np.nan)
    out = {k: np.array(v) for k, v in cols.items()}
    if np.isnan(out["T"]).all():
        out["T"] = None
    return out

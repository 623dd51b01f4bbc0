"""CSV and JSON rendering of decoder-error reports and bound tables.

Exact integers and rationals are written as strings so nothing is rounded
or truncated to 64 bits.  JSON is dumped with sorted keys and no timing
data, which makes two runs with the same inputs byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

from . import __version__, qcomb
from .dep import DepReport, decimal_str, evaluate_bounds
from .errors import DomainError


def _rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def report_dict(reports: Sequence[DepReport], params: dict, mode: str, seed: int | None = None) -> dict:
    return {
        "params": params,
        "mode": mode,
        "rows": [r.to_dict() for r in reports],
        "seed": seed,
        "version": __version__,
    }


def to_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _bound_ids(reports: Iterable[DepReport]) -> list[str]:
    ids: list[str] = []
    for r in reports:
        for b in r.bounds:
            if b.formula_id not in ids:
                ids.append(b.formula_id)
    return ids


def dep_csv(reports: Sequence[DepReport]) -> str:
    """One row per error rank; bound columns are the union over all rows."""
    ids = _bound_ids(reports)
    mc = any(r.mode == "monte_carlo" for r in reports)
    header = ["u", "mode", "N_u", "D_u", "P_E", "P_E_decimal", "P_F", "P_F_decimal"]
    if mc:
        header += ["trials", "errors", "failures", "ci95_low", "ci95_high"]
    for fid in ids:
        header += [fid, f"{fid}_satisfied", f"{fid}_vacuous"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in reports:
        row = [
            r.u, r.mode, str(r.N_u), "" if r.D_u is None else str(r.D_u),
            _rational(r.P_E), decimal_str(r.P_E), _rational(r.P_F), decimal_str(r.P_F),
        ]
        if mc:
            if r.mode == "monte_carlo":
                row += [r.trials, r.errors, r.failures, f"{r.ci[0]:.12g}", f"{r.ci[1]:.12g}"]
            else:
                row += [""] * 5
        by_id = {b.formula_id: b for b in r.bounds}
        for fid in ids:
            b = by_id.get(fid)
            if b is None:
                row += ["", "", ""]
            else:
                row += [decimal_str(b.bound.value), str(b.satisfied).lower(), str(b.vacuous).lower()]
        w.writerow(row)
    return buf.getvalue()


def bounds_rows(q: int, m: int, n: int, k: int, t: int, u_min: int, u_max: int) -> list[dict]:
    """Combinatorial quantities and every bound value for u in [u_min, u_max]."""
    rows = []
    kq = qcomb.K_q(q)
    for u in range(u_min, u_max + 1):
        row: dict = {
            "u": u,
            "A_m_u": str(qcomb.A(q, m, u)),
            "gaussian_n_u": str(qcomb.gaussian(q, n, u)),
            "N_u": str(qcomb.N_u(q, m, n, u)),
            "V_t": str(qcomb.V_t(q, m, n, t)),
            "bounds": [],
        }
        items = dict(qcomb.bound_lemma1(q, m, u, kq))
        try:
            items.update(evaluate_bounds(q, m, n, k, t, u))
        except DomainError:
            pass
        for fid, b in items.items():
            row["bounds"].append({"id": fid, "kind": b.kind, "strict": b.strict, "value": decimal_str(b.value)})
        rows.append(row)
    return rows


def bounds_dict(q: int, m: int, n: int, k: int, t: int, u_min: int, u_max: int) -> dict:
    kq = qcomb.K_q(q)
    gb = qcomb.bound_gaussian(q, n, t, kq)
    vt = qcomb.bound_Vt(q, m, n, t, kq)
    return {
        "params": {"q": q, "m": m, "n": n, "k": k, "t": t},
        "K_q": {"lower": decimal_str(kq.lower, 20), "upper": decimal_str(kq.value, 20)},
        "gaussian_n_t": {"value": str(qcomb.gaussian(q, n, t)), "bound": decimal_str(gb.value)},
        "V_t_bounds": {fid: decimal_str(b.value) for fid, b in vt.items()},
        "rows": bounds_rows(q, m, n, k, t, u_min, u_max),
        "version": __version__,
    }


def bounds_csv(data: dict) -> str:
    rows = data["rows"]
    ids: list[str] = []
    for r in rows:
        for b in r["bounds"]:
            if b["id"] not in ids:
                ids.append(b["id"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["u", "A_m_u", "gaussian_n_u", "N_u", "V_t"] + ids)
    for r in rows:
        vals = {b["id"]: b["value"] for b in r["bounds"]}
        w.writerow([r["u"], r["A_m_u"], r["gaussian_n_u"], r["N_u"], r["V_t"]] + [vals.get(i, "") for i in ids])
    return buf.getvalue()

"""Exhaustive verification suite behind ``mrdlab verify``.

Every check enumerates a small space completely and compares a library
routine against either a brute-force oracle or a closed-form count.  A
failing check carries the first counterexamples it found.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import linalg, qcomb
from .dep import census, dep_exact, evaluate_bounds, iter_counting_cases, verify_counting_lemma
from .els import (
    all_elementary_complements,
    contains,
    elementary_complement,
    enumerate_els,
    project,
    rank_diameter,
    s_map,
    span_matrices,
    vanishes_on,
)
from .gf import FieldContext
from .mrd import (
    MrdCode,
    check_combinatorial_property,
    gabidulin,
    rank_distribution,
    restrict,
    translate,
)
from .rank import RankVector, all_vectors

MAX_EXAMPLES = 5


@dataclass
class CheckResult:
    name: str
    ok: bool = True
    details: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def fail(self, msg: str) -> None:
        self.ok = False
        if len(self.details) < MAX_EXAMPLES:
            self.details.append(msg)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status} {self.name} ({self.seconds:.2f}s)"
        for d in self.details:
            out += f"\n    counterexample: {d}"
        for n in self.notes:
            out += f"\n    note: {n}"
        return out


def _timed(name: str, body: Callable[[CheckResult], None]) -> CheckResult:
    res = CheckResult(name)
    start = time.perf_counter()
    body(res)
    res.seconds = time.perf_counter() - start
    return res


# -- counting -----------------------------------------------------------------

def check_census(q: int, m: int, n: int) -> CheckResult:
    """Rank census of all of GF(q^m)^n against N_u."""

    def body(res: CheckResult) -> None:
        ranks = linalg.batch_rank(linalg.all_matrices(q, m, n), q)
        counts = np.bincount(ranks, minlength=min(m, n) + 1)
        for u in range(min(m, n) + 1):
            if counts[u] != qcomb.N_u(q, m, n, u):
                res.fail(f"(q,m,n,u)=({q},{m},{n},{u}): census {counts[u]} != N_u {qcomb.N_u(q, m, n, u)}")

    return _timed(f"rank census GF({q}^{m})^{n}", body)


def check_amu_bounds(qs: Iterable[int], size_max: int) -> CheckResult:
    """K_q q^{mu} < A(m,u) <= q^{mu}, the (q/(q-1)) K_q bound, and [n,t] < q^{t(n-t)}/K_q."""

    def body(res: CheckResult) -> None:
        for q in qs:
            for m in range(0, size_max + 1):
                for u in range(0, m + 1):
                    a = qcomb.A(q, m, u)
                    for fid, b in qcomb.bound_lemma1(q, m, u).items():
                        if fid == "amu_lower_half":
                            continue
                        if not b.holds(a):
                            res.fail(f"{fid} q={q} m={m} u={u}: A={a}")
            for n in range(0, size_max + 1):
                for t in range(0, n + 1):
                    g = qcomb.gaussian(q, n, t)
                    if not qcomb.bound_gaussian(q, n, t).holds(g):
                        res.fail(f"gaussian_kq q={q} n={n} t={t}: [n,t]={g}")

    return _timed("A(m,u) and Gaussian binomial bounds", body)


def sweep_amu_half_bound(qs: Iterable[int], m_max: int) -> tuple[list[tuple[int, int, int]], int]:
    """Where A(m,u) >= (q^2-1)/q^2 q^{mu} fails for u <= m // 2; returns (failures, cases)."""
    failures, cases = [], 0
    for q in qs:
        for m in range(0, m_max + 1):
            for u in range(0, m // 2 + 1):
                cases += 1
                b = qcomb.bound_lemma1(q, m, u)["amu_lower_half"]
                if not b.holds(qcomb.A(q, m, u)):
                    failures.append((q, m, u))
    return failures, cases


def check_amu_half_bound(qs: Iterable[int], m_max: int) -> CheckResult:
    def body(res: CheckResult) -> None:
        failures, cases = sweep_amu_half_bound(qs, m_max)
        for f in failures:
            res.fail(f"(q,m,u)={f}")
        res.notes.append(f"holds on {cases - len(failures)}/{cases} cases with u <= m // 2")

    return _timed("A(m,u) >= (q^2-1)/q^2 q^{mu} for u <= m // 2", body)


def check_vt_bounds(q: int, size_max: int) -> CheckResult:
    def body(res: CheckResult) -> None:
        for m in range(1, size_max + 1):
            for n in range(1, size_max + 1):
                for t in range(0, min(m, n) + 1):
                    vt = qcomb.V_t(q, m, n, t)
                    for fid, b in qcomb.bound_Vt(q, m, n, t).items():
                        if not b.holds(vt):
                            res.fail(f"{fid} q={q} m={m} n={n} t={t}: V_t={vt}")

    return _timed(f"ball volume bounds q={q}", body)


def check_q_vandermonde(qs: Iterable[int], max_dim: int = 6) -> CheckResult:
    def body(res: CheckResult) -> None:
        for q in qs:
            for v in range(max_dim + 1):
                for u in range(max_dim + 1):
                    for s in range(v + u + 1):
                        lhs, rhs = qcomb.q_vandermonde_terms(q, v, u, s)
                        if lhs != rhs:
                            res.fail(f"q={q} v={v} u={u} s={s}: {lhs} != {rhs}")

    return _timed("q-Vandermonde identity", body)


# -- elementary linear subspaces ----------------------------------------------

def _key(x: RankVector) -> int:
    return int(linalg.matrix_keys(x.matrix()[None], x.ctx.q)[0])


def check_els_suite(q: int, m: int, n: int) -> CheckResult:
    """Exhaustive ELS properties on GF(q^m)^n."""
    ctx = FieldContext(q, m)

    def body(res: CheckResult) -> None:
        vectors = list(all_vectors(ctx, n))
        ranks = {_key(x): x.rank() for x in vectors}
        spaces = {v: enumerate_els(q, n, v) for v in range(n + 1)}
        members = {}
        for v, lst in spaces.items():
            if len(lst) != qcomb.gaussian(q, n, v):
                res.fail(f"|E_{v}| = {len(lst)} != [{n},{v}]")
            if len(set(lst)) != len(lst):
                res.fail(f"duplicate RREF representatives in E_{v}")
            for V in lst:
                members[V] = set(linalg.matrix_keys(span_matrices(V, m), q).tolist())

        witness = False
        for v, lst in spaces.items():
            for V in lst:
                pairs = list(all_elementary_complements(V))
                det = elementary_complement(V)
                if det not in pairs:
                    res.fail(f"deterministic complement of {V} is not a complement")
                diam = rank_diameter(V, ctx)
                if diam > min(v, m) or (v <= m and diam != v):
                    res.fail(f"rank diameter of {V} is {diam}")
                for x in vectors:
                    kx = _key(x)
                    rk = ranks[kx]
                    if contains(V, x) != (kx in members[V]):
                        res.fail(f"contains({V}, {x})")
                    brute_vanish = any(kx in members[p.Vbar] for p in pairs)
                    if vanishes_on(x, V) != brute_vanish:
                        res.fail(f"vanishes_on({x}, {V}) disagrees with complement search")
                    for pair in pairs:
                        xv, xw = project(x, pair)
                        if xv + xw != x or _key(xv) not in members[V] or _key(xw) not in members[pair.Vbar]:
                            res.fail(f"projection of {x} on {pair}")
                        rv, rw = ranks[_key(xv)], ranks[_key(xw)]
                        if rv > rk or rk > rv + rw:
                            res.fail(f"rank sandwich for {x}: rk={rk}, rk_V={rv}, rk_Vbar={rw}")
                        witness = witness or rk < rv + rw
                        if ranks[_key(s_map(x, pair))] != rk:
                            res.fail(f"s_map changes the rank of {x}")
        if n >= 2 and not witness:
            res.fail("no x with rk(x) < rk(x_V) + rk(x_Vbar) found")

        for x in vectors:
            rk = ranks[_key(x)]
            for u in range(n + 1):
                in_some = any(_key(x) in members[A] for A in spaces[u])
                if in_some != (rk <= u):
                    res.fail(f"membership characterisation u={u} x={x}")
                vanish_some = any(vanishes_on(x, B) for B in spaces[n - u])
                if vanish_some != (rk <= u):
                    res.fail(f"vanishing characterisation u={u} x={x}")

    return _timed(f"ELS suite GF({q}^{m})^{n}", body)


# -- MRD structure -------------------------------------------------------------

def check_mrd_structure(C: MrdCode, offsets: int = 20, seed: int = 0) -> CheckResult:
    q, m, n, k = C.ctx.q, C.ctx.m, C.n, C.k
    r = n - k

    def body(res: CheckResult) -> None:
        md = C.minimum_distance()
        if md != C.d_R:
            res.fail(f"minimum rank distance {md} != n-k+1 = {C.d_R}")
        for K in enumerate_els(q, n, k):
            if not check_combinatorial_property(C, elementary_complement(K)):
                res.fail(f"c -> c_K not bijective for K={K}")
        rng = np.random.default_rng(seed)
        codes = [C] + [
            translate(C, RankVector.from_matrix(C.ctx, rng.integers(0, q, (m, n)))) for _ in range(offsets)
        ]
        for code in codes:
            dist = rank_distribution(code)
            if sum(dist) != code.size:
                res.fail(f"rank distribution of {code} sums to {sum(dist)}")
            for u in range(C.d_R, min(m, n) + 1):
                bound = qcomb.gaussian(q, n, u) * qcomb.A(q, m, u - r)
                if dist[u] > bound:
                    res.fail(f"A_{u} = {dist[u]} > {bound} for {code} offset {code.offset}")
        for v in range(k, n + 1):
            for V in enumerate_els(q, n, v):
                CV = restrict(C, elementary_complement(V))
                words = np.unique(linalg.matrix_keys(CV.matrices, q)).size
                if words != C.size:
                    res.fail(f"restriction to {V} has {words} distinct words, expected {C.size}")
                if CV.minimum_distance() != v - k + 1:
                    res.fail(f"restriction to {V}: distance {CV.minimum_distance()} != {v - k + 1}")

    return _timed(f"MRD structure {C}", body)


def check_counting_lemma(q: int, m_max: int = 4, vu_max: int = 2, witnesses: int = 3) -> CheckResult:
    def body(res: CheckResult) -> None:
        for case in iter_counting_cases(m_max, vu_max):
            chk = verify_counting_lemma(q, *case, witnesses=witnesses)
            if not chk.ok:
                res.fail(f"(m,v,u,w,s)={case}: formula {chk.formula}, counts {chk.counts}")

    return _timed(f"extension counting q={q}", body)


# -- decoder error probability ---------------------------------------------------

def check_dep_exact(C: MrdCode, t: int, cross_check_cap: int = 1 << 16) -> CheckResult:
    q, m, n = C.ctx.q, C.ctx.m, C.n

    def body(res: CheckResult) -> None:
        for u in range(0, min(m, n) + 1):
            rep = dep_exact(C, t, u)
            if u <= t and (rep.P_E != 0 or rep.P_F != 0):
                res.fail(f"u={u} <= t: P_E={rep.P_E}, P_F={rep.P_F}")
            elif t < u < C.d_R - t and (rep.P_E != 0 or rep.P_F != 1):
                res.fail(f"t < u={u} < d_R - t: P_E={rep.P_E}, P_F={rep.P_F}")
            elif u >= C.d_R - t:
                if rep.P_E + rep.P_F != 1:
                    res.fail(f"u={u}: P_E + P_F = {rep.P_E + rep.P_F}")
                for b in rep.bounds:
                    if not b.satisfied:
                        res.fail(f"u={u}: {b.formula_id} violated (P_E={rep.P_E}, D_u={rep.D_u}, bound={b.bound.value})")
            if 0 < qcomb.N_u(q, m, n, u) <= cross_check_cap:
                a = census(C, t, u, None, "scan").decodable
                b = census(C, t, u, None, "balls").decodable
                if a != b:
                    res.fail(f"u={u}: scan D_u={a} != balls D_u={b}")

    return _timed(f"exact DEP {C} t={t}", body)


def check_bound_ordering(q: int, m: int, n: int, k: int, t: int) -> CheckResult:
    def body(res: CheckResult) -> None:
        for u in range(max(0, n - k + 1 - t), min(m, n) + 1):
            bounds = evaluate_bounds(q, m, n, k, t, u)
            uni = bounds["pe_universal"].enclosure.lo
            for fid in ("pe_mid", "pe_high"):
                if fid in bounds and bounds[fid].enclosure.hi > uni:
                    res.fail(f"u={u}: {fid}={bounds[fid].value} > pe_universal={uni}")

    return _timed(f"bound ordering q={q} m={m} n={n} k={k} t={t}", body)


def full_suite(q: int, m: int, n: int, k: int, t: int | None = None) -> list[CheckResult]:
    """Everything ``mrdlab verify`` runs for one code."""
    C = gabidulin(FieldContext(q, m), n, k)
    t = C.t_max if t is None else t
    results = []
    small = [(2, 2, 2), (2, 3, 2), (2, 2, 3), (3, 2, 2)]
    for qq, mm, nn in small + ([(q, m, n)] if q ** (m * n) <= 1 << 20 else []):
        results.append(check_census(qq, mm, nn))
    size = max(m, n)
    results.append(check_amu_bounds([q], size))
    results.append(check_amu_half_bound([q], size))
    results.append(check_vt_bounds(q, size))
    results.append(check_q_vandermonde([q]))
    m_small = min(m, 2)
    for nn in (2, 3):
        if q ** (m_small * nn) <= 1 << 8:
            results.append(check_els_suite(q, m_small, nn))
    results.append(check_mrd_structure(C))
    results.append(check_counting_lemma(q, min(m, 4), 2))
    results.append(check_dep_exact(C, t))
    results.append(check_bound_ordering(q, m, n, k, t))
    return results

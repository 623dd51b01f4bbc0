"""Decoder error probability: exact censuses, Monte Carlo, and bound checks.

The transmitted word is the codeword of message 0 (the zero word for a
linear code).  For an error of rank u the received word is uniform over
the N_u words at rank distance u from it, and the bounded decoder either
returns the transmitted codeword (correct), another codeword (decoder
error) or nothing (decoder failure).
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy import stats

from . import linalg, qcomb
from .els import ball_matrices, iter_rank_matrices
from .errors import DomainError, EnumerationTooLarge
from .gf import FieldContext
from .mrd import BallLookup, MrdCode, check_radius
from .qcomb import BoundValue
from .rank import RankVector

DEFAULT_VECTOR_CAP = 1 << 24
MC_BLOCK = 1 << 13


def decimal_str(x: Fraction, digits: int = 12) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


# -- exact census -------------------------------------------------------------

@dataclass(frozen=True)
class Census:
    """Outcome counts over all N_u received words at distance u from ``transmitted``."""

    u: int
    total: int
    correct: int
    error: int
    failure: int
    method: str

    @property
    def decodable(self) -> int:
        return self.correct + self.error


def _zero_matrix(C: MrdCode) -> np.ndarray:
    return np.zeros((C.ctx.m, C.n), dtype=np.int64)


def _transmitted_index(C: MrdCode, T: np.ndarray) -> int:
    hit = np.nonzero(np.all(C.matrices == T[None], axis=(1, 2)))[0]
    return int(hit[0]) if hit.size else -1


def _census_scan(C: MrdCode, t: int, u: int, T: np.ndarray) -> Census:
    q = C.ctx.q
    t_idx = _transmitted_index(C, T)
    m, n = C.ctx.m, C.n
    table = linalg.rank_table(q, m, n) if q ** (m * n) <= linalg.RANK_TABLE_MAX else None
    correct = error = failure = total = 0
    for block in iter_rank_matrices(q, m, n, u):
        received = (block + T[None]) % q
        owner = np.full(received.shape[0], -1, dtype=np.int64)
        for i, c in enumerate(C.matrices):
            diff = (received - c[None]) % q
            if table is not None:
                near = table[linalg.matrix_keys(diff, q)] <= t
            else:
                near = linalg.batch_rank(diff, q) <= t
            if np.any(near & (owner >= 0)):
                raise AssertionError("received word within t of two codewords")
            owner[near] = i
        total += received.shape[0]
        hit = int(np.count_nonzero(owner >= 0))
        ok = int(np.count_nonzero(owner == t_idx)) if t_idx >= 0 else 0
        correct += ok
        error += hit - ok
        failure += received.shape[0] - hit
    return Census(u, total, correct, error, failure, "scan")


def _census_balls(C: MrdCode, t: int, u: int, T: np.ndarray) -> Census:
    q, m, n = C.ctx.q, C.ctx.m, C.n
    t_idx = _transmitted_index(C, T)
    ball = ball_matrices(q, m, n, t)
    keys, owners = [], []
    for i, c in enumerate(C.matrices):
        words = (c[None] + ball) % q
        sel = linalg.batch_rank((words - T[None]) % q, q) == u
        if np.any(sel):
            keys.append(linalg.matrix_keys(words[sel], q))
            owners.append(np.full(int(sel.sum()), i, dtype=np.int64))
    if keys:
        all_keys = np.concatenate(keys)
        all_owners = np.concatenate(owners)
    else:
        all_keys = np.zeros(0, dtype=np.int64)
        all_owners = np.zeros(0, dtype=np.int64)
    distinct = np.unique(all_keys).size
    if distinct != all_keys.size:
        raise AssertionError("decoding balls overlap")
    correct = int(np.count_nonzero(all_owners == t_idx)) if t_idx >= 0 else 0
    total = qcomb.N_u(q, m, n, u)
    return Census(u, total, correct, distinct - correct, total - distinct, "balls")


def choose_method(C: MrdCode, t: int, u: int, cap: int = DEFAULT_VECTOR_CAP) -> str:
    q, m, n = C.ctx.q, C.ctx.m, C.n
    scan_cost = qcomb.N_u(q, m, n, u) * C.size
    ball_cost = qcomb.V_t(q, m, n, t) * C.size
    feasible = {}
    if qcomb.N_u(q, m, n, u) <= cap:
        feasible["scan"] = scan_cost
    if ball_cost <= cap:
        feasible["balls"] = ball_cost
    if not feasible:
        raise EnumerationTooLarge("decodable-word census", min(scan_cost, ball_cost), cap)
    return min(feasible, key=lambda k: (feasible[k], k))


def census(
    C: MrdCode,
    t: int,
    u: int,
    transmitted: RankVector | None = None,
    method: str = "auto",
    cap: int = DEFAULT_VECTOR_CAP,
) -> Census:
    """Classify every received word at rank distance u from ``transmitted``.

    ``method`` is ``"scan"`` (enumerate the rank-u errors and search all
    codewords), ``"balls"`` (enumerate the radius-t balls around the
    codewords and keep rank-u offsets) or ``"auto"`` (the cheaper one).
    """
    check_radius(C, t)
    if not 0 <= u <= min(C.ctx.m, C.n):
        raise DomainError(f"error rank u={u} outside [0, {min(C.ctx.m, C.n)}]")
    T = transmitted.matrix() if transmitted is not None else _zero_matrix(C)
    if method == "auto":
        method = choose_method(C, t, u, cap)
    if method == "scan":
        return _census_scan(C, t, u, T)
    if method == "balls":
        return _census_balls(C, t, u, T)
    raise ValueError(f"unknown census method {method!r}")


def count_decodable_exact(C: MrdCode, t: int, u: int, method: str = "auto", cap: int = DEFAULT_VECTOR_CAP) -> int:
    """D_u: number of rank-u vectors within rank distance t of some codeword."""
    return census(C, t, u, None, method, cap).decodable


# -- bounds -------------------------------------------------------------------

def evaluate_bounds(q: int, m: int, n: int, k: int, t: int, u: int) -> dict[str, BoundValue]:
    """Every applicable bound on D_u and P_E(t; u) for an MRD code.

    Requires u >= d_R - t.  For d_R - t <= u < d_R the mid-regime bounds
    ``du_mid`` and ``pe_mid`` apply, for u >= d_R the high-regime bounds
    ``du_high`` and ``pe_high``; ``pe_universal`` = q^{-t^2} / K_q^2 holds
    in both.
    """
    r = n - k
    d_R = r + 1
    if u < d_R - t or u > min(m, n):
        raise DomainError(f"bounds need d_R - t = {d_R - t} <= u <= {min(m, n)}, got u={u}")
    Vt = qcomb.V_t(q, m, n, t)
    Amu = qcomb.A(q, m, u)
    g = qcomb.gaussian(q, n, u)
    out: dict[str, BoundValue] = {}
    if u < d_R:
        factor = Fraction(q * q, q * q - 1) * Fraction(q ** m - 1) ** (u - r) * Vt
        out["du_mid"] = BoundValue.exact("du_mid", "upper", factor * g)
        out["pe_mid"] = BoundValue.exact("pe_mid", "upper", factor / Amu)
    else:
        Aur = qcomb.A(q, m, u - r)
        out["du_high"] = BoundValue.exact("du_high", "upper", g * Aur * Vt, strict=False)
        out["pe_high"] = BoundValue.exact("pe_high", "upper", Fraction(Aur * Vt, Amu))
    out["pe_universal"] = universal_bound(q, t)
    return out


def universal_bound(q: int, t: int) -> BoundValue:
    """q^{-t^2} / K_q^2, the rank-independent bound on P_E(t; u)."""
    kq = qcomb.K_q(q)
    inv = kq.enclosure.reciprocal()
    return BoundValue("pe_universal", "upper", inv * inv * Fraction(1, q ** (t * t)))


# -- reports ------------------------------------------------------------------

@dataclass
class BoundCheck:
    formula_id: str
    bound: BoundValue
    satisfied: bool
    vacuous: bool

    def to_dict(self) -> dict:
        return {
            "id": self.formula_id,
            "value": decimal_str(self.bound.value),
            "satisfied": self.satisfied,
            "vacuous": self.vacuous,
        }


@dataclass
class DepReport:
    """D_u, N_u, P_E and P_F for one error rank, with the bounds that apply."""

    q: int
    m: int
    n: int
    k: int
    t: int
    u: int
    mode: str
    N_u: int
    D_u: int | None
    P_E: Fraction
    P_F: Fraction
    P_C: Fraction
    bounds: list[BoundCheck] = field(default_factory=list)
    trials: int | None = None
    errors: int | None = None
    failures: int | None = None
    ci: tuple[float, float] | None = None
    seed: int | None = None

    @property
    def d_R(self) -> int:
        return self.n - self.k + 1

    @property
    def all_satisfied(self) -> bool:
        return all(b.satisfied for b in self.bounds)

    def to_dict(self) -> dict:
        d = {
            "u": self.u,
            "N_u": str(self.N_u),
            "D_u": None if self.D_u is None else str(self.D_u),
            "P_E": {"rational": f"{self.P_E.numerator}/{self.P_E.denominator}", "decimal": decimal_str(self.P_E)},
            "P_F": {"rational": f"{self.P_F.numerator}/{self.P_F.denominator}", "decimal": decimal_str(self.P_F)},
            "bounds": [b.to_dict() for b in self.bounds],
        }
        if self.mode == "monte_carlo":
            d["trials"] = self.trials
            d["errors"] = self.errors
            d["failures"] = self.failures
            d["ci95"] = [f"{self.ci[0]:.12g}", f"{self.ci[1]:.12g}"]
        return d


def _check_bounds(q, m, n, k, t, u, D_u, P_E, P_E_upper=None) -> list[BoundCheck]:
    if u < n - k + 1 - t:
        return []
    checks = []
    for fid, b in evaluate_bounds(q, m, n, k, t, u).items():
        if fid.startswith("du_"):
            if D_u is None:
                continue
            x = D_u
            vac = b.enclosure.lo >= qcomb.N_u(q, m, n, u)
        else:
            x = P_E if P_E_upper is None else P_E_upper
            vac = b.vacuous_for_probability()
        checks.append(BoundCheck(fid, b, b.holds(x), vac))
    return checks


def dep_exact(C: MrdCode, t: int, u: int, method: str = "auto", cap: int = DEFAULT_VECTOR_CAP) -> DepReport:
    """Exact P_E(t; u) and P_F(t; u) by full census."""
    res = census(C, t, u, C.offset, method, cap)
    q, m = C.ctx.q, C.ctx.m
    total = res.total
    P_E = Fraction(res.error, total)
    P_F = Fraction(res.failure, total)
    P_C = Fraction(res.correct, total)
    D_u = res.decodable
    rep = DepReport(q, m, C.n, C.k, t, u, "exact", total, D_u, P_E, P_F, P_C)
    rep.bounds = _check_bounds(q, m, C.n, C.k, t, u, D_u, P_E)
    return rep


# -- sampling -----------------------------------------------------------------

def _full_rank_batch(q: int, rows: int, cols: int, size: int, rng: np.random.Generator) -> np.ndarray:
    out = rng.integers(0, q, size=(size, rows, cols), dtype=np.int64)
    target = min(rows, cols)
    bad = np.nonzero(linalg.batch_rank(out, q) != target)[0]
    while bad.size:
        out[bad] = rng.integers(0, q, size=(bad.size, rows, cols), dtype=np.int64)
        bad = bad[linalg.batch_rank(out[bad], q) != target]
    return out


def sample_rank_u_matrices(q: int, m: int, n: int, u: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent uniform draws from the m x n matrices of rank u.

    Drawn as Y @ Z with Y uniform over full-column-rank m x u matrices and
    Z uniform over full-row-rank u x n matrices; each rank-u matrix has
    exactly |GL_u(q)| such factorizations, so the product is uniform.
    """
    if not 0 <= u <= min(m, n):
        raise DomainError(f"rank u={u} outside [0, min(m, n)]")
    if u == 0:
        return np.zeros((size, m, n), dtype=np.int64)
    Y = _full_rank_batch(q, m, u, size, rng)
    Z = _full_rank_batch(q, u, n, size, rng)
    return np.matmul(Y, Z) % q


def sample_rank_u(ctx: FieldContext, n: int, u: int, rng: np.random.Generator) -> RankVector:
    """One uniform draw from the rank-u vectors of GF(q^m)^n."""
    M = sample_rank_u_matrices(ctx.q, ctx.m, n, u, 1, rng)[0]
    return RankVector.from_matrix(ctx, M)


# -- Monte Carlo --------------------------------------------------------------

_LOOKUPS: dict = {}


def _code_key(C: MrdCode, t: int) -> tuple:
    gen = tuple(tuple(e.to_int() for e in row) for row in C.generator)
    return (C.ctx.q, C.ctx.m, C.ctx.modulus, C.n, C.k, gen, C.offset.to_ints(), t)


def _lookup(C: MrdCode, t: int) -> BallLookup:
    key = _code_key(C, t)
    if key not in _LOOKUPS:
        _LOOKUPS[key] = BallLookup(C, t)
    return _LOOKUPS[key]


def block_seed(seed: int, u: int, block: int) -> np.random.SeedSequence:
    """Seed stream for one block of trials; depends only on (seed, u, block)."""
    return np.random.SeedSequence(seed, spawn_key=(u, block))


def _run_block(C: MrdCode, t: int, u: int, seed: int, block: int, size: int) -> tuple[int, int, int]:
    rng = np.random.default_rng(block_seed(seed, u, block))
    q = C.ctx.q
    errs = sample_rank_u_matrices(q, C.ctx.m, C.n, u, size, rng)
    received = (errs + C.matrices[0][None]) % q
    owner = _lookup(C, t).decode_matrices(received)
    correct = int(np.count_nonzero(owner == 0))
    failure = int(np.count_nonzero(owner < 0))
    return correct, size - correct - failure, failure


def _run_block_args(args) -> tuple[int, int, int]:
    return _run_block(*args)


def clopper_pearson(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    alpha = 1 - level
    lo = 0.0 if k == 0 else float(stats.beta.ppf(alpha / 2, k, n - k + 1))
    hi = 1.0 if k == n else float(stats.beta.ppf(1 - alpha / 2, k + 1, n - k))
    return lo, hi


def mc_counts(C: MrdCode, t: int, u: int, trials: int, seed: int, workers: int = 1) -> tuple[int, int, int]:
    """(correct, error, failure) counts over ``trials`` seeded draws.

    Trials are cut into fixed blocks with their own seed streams, so the
    result does not depend on ``workers``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    check_radius(C, t)
    tasks = []
    for b, start in enumerate(range(0, trials, MC_BLOCK)):
        tasks.append((C, t, u, seed, b, min(MC_BLOCK, trials - start)))
    if workers <= 1:
        results = [_run_block(*a) for a in tasks]
    else:
        _lookup(C, t)  # build once; forked workers inherit the table
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_block_args, tasks))
    c, e, f = (sum(col) for col in zip(*results))
    return c, e, f


def dep_monte_carlo(C: MrdCode, t: int, u: int, trials: int, seed: int, workers: int = 1) -> DepReport:
    """Estimate P_E(t; u) with a 95% Clopper-Pearson interval."""
    correct, error, failure = mc_counts(C, t, u, trials, seed, workers)
    q, m = C.ctx.q, C.ctx.m
    ci = clopper_pearson(error, trials)
    rep = DepReport(
        q, m, C.n, C.k, t, u, "monte_carlo", qcomb.N_u(q, m, C.n, u), None,
        Fraction(error, trials), Fraction(failure, trials), Fraction(correct, trials),
        trials=trials, errors=error, failures=failure, ci=ci, seed=seed,
    )
    rep.bounds = _check_bounds(q, m, C.n, C.k, t, u, None, rep.P_E, P_E_upper=Fraction(ci[1]))
    return rep


# -- counting lemma -----------------------------------------------------------

@dataclass(frozen=True)
class CountingCheck:
    m: int
    v: int
    u: int
    w: int
    s: int
    formula: int
    counts: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return all(c == self.formula for c in self.counts)


def extension_count_formula(q: int, m: int, u: int, w: int, s: int) -> int:
    """[u, s-w] A(m-w, s-w) q^{wu}: extensions z of a rank-w y with rank (y, z) = s."""
    d = s - w
    if d < 0 or d > u or d > m - w:
        return 0
    return qcomb.gaussian(q, u, d) * qcomb.A(q, m - w, d) * q ** (w * u)


def rank_w_witnesses(q: int, m: int, v: int, w: int, count: int) -> list[np.ndarray]:
    """Up to ``count`` distinct m x v matrices of rank w, spread over the list."""
    allw = np.concatenate(list(iter_rank_matrices(q, m, v, w)), axis=0)
    if allw.shape[0] <= count:
        return list(allw)
    idx = np.linspace(0, allw.shape[0] - 1, count).round().astype(int)
    return [allw[i] for i in sorted(set(idx.tolist()))]


def verify_counting_lemma(
    q: int, m: int, v: int, u: int, w: int, s: int, witnesses: int = 3, cap: int = DEFAULT_VECTOR_CAP
) -> CountingCheck:
    """Brute-force count of z with rank((y, z)) = s for several rank-w y."""
    if not (0 <= w <= min(m, v) and w <= s <= min(m, u + w)):
        raise DomainError(f"need w <= min(m, v) and w <= s <= min(m, u + w); got m={m} v={v} u={u} w={w} s={s}")
    if q ** (m * u) > cap:
        raise EnumerationTooLarge("extension vectors z", q ** (m * u), cap)
    Z = linalg.all_matrices(q, m, u)
    counts = []
    for Y in rank_w_witnesses(q, m, v, w, witnesses):
        X = np.concatenate([np.broadcast_to(Y, (Z.shape[0], m, v)), Z], axis=2)
        counts.append(int(np.count_nonzero(linalg.batch_rank(X, q) == s)))
    return CountingCheck(m, v, u, w, s, extension_count_formula(q, m, u, w, s), tuple(counts))


def iter_counting_cases(m_max: int, vu_max: int) -> Iterable[tuple[int, int, int, int, int]]:
    for m in range(1, m_max + 1):
        for v in range(1, vu_max + 1):
            for u in range(1, vu_max + 1):
                for w in range(0, min(m, v) + 1):
                    for s in range(w, min(m, u + w) + 1):
                        yield m, v, u, w, s

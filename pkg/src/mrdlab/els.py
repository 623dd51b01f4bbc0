"""Elementary linear subspaces of GF(q^m)^n.

An elementary linear subspace (ELS) is the GF(q^m)-row span of a full-rank
matrix over the base field GF(q).  It is stored by the canonical RREF of
that matrix, so two ELS's are equal exactly when their RREF bases are.

All maps below act on the m x n expansion: if ``X`` expands ``x`` and
``Bhat`` stacks the bases of a complementary pair, then the coefficient
vector of ``x`` in that pair expands to ``X @ Bhat^{-1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np

from . import linalg
from .errors import ContextMismatchError, DomainError, EnumerationTooLarge, UnsupportedError
from .gf import FieldContext
from .qcomb import gaussian
from .rank import QMatrix, RankVector

DEFAULT_ELS_CAP = 1 << 20


@dataclass(frozen=True)
class Els:
    q: int
    n: int
    basis: QMatrix

    @classmethod
    def span(cls, rows, q: int, n: int) -> "Els":
        a = np.asarray(rows, dtype=np.int64).reshape(-1, n)
        red, _ = linalg.rref(a, q) if a.size else (a.reshape(0, n), ())
        return cls(q, n, QMatrix(red.reshape(-1, n), q))

    @classmethod
    def zero(cls, q: int, n: int) -> "Els":
        return cls.span(np.zeros((0, n), dtype=np.int64), q, n)

    @classmethod
    def full(cls, q: int, n: int) -> "Els":
        return cls.span(np.eye(n, dtype=np.int64), q, n)

    def __post_init__(self) -> None:
        if self.basis.shape[1] != self.n:
            raise ValueError("basis width must equal n")
        if self.basis.shape[0] and self.basis.rref() != self.basis:
            raise ValueError("ELS basis must be given in reduced row echelon form")

    @property
    def v(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        if self.v == 0:
            return ()
        return linalg.rref(self.basis.entries, self.q)[1]

    def __repr__(self) -> str:
        return f"Els(q={self.q}, n={self.n}, basis={self.basis.entries.tolist()})"


@dataclass(frozen=True)
class ComplementPair:
    """An ELS ``V`` with an elementary complement ``Vbar``."""

    V: Els
    Vbar: Els

    def __post_init__(self) -> None:
        if self.V.q != self.Vbar.q or self.V.n != self.Vbar.n:
            raise ContextMismatchError("complement pair mixes fields or lengths")
        if self.V.v + self.Vbar.v != self.V.n or linalg.rank(self.stacked.entries, self.V.q) != self.V.n:
            raise DomainError("subspaces are not complementary")

    @cached_property
    def stacked(self) -> QMatrix:
        parts = [self.V.basis.entries, self.Vbar.basis.entries]
        return QMatrix(np.concatenate(parts, axis=0).reshape(self.V.n, self.V.n), self.V.q)

    @cached_property
    def stacked_inv(self) -> np.ndarray:
        return linalg.inverse(self.stacked.entries, self.V.q)

    @property
    def right_inverse(self) -> np.ndarray:
        """B^{-R}: the first v columns of the stacked inverse, so B @ B^{-R} = I."""
        return self.stacked_inv[:, : self.V.v]

    @property
    def swapped(self) -> "ComplementPair":
        return ComplementPair(self.Vbar, self.V)


def enumerate_els(q: int, n: int, v: int, cap: int = DEFAULT_ELS_CAP) -> list[Els]:
    """All v-dimensional ELS's of GF(q^m)^n, generated as RREF matrices.

    One pivot pattern per v-subset of columns; the free entries of each row
    are the non-pivot columns to the right of its pivot.
    """
    if not 0 <= v <= n:
        raise DomainError(f"dimension v={v} outside [0, n={n}]")
    total = gaussian(q, n, v)
    if total > cap:
        raise EnumerationTooLarge(f"E_{v}(q^m, {n})", total, cap)
    out: list[Els] = []
    for pivots in itertools.combinations(range(n), v):
        pivot_set = set(pivots)
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivot_set]
        for values in itertools.product(range(q), repeat=len(free)):
            B = np.zeros((v, n), dtype=np.int64)
            for i, p in enumerate(pivots):
                B[i, p] = 1
            for (i, j), val in zip(free, values):
                B[i, j] = val
            out.append(Els(q, n, QMatrix(B, q)))
    return out


def elementary_complement(V: Els) -> ComplementPair:
    """Deterministic complement: unit rows at the non-pivot columns of V."""
    rest = [j for j in range(V.n) if j not in set(V.pivots)]
    E = np.zeros((len(rest), V.n), dtype=np.int64)
    for i, j in enumerate(rest):
        E[i, j] = 1
    return ComplementPair(V, Els(V.q, V.n, QMatrix(E, V.q)))


def all_elementary_complements(V: Els, cap: int = DEFAULT_ELS_CAP) -> Iterator[ComplementPair]:
    """Every elementary complement of ``V`` (brute force over E_{n-v})."""
    for W in enumerate_els(V.q, V.n, V.n - V.v, cap):
        if linalg.stack_rank(V.basis.entries, W.basis.entries, V.q) == V.n:
            yield ComplementPair(V, W)


def _check_vec(x: RankVector, pair_or_v) -> None:
    V = pair_or_v.V if isinstance(pair_or_v, ComplementPair) else pair_or_v
    if x.ctx.q != V.q or x.n != V.n:
        raise ContextMismatchError("vector and subspace live in different spaces")


def coefficients(x: RankVector, pair: ComplementPair) -> np.ndarray:
    """Expansion of the coefficient vector (k, kbar) with x = (k, kbar) Bhat."""
    _check_vec(x, pair)
    return linalg.matmul(x.matrix(), pair.stacked_inv, x.ctx.q)


def project(x: RankVector, pair: ComplementPair) -> tuple[RankVector, RankVector]:
    """Projections (x_V, x_Vbar) of ``x`` along the pair."""
    S = coefficients(x, pair)
    v, q = pair.V.v, x.ctx.q
    xv = linalg.matmul(S[:, :v], pair.V.basis.entries, q) if v else np.zeros_like(S)
    xw = linalg.matmul(S[:, v:], pair.Vbar.basis.entries, q) if v < x.n else np.zeros_like(S)
    return RankVector.from_matrix(x.ctx, xv), RankVector.from_matrix(x.ctx, xw)


def r_V(x: RankVector, pair: ComplementPair) -> RankVector | None:
    """Coordinates of x_V in the rows of V's basis, ``x_V B^{-R}``.

    Returns ``None`` when V is the zero space (a length-0 vector).
    """
    v = pair.V.v
    if v == 0:
        return None
    S = coefficients(x, pair)
    return RankVector.from_matrix(x.ctx, S[:, :v])


def s_map(x: RankVector, pair: ComplementPair) -> RankVector:
    """(r_V(x), r_Vbar(x)) as one length-n vector."""
    return RankVector.from_matrix(x.ctx, coefficients(x, pair))


def contains(V: Els, x: RankVector) -> bool:
    """Membership of ``x`` in the GF(q^m)-span of V's basis."""
    _check_vec(x, V)
    R = x.matrix()
    return linalg.stack_rank(V.basis.entries, R, V.q) == V.v


def find_containing_els(x: RankVector) -> Els:
    """The smallest ELS containing ``x``: the row space of its expansion."""
    return Els.span(x.matrix(), x.ctx.q, x.n)


def vanishes_on(x: RankVector, V: Els) -> bool:
    """Whether ``x`` lies in some elementary complement of ``V``.

    Such a complement exists iff the GF(q) row space R of x meets V only in
    zero: then R + V is direct and extends to the whole space.
    """
    _check_vec(x, V)
    R = find_containing_els(x)
    if R.v + V.v > V.n:
        return False
    return linalg.stack_rank(V.basis.entries, R.basis.entries, V.q) == R.v + V.v


def span_matrices(V: Els, m: int) -> np.ndarray:
    """Expansions of all q^{mv} vectors of V, as an array (q^{mv}, m, n)."""
    if V.v == 0:
        return np.zeros((1, m, V.n), dtype=np.int64)
    L = linalg.all_matrices(V.q, m, V.v)
    return (L @ V.basis.entries) % V.q


def rank_diameter(V: Els, ctx: FieldContext, cap: int = 1 << 20) -> int:
    """Maximum rank over the vectors of V.

    Scans the subspace when q^{mv} <= cap; otherwise falls back to v, which
    is exact for v <= m.
    """
    if V.q != ctx.q:
        raise ContextMismatchError("subspace and field use different q")
    size = ctx.q ** (ctx.m * V.v)
    if size <= cap:
        if V.v == 0:
            return 0
        return int(linalg.batch_rank(span_matrices(V, ctx.m), ctx.q).max())
    if V.v <= ctx.m:
        return V.v
    raise UnsupportedError(f"rank diameter for v={V.v} > m={ctx.m} needs a scan of {size} vectors")


def iter_rank_matrices(q: int, m: int, n: int, u: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Every m x n matrix of rank exactly u, each once, in blocks.

    A rank-u matrix factors uniquely as Y @ Z with Z the RREF basis of its
    row space (one ELS of dimension u) and Y an m x u matrix of full column
    rank, so there are [n, u] * A(m, u) of them.
    """
    if not 0 <= u <= min(m, n):
        raise DomainError(f"rank u={u} outside [0, min(m, n)]")
    if u == 0:
        yield np.zeros((1, m, n), dtype=np.int64)
        return
    Y = linalg.full_rank_matrices(q, m, u)
    per = max(1, chunk // max(1, Y.shape[0]))
    spaces = enumerate_els(q, n, u, cap=1 << 40)
    for start in range(0, len(spaces), per):
        Z = np.stack([V.basis.entries for V in spaces[start:start + per]])
        block = np.einsum("amu,bun->bamn", Y, Z) % q
        yield block.reshape(-1, m, n)


def rank_matrices(q: int, m: int, n: int, u: int) -> np.ndarray:
    return np.concatenate(list(iter_rank_matrices(q, m, n, u)), axis=0)


@lru_cache(maxsize=8)
def ball_matrices(q: int, m: int, n: int, t: int) -> np.ndarray:
    """Every m x n matrix of rank at most t (the rank ball of radius t at 0).

    Cached; the returned array is read-only.
    """
    ball = np.concatenate([rank_matrices(q, m, n, s) for s in range(t + 1)], axis=0)
    ball.setflags(write=False)
    return ball

"""Vectors over GF(q^m)^n, their m x n expansion over GF(q), and the rank metric."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .errors import ContextMismatchError, DomainError
from .gf import ExtFieldElement, FieldContext


class QMatrix:
    """Immutable matrix over the prime field GF(q)."""

    __slots__ = ("entries", "q")

    def __init__(self, entries, q: int) -> None:
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("QMatrix needs a 2-d array")
        a %= q
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def rank(self) -> int:
        return linalg.rank(self.entries, self.q)

    def rref(self) -> "QMatrix":
        return QMatrix(linalg.rref(self.entries, self.q)[0].reshape(-1, self.shape[1]), self.q)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QMatrix)
            and self.q == other.q
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self) -> int:
        return hash((self.q, self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"QMatrix(q={self.q}, {self.entries.tolist()})"


@dataclass(frozen=True)
class RankVector:
    """A vector ``(x_0, ..., x_{n-1})`` in GF(q^m)^n."""

    ctx: FieldContext
    coords: tuple[ExtFieldElement, ...]

    def __post_init__(self) -> None:
        if len(self.coords) == 0:
            raise DomainError("vectors must have positive length")
        if any(c.ctx != self.ctx for c in self.coords):
            raise ContextMismatchError("all coordinates must share the vector's field")

    @classmethod
    def from_ints(cls, ctx: FieldContext, values: Iterable[int]) -> "RankVector":
        return cls(ctx, tuple(ctx.from_int(v) for v in values))

    @classmethod
    def from_matrix(cls, ctx: FieldContext, M) -> "RankVector":
        """Collapse an m x n matrix over GF(q): column j becomes coordinate j."""
        a = np.asarray(M, dtype=np.int64) % ctx.q
        if a.shape[0] != ctx.m:
            raise ContextMismatchError(f"expected {ctx.m} rows, got {a.shape[0]}")
        return cls(ctx, tuple(ExtFieldElement(ctx, tuple(int(v) for v in a[:, j])) for j in range(a.shape[1])))

    @classmethod
    def zero(cls, ctx: FieldContext, n: int) -> "RankVector":
        return cls(ctx, (ctx.zero,) * n)

    @property
    def n(self) -> int:
        return len(self.coords)

    def matrix(self) -> np.ndarray:
        """The m x n expansion as a plain integer array."""
        return np.array([c.coeffs for c in self.coords], dtype=np.int64).T.reshape(self.ctx.m, self.n)

    def to_ints(self) -> tuple[int, ...]:
        return tuple(c.to_int() for c in self.coords)

    def rank(self) -> int:
        return linalg.rank(self.matrix(), self.ctx.q)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "RankVector") -> None:
        if self.ctx != other.ctx or self.n != other.n:
            raise ContextMismatchError("vectors differ in field or length")

    def __add__(self, other: "RankVector") -> "RankVector":
        self._check(other)
        return RankVector(self.ctx, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RankVector") -> "RankVector":
        self._check(other)
        return RankVector(self.ctx, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RankVector":
        return RankVector(self.ctx, tuple(-a for a in self.coords))

    def scale(self, lam: ExtFieldElement) -> "RankVector":
        return RankVector(self.ctx, tuple(lam * a for a in self.coords))

    def __rmul__(self, lam: ExtFieldElement) -> "RankVector":
        return self.scale(lam)

    def concat(self, other: "RankVector") -> "RankVector":
        if self.ctx != other.ctx:
            raise ContextMismatchError("vectors differ in field")
        return RankVector(self.ctx, self.coords + other.coords)

    def __repr__(self) -> str:
        return f"RankVector(GF({self.ctx.q}^{self.ctx.m}), {list(self.to_ints())})"


def expand_vector(x: RankVector) -> QMatrix:
    return QMatrix(x.matrix(), x.ctx.q)


def rank(x: RankVector) -> int:
    """Rank norm: rank over GF(q) of the expansion of ``x``."""
    return x.rank()


def rank_distance(x: RankVector, y: RankVector) -> int:
    return (x - y).rank()


def coordinate_span_dim(x: RankVector) -> int:
    """Dimension of the GF(q)-span of the coordinates, by growing the span set.

    Deliberately avoids Gaussian elimination so it can cross-check :func:`rank`.
    """
    q = x.ctx.q
    span = {x.ctx.zero}
    dim = 0
    for c in x.coords:
        if c in span:
            continue
        multiples = [x.ctx.scalar(a) * c for a in range(q)]
        span = {s + t for s in span for t in multiples}
        dim += 1
    return dim


def row_space(x: RankVector) -> QMatrix:
    """RREF basis of the GF(q)-row space of the expansion of ``x``."""
    red, _ = linalg.rref(x.matrix(), x.ctx.q)
    return QMatrix(red.reshape(-1, x.n), x.ctx.q)


def all_vectors(ctx: FieldContext, n: int) -> Iterator[RankVector]:
    """Every vector of GF(q^m)^n, in order of base-q^m index."""
    for key in range(ctx.order ** n):
        vals = []
        for _ in range(n):
            key, d = divmod(key, ctx.order)
            vals.append(d)
        yield RankVector.from_ints(ctx, vals)


def vectors_from_matrices(ctx: FieldContext, mats: Sequence) -> list[RankVector]:
    return [RankVector.from_matrix(ctx, M) for M in mats]

"""Gabidulin codes, their coset translates, and bounded rank-distance decoding.

A code is kept as a k x n generator over GF(q^m) plus an additive offset.
Its codewords are enumerated as m x n matrices over GF(q): because the
code is GF(q)-linear, it is spanned over GF(q) by the mk words
``alpha_j * G_i``, so the full list is one integer matrix product.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .els import ComplementPair, ball_matrices
from .errors import ContextMismatchError, DomainError, EnumerationTooLarge, InvalidGeneratorError, UnsupportedError
from .gf import ExtFieldElement, FieldContext, frobenius
from .rank import RankVector

DEFAULT_CODEWORD_CAP = 1 << 20


@dataclass(frozen=True, eq=False)
class MrdCode:
    """A code of length n and cardinality q^{mk} over GF(q^m).

    ``generator`` holds k rows of length n; ``offset`` is added to every
    codeword (zero for a linear code).
    """

    ctx: FieldContext
    n: int
    k: int
    generator: tuple[tuple[ExtFieldElement, ...], ...]
    offset: RankVector
    cap: int = DEFAULT_CODEWORD_CAP

    def __post_init__(self) -> None:
        if self.n > self.ctx.m:
            raise UnsupportedError(f"length n={self.n} exceeds m={self.ctx.m}")
        if not 1 <= self.k <= self.n:
            raise DomainError(f"dimension k={self.k} outside [1, n={self.n}]")
        if len(self.generator) != self.k or any(len(row) != self.n for row in self.generator):
            raise DomainError("generator must be k x n")
        if self.offset.ctx != self.ctx or self.offset.n != self.n:
            raise ContextMismatchError("offset does not match the code")

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def d_R(self) -> int:
        """Design minimum rank distance n - k + 1."""
        return self.n - self.k + 1

    @property
    def t_max(self) -> int:
        return (self.d_R - 1) // 2

    @property
    def size(self) -> int:
        return self.ctx.order ** self.k

    @property
    def is_linear(self) -> bool:
        return self.offset.is_zero()

    def encode(self, message: Sequence[ExtFieldElement]) -> RankVector:
        if len(message) != self.k:
            raise DomainError(f"message length {len(message)} != k={self.k}")
        word = self.offset
        for lam, row in zip(message, self.generator):
            word = word + RankVector(self.ctx, row).scale(lam)
        return word

    @cached_property
    def _span_basis(self) -> np.ndarray:
        # Rows alpha_j * G_i, ordered so that message index digits match.
        rows = []
        for i in range(self.k):
            g = RankVector(self.ctx, self.generator[i])
            for a in self.ctx.basis:
                rows.append(g.scale(a).matrix().reshape(-1))
        return np.array(rows, dtype=np.int64)

    @cached_property
    def linear_matrices(self) -> np.ndarray:
        """Expansions of the codewords without offset; index = message key."""
        if self.size > self.cap:
            raise EnumerationTooLarge("codewords", self.size, self.cap)
        q, m = self.ctx.q, self.ctx.m
        coeffs = linalg.all_matrices(q, 1, m * self.k).reshape(-1, m * self.k)
        words = (coeffs @ self._span_basis) % q
        words = words.reshape(-1, m, self.n)
        words.setflags(write=False)
        return words

    @cached_property
    def matrices(self) -> np.ndarray:
        """Expansions of all codewords, shape (q^{mk}, m, n)."""
        words = (self.linear_matrices + self.offset.matrix()[None]) % self.ctx.q
        words.setflags(write=False)
        return words

    def codewords(self) -> list[RankVector]:
        return [RankVector.from_matrix(self.ctx, M) for M in self.matrices]

    def minimum_distance(self) -> int:
        """Exhaustive minimum rank distance (min rank of a nonzero difference)."""
        ranks = linalg.batch_rank(self.linear_matrices[1:], self.ctx.q)
        return int(ranks.min()) if ranks.size else self.n + 1

    def is_mrd(self) -> bool:
        return self.minimum_distance() == self.d_R

    def __repr__(self) -> str:
        kind = "linear" if self.is_linear else "coset"
        return f"MrdCode(q={self.ctx.q}, m={self.ctx.m}, n={self.n}, k={self.k}, {kind})"


def default_generator_vector(ctx: FieldContext, n: int) -> tuple[ExtFieldElement, ...]:
    if n > ctx.m:
        raise UnsupportedError(f"length n={n} exceeds m={ctx.m}")
    return ctx.basis[:n]


def gabidulin(
    ctx: FieldContext,
    n: int,
    k: int,
    g: Sequence[ExtFieldElement] | None = None,
    cap: int = DEFAULT_CODEWORD_CAP,
) -> MrdCode:
    """Gabidulin code with generator rows (g_0^{q^i}, ..., g_{n-1}^{q^i}), i < k."""
    if n > ctx.m:
        raise UnsupportedError(f"length n={n} exceeds m={ctx.m}")
    if not 1 <= k <= n:
        raise DomainError(f"dimension k={k} outside [1, n={n}]")
    g = tuple(g) if g is not None else default_generator_vector(ctx, n)
    if len(g) != n:
        raise DomainError(f"generator vector has length {len(g)}, expected {n}")
    if RankVector(ctx, g).rank() != n:
        raise InvalidGeneratorError("generator coordinates are linearly dependent over GF(q)")
    rows = tuple(tuple(frobenius(gj, i) for gj in g) for i in range(k))
    return MrdCode(ctx, n, k, rows, RankVector.zero(ctx, n), cap)


def translate(C: MrdCode, e: RankVector) -> MrdCode:
    """The coset C + e."""
    return MrdCode(C.ctx, C.n, C.k, C.generator, C.offset + e, C.cap)


def rank_distribution(C: MrdCode) -> list[int]:
    """A_0, ..., A_n: number of codewords of each rank."""
    ranks = linalg.batch_rank(C.matrices, C.ctx.q)
    return np.bincount(ranks, minlength=C.n + 1).tolist()


def _check_pair(C: MrdCode, pair: ComplementPair) -> None:
    if pair.V.q != C.ctx.q or pair.V.n != C.n:
        raise ContextMismatchError("subspace pair does not match the code")


def restriction_matrices(C: MrdCode, pair: ComplementPair) -> np.ndarray:
    """Expansions of r_V(c) for every codeword, shape (|C|, m, v)."""
    _check_pair(C, pair)
    return linalg.matmul(C.matrices, pair.right_inverse, C.ctx.q)


def check_combinatorial_property(C: MrdCode, pair: ComplementPair) -> bool:
    """Whether c -> c_K is a bijection from C onto K (K = pair.V, dim k)."""
    if pair.V.v != C.k:
        raise DomainError(f"K must have dimension k={C.k}, got {pair.V.v}")
    coords = restriction_matrices(C, pair)
    distinct = np.unique(linalg.matrix_keys(coords, C.ctx.q)).size
    return distinct == C.ctx.order ** C.k == C.size


def restrict(C: MrdCode, pair: ComplementPair) -> MrdCode:
    """The restriction C_V = {r_V(c)}: a code of length v = dim V."""
    v = pair.V.v
    if not C.k <= v <= C.n:
        raise DomainError(f"restriction needs k={C.k} <= v={v} <= n={C.n}")
    _check_pair(C, pair)
    q, Rinv = C.ctx.q, pair.right_inverse

    def r(vec: RankVector) -> RankVector:
        return RankVector.from_matrix(C.ctx, linalg.matmul(vec.matrix(), Rinv, q))

    rows = tuple(r(RankVector(C.ctx, row)).coords for row in C.generator)
    return MrdCode(C.ctx, v, C.k, rows, r(C.offset), C.cap)


# -- decoding ----------------------------------------------------------------

class Classification(enum.Enum):
    CORRECT = "correct"
    DECODER_ERROR = "decoder_error"
    DECODER_FAILURE = "decoder_failure"


@dataclass(frozen=True)
class DecodeOutcome:
    """Result of bounded rank-distance decoding.

    ``codeword`` is None when the decoder declares failure.
    """

    codeword: RankVector | None
    index: int | None = None

    @property
    def decoded(self) -> bool:
        return self.codeword is not None

    def classify(self, transmitted: RankVector) -> Classification:
        if self.codeword is None:
            return Classification.DECODER_FAILURE
        if self.codeword == transmitted:
            return Classification.CORRECT
        return Classification.DECODER_ERROR


def check_radius(C: MrdCode, t: int) -> None:
    if not 0 <= t <= C.t_max:
        raise DomainError(f"decoding radius t={t} outside [0, {C.t_max}] for d_R={C.d_R}")


def bounded_decode(C: MrdCode, y: RankVector, t: int) -> DecodeOutcome:
    """Return the codeword within rank distance t of y, or failure.

    Exhaustive search over all codewords.
    """
    check_radius(C, t)
    if y.ctx != C.ctx or y.n != C.n:
        raise ContextMismatchError("received word does not match the code")
    dist = linalg.batch_rank((C.matrices - y.matrix()[None]) % C.ctx.q, C.ctx.q)
    hits = np.nonzero(dist <= t)[0]
    if hits.size == 0:
        return DecodeOutcome(None)
    if hits.size > 1:
        raise AssertionError("two codewords within the decoding radius; code is not MRD")
    i = int(hits[0])
    return DecodeOutcome(RankVector.from_matrix(C.ctx, C.matrices[i]), i)


class BallLookup:
    """Table decoder over the union of radius-t balls around all codewords.

    Every word within rank distance t of codeword i is stored with index i
    in a sorted key array, so decoding a batch is one binary search.  It
    agrees with :func:`bounded_decode` whenever the balls are disjoint,
    which the constructor checks.
    """

    def __init__(self, C: MrdCode, t: int, cap: int = 1 << 26) -> None:
        check_radius(C, t)
        q, m, n = C.ctx.q, C.ctx.m, C.n
        ball = ball_matrices(q, m, n, t)
        total = ball.shape[0] * C.size
        if total > cap:
            raise EnumerationTooLarge("decoding-ball table", total, cap)
        code_keys = linalg.matrix_keys(C.matrices, q)
        keys = np.empty(total, dtype=np.int64)
        owner = np.repeat(np.arange(C.size, dtype=np.int64), ball.shape[0])
        # Keys are not additive mod q digit-wise, so add as matrices first.
        for i in range(C.size):
            block = (C.matrices[i][None] + ball) % q
            keys[i * ball.shape[0]:(i + 1) * ball.shape[0]] = linalg.matrix_keys(block, q)
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.owner = owner[order]
        if self.keys.size > 1 and np.any(self.keys[1:] == self.keys[:-1]):
            raise AssertionError("decoding balls overlap")
        self.code = C
        self.t = t
        self.code_keys = code_keys

    def decode_keys(self, keys: np.ndarray) -> np.ndarray:
        """Codeword index for each received key, or -1 for failure."""
        keys = np.asarray(keys, dtype=np.int64)
        pos = np.searchsorted(self.keys, keys)
        pos_c = np.minimum(pos, self.keys.size - 1)
        found = self.keys[pos_c] == keys
        return np.where(found, self.owner[pos_c], -1)

    def decode_matrices(self, mats: np.ndarray) -> np.ndarray:
        return self.decode_keys(linalg.matrix_keys(mats, self.code.ctx.q))

"""Linear algebra over the prime field GF(q) on integer numpy arrays.

Every function reduces its inputs mod ``q`` and returns entries in
``[0, q)``.  Scalar routines loop in Python and are meant for the small
matrices that describe one vector or one subspace; :func:`batch_rank` is
vectorised over a leading axis for exhaustive censuses.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

BATCH_CHUNK = 1 << 17


@lru_cache(maxsize=None)
def inverse_table(q: int) -> np.ndarray:
    t = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        t[a] = pow(a, q - 2, q)
    return t


def as_matrix(M, q: int) -> np.ndarray:
    a = np.array(M, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % q


def rref(M, q: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns.

    Pivots are taken as the first row with a nonzero entry in each column
    (left to right), so the result is the canonical RREF of the row space
    with zero rows dropped.
    """
    a = as_matrix(M, q).copy()
    rows, cols = a.shape
    invt = inverse_table(q)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * invt[a[r, c]] % q
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % q
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def rank(M, q: int) -> int:
    a = as_matrix(M, q)
    if a.size == 0:
        return 0
    return len(rref(a, q)[1])


def inverse(M, q: int) -> np.ndarray:
    a = as_matrix(M, q)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    red, piv = rref(aug, q)
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular over GF(q)")
    return red[:, n:]


def matmul(A, B, q: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(B, dtype=np.int64)) % q


def stack_rank(A, B, q: int) -> int:
    """Rank of the row concatenation of ``A`` over ``B`` (either may be empty)."""
    parts = [np.asarray(x, dtype=np.int64).reshape(-1, np.shape(x)[-1]) for x in (A, B) if np.size(x)]
    if not parts:
        return 0
    return rank(np.concatenate(parts, axis=0), q)


def _batch_rank_chunk(a: np.ndarray, q: int) -> np.ndarray:
    n_items, rows, cols = a.shape
    rk = np.zeros(n_items, dtype=np.int64)
    row_ids = np.arange(rows)
    invt = inverse_table(q)
    for j in range(cols):
        cand = (a[:, :, j] != 0) & (row_ids[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        p = cand[idx].argmax(axis=1)
        k = rk[idx]
        sub = a[idx]
        ar = np.arange(idx.size)
        pivot_row = sub[ar, p].copy()
        sub[ar, p] = sub[ar, k]
        if q != 2:
            pivot_row = pivot_row * invt[pivot_row[:, j]][:, None] % q
        sub[ar, k] = pivot_row
        factors = sub[:, :, j] * (row_ids[None, :] > k[:, None])
        sub -= factors[:, :, None] * pivot_row[:, None, :]
        sub %= q
        a[idx] = sub
        rk[idx] += 1
    return rk


def _batch_rank_gf2(a: np.ndarray) -> np.ndarray:
    # Rows packed into integers; elimination is XOR on an (N, r) array.
    n_items, rows, cols = a.shape
    weights = np.left_shift(np.int64(1), np.arange(cols, dtype=np.int64))
    packed = (a & 1) @ weights
    rk = np.zeros(n_items, dtype=np.int64)
    row_ids = np.arange(rows)
    ar = np.arange(n_items)
    for j in range(cols):
        bit = (packed >> j) & 1
        cand = (bit != 0) & (row_ids[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        p = cand.argmax(axis=1)
        pivot = packed[ar, p]
        # Swap the pivot row into slot rk, then clear bit j below it.
        k = np.minimum(rk, rows - 1)
        moved = packed[ar, k]
        packed[ar, p] = np.where(has, moved, packed[ar, p])
        packed[ar, k] = np.where(has, pivot, packed[ar, k])
        below = (row_ids[None, :] > rk[:, None]) & has[:, None]
        flip = below & (((packed >> j) & 1) != 0)
        packed ^= np.where(flip, pivot[:, None], 0)
        rk += has
    return rk


def batch_rank(mats, q: int, chunk: int = BATCH_CHUNK) -> np.ndarray:
    """Ranks over GF(q) of a stack of matrices with shape ``(N, r, c)``."""
    a = np.asarray(mats, dtype=np.int64)
    if a.ndim != 3:
        raise ValueError("batch_rank expects a 3-d array")
    if a.shape[1] > a.shape[2]:
        a = a.transpose(0, 2, 1)
    out = np.empty(a.shape[0], dtype=np.int64)
    if a.shape[1] == 0 or a.shape[2] == 0:
        out[:] = 0
        return out
    for start in range(0, a.shape[0], chunk):
        block = np.ascontiguousarray(a[start:start + chunk] % q)
        if q == 2 and block.shape[2] < 63:
            out[start:start + chunk] = _batch_rank_gf2(block)
        else:
            out[start:start + chunk] = _batch_rank_chunk(block, q)
    return out


def matrix_keys(mats, q: int) -> np.ndarray:
    """Injective int64 key of each matrix in a stack (base-q digits, row-major)."""
    a = np.asarray(mats, dtype=np.int64)
    flat = a.reshape(a.shape[0], -1)
    size = flat.shape[1]
    if q ** size >= 2 ** 63:
        raise OverflowError(f"{q}^{size} matrices do not fit in 64-bit keys")
    weights = np.array([q ** i for i in range(size)], dtype=np.int64)
    return flat @ weights


def keys_to_matrices(keys, q: int, shape: tuple[int, int]) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64).copy()
    size = shape[0] * shape[1]
    if size == 0:
        return np.zeros((keys.size,) + tuple(shape), dtype=np.int64)
    out = np.empty((keys.size, size), dtype=np.int64)
    for i in range(size):
        keys, out[:, i] = np.divmod(keys, q)
    return out.reshape((-1,) + shape)


def all_matrices(q: int, rows: int, cols: int) -> np.ndarray:
    """Every ``rows x cols`` matrix over GF(q), ordered by key."""
    total = q ** (rows * cols)
    return keys_to_matrices(np.arange(total, dtype=np.int64), q, (rows, cols))


RANK_TABLE_MAX = 1 << 22


@lru_cache(maxsize=4)
def rank_table(q: int, rows: int, cols: int) -> np.ndarray:
    """Rank of every rows x cols matrix, indexed by :func:`matrix_keys`."""
    total = q ** (rows * cols)
    if total > RANK_TABLE_MAX:
        raise OverflowError(f"rank table of {total} entries is too large")
    ranks = np.empty(total, dtype=np.int8)
    step = BATCH_CHUNK
    for start in range(0, total, step):
        keys = np.arange(start, min(total, start + step), dtype=np.int64)
        ranks[start:start + keys.size] = batch_rank(keys_to_matrices(keys, q, (rows, cols)), q)
    ranks.setflags(write=False)
    return ranks


def full_rank_matrices(q: int, rows: int, cols: int) -> np.ndarray:
    """Every ``rows x cols`` matrix over GF(q) of rank ``min(rows, cols)``."""
    mats = all_matrices(q, rows, cols)
    if mats.shape[0] == 0 or min(rows, cols) == 0:
        return mats
    return mats[batch_rank(mats, q) == min(rows, cols)]

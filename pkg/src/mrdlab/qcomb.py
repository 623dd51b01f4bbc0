"""Exact q-analog counting and certified evaluation of the counting bounds.

Counts are Python integers.  Expressions that involve the infinite product
``K_q = prod_{j>=1} (1 - q^-j)`` are carried as rational enclosures
``[lo, hi]`` that provably contain the true value, so strict inequalities
can be certified instead of trusted to floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

DEFAULT_KQ_TOL = Fraction(1, 2 ** 128)


def _check_q(q: int) -> None:
    if q < 2:
        raise DomainError(f"counting base q={q} must be >= 2")


def A(q: int, m: int, u: int) -> int:
    """Number of ordered u-tuples of linearly independent vectors of GF(q)^m."""
    _check_q(q)
    if not 0 <= u <= m:
        raise DomainError(f"A(m={m}, u={u}) needs 0 <= u <= m")
    qm = q ** m
    out = 1
    for i in range(u):
        out *= qm - q ** i
    return out


def gaussian(q: int, n: int, u: int) -> int:
    """Gaussian binomial [n, u]_q."""
    if not 0 <= u <= n:
        raise DomainError(f"[n={n}, u={u}] needs 0 <= u <= n")
    num, den = A(q, n, u), A(q, u, u)
    g, rem = divmod(num, den)
    assert rem == 0
    return g


def N_u(q: int, m: int, n: int, u: int) -> int:
    """Number of vectors of rank u in GF(q^m)^n."""
    if not 0 <= u <= min(m, n):
        raise DomainError(f"rank u={u} outside [0, min(m, n)]")
    return gaussian(q, n, u) * A(q, m, u)


def V_t(q: int, m: int, n: int, t: int) -> int:
    """Volume of a rank-metric ball of radius t."""
    if not 0 <= t <= min(m, n):
        raise DomainError(f"radius t={t} outside [0, min(m, n)]")
    return sum(N_u(q, m, n, i) for i in range(t + 1))


# -- K_q ---------------------------------------------------------------------

@dataclass(frozen=True)
class Enclosure:
    """A closed rational interval known to contain some real number."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @classmethod
    def exact(cls, v) -> "Enclosure":
        v = Fraction(v)
        return cls(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __mul__(self, other) -> "Enclosure":
        other = other if isinstance(other, Enclosure) else Enclosure.exact(other)
        cands = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return Enclosure(min(cands), max(cands))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("enclosure contains zero")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "Enclosure":
        other = other if isinstance(other, Enclosure) else Enclosure.exact(other)
        return self * other.reciprocal()

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)


def kq_partial(q: int, J: int) -> Fraction:
    """prod_{j=1}^{J} (1 - q^-j)."""
    _check_q(q)
    p = Fraction(1)
    for j in range(1, J + 1):
        p *= 1 - Fraction(1, q ** j)
    return p


def _round_down(x: Fraction, bits: int) -> Fraction:
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def _round_up(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


@dataclass(frozen=True)
class KqValue:
    """Certified enclosure of K_q with the truncation index that produced it."""

    q: int
    terms: int
    partial: Fraction
    enclosure: Enclosure

    @property
    def lower(self) -> Fraction:
        return self.enclosure.lo

    @property
    def value(self) -> Fraction:
        return self.enclosure.hi


@lru_cache(maxsize=None)
def K_q(q: int, tol: Fraction = DEFAULT_KQ_TOL) -> KqValue:
    """Enclose K_q to within ``tol``.

    With P_J the partial product, K_q = P_J * prod_{j>J}(1 - q^-j) and
    1 >= prod_{j>J}(1 - q^-j) >= 1 - sum_{j>J} q^-j = 1 - q^-J / (q - 1),
    so K_q lies in [P_J (1 - q^-J/(q-1)), P_J].  J grows until that width
    is below ``tol``; the endpoints are then rounded outward to dyadic
    rationals to keep later arithmetic cheap.
    """
    _check_q(q)
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    bits = max(64, tol.denominator.bit_length() + 8)
    p = Fraction(1)
    J = 0
    while True:
        J += 1
        p *= 1 - Fraction(1, q ** J)
        tail = p / ((q - 1) * q ** J)
        if tail < tol / 2:
            break
    lo = _round_down(p - tail, bits)
    hi = _round_up(p, bits)
    return KqValue(q, J, p, Enclosure(lo, hi))


# -- bounds ------------------------------------------------------------------

@dataclass(frozen=True)
class BoundValue:
    """A bound from the counting or error-probability analysis.

    ``enclosure`` contains the exact value of the bounding expression.
    ``value`` is the end of the enclosure that is safe to report: the upper
    end for an upper bound, the lower end for a lower bound.  Checks are
    made against the opposite end so that a pass is a proof.
    """

    formula_id: str
    kind: str  # "upper" or "lower"
    enclosure: Enclosure
    strict: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("upper", "lower"):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.enclosure.lo < 0:
            raise ValueError("bound values are non-negative")

    @classmethod
    def exact(cls, formula_id: str, kind: str, value, strict: bool = True) -> "BoundValue":
        return cls(formula_id, kind, Enclosure.exact(value), strict)

    @property
    def value(self) -> Fraction:
        return self.enclosure.hi if self.kind == "upper" else self.enclosure.lo

    def holds(self, x) -> bool:
        """True when ``x`` is certified to satisfy the bound."""
        x = Fraction(x)
        if self.kind == "upper":
            edge = self.enclosure.lo
            return x < edge if self.strict else x <= edge
        edge = self.enclosure.hi
        return edge < x if self.strict else edge <= x

    def vacuous_for_probability(self) -> bool:
        return self.kind == "upper" and self.enclosure.lo >= 1


def bound_lemma1(q: int, m: int, u: int, kq: KqValue | None = None) -> dict[str, BoundValue]:
    """Lower and upper bounds on A(m, u) in terms of q^{mu}.

    Always returns ``amu_lower_kq`` (K_q q^{mu}, strict) and ``amu_upper``
    (q^{mu}, non-strict).  ``amu_lower_kq_ratio`` (q/(q-1) K_q q^{mu},
    strict) is added for u <= m - 1 and ``amu_lower_half``
    ((q^2-1)/q^2 q^{mu}, non-strict) for u <= m // 2.
    """
    if not 0 <= u <= m:
        raise DomainError(f"A(m={m}, u={u}) needs 0 <= u <= m")
    kq = kq or K_q(q)
    qmu = q ** (m * u)
    out = {
        "amu_lower_kq": BoundValue("amu_lower_kq", "lower", kq.enclosure * qmu),
        "amu_upper": BoundValue.exact("amu_upper", "upper", qmu, strict=False),
    }
    if u <= m - 1:
        out["amu_lower_kq_ratio"] = BoundValue(
            "amu_lower_kq_ratio", "lower", kq.enclosure * (Fraction(q, q - 1) * qmu)
        )
    if u <= m // 2:
        out["amu_lower_half"] = BoundValue.exact(
            "amu_lower_half", "lower", Fraction(q * q - 1, q * q) * qmu, strict=False
        )
    return out


def bound_gaussian(q: int, n: int, t: int, kq: KqValue | None = None) -> BoundValue:
    """[n, t]_q < K_q^{-1} q^{t(n-t)}."""
    if not 0 <= t <= n:
        raise DomainError(f"[n={n}, t={t}] needs 0 <= t <= n")
    kq = kq or K_q(q)
    return BoundValue("gaussian_kq", "upper", kq.enclosure.reciprocal() * q ** (t * (n - t)))


def bound_Vt(q: int, m: int, n: int, t: int, kq: KqValue | None = None) -> dict[str, BoundValue]:
    """Ball volume bounds: V_t <= [n, t] q^{mt} < K_q^{-1} q^{t(m+n-t)}."""
    if not 0 <= t <= min(m, n):
        raise DomainError(f"radius t={t} outside [0, min(m, n)]")
    kq = kq or K_q(q)
    return {
        "vt_subspaces": BoundValue.exact("vt_subspaces", "upper", gaussian(q, n, t) * q ** (m * t), strict=False),
        "vt_kq": BoundValue("vt_kq", "upper", kq.enclosure.reciprocal() * q ** (t * (m + n - t))),
    }


def q_vandermonde_terms(q: int, v: int, u: int, s: int) -> tuple[int, int]:
    """Both sides of sum_w [v,w][u,s-w] q^{w(u-s+w)} = [v+u, s]."""
    lhs = 0
    for w in range(0, s + 1):
        if w <= v and 0 <= s - w <= u:
            lhs += gaussian(q, v, w) * gaussian(q, u, s - w) * q ** (w * (u - s + w))
    return lhs, gaussian(q, v + u, s)

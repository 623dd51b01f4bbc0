"""Exact arithmetic in GF(q) and GF(q^m).

GF(q) is the integers mod a prime ``q``.  GF(q^m) is GF(q)[x] / (f) for a
monic irreducible ``f`` of degree ``m``; elements are stored as dense
coefficient tuples ``(c_0, ..., c_{m-1})`` with respect to the polynomial
basis ``1, x, ..., x^{m-1}``.  Those coefficients are exactly the column
expansion used by the rank norm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import ContextMismatchError, DomainError


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


# -- polynomials over GF(q), coefficient lists low-to-high -------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], b: Sequence[int], q: int) -> list[int]:
    """Remainder of ``a`` divided by ``b`` over GF(q)."""
    a = _poly_trim([c % q for c in a])
    b = _poly_trim([c % q for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = pow(b[-1], q - 2, q)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = a[-1] * lead_inv % q
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % q
        _poly_trim(a)
    return a


def _monic_polys(q: int, degree: int) -> Iterator[tuple[int, ...]]:
    # c_0 varies fastest, so the order is that of sum(c_i q^i).
    for tail in itertools.product(range(q), repeat=degree):
        yield tuple(reversed(tail)) + (1,)


def is_irreducible(poly: Sequence[int], q: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(q, d):
            if not poly_mod(poly, f, q):
                return False
    return True


def smallest_irreducible(q: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``m`` in the order of sum(c_i q^i)."""
    for f in _monic_polys(q, m):
        if is_irreducible(f, q):
            return f
    raise DomainError(f"no irreducible polynomial of degree {m} over GF({q})")


# -- field context and elements ----------------------------------------------

@dataclass(frozen=True)
class FieldContext:
    """The field GF(q^m) with a fixed modulus and the polynomial basis.

    ``modulus`` holds the coefficients of the monic defining polynomial, low
    degree first.  When omitted, the smallest irreducible of degree ``m`` is
    used (see :func:`smallest_irreducible`).
    """

    q: int
    m: int
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if not is_prime(self.q):
            raise DomainError(f"q={self.q} is not prime")
        if self.m < 1:
            raise DomainError(f"extension degree m={self.m} must be >= 1")
        if not self.modulus:
            object.__setattr__(self, "modulus", smallest_irreducible(self.q, self.m))
        mod = tuple(int(c) % self.q for c in self.modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise DomainError("modulus must be monic of degree m")
        if not is_irreducible(mod, self.q):
            raise DomainError(f"modulus {mod} is reducible over GF({self.q})")
        object.__setattr__(self, "modulus", mod)

    @property
    def order(self) -> int:
        return self.q ** self.m

    @cached_property
    def zero(self) -> "ExtFieldElement":
        return ExtFieldElement(self, (0,) * self.m)

    @cached_property
    def one(self) -> "ExtFieldElement":
        return ExtFieldElement(self, (1,) + (0,) * (self.m - 1))

    @cached_property
    def basis(self) -> tuple["ExtFieldElement", ...]:
        """alpha_0, ..., alpha_{m-1} = 1, x, ..., x^{m-1}."""
        return tuple(self.element([int(i == j) for j in range(self.m)]) for i in range(self.m))

    def element(self, coeffs: Sequence[int]) -> "ExtFieldElement":
        if len(coeffs) > self.m:
            coeffs = poly_mod(list(coeffs), self.modulus, self.q)
        c = [int(v) % self.q for v in coeffs]
        c += [0] * (self.m - len(c))
        return ExtFieldElement(self, tuple(c))

    def from_int(self, value: int) -> "ExtFieldElement":
        """Inverse of :meth:`ExtFieldElement.to_int` (base-q digits, c_0 lowest)."""
        if not 0 <= value < self.order:
            raise DomainError(f"{value} is not an element index of GF({self.q}^{self.m})")
        digits = []
        for _ in range(self.m):
            value, d = divmod(value, self.q)
            digits.append(d)
        return ExtFieldElement(self, tuple(digits))

    def scalar(self, a: int) -> "ExtFieldElement":
        """Embed an element of the base field GF(q)."""
        return self.element([a])

    def elements(self) -> Iterator["ExtFieldElement"]:
        for i in range(self.order):
            yield self.from_int(i)


@dataclass(frozen=True)
class ExtFieldElement:
    ctx: FieldContext
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.ctx.m or any(not 0 <= c < self.ctx.q for c in self.coeffs):
            raise DomainError(f"invalid coefficient vector {self.coeffs} for GF({self.ctx.q}^{self.ctx.m})")

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def to_int(self) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = v * self.ctx.q + c
        return v

    def __add__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return add(self, other)

    def __sub__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return add(self, -other)

    def __neg__(self) -> "ExtFieldElement":
        q = self.ctx.q
        return ExtFieldElement(self.ctx, tuple((-c) % q for c in self.coeffs))

    def __mul__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return mul(self, other)

    def __truediv__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return mul(self, inv(other))

    def __pow__(self, e: int) -> "ExtFieldElement":
        if e < 0:
            return inv(self) ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = mul(result, base)
            base = mul(base, base)
            e >>= 1
        return result

    def __repr__(self) -> str:
        terms = [
            (str(c) if i == 0 else ("" if c == 1 else str(c)) + ("x" if i == 1 else f"x^{i}"))
            for i, c in enumerate(self.coeffs)
            if c
        ]
        return f"GF({self.ctx.q}^{self.ctx.m})[{' + '.join(terms) or '0'}]"


def _check_same(a: ExtFieldElement, b: ExtFieldElement) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatchError("elements belong to different fields")


def add(a: ExtFieldElement, b: ExtFieldElement) -> ExtFieldElement:
    _check_same(a, b)
    q = a.ctx.q
    return ExtFieldElement(a.ctx, tuple((x + y) % q for x, y in zip(a.coeffs, b.coeffs)))


def mul(a: ExtFieldElement, b: ExtFieldElement) -> ExtFieldElement:
    _check_same(a, b)
    ctx = a.ctx
    q, m = ctx.q, ctx.m
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] += x * y
    return ctx.element(poly_mod(prod, ctx.modulus, q))


def inv(a: ExtFieldElement) -> ExtFieldElement:
    """Multiplicative inverse, as a^(q^m - 2)."""
    if not a:
        raise ZeroDivisionError("zero has no inverse in GF(q^m)")
    return a ** (a.ctx.order - 2)


def frobenius(a: ExtFieldElement, i: int = 1) -> ExtFieldElement:
    """Return ``a ** (q ** i)``."""
    if i < 0:
        raise DomainError("Frobenius exponent must be non-negative")
    i %= a.ctx.m
    for _ in range(i):
        a = a ** a.ctx.q
    return a


def expand(a: ExtFieldElement) -> tuple[int, ...]:
    """Coordinates of ``a`` over GF(q) in the polynomial basis."""
    return a.coeffs

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrdlab.errors import ContextMismatchError, DomainError
from mrdlab.gf import (
    FieldContext,
    add,
    expand,
    frobenius,
    inv,
    is_irreducible,
    is_prime,
    mul,
    smallest_irreducible,
)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2)]


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize(
    "q,m,poly",
    [(2, 2, (1, 1, 1)), (2, 3, (1, 1, 0, 1)), (2, 4, (1, 1, 0, 0, 1)), (2, 5, (1, 0, 1, 0, 0, 1)), (3, 2, (1, 0, 1))],
)
def test_default_modulus(q, m, poly):
    # coefficients listed from the constant term up
    assert smallest_irreducible(q, m) == poly
    assert FieldContext(q, m).modulus == poly


def test_reducible_polynomials():
    assert not is_irreducible((1, 0, 1), 2)  # x^2 + 1 = (x + 1)^2
    assert not is_irreducible((0, 1, 1), 2)
    assert is_irreducible((2, 0, 1), 3) is False  # x^2 + 2 = (x+1)(x+2) over GF(3)


def test_bad_parameters():
    with pytest.raises(DomainError):
        FieldContext(4, 2)
    with pytest.raises(DomainError):
        FieldContext(2, 0)
    with pytest.raises(DomainError):
        FieldContext(2, 2, modulus=(1, 0, 1))


def test_gf4_examples():
    F = FieldContext(2, 2)
    x = F.element((0, 1))
    one = F.one
    assert x * x == x + one
    assert inv(x) == x + one
    assert frobenius(x) == x * x
    assert frobenius(x, 2) == x
    with pytest.raises(ZeroDivisionError):
        inv(F.zero)


@pytest.mark.parametrize("q,m", [f for f in SMALL_FIELDS if f[0] ** f[1] <= 64])
def test_field_axioms_exhaustive(q, m):
    F = FieldContext(q, m)
    els = list(F.elements())
    assert len(els) == q ** m
    assert len(set(els)) == q ** m
    for a in els:
        assert a + F.zero == a
        assert a * F.one == a
        assert a + (-a) == F.zero
        if a:
            assert a * inv(a) == F.one
            assert a / a == F.one
        assert a ** (q ** m) == a
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
        assert add(a, b) == a + b and mul(a, b) == a * b
    sample = els[: min(len(els), 16)]
    for a, b, c in itertools.product(sample, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("q,m", [(2, 3), (2, 4), (3, 2), (5, 2)])
def test_frobenius_is_additive_and_multiplicative(q, m):
    F = FieldContext(q, m)
    els = list(F.elements())
    for a, b in itertools.product(els, repeat=2):
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)
    for a in els:
        assert frobenius(a, m) == a
        assert frobenius(a, 0) == a
        # Fixed points of Frobenius are exactly the base field
        assert (frobenius(a) == a) == all(c == 0 for c in expand(a)[1:])


@pytest.mark.parametrize("q,m", [(2, 4), (3, 3)])
def test_expand_bijective_and_linear(q, m):
    F = FieldContext(q, m)
    seen = {expand(a) for a in F.elements()}
    assert len(seen) == q ** m
    for a in F.elements():
        assert F.element(expand(a)) == a
        assert F.from_int(a.to_int()) == a
    a, b = F.from_int(5), F.from_int(11)
    for c in range(q):
        lhs = expand(F.scalar(c) * a + b)
        rhs = tuple((c * x + y) % q for x, y in zip(expand(a), expand(b)))
        assert lhs == rhs


def test_mixed_fields_rejected():
    a = FieldContext(2, 2).one
    b = FieldContext(2, 3).one
    with pytest.raises(ContextMismatchError):
        _ = a + b
    with pytest.raises(ContextMismatchError):
        mul(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 6 - 1), st.integers(0, 2 ** 6 - 1), st.integers(1, 2 ** 6 - 1))
def test_division_inverts_multiplication(x, y, z):
    F = FieldContext(2, 6)
    a, b, c = F.from_int(x), F.from_int(y), F.from_int(z)
    assert (a * c) / c == a
    assert (a + b) * c == a * c + b * c


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3 ** 3 - 1), st.integers(0, 50))
def test_power_matches_repeated_product(x, e):
    F = FieldContext(3, 3)
    a = F.from_int(x)
    expect = F.one
    for _ in range(e):
        expect = expect * a
    assert a ** e == expect

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrdlab import linalg
from mrdlab.errors import DomainError
from mrdlab.qcomb import (
    A,
    BoundValue,
    Enclosure,
    K_q,
    N_u,
    V_t,
    bound_gaussian,
    bound_lemma1,
    bound_Vt,
    gaussian,
    kq_partial,
    q_vandermonde_terms,
)


def test_A_values():
    assert A(2, 5, 0) == 1
    assert A(2, 2, 2) == 6
    assert A(2, 3, 1) == 7
    assert A(2, 4, 2) == 15 * 14 == 210
    assert A(2, 4, 3) == 15 * 14 * 12 == 2520


def test_A_counts_full_rank_matrices():
    for q, m, u in [(2, 3, 2), (2, 2, 3), (3, 2, 2)]:
        # A(m, u) counts m x u matrices of rank u (u <= m) ...
        if u <= m:
            assert A(q, m, u) == linalg.full_rank_matrices(q, m, u).shape[0]


def test_gaussian_values():
    assert gaussian(2, 7, 0) == 1
    assert gaussian(2, 2, 1) == 3
    assert gaussian(2, 4, 2) == 35
    assert gaussian(3, 3, 1) == 13
    for n in range(8):
        for u in range(n + 1):
            assert gaussian(3, n, u) == gaussian(3, n, n - u)


def test_N_u_and_V_t_values():
    assert N_u(2, 4, 4, 0) == 1
    assert N_u(2, 2, 2, 1) == 9
    assert V_t(2, 4, 4, 0) == 1
    assert V_t(2, 4, 4, 1) == 226
    assert V_t(2, 5, 5, 2) == 1 + 31 * 31 + 155 * 930 == 145112
    for q, m, n in [(2, 4, 4), (3, 3, 5), (5, 2, 3)]:
        assert sum(N_u(q, m, n, u) for u in range(min(m, n) + 1)) == q ** (m * n)


def test_domain_errors():
    with pytest.raises(DomainError):
        A(2, 3, 4)
    with pytest.raises(DomainError):
        gaussian(2, 3, -1)
    with pytest.raises(DomainError):
        N_u(2, 2, 3, 3)
    with pytest.raises(DomainError):
        V_t(2, 2, 3, 3)
    with pytest.raises(DomainError):
        bound_lemma1(2, 3, 4)
    with pytest.raises(DomainError):
        A(1, 3, 1)


def test_kq_partial_products():
    assert kq_partial(2, 1) == Fraction(1, 2)
    assert kq_partial(3, 1) == Fraction(2, 3)
    for J in range(1, 20):
        assert kq_partial(2, J + 1) < kq_partial(2, J)


def test_kq_enclosure():
    k2 = K_q(2)
    assert k2.enclosure.lo <= k2.enclosure.hi
    assert k2.enclosure.width <= Fraction(1, 2 ** 128)
    assert abs(float(k2.value) - 0.288788095086602) < 1e-12
    # the enclosure must contain a much longer partial product's bracket
    long = kq_partial(2, 400)
    assert k2.enclosure.lo <= long <= k2.enclosure.hi
    # K_q increases with q
    assert K_q(2).value < K_q(3).lower < K_q(3).value < K_q(5).lower


def test_kq_coarse_tolerance():
    k = K_q(2, Fraction(1, 10 ** 12))
    assert k.enclosure.width <= Fraction(1, 10 ** 12)
    assert k.enclosure.lo <= K_q(2).value <= k.enclosure.hi


def test_enclosure_arithmetic():
    a = Enclosure(Fraction(1), Fraction(2))
    b = a.reciprocal()
    assert (b.lo, b.hi) == (Fraction(1, 2), Fraction(1))
    c = a * 3
    assert (c.lo, c.hi) == (3, 6)
    with pytest.raises(ValueError):
        Enclosure(Fraction(2), Fraction(1))


def test_bound_value_certification():
    up = BoundValue("x", "upper", Enclosure(Fraction(9, 10), Fraction(11, 10)))
    # only values below the pessimistic end are certified
    assert up.holds(Fraction(8, 10))
    assert not up.holds(Fraction(1))
    assert not up.vacuous_for_probability()
    assert BoundValue.exact("y", "upper", 2).vacuous_for_probability()
    lo = BoundValue.exact("z", "lower", 5, strict=False)
    assert lo.holds(5) and not lo.holds(4)


def test_lemma1_at_m4_u2():
    b = bound_lemma1(2, 4, 2)
    a = A(2, 4, 2)
    assert b["amu_lower_kq"].holds(a)
    assert b["amu_upper"].holds(a)
    assert b["amu_lower_kq_ratio"].holds(a)
    # 210 >= (3/4) * 256 = 192
    assert b["amu_lower_half"].value == 192
    assert b["amu_lower_half"].holds(a)


def test_lemma1_bracket_at_u0():
    for m in range(1, 6):
        b = bound_lemma1(3, m, 0)
        assert all(v.holds(1) for v in b.values())


def test_corollary_and_ball_examples():
    g = bound_gaussian(2, 4, 2)
    assert g.holds(35)
    assert 55 < float(g.value) < 56
    assert bound_gaussian(2, 5, 0).value >= 1
    vt = bound_Vt(2, 4, 4, 1)
    assert vt["vt_subspaces"].value == 240
    assert vt["vt_subspaces"].holds(226) and vt["vt_kq"].holds(226)
    assert bound_Vt(2, 4, 4, 0)["vt_subspaces"].holds(1)


@pytest.mark.parametrize("q", [2, 3])
def test_ball_bounds_sweep(q):
    for m in range(1, 9):
        for t in range(m + 1):
            vt = bound_Vt(q, m, m, t)
            assert all(b.holds(V_t(q, m, m, t)) for b in vt.values())


def test_q_vandermonde_small():
    lhs, rhs = q_vandermonde_terms(2, 2, 2, 2)
    assert lhs == rhs == gaussian(2, 4, 2)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7]), st.integers(1, 12), st.data())
def test_lemma1_strict_chain(q, m, data):
    u = data.draw(st.integers(0, m))
    a = A(q, m, u)
    b = bound_lemma1(q, m, u)
    assert b["amu_lower_kq"].enclosure.hi < a <= q ** (m * u)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 10), st.data())
def test_gaussian_recurrence(q, n, data):
    u = data.draw(st.integers(1, n + 1)) if n else 0
    if 1 <= u <= n:
        # [n+1, u] = [n, u-1] + q^u [n, u]
        assert gaussian(q, n + 1, u) == gaussian(q, n, u - 1) + q ** u * gaussian(q, n, u)

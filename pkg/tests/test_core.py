from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from znbases import divisors, is_basis, nlr, order
from znbases.core import (
    IntSet,
    ZnSet,
    canonical_less,
    format_fraction,
    format_order,
    parse_fraction,
    parse_order,
)

from oracles import all_subsets


def test_nlr_spec_values():
    assert nlr(7, 10) == -3
    assert nlr(5, 10) == 5
    assert nlr(22, 9) == 4


def test_nlr_range_and_congruence():
    for n in range(1, 30):
        for x in range(-2 * n, 2 * n + 1):
            r = nlr(x, n)
            assert -n < 2 * r <= n
            assert (r - x) % n == 0


@given(st.integers(-10**9, 10**9), st.integers(1, 10**6), st.integers(-50, 50))
def test_nlr_representative_invariance(x, n, k):
    assert nlr(x + k * n, n) == nlr(x, n)


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(7) == [1, 7]
    assert divisors(1) == [1]
    with pytest.raises(ValueError):
        divisors(0)


def test_znset_construction_and_queries():
    a = ZnSet.from_members(9, [0, 1, 3])
    assert len(a) == 3
    assert 3 in a and 2 not in a
    assert a.members == (0, 1, 3)
    assert a.to_text() == "0,1,3"
    assert ZnSet.from_text(9, "0, 1, 3") == a
    assert ZnSet.from_text(9, "0;1;3") == a


def test_znset_parse_rejects_bad_literals():
    with pytest.raises(ValueError):
        ZnSet.from_text(5, "0,5")
    with pytest.raises(ValueError):
        ZnSet.from_text(5, "1,1")
    with pytest.raises(ValueError):
        ZnSet.from_members(5, [-1])


def test_znset_rotate_wraps():
    a = ZnSet.from_members(6, [0, 4, 5])
    assert a.rotate(2) == ZnSet.from_members(6, [2, 0, 1])
    assert a.rotate(6) == a
    assert a.rotate(-1) == ZnSet.from_members(6, [5, 3, 4])


def test_basis_criterion_spec_examples():
    assert not is_basis(ZnSet.from_members(6, [0, 2]))
    assert not is_basis(ZnSet.from_members(5, [1]))
    assert is_basis(ZnSet.from_members(6, [0, 2, 3]))
    assert is_basis(ZnSet.from_members(1, [0]))
    assert not is_basis(ZnSet(4, 0))


def test_basis_criterion_matches_sumset_engine_exhaustively():
    # The gcd-of-differences criterion must agree with "the trajectory
    # reaches the full group" on every subset of every Z_n up to 12.
    for n in range(1, 13):
        for members in all_subsets(n):
            a = ZnSet.from_members(n, members)
            assert is_basis(a) == (order(a) is not None), (n, members)


def test_canonical_less_prefers_low_members():
    n = 7
    a = ZnSet.from_members(n, [0, 1])
    b = ZnSet.from_members(n, [0, 2])
    c = ZnSet.from_members(n, [5, 6])
    assert canonical_less(a, b)
    assert canonical_less(a, c)
    assert not canonical_less(b, a)
    assert not canonical_less(a, a)


def test_intset_normalization_errors():
    assert IntSet((0, 1, 3)).normalization_error() is None
    assert IntSet((1, 3)).normalization_error() is not None
    assert IntSet((0, 2, 4)).normalization_error() is not None
    assert IntSet((0,)).normalization_error() is not None
    assert IntSet.from_text("0,1,3").span == 3


def test_order_and_fraction_tokens_round_trip():
    assert format_order(None) == "inf" and parse_order("inf") is None
    assert format_order(7) == "7" and parse_order("7") == 7
    assert format_fraction(Fraction(22, 4)) == "11/2"
    assert format_fraction(Fraction(8, 4)) == "2"
    assert parse_fraction("11/2") == Fraction(11, 2)


@given(st.fractions(max_denominator=10**6))
def test_fraction_format_round_trip(f):
    assert parse_fraction(format_fraction(f)) == f

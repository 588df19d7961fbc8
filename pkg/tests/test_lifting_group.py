import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from toeplitz_aut.errors import NotMember
from toeplitz_aut.lifting_group import (
    add,
    base_digits,
    denominator_exponent,
    format_rational,
    from_rational,
    is_normal_form,
    member,
    neg,
    nonfg_witness,
    parse_rational,
    residue,
    to_rational,
)

members = st.builds(lambda n, e: F(n, 2 ** e), st.integers(-10**9, 10**9), st.integers(0, 20))
digits = st.lists(st.integers(-2, 2), max_size=10).map(
    lambda c: c[:max((i + 1 for i, k in enumerate(c) if k), default=0)])


def test_to_rational_examples():
    assert to_rational([1]) == 1
    assert to_rational([0, 2]) == 5
    assert to_rational([-2, 1]) == F(1, 2)
    assert to_rational([]) == 0


def test_from_rational_examples():
    assert from_rational(5) == [0, 2]
    assert from_rational(3) == [-2, 2]
    assert from_rational(0) == []
    assert from_rational(F(7, 4)) == [-2, -1, 1]
    with pytest.raises(NotMember):
        from_rational(F(1, 3))


def test_add_neg():
    assert add(F(5, 2), F(5, 2)) == 5
    assert add(1, neg(1)) == 0


def test_member():
    assert member(F(7, 4))
    assert not member(F(1, 3))
    assert all(member(n) for n in range(-50, 50))
    assert member(F(1, 6), q=6) and not member(F(1, 5), q=6)


def test_residues_and_expansions():
    assert residue(F(5, 2), 25) == 15
    assert base_digits(residue(F(5, 2), 25), 5, 2) == "30"
    assert residue(F(25, 4), 125) == 100
    assert base_digits(residue(F(25, 4), 125), 5, 3) == "400"
    assert residue(1, 5) == 1
    assert base_digits(residue(F(5, 2), 5 ** 5), 5, 5) == "22230"
    # 4 * ...3333400 = 25 in the 5-adic integers
    assert base_digits(residue(F(25, 4), 5 ** 7), 5, 7) == "3333400"
    assert 4 * int("3333400", 5) % 5 ** 7 == 25


def test_denominator_exponent_and_witness():
    assert [denominator_exponent(F(5, 2) ** i) for i in range(6)] == list(range(6))
    assert denominator_exponent(F(7, 4)) == 2
    assert nonfg_witness([1, F(5, 2)]) == F(25, 4)
    assert nonfg_witness([]) == 1


def test_distinct_normal_forms_give_distinct_values():
    seen = set()
    count = 0
    for n in range(5):
        for c in itertools.product(range(-2, 3), repeat=n):
            if c and c[-1] == 0:
                continue
            seen.add(to_rational(c))
            count += 1
    assert len(seen) == count


def test_parse_and_format():
    assert parse_rational(" 7/4 ") == F(7, 4)
    assert format_rational(5) == "5/1"


@given(digits)
def test_normal_form_round_trip(c):
    assert is_normal_form(c)
    assert from_rational(to_rational(c)) == c


@given(members)
def test_member_round_trip(x):
    c = from_rational(x)
    assert is_normal_form(c)
    assert to_rational(c) == x


@given(members, members)
def test_sum_of_normal_forms(a, b):
    assert from_rational(a + b) == from_rational(to_rational(from_rational(a)) + to_rational(from_rational(b)))


@given(members, members, st.integers(1, 8))
def test_residue_is_additive(a, b, ell):
    m = 5 ** ell
    assert residue(a + b, m) == (residue(a, m) + residue(b, m)) % m


@given(members, members)
def test_ultrametric(a, b):
    assert denominator_exponent(a + b) <= max(denominator_exponent(a), denominator_exponent(b))


@given(st.integers(-2, 2), st.integers(0, 6))
def test_lifting_relation(k, t):
    hi = [0] * (t + 1) + [k]
    lo = [0] * t + [k * 5]
    assert to_rational(hi) * 2 == to_rational(lo)


@given(st.lists(members, min_size=1, max_size=6))
def test_witness_escapes_sample(xs):
    w = nonfg_witness(xs)
    assert member(w)
    assert denominator_exponent(w) > max(denominator_exponent(x) for x in xs)

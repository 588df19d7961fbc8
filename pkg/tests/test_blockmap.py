import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_aut.autgroup import sigma
from toeplitz_aut.blockmap import (
    Rule,
    apply,
    compose,
    compose_power,
    equal,
    flip_witness,
    identity_rule,
    inverse,
    is_endomorphism,
    minimize,
    pad,
    rule_from_function,
    shift_amount,
    shift_rule,
)
from toeplitz_aut.errors import ClosureFailure, UnknownWord
from toeplitz_aut.factor import induced_shift, phase
from toeplitz_aut.substrate import DEFAULT_PARAMS as P, PartialWindow, language_set, point_window

small = st.sampled_from([(0, 1), (0, -1), (0, 2), (1, 1), (1, -1), (2, 1), (2, -1)])


def group_rule(jk):
    """sigma_j^k for jk = (j, k)."""
    j, k = jk
    return compose_power(sigma(P, j, 1 if k > 0 else -1), abs(k))


def test_identity_and_shift_apply():
    y = point_window(P, 0, 30)
    assert apply(identity_rule(P), y) == y
    out = apply(shift_rule(P, 1), y)
    assert out.offset == 1 and out.cells == y.cells[2:]


def test_apply_rejects_short_or_partial_windows():
    with pytest.raises(ValueError):
        apply(shift_rule(P, 2), point_window(P, 0, 3))
    with pytest.raises(ValueError):
        apply(identity_rule(P), PartialWindow(0, "1_0"))


def test_unknown_word():
    with pytest.raises(UnknownWord):
        shift_rule(P, 1).image("111")


def test_sigma1_image_has_phase_zero():
    f = sigma(P, 1)
    y = point_window(P, -50, 50)
    assert phase(P, apply(f, y)).value == 0
    assert induced_shift(P, f).value == 0


def test_compose_identity_and_inverse():
    s = shift_rule(P, 1)
    assert minimize(compose(identity_rule(P), s)) == s
    assert minimize(compose(s, shift_rule(P, -1))).radius == 0
    assert minimize(compose(s, shift_rule(P, -1))) == identity_rule(P)


def test_sigma1_squared_is_five_shifts():
    assert equal(compose(sigma(P, 1), sigma(P, 1)), compose_power(shift_rule(P, 1), 5))


def test_padded_tables_compare_equal():
    f = pad(identity_rule(P), 2)
    assert f.radius == 2 and f != identity_rule(P)
    assert equal(f, identity_rule(P))
    assert minimize(f) == identity_rule(P)


def test_json_round_trip():
    f = sigma(P, 1)
    data = f.to_json()
    assert list(data["table"]) == sorted(data["table"])
    assert Rule.from_json(P, f.dumps()) == f
    assert hash(Rule.from_json(P, data)) == hash(f)


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule(P, 1, {"0": "1"})
    with pytest.raises(ValueError):
        Rule(P, 0, {"0": "_"})


def test_is_endomorphism():
    cert = is_endomorphism(shift_rule(P, 1), 41)
    assert cert.checked_depth == 41 and cert.induced.value == 1
    assert is_endomorphism(sigma(P, 1), 41).induced.value == 0
    zero = rule_from_function(P, 0, lambda u: "0")
    with pytest.raises(ClosureFailure) as exc:
        is_endomorphism(zero, 12)
    assert exc.value.image not in language_set(P, len(exc.value.image))
    with pytest.raises(ValueError):
        is_endomorphism(shift_rule(P, 3), 5)


def test_flip_witness():
    u = flip_witness(P)
    assert u == "000"
    assert u in language_set(P, len(u))
    assert "111" not in language_set(P, 3)


def test_shift_amount_and_inverse():
    assert shift_amount(shift_rule(P, -2)) == -2
    assert shift_amount(sigma(P, 1)) is None
    g = inverse(sigma(P, 1))
    assert equal(g, sigma(P, 1, -1))
    assert minimize(compose(g, sigma(P, 1))) == identity_rule(P)
    assert shift_amount(compose_power(shift_rule(P, 1), -3)) == -3


@settings(max_examples=25, deadline=None)
@given(small, small, st.integers(-500, 500))
def test_apply_compose_is_apply_twice(a, b, offset):
    f, g = group_rule(a), group_rule(b)
    y = point_window(P, offset, offset + 80)
    assert apply(compose(f, g), y) == apply(f, apply(g, y))


@settings(max_examples=15, deadline=None)
@given(small, small, small)
def test_compose_associative(a, b, c):
    f, g, h = map(group_rule, (a, b, c))
    assert equal(compose(f, compose(g, h)), compose(compose(f, g), h))


@settings(max_examples=15, deadline=None)
@given(small)
def test_shift_commutes_with_endomorphisms(a):
    f = group_rule(a)
    s = shift_rule(P, 1)
    assert equal(compose(s, f), compose(f, s))


@settings(max_examples=15, deadline=None)
@given(small, st.integers(0, 3))
def test_minimize_idempotent_and_faithful(a, extra):
    f = pad(group_rule(a), group_rule(a).radius + extra)
    m = minimize(f)
    assert minimize(m) == m
    assert equal(m, f)
    for level in (1, 2):
        assert induced_shift(P, m, level) == induced_shift(P, f, level)

import pytest
from hypothesis import given, settings, strategies as st

from toeplitz_aut.autgroup import sigma
from toeplitz_aut.blockmap import compose, shift_rule
from toeplitz_aut.errors import NoAlignment, WindowTooShort
from toeplitz_aut.factor import (
    Phase,
    detection_constant,
    induced_shift,
    phase,
    phase_window_length,
    right_radius,
    right_radius_witness,
)
from toeplitz_aut.substrate import DEFAULT_PARAMS as P, PartialWindow, language, point_window


def shifted_window(c, a, n):
    """Cells [a, a+n) of sigma^c x(w)."""
    return PartialWindow(a, point_window(P, a + c, a + c + n - 1).cells)


def test_phase_of_x_is_zero():
    assert phase(P, point_window(P, 0, 40)) == Phase(0, 5)
    assert phase(P, point_window(P, -300, -250), 3) == Phase(0, 125)


@settings(max_examples=80, deadline=None)
@given(st.integers(-10**5, 10**5), st.integers(-10**4, 10**4), st.integers(1, 3))
def test_phase_of_shifted_point(c, a, level):
    y = shifted_window(c, a, 200)
    assert phase(P, y, level).value == c % P.p ** level


def test_phase_errors():
    with pytest.raises(WindowTooShort) as exc:
        phase(P, PartialWindow(0, "0"))
    assert exc.value.required == 5
    with pytest.raises(NoAlignment):
        phase(P, PartialWindow(0, "11111"))
    with pytest.raises(ValueError):
        phase(P, PartialWindow(0, "1_0"))


def test_right_radius():
    r = right_radius(P)
    assert r == 4
    u = right_radius_witness(P)
    assert len(u) == r
    # every factor of length r+1 pins the residue mod p
    assert all(phase(P, PartialWindow(0, v)) for v in language(P, r + 1))


def test_phase_window_lengths():
    assert [phase_window_length(P, lv) for lv in (1, 2, 3)] == [5, 13, 33]
    n = phase_window_length(P, 2)
    ambiguous = 0
    for u in language(P, n - 1):
        try:
            phase(P, PartialWindow(0, u), 2)
        except WindowTooShort:
            ambiguous += 1
    assert ambiguous > 0


def test_detection_constant():
    res = detection_constant(P, 5)
    assert res.k == 5 and res.m == 5
    assert res.witness is not None
    assert detection_constant(P, 25).m >= 2


@pytest.mark.parametrize("n", [-3, -1, 0, 1, 2, 7])
@pytest.mark.parametrize("level", [1, 2, 3])
def test_induced_shift_of_shift_powers(n, level):
    assert induced_shift(P, shift_rule(P, n), level).value == n % P.p ** level


def test_phase_str_and_json():
    ph = Phase(3, 5)
    assert str(ph) == "3 mod 5"
    assert ph.to_json() == {"value": 3, "modulus": 5}
    with pytest.raises(ValueError):
        Phase(5, 5)


@pytest.mark.parametrize("level", [2, 3, 4])
@pytest.mark.parametrize("jk", [(1, 1), (2, 1), (1, -1), (3, 1)])
def test_induced_shift_tower(jk, level):
    j, sign = jk
    f = sigma(P, j, sign)
    hi = induced_shift(P, f, level).value
    assert hi % P.p ** (level - 1) == induced_shift(P, f, level - 1).value


def test_induced_shift_is_additive():
    f, g = sigma(P, 1), sigma(P, 2, -1)
    for level in (1, 2, 3):
        m = P.p ** level
        both = induced_shift(P, compose(f, g), level).value
        assert both == (induced_shift(P, f, level).value + induced_shift(P, g, level).value) % m


def test_phase_is_equivariant():
    for a in range(-20, 20):
        y = point_window(P, a, a + 40)
        moved = PartialWindow(a, y.cells[1:])
        for level in (1, 2):
            assert phase(P, moved, level).value == (phase(P, y, level).value + 1) % P.p ** level


def test_single_symbol_is_ambiguous():
    with pytest.raises(WindowTooShort):
        phase(P, PartialWindow(0, "1"))


def test_detection_constant_witness_repeats():
    res = detection_constant(P, 5)
    cells = point_window(P, 0, res.window + 100).cells
    i = res.witness
    run = [cells[i + t * 5] for t in range(res.m - 1)]
    assert len(set(run)) == 1 and cells[i + (res.m - 1) * 5] != cells[i]

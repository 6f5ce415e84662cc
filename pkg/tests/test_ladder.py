import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ladderq.errors import ConfigError
from ladderq.ladder import (
    ANNIHILATE,
    CREATE,
    LadderPoly,
    XPPoly,
    commute_once,
    format_word,
    hermitian_conjugate,
    inversion_count,
    is_normal_ordered,
    ladder_from_xp,
    normal_order,
    parse_word,
    pretty_word,
    vacuum_expectation,
    word_shift,
)
from ladderq.matrices import AssemblyMode, assemble

words = st.lists(st.sampled_from([CREATE, ANNIHILATE]), max_size=7).map(tuple)


def test_parse_and_format_round_trip():
    w = parse_word("b+bb+b+b")
    assert w == (CREATE, ANNIHILATE, CREATE, CREATE, ANNIHILATE)
    assert format_word(w) == "b+bb+b+b"
    assert parse_word("") == ()
    with pytest.raises(ConfigError):
        parse_word("bx")


def test_commute_once_basic():
    assert commute_once((ANNIHILATE, CREATE)) == [(1, (CREATE, ANNIHILATE)), (1, ())]
    assert commute_once((CREATE, ANNIHILATE)) is None


def test_normal_order_bbdag():
    result = normal_order(LadderPoly({"bb+": 1.0}))
    assert result == LadderPoly({"b+b": 1.0, "": 1.0})


def test_normal_order_b2_bdag2():
    # b b b+ b+ = b+b+bb + 4 b+b + 2
    result = normal_order(LadderPoly({"bbb+b+": 1.0}))
    assert result.normal_form() == {(2, 2): 1, (1, 1): 4, (0, 0): 2}


def test_x_squared_expansion():
    lad = ladder_from_xp(XPPoly({"xx": 1}))
    assert lad == LadderPoly({"bb": 0.5, "bb+": 0.5, "b+b": 0.5, "b+b+": 0.5})
    assert normal_order(lad).normal_form() == {(0, 2): 0.5, (1, 1): 1.0, (2, 0): 0.5, (0, 0): 0.5}


def test_x4_expansion_has_sixteen_words():
    lad = ladder_from_xp(XPPoly({"xxxx": 1}))
    assert len(lad) == 16
    assert all(abs(c - 0.25) < 1e-15 for _, c in lad.items())


def test_momentum_is_hermitian_but_imaginary():
    lad = ladder_from_xp(XPPoly({"p": 1}))
    assert lad.coeff("b") == pytest.approx(-1j / math.sqrt(2))
    assert lad.coeff("b+") == pytest.approx(1j / math.sqrt(2))
    assert lad.is_hermitian()


def test_xp_plus_px_expands():
    lad = normal_order(ladder_from_xp(XPPoly({"xp": 1, "px": 1})))
    # xp + px = i (b+b+ - bb)
    assert lad.coeff("b+b+") == pytest.approx(1j)
    assert lad.coeff("bb") == pytest.approx(-1j)
    assert abs(lad.coeff("")) < 1e-15


def test_vacuum_expectation_harmonic_and_quartic():
    h0 = XPPoly({"pp": Fraction(1, 2), "xx": Fraction(1, 2)})
    assert vacuum_expectation(ladder_from_xp(h0)) == 0.5
    # <x^4> = 3/4, <x^3> = 0 in the ground state
    assert vacuum_expectation(ladder_from_xp(XPPoly({"xxxx": 1}))) == 0.75
    assert vacuum_expectation(ladder_from_xp(XPPoly({"xxx": 1}))) == 0.0


def test_pretty_uses_number_operator():
    assert pretty_word((CREATE, CREATE, ANNIHILATE)) == "b† n"
    assert "n" in normal_order(LadderPoly({"bb+": 1})).pretty()


def test_xppoly_validation():
    with pytest.raises(ConfigError):
        XPPoly({"xq": 1})
    with pytest.raises(ConfigError):
        XPPoly({"x" * 9: 1})
    with pytest.raises(ConfigError):
        XPPoly({"x": 1j})
    with pytest.raises(ConfigError):
        XPPoly({"x": float("nan")})
    with pytest.raises(ConfigError):
        LadderPoly({("c",): 1})


def test_xppoly_json_round_trip_exact():
    poly = XPPoly({"pp": Fraction(1, 2), "xxx": Fraction(-1, 8), "": 3})
    back = XPPoly.loads(poly.dumps(exact=True))
    assert back == poly
    assert back["xxx"] == Fraction(-1, 8)


def test_ladder_json_round_trip():
    lad = normal_order(ladder_from_xp(XPPoly({"xp": 1, "px": 1, "xxxx": 2})))
    assert LadderPoly.loads(lad.dumps()) == lad


def test_shift_of_linear_term():
    assert XPPoly({"x": 2}).shift_x(3) == XPPoly({"x": 2, "": 6})
    assert XPPoly({"px": 1}).shift_x(1) == XPPoly({"px": 1, "p": 1})


# properties ---------------------------------------------------------------


@given(words)
def test_normal_order_output_is_normal(word):
    result = normal_order(LadderPoly({word: 1.0}))
    assert result.is_normal_ordered()
    # integer multiplicities
    assert all(c.imag == 0 and c.real == int(c.real) for _, c in result.items())
    # every term keeps the net shift of the input word
    assert all(word_shift(w) == word_shift(word) for w in result.words())


@given(words)
def test_commute_once_decreases_inversions(word):
    step = commute_once(word)
    if step is None:
        assert is_normal_ordered(word)
        return
    (_, swapped), (_, contracted) = step
    assert inversion_count(swapped) == inversion_count(word) - 1
    assert len(contracted) == len(word) - 2


@settings(max_examples=60, deadline=None)
@given(words)
def test_normal_order_preserves_operator(word):
    # exact projection is exact for any word, so both forms must agree
    M = 6
    poly = LadderPoly({word: 1.0})
    a = assemble(poly, M, AssemblyMode.EXACT_PROJECTION)
    b = assemble(normal_order(poly), M, AssemblyMode.EXACT_PROJECTION)
    assert np.max(np.abs(a - b)) < 1e-9


@given(st.dictionaries(words, st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), max_size=5))
def test_hermitian_conjugate_is_involution(terms):
    poly = LadderPoly(terms)
    assert hermitian_conjugate(hermitian_conjugate(poly)).isclose(poly)
    assert (poly + hermitian_conjugate(poly)).is_hermitian(1e-9)


@given(st.lists(st.sampled_from("xp"), max_size=6).map("".join))
def test_symmetrized_xp_words_are_hermitian(word):
    poly = XPPoly({word: 1, word[::-1]: 1})
    assert poly.is_hermitian()
    lad = ladder_from_xp(poly)
    assert lad.is_hermitian()
    assert normal_order(lad).is_hermitian(1e-9)

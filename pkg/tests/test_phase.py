from fractions import Fraction

import numpy as np
import pytest

from certifier.utils.linalg import DomainError
from certifier.utils.phase import Phase


@pytest.mark.parametrize(
    "text, exact",
    [
        ("5/2^3", Fraction(5, 8)),
        ("1 / 2^1", Fraction(1, 2)),
        ("3/10", Fraction(3, 10)),
        ("0/7", Fraction(0)),
    ],
)
def test_parse_exact_forms(text, exact):
    phase = Phase.parse(text)

    assert phase.exact == exact
    assert phase.value == float(exact)


def test_parse_decimal_stays_inexact():
    phase = Phase.parse("0.3")

    assert phase.exact is None
    assert phase.value == 0.3
    assert not phase.is_dyadic


@pytest.mark.parametrize("text", ["1.2", "-0.1", "1", "8/2^3", "abc", "1/0", ""])
def test_parse_rejects_phases_outside_the_unit_interval(text):
    with pytest.raises(DomainError):
        Phase.parse(text)


def test_dyadic_detection_uses_the_fraction():
    assert Phase.dyadic(3, 4).is_dyadic
    assert Phase.rational(1, 4).is_dyadic
    assert not Phase.rational(1, 3).is_dyadic
    assert Phase.dyadic(3, 4).numerator == 3
    assert Phase.dyadic(3, 4).exponent == 4
    assert Phase.rational(2, 8).exponent == 2


def test_scaled_and_exactness_in_a_register():
    phase = Phase.dyadic(5, 3)

    assert phase.scaled(3) == 5
    assert phase.is_exact_in(3)
    assert phase.is_exact_in(5)
    assert not phase.is_exact_in(2)
    assert Phase.decimal(0.25).is_exact_in(2)
    assert not Phase.rational(1, 3).is_exact_in(14)


def test_turns_are_exact_for_fractions():
    phase = Phase.rational(1, 3)
    turns = phase.turns(np.arange(7))

    assert np.array_equal(turns, np.array([0, 1, 2, 0, 1, 2, 0]) / 3)


def test_turns_past_int64():
    tiny = Phase.parse("1/2^70")
    turns = tiny.turns([1, 2**10, 2**62, 3])

    assert turns.dtype == np.float64
    assert turns.tolist() == [2.0**-70, 2.0**-60, 2.0**-8, 3 * 2.0**-70]

    odd = Phase.parse("3/2^63")
    assert odd.turns([2**62]).tolist() == [0.5]


def test_phase_factors_for_quarter_turn():
    factors = Phase.dyadic(1, 2).phase_factors(np.arange(4))

    assert np.allclose(factors, [1, 1j, -1, -1j], atol=1e-15)


def test_equal_phases_hash_alike():
    assert Phase.dyadic(1, 2) == Phase.rational(1, 4)
    assert len({Phase.dyadic(1, 2), Phase.rational(2, 8)}) == 1
    assert Phase.dyadic(1, 2) != Phase.rational(1, 2)
    assert Phase.coerce(Fraction(1, 2)) == Phase.dyadic(1, 1)


def test_label():
    assert str(Phase.dyadic(5, 3)) == "5/8"
    assert str(Phase.decimal(0.3)) == "0.3"

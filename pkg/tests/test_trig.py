from __future__ import annotations

from fractions import Fraction

import pytest

from polysum.exact.trig import PI, cos_pi, sin_pi, tan_pi


def test_exact_values_at_common_angles() -> None:
    assert cos_pi(Fraction(1, 3)) == Fraction(1, 2)
    assert sin_pi(Fraction(1, 6)) == Fraction(1, 2)
    assert tan_pi(Fraction(1, 4)) == 1
    assert cos_pi(0) == 1 and sin_pi(0) == 0
    assert cos_pi(1) == -1


@pytest.mark.parametrize("a", [Fraction(1, 7), Fraction(2, 5), Fraction(-3, 8), Fraction(9, 4)])
def test_results_are_rational_and_consistent(a: Fraction) -> None:
    c, s = cos_pi(a), sin_pi(a)
    assert isinstance(c, Fraction) and isinstance(s, Fraction)
    assert abs(c * c + s * s - 1) < Fraction(1, 10**10)
    assert cos_pi(a + 2) == c
    assert abs(tan_pi(a) - s / c) < Fraction(1, 10**9)


def test_denominator_limit_and_pole() -> None:
    assert cos_pi(Fraction(1, 5), max_denominator=100).denominator <= 100
    assert abs(PI - Fraction(355, 113)) < Fraction(1, 10**6)
    with pytest.raises(ValueError):
        tan_pi(Fraction(1, 2))
    with pytest.raises(ValueError):
        tan_pi(Fraction(-1, 2))

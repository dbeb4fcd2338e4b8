"""Rational approximations of pi-multiples of sine, cosine and tangent.

Generators pick parameters from angles; these helpers keep that choice inside
``Fraction`` arithmetic so constructions do not depend on the platform's libm.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Tuple

PI = Fraction("3.14159265358979323846264338327950288419716939937510")

# x**41 / 41! < 1e-29 for |x| <= pi
_TERMS = 42
_WORKING_DEN = 10**30


def _sin_cos(x: Fraction) -> Tuple[Fraction, Fraction]:
    s, c = Fraction(0), Fraction(0)
    term = Fraction(1)
    for n in range(_TERMS):
        sign = -1 if (n // 2) % 2 else 1
        if n % 2:
            s += sign * term
        else:
            c += sign * term
        term = (term * x / (n + 1)).limit_denominator(_WORKING_DEN)
    return s, c


def _reduce(a: Fraction) -> Fraction:
    # a in units of pi, moved into (-1, 1]
    while a > 1:
        a -= 2
    while a <= -1:
        a += 2
    return a


def cos_pi(a: Fraction, max_denominator: int = 10**12) -> Fraction:
    """cos(pi * a) as the closest fraction with denominator at most ``max_denominator``."""
    _, c = _sin_cos(PI * _reduce(Fraction(a)))
    return c.limit_denominator(max_denominator)


def sin_pi(a: Fraction, max_denominator: int = 10**12) -> Fraction:
    s, _ = _sin_cos(PI * _reduce(Fraction(a)))
    return s.limit_denominator(max_denominator)


def tan_pi(a: Fraction, max_denominator: int = 10**12) -> Fraction:
    a = _reduce(Fraction(a))
    if abs(a) == Fraction(1, 2):
        raise ValueError("tan is unbounded at pi/2")
    s, c = _sin_cos(PI * a)
    return (s / c).limit_denominator(max_denominator)

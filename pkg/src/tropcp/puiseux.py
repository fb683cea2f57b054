"""Exact arithmetic in the ordered field of real Puiseux series.

Series here are finite formal sums ``sum_k c_k * t**e_k`` with rational
coefficients and rational exponents.  The order is the eventual order of
the functions t -> value(t) for large t, decided symbolically by the
sign of the leading coefficient.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .tropical import BOTTOM, TropValue

RationalLike = Union[int, str, Fraction]

LT, EQ, GT = -1, 0, 1


def _merge(pairs: Iterable[tuple[RationalLike, RationalLike]]):
    acc: dict[Fraction, Fraction] = {}
    for exp, coef in pairs:
        e, c = Fraction(exp), Fraction(coef)
        if c == 0:
            continue
        acc[e] = acc.get(e, Fraction(0)) + c
    return tuple(
        (e, acc[e]) for e in sorted(acc, reverse=True) if acc[e] != 0
    )


class PuiseuxSeries:
    """Finite Puiseux series; terms stored with strictly decreasing exponents."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[RationalLike, RationalLike]] = ()):
        object.__setattr__(self, "terms", _merge(terms))

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxSeries is immutable")

    @staticmethod
    def zero() -> "PuiseuxSeries":
        return PuiseuxSeries()

    @staticmethod
    def constant(c: RationalLike) -> "PuiseuxSeries":
        return PuiseuxSeries([(0, c)])

    @staticmethod
    def monomial(coef: RationalLike, exp: RationalLike) -> "PuiseuxSeries":
        return PuiseuxSeries([(exp, coef)])

    @staticmethod
    def t(exp: RationalLike = 1) -> "PuiseuxSeries":
        return PuiseuxSeries([(exp, 1)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def leading(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the term with greatest exponent."""
        if not self.terms:
            raise ValueError("zero series has no leading term")
        return self.terms[0]

    def sign(self) -> int:
        if not self.terms:
            return 0
        return 1 if self.terms[0][1] > 0 else -1

    # -- field operations ---------------------------------------------------

    def __add__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return PuiseuxSeries(self.terms + other.terms)

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries((e, -c) for e, c in self.terms)

    def __sub__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return self + (-other)

    def __mul__(self, other: "PuiseuxSeries") -> "PuiseuxSeries":
        return PuiseuxSeries(
            (e1 + e2, c1 * c2)
            for e1, c1 in self.terms
            for e2, c2 in other.terms
        )

    def scale(self, c: RationalLike) -> "PuiseuxSeries":
        return PuiseuxSeries((e, Fraction(c) * k) for e, k in self.terms)

    # -- order --------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, PuiseuxSeries) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __lt__(self, other: "PuiseuxSeries") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "PuiseuxSeries") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "PuiseuxSeries") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "PuiseuxSeries") -> bool:
        return (self - other).sign() >= 0

    # -- valuation and evaluation -------------------------------------------

    def val(self) -> TropValue:
        """Greatest exponent in the support; bottom for the zero series."""
        if not self.terms:
            return BOTTOM
        return TropValue(self.terms[0][0])

    def eval(self, t: float) -> float:
        """Numeric value at a concrete parameter t > 1."""
        if t <= 1:
            raise ValueError("evaluation requires t > 1")
        return math.fsum(float(c) * t ** float(e) for e, c in self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "PuiseuxSeries(0)"
        parts = [f"{c}*t^{e}" for e, c in self.terms]
        return "PuiseuxSeries(%s)" % " + ".join(parts)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> list[dict[str, str]]:
        return [{"exp": str(e), "coef": str(c)} for e, c in self.terms]

    @staticmethod
    def from_json(obj: list[dict[str, str]]) -> "PuiseuxSeries":
        return PuiseuxSeries(
            (Fraction(d["exp"]), Fraction(d["coef"])) for d in obj
        )


def ps_add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a + b


def ps_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a * b


def ps_cmp(a: PuiseuxSeries, b: PuiseuxSeries) -> int:
    """LT/EQ/GT comparison decided by the leading coefficient of a - b."""
    return (a - b).sign()


def ps_val(a: PuiseuxSeries) -> TropValue:
    return a.val()


def ps_eval(a: PuiseuxSeries, t: float) -> float:
    return a.eval(t)


def dominance_threshold(a: PuiseuxSeries, b: PuiseuxSeries) -> float:
    """Threshold T0 such that a > b symbolically implies a(t) > b(t) for t >= T0.

    Bound: with d = a - b, leading term c0*t^e0 and second term at
    exponent e1, any t with t^(e0-e1) > (1 + sum|c_k|)/|c0| makes the
    leading term dominate the sum of all the others.
    """
    d = a - b
    if d.sign() == 0:
        raise ValueError("series are equal; no dominance threshold")
    terms = d.terms
    total = sum(abs(float(c)) for _, c in terms)
    if len(terms) == 1:
        return 2.0
    gap = float(terms[0][0] - terms[1][0])
    c0 = abs(float(terms[0][1]))
    return max(2.0, ((1.0 + total) / c0) ** (1.0 / gap))


def logt_map(x: Sequence[float], t: float):
    """Entrywise base-t logarithm of a positive vector."""
    if t <= 1:
        raise ValueError("logt_map requires t > 1")
    out = []
    for xi in x:
        if not xi > 0:
            raise ValueError(f"logt_map requires positive entries, got {xi}")
        out.append(math.log(xi) / math.log(t))
    return out

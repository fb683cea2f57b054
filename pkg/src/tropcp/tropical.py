"""Max-plus semifield and small tropical linear algebra.

Values are exact rationals extended with a bottom element (minus
infinity), which is neutral for tropical addition (max) and absorbing
for tropical multiplication (classical +).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

RationalLike = Union[int, str, Fraction]


class TropValue:
    """Element of the max-plus semifield: an exact rational or bottom."""

    __slots__ = ("v",)

    def __init__(self, v: RationalLike | None = None):
        object.__setattr__(self, "v", None if v is None else Fraction(v))

    def __setattr__(self, name, value):
        raise AttributeError("TropValue is immutable")

    @property
    def is_bottom(self) -> bool:
        return self.v is None

    @property
    def finite(self) -> Fraction:
        if self.v is None:
            raise ValueError("bottom element has no finite value")
        return self.v

    def plus(self, other: "TropValue") -> "TropValue":
        """Classical addition (tropical multiplication); bottom absorbs."""
        if self.v is None or other.v is None:
            return BOTTOM
        return TropValue(self.v + other.v)

    def minus(self, other: "TropValue") -> "TropValue":
        """Classical subtraction; subtrahend must be finite."""
        if other.v is None:
            raise ValueError("cannot subtract bottom")
        if self.v is None:
            return BOTTOM
        return TropValue(self.v - other.v)

    def __eq__(self, other) -> bool:
        return isinstance(other, TropValue) and self.v == other.v

    def __hash__(self) -> int:
        return hash(("TropValue", self.v))

    def __lt__(self, other: "TropValue") -> bool:
        if self.v is None:
            return other.v is not None
        if other.v is None:
            return False
        return self.v < other.v

    def __le__(self, other: "TropValue") -> bool:
        return self < other or self == other

    def __gt__(self, other: "TropValue") -> bool:
        return not self <= other

    def __ge__(self, other: "TropValue") -> bool:
        return not self < other

    def __float__(self) -> float:
        return float("-inf") if self.v is None else float(self.v)

    def __repr__(self) -> str:
        return "TropValue(-inf)" if self.v is None else f"TropValue({self.v})"

    def to_json(self) -> str:
        return "-inf" if self.v is None else str(self.v)

    @staticmethod
    def from_json(s: str) -> "TropValue":
        return BOTTOM if s == "-inf" else TropValue(Fraction(s))


#: The bottom element (minus infinity).
BOTTOM = TropValue(None)


def trop(x: Union[TropValue, RationalLike, None]) -> TropValue:
    """Coerce a rational-like or None (bottom) into a TropValue."""
    if isinstance(x, TropValue):
        return x
    return TropValue(x)


def t_add(a: TropValue, b: TropValue) -> TropValue:
    """Tropical addition: max."""
    return a if a >= b else b


def t_mul(a: TropValue, b: TropValue) -> TropValue:
    """Tropical multiplication: classical +, absorbing at bottom."""
    return a.plus(b)


ZERO = TropValue(0)


class TropVector:
    """Fixed-length vector of TropValues, ordered entrywise."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Union[TropValue, RationalLike, None]]):
        object.__setattr__(self, "entries", tuple(trop(e) for e in entries))

    def __setattr__(self, name, value):
        raise AttributeError("TropVector is immutable")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> TropValue:
        return self.entries[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, TropVector) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __le__(self, other: "TropVector") -> bool:
        if len(self) != len(other):
            raise ValueError("length mismatch")
        return all(a <= b for a, b in zip(self, other))

    def __repr__(self) -> str:
        return "TropVector(%s)" % ", ".join(e.to_json() for e in self.entries)

    def with_entry(self, i: int, value: TropValue) -> "TropVector":
        es = list(self.entries)
        es[i] = value
        return TropVector(es)

    def to_json(self) -> list[str]:
        return [e.to_json() for e in self.entries]

    @staticmethod
    def from_json(obj: list[str]) -> "TropVector":
        return TropVector(TropValue.from_json(s) for s in obj)


def t_dot(x: TropVector, y: TropVector) -> TropValue:
    """Tropical scalar product: max_i (x_i + y_i)."""
    if len(x) != len(y):
        raise ValueError("length mismatch")
    out = BOTTOM
    for a, b in zip(x, y):
        out = t_add(out, a.plus(b))
    return out


def t_comb(lam: TropValue, x: TropVector, mu: TropValue, y: TropVector) -> TropVector:
    """Tropical convex combination: entrywise max of the shifted vectors.

    Requires max(lam, mu) = 0 so the combination is affine.
    """
    if t_add(lam, mu) != ZERO:
        raise ValueError("coefficients must satisfy max(lam, mu) = 0")
    if len(x) != len(y):
        raise ValueError("length mismatch")
    return TropVector(
        t_add(lam.plus(a), mu.plus(b)) for a, b in zip(x, y)
    )

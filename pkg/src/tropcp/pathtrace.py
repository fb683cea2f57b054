"""Piecewise-linear structure of the tropical central path.

Provides the pathological LP family over Puiseux series (the instance
whose tropical path has exponentially many pieces), its closed-form
recursion and breakpoint table, and an exact tracer for the map
``mu -> barycenter(P, c, mu)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .puiseux import PuiseuxSeries
from .tropical import BOTTOM, TropValue, TropVector, trop
from .troppoly import (
    PuiseuxLP,
    TropPolyhedron,
    assumption_check,
    barycenter,
    naive_tropicalize,
)

RationalLike = Union[int, str, Fraction]


class NondegenerateFailure(Exception):
    """An interval at min_width still fails the affine-consistency test."""


# -- instance family --------------------------------------------------------


@dataclass(frozen=True)
class LWInstance:
    r: int
    plp: PuiseuxLP
    tropP: TropPolyhedron
    tropc: TropVector

    def to_json(self):
        return {
            "r": self.r,
            "lp": self.plp.to_json(),
            "tropical_polyhedron": self.tropP.to_json(),
            "tropical_objective": self.tropc.to_json(),
        }

    @staticmethod
    def from_json(obj) -> "LWInstance":
        return LWInstance(
            obj["r"],
            PuiseuxLP.from_json(obj["lp"]),
            TropPolyhedron.from_json(obj["tropical_polyhedron"]),
            TropVector.from_json(obj["tropical_objective"]),
        )


def lw_instance(r: int) -> LWInstance:
    """The 3r+1 inequality, dimension 2r long-and-winding instance.

    Rows: x1 <= t^2, x2 <= t, then for 1 <= j < r the coupling rows
    x_{2j+1} <= t x_{2j-1}, x_{2j+1} <= t x_{2j} and
    x_{2j+2} <= t^(1-1/2^j) (x_{2j-1} + x_{2j}), then
    x_{2r-1} >= 0, x_{2r} >= 0.  Objective entries are the monomials
    1, t^-1, and t^-(j+1) on each coupled pair.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    n = 2 * r
    zero = PuiseuxSeries.zero()
    one = PuiseuxSeries.constant(1)

    def row(entries: dict[int, PuiseuxSeries], rhs: PuiseuxSeries):
        A.append(tuple(entries.get(j, zero) for j in range(n)))
        b.append(rhs)

    A: list[tuple[PuiseuxSeries, ...]] = []
    b: list[PuiseuxSeries] = []
    row({0: one}, PuiseuxSeries.t(2))
    row({1: one}, PuiseuxSeries.t(1))
    for j in range(1, r):
        tpow = PuiseuxSeries.t(1)
        half = PuiseuxSeries.t(1 - Fraction(1, 2**j))
        row({2 * j: one, 2 * j - 2: -tpow}, zero)
        row({2 * j: one, 2 * j - 1: -tpow}, zero)
        row({2 * j + 1: one, 2 * j - 2: -half, 2 * j - 1: -half}, zero)
    row({n - 2: -one}, zero)
    row({n - 1: -one}, zero)

    c = [one, PuiseuxSeries.t(-1)]
    for j in range(1, r):
        c.extend([PuiseuxSeries.t(-(j + 1)), PuiseuxSeries.t(-(j + 1))])

    plp = PuiseuxLP(tuple(A), tuple(b), tuple(c[:n]))
    inst = LWInstance(r, plp, naive_tropicalize(plp), TropVector(s.val() for s in plp.c))
    report = assumption_check(plp, regular_asserted=True)
    if not report.ok:
        raise AssertionError(f"instance generator produced a bad instance: {report}")
    return inst


def lw_recursive(r: int, mu: RationalLike) -> TropVector:
    """Closed-form recursion for the tropical path point of the instance."""
    if r < 1:
        raise ValueError("r must be >= 1")
    mu = Fraction(mu)
    x: list[Fraction] = [min(mu, Fraction(2)), Fraction(1)]
    for j in range(1, r):
        a, bprev = x[2 * j - 2], x[2 * j - 1]
        x.append(1 + min(a, bprev))
        x.append((1 - Fraction(1, 2**j)) + max(a, bprev))
    return TropVector(x)


def lw_table(j: int, k: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Nondifferentiability triples (mu, x_{2j+1}, x_{2j+2}) for block j, slot k."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if not 0 <= k < 2 ** (j - 1):
        raise ValueError("k out of range")
    mus = [
        Fraction(2 * k, 2 ** (j - 1)),
        Fraction(2 * k + 1, 2 ** (j - 1)),
        Fraction(2 * (k + 1), 2 ** (j - 1)),
    ]
    odd = [
        j + Fraction(2 * k, 2**j),
        j + Fraction(2 * k + 2, 2**j),
        j + Fraction(2 * k + 2, 2**j),
    ]
    even = [
        j + Fraction(2 * k + 1, 2**j),
        j + Fraction(2 * k + 1, 2**j),
        j + Fraction(2 * k + 3, 2**j),
    ]
    return list(zip(mus, odd, even))


# -- exact tracing ----------------------------------------------------------


@dataclass(frozen=True)
class PiecewisePath:
    """Maximal affine segments of mu -> x*(mu) on [breakpoints[0], breakpoints[-1]].

    Segment i covers [breakpoints[i], breakpoints[i+1]] with value
    values[i] at its left end and per-coordinate rational slopes[i]
    (slope 0 is stored for coordinates frozen at bottom).
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[TropVector, ...]
    slopes: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.values) != len(self.slopes) or len(self.breakpoints) != len(self.values) + 1:
            raise ValueError("inconsistent segment data")

    @property
    def num_segments(self) -> int:
        return len(self.values)

    def value_at(self, mu: RationalLike) -> TropVector:
        mu = Fraction(mu)
        if not self.breakpoints[0] <= mu <= self.breakpoints[-1]:
            raise ValueError("mu outside the traced interval")
        i = max(0, min(self.num_segments - 1,
                       next(k for k in range(self.num_segments)
                            if mu <= self.breakpoints[k + 1])))
        return _affine_at(self.values[i], self.slopes[i], mu - self.breakpoints[i])

    def to_csv(self) -> str:
        n = len(self.values[0])
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(
            ["mu_left", "mu_right"]
            + [f"value_left_{i+1}" for i in range(n)]
            + [f"slope_{i+1}" for i in range(n)]
        )
        for i in range(self.num_segments):
            w.writerow(
                [str(self.breakpoints[i]), str(self.breakpoints[i + 1])]
                + [v.to_json() for v in self.values[i]]
                + [str(s) for s in self.slopes[i]]
            )
        return buf.getvalue()


def _affine_at(value: TropVector, slope: tuple[Fraction, ...], dmu: Fraction) -> TropVector:
    return TropVector(
        BOTTOM if v.is_bottom else TropValue(v.finite + s * dmu)
        for v, s in zip(value, slope)
    )


def count_pieces(path: PiecewisePath) -> int:
    return path.num_segments


def bary_volume(x: TropVector) -> TropValue:
    """Sum of the coordinates; bottom absorbs."""
    out = TropValue(0)
    for xi in x:
        out = out.plus(xi)
    return out


def _segment_slope(vlo: TropVector, vhi: TropVector, width: Fraction):
    slope = []
    for a, b in zip(vlo, vhi):
        if a.is_bottom != b.is_bottom:
            return None
        if a.is_bottom:
            slope.append(Fraction(0))
        else:
            slope.append((b.finite - a.finite) / width)
    return tuple(slope)


def trace(
    P: TropPolyhedron,
    cval: TropVector,
    mu_lo: RationalLike,
    mu_hi: RationalLike,
    min_width: Optional[RationalLike] = None,
) -> PiecewisePath:
    """Exact breakpoints of mu -> barycenter(P, cval, mu) on [mu_lo, mu_hi].

    Recursive bisection with an exact rational affinity test: an interval
    counts as one piece only if the values at its midpoint and third
    point both lie on the chord of its endpoints (two interior probes
    defeat symmetric kinks).  Adjacent equal-slope segments are merged.
    """
    mu_lo, mu_hi = Fraction(mu_lo), Fraction(mu_hi)
    if not mu_lo < mu_hi:
        raise ValueError("mu_lo must be < mu_hi")
    min_width = Fraction(1, 4096) if min_width is None else Fraction(min_width)

    cache: dict[Fraction, TropVector] = {}

    def value(mu: Fraction) -> TropVector:
        if mu not in cache:
            cache[mu] = barycenter(P, cval, TropValue(mu))
        return cache[mu]

    def is_affine(lo: Fraction, hi: Fraction) -> Optional[tuple]:
        width = hi - lo
        vlo, vhi = value(lo), value(hi)
        slope = _segment_slope(vlo, vhi, width)
        if slope is None:
            return None
        for probe in (lo + width / 2, lo + width / 3):
            if value(probe) != _affine_at(vlo, slope, probe - lo):
                return None
        return slope

    segments: list[tuple[Fraction, Fraction, TropVector, tuple]] = []

    def split(lo: Fraction, hi: Fraction):
        slope = is_affine(lo, hi)
        if slope is not None:
            segments.append((lo, hi, value(lo), slope))
            return
        if hi - lo < min_width:
            raise NondegenerateFailure(
                f"interval [{lo}, {hi}] narrower than min_width is still nonaffine"
            )
        mid = (lo + hi) / 2
        split(lo, mid)
        split(mid, hi)

    split(mu_lo, mu_hi)

    merged: list[list] = []
    for lo, hi, vlo, slope in segments:
        if merged and merged[-1][3] == slope:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi, vlo, slope])

    breakpoints = tuple(s[0] for s in merged) + (merged[-1][1],)
    return PiecewisePath(
        breakpoints,
        tuple(s[2] for s in merged),
        tuple(s[3] for s in merged),
    )

"""Tropical polyhedra as decomposed upper-bound constraint systems.

A constraint is either ``shift + x_j <= rhs(x)`` or ``level <= rhs(x)``
where rhs is a tropical affine form ``const v max_i (coef_i + x_i)``.
This class covers every system used by the pathological LP family and
the sublevel construction, and admits a sound greatest-fixpoint
computation of the greatest element.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .puiseux import PuiseuxSeries
from .tropical import BOTTOM, TropValue, TropVector, t_add, trop


class Unbounded(Exception):
    """Some coordinate has no finite upper bound derivable from the system."""


class Empty(Exception):
    """A ground constraint fails at the greatest candidate: the set is empty."""


class SignUnsafe(ValueError):
    """A coefficient series cannot be tropicalized term-wise."""


@dataclass(frozen=True)
class TropAffineForm:
    """const v (coeffs_1 + x_1) v ... v (coeffs_n + x_n)."""

    const: TropValue
    coeffs: TropVector

    def __call__(self, x: TropVector) -> TropValue:
        out = self.const
        for c, xi in zip(self.coeffs, x):
            out = t_add(out, c.plus(xi))
        return out

    @staticmethod
    def constant(value: TropValue, dim: int) -> "TropAffineForm":
        return TropAffineForm(value, TropVector([BOTTOM] * dim))

    def to_json(self):
        return {"const": self.const.to_json(), "coeffs": self.coeffs.to_json()}

    @staticmethod
    def from_json(obj) -> "TropAffineForm":
        return TropAffineForm(
            TropValue.from_json(obj["const"]), TropVector.from_json(obj["coeffs"])
        )


@dataclass(frozen=True)
class UpperConstraint:
    """var is None: ``offset <= rhs(x)``; else ``offset + x_var <= rhs(x)``.

    The offset of a variable constraint is always finite.
    """

    rhs: TropAffineForm
    offset: TropValue
    var: Optional[int] = None

    def holds(self, x: TropVector) -> bool:
        lhs = self.offset if self.var is None else self.offset.plus(x[self.var])
        return lhs <= self.rhs(x)

    def to_json(self):
        if self.var is None:
            lhs = {"ground": self.offset.to_json()}
        else:
            lhs = {"var": self.var, "shift": self.offset.to_json()}
        return {"lhs": lhs, "rhs": self.rhs.to_json()}

    @staticmethod
    def from_json(obj) -> "UpperConstraint":
        lhs = obj["lhs"]
        rhs = TropAffineForm.from_json(obj["rhs"])
        if "ground" in lhs:
            return UpperConstraint(rhs, TropValue.from_json(lhs["ground"]))
        return UpperConstraint(rhs, TropValue.from_json(lhs["shift"]), lhs["var"])


@dataclass(frozen=True)
class TropPolyhedron:
    dim: int
    constraints: tuple[UpperConstraint, ...]

    def to_json(self):
        return {
            "dim": self.dim,
            "constraints": [c.to_json() for c in self.constraints],
        }

    @staticmethod
    def from_json(obj) -> "TropPolyhedron":
        return TropPolyhedron(
            obj["dim"],
            tuple(UpperConstraint.from_json(c) for c in obj["constraints"]),
        )


def decompose(
    ground: TropValue,
    lhs_terms: Iterable[tuple[int, TropValue]],
    rhs: TropAffineForm,
) -> list[UpperConstraint]:
    """Split ``ground v max_j (shift_j + x_j) <= rhs(x)`` into upper constraints.

    One constraint per left-hand term; terms with bottom shift are dropped
    (they can never attain the maximum).
    """
    out = []
    if not ground.is_bottom:
        out.append(UpperConstraint(rhs, ground))
    for j, shift in lhs_terms:
        if not shift.is_bottom:
            out.append(UpperConstraint(rhs, shift, j))
    return out


def member(P: TropPolyhedron, x: TropVector) -> bool:
    if len(x) != P.dim:
        raise ValueError("dimension mismatch")
    return all(c.holds(x) for c in P.constraints)


_TOP = object()  # above every TropValue during the decreasing iteration


def _rhs_partial(form: TropAffineForm, vals: list) -> object:
    """Evaluate a form when some coordinates are still at the top sentinel."""
    out = form.const
    for c, v in zip(form.coeffs, vals):
        if c.is_bottom:
            continue
        if v is _TOP:
            return _TOP
        out = t_add(out, c.plus(v))
    return out


def greatest(P: TropPolyhedron) -> TropVector:
    """Greatest element of P, by decreasing Kleene iteration from the top.

    Raises Unbounded if a coordinate keeps no derivable finite bound, and
    Empty if a ground constraint fails at the stabilized candidate.
    """
    n = P.dim
    var_cons: list[list[UpperConstraint]] = [[] for _ in range(n)]
    consts: list[Fraction] = []
    magnitudes: list[Fraction] = [Fraction(0)]
    for c in P.constraints:
        if c.var is not None:
            var_cons[c.var].append(c)
            magnitudes.append(abs(c.offset.finite))
        if not c.rhs.const.is_bottom:
            consts.append(c.rhs.const.finite)
        for coef in c.rhs.coeffs:
            if not coef.is_bottom:
                magnitudes.append(abs(coef.finite))
        if c.var is None and not c.offset.is_bottom:
            consts.append(c.offset.finite)
    low = (min(consts) if consts else Fraction(0)) - (n + 1) * max(magnitudes) - 1
    low_tv = TropValue(low)

    vals: list = [_TOP] * n
    rounds = 0
    while True:
        rounds += 1
        changed = False
        for j in range(n):
            cur = vals[j]
            if cur is not _TOP and cur.is_bottom:
                continue
            new = cur
            for c in var_cons[j]:
                rhs = _rhs_partial(c.rhs, vals)
                if rhs is _TOP:
                    continue
                bound = rhs.minus(c.offset)
                if new is _TOP or bound < new:
                    new = bound
            if new is not _TOP and not new.is_bottom and new < low_tv:
                new = BOTTOM  # diverging toward minus infinity
            if new is not cur and new != cur:
                vals[j] = new
                changed = True
        still_top = any(v is _TOP for v in vals)
        if still_top and (not changed or rounds > n + 1):
            # top-resolution propagates along dependency chains of length <= n
            raise Unbounded("a coordinate admits no finite upper bound")
        if not changed:
            break
        if rounds > 100000:
            raise RuntimeError("fixpoint iteration failed to stabilize")

    x = TropVector(v for v in vals)
    for c in P.constraints:
        if c.var is None and not c.holds(x):
            raise Empty("ground constraint violated at the greatest candidate")
    return x


def sublevel(P: TropPolyhedron, cval: TropVector, mu: TropValue) -> TropPolyhedron:
    """Intersect P with ``max_i (cval_i + x_i) <= mu``, decomposed entrywise."""
    if len(cval) != P.dim:
        raise ValueError("dimension mismatch")
    if any(c.is_bottom for c in cval):
        raise ValueError("objective valuation must be finite entrywise")
    bound = TropAffineForm.constant(mu, P.dim)
    extra = decompose(BOTTOM, [(i, cval[i]) for i in range(P.dim)], bound)
    return TropPolyhedron(P.dim, P.constraints + tuple(extra))


def barycenter(P: TropPolyhedron, cval: TropVector, mu: TropValue) -> TropVector:
    """Greatest element of the sublevel set: the tropical barycenter."""
    return greatest(sublevel(P, cval, mu))


# -- tropicalization of LPs over Puiseux series -----------------------------


@dataclass(frozen=True)
class PuiseuxLP:
    """Rows encode A x <= b over Puiseux series, with objective c."""

    A: tuple[tuple[PuiseuxSeries, ...], ...]
    b: tuple[PuiseuxSeries, ...]
    c: tuple[PuiseuxSeries, ...]

    def __post_init__(self):
        m, n = self.shape
        if len(self.b) != m or any(len(row) != n for row in self.A):
            raise ValueError("inconsistent dimensions")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.A), len(self.c)

    def to_json(self):
        return {
            "A": [[e.to_json() for e in row] for row in self.A],
            "b": [e.to_json() for e in self.b],
            "c": [e.to_json() for e in self.c],
        }

    @staticmethod
    def from_json(obj) -> "PuiseuxLP":
        return PuiseuxLP(
            tuple(tuple(PuiseuxSeries.from_json(e) for e in row) for row in obj["A"]),
            tuple(PuiseuxSeries.from_json(e) for e in obj["b"]),
            tuple(PuiseuxSeries.from_json(e) for e in obj["c"]),
        )


def _monomial_val(s: PuiseuxSeries, what: str) -> TropValue:
    if s.is_zero:
        return BOTTOM
    if not s.is_monomial:
        raise SignUnsafe(f"{what} has several terms; term-wise valuation unsound")
    return s.val()


def naive_tropicalize(plp: PuiseuxLP) -> TropPolyhedron:
    """Sign-safe term-wise tropicalization of ``A x <= b``.

    Each row is rearranged so both sides carry only nonnegative monomial
    coefficients, then mapped through the valuation and decomposed.
    Multi-term coefficients are refused (cancellation could make the
    term-wise valuation unsound).
    """
    m, n = plp.shape
    constraints: list[UpperConstraint] = []
    for i in range(m):
        lhs_terms: list[tuple[int, TropValue]] = []
        rhs_coeffs = [BOTTOM] * n
        for j in range(n):
            a = plp.A[i][j]
            if a.is_zero:
                continue
            if a.sign() > 0:
                lhs_terms.append((j, _monomial_val(a, f"A[{i}][{j}]")))
            else:
                rhs_coeffs[j] = _monomial_val(-a, f"A[{i}][{j}]")
        b = plp.b[i]
        ground = BOTTOM
        rhs_const = BOTTOM
        if not b.is_zero:
            if b.sign() > 0:
                rhs_const = _monomial_val(b, f"b[{i}]")
            else:
                ground = _monomial_val(-b, f"b[{i}]")
        rhs = TropAffineForm(rhs_const, TropVector(rhs_coeffs))
        constraints.extend(decompose(ground, lhs_terms, rhs))
    return TropPolyhedron(n, tuple(constraints))


# -- structural assumption checks -------------------------------------------


@dataclass(frozen=True)
class AssumptionReport:
    """Per-item verdicts: 'pass', 'fail', 'unknown', 'asserted', 'not checked'."""

    contains_origin: str
    regular_valuation: str
    positive_objective: str

    @property
    def ok(self) -> bool:
        return (
            self.contains_origin == "pass"
            and self.positive_objective == "pass"
            and self.regular_valuation in ("asserted", "pass")
        )


def _nonnegativity_closure(plp: PuiseuxLP) -> set[int]:
    """Coordinates provably nonnegative over the feasible set.

    Seeds: rows ``-m x_j <= b`` with m a positive monomial and b <= 0.
    Propagation: rows ``p x_k - q x_j <= b`` with p, q positive monomials
    and b <= 0 give x_j >= (p/q) x_k, so x_k >= 0 implies x_j >= 0.
    """
    m, n = plp.shape
    known: set[int] = set()
    rules: list[tuple[int, int]] = []  # (k, j): x_k >= 0 implies x_j >= 0
    zero = PuiseuxSeries.zero()
    for i in range(m):
        if plp.b[i] > zero:
            continue
        nz = [(j, plp.A[i][j]) for j in range(n) if not plp.A[i][j].is_zero]
        if len(nz) == 1 and nz[0][1].sign() < 0 and nz[0][1].is_monomial:
            known.add(nz[0][0])
        elif len(nz) == 2:
            (j1, a1), (j2, a2) = nz
            if a1.is_monomial and a2.is_monomial:
                if a1.sign() > 0 and a2.sign() < 0:
                    rules.append((j1, j2))
                elif a2.sign() > 0 and a1.sign() < 0:
                    rules.append((j2, j1))
    changed = True
    while changed:
        changed = False
        for k, j in rules:
            if k in known and j not in known:
                known.add(j)
                changed = True
    return known


def assumption_check(plp: PuiseuxLP, regular_asserted: bool = False) -> AssumptionReport:
    """Syntactic checks of the structural requirements on (P, c).

    (origin) the zero vector satisfies every row and nonnegativity of every
    coordinate is derivable by propagation; (regular) reported as asserted
    only when the instance generator vouches for it; (objective) every
    objective entry is symbolically positive.
    """
    m, n = plp.shape
    zero = PuiseuxSeries.zero()
    origin_ok = all(zero <= plp.b[i] for i in range(m))
    if not origin_ok:
        origin = "fail"
    elif _nonnegativity_closure(plp) == set(range(n)):
        origin = "pass"
    else:
        origin = "unknown"
    positive = "pass" if all(cj > zero for cj in plp.c) else "fail"
    regular = "asserted" if regular_asserted else "not checked"
    return AssumptionReport(origin, regular, positive)

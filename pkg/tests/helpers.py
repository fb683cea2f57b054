"""Shared test utilities: random tropical systems and a grid oracle."""

from fractions import Fraction

import numpy as np

from tropcp.tropical import BOTTOM, TropValue, TropVector
from tropcp.troppoly import TropAffineForm, TropPolyhedron, UpperConstraint


def random_system(rng, max_dim=3):
    """Random decomposed system with a ground bound on every variable.

    Integer data in [-3, 3]; every variable gets an explicit upper bound
    so the greatest element is always defined (possibly of an empty set).
    """
    n = int(rng.integers(1, max_dim + 1))
    cons = []
    for j in range(n):
        bound = TropAffineForm.constant(TropValue(int(rng.integers(-3, 4))), n)
        cons.append(UpperConstraint(bound, TropValue(0), j))
    for _ in range(int(rng.integers(0, 5))):
        coeffs = [
            BOTTOM if rng.random() < 0.6 else TropValue(int(rng.integers(-3, 4)))
            for _ in range(n)
        ]
        const = BOTTOM if rng.random() < 0.5 else TropValue(int(rng.integers(-3, 4)))
        rhs = TropAffineForm(const, TropVector(coeffs))
        if rng.random() < 0.2:
            cons.append(UpperConstraint(rhs, TropValue(int(rng.integers(-3, 4)))))
        else:
            j = int(rng.integers(0, n))
            cons.append(UpperConstraint(rhs, TropValue(int(rng.integers(-3, 4))), j))
    return TropPolyhedron(n, tuple(cons))


def grid_members(P, step=Fraction(1, 4), lo=-6, hi=6):
    """All grid points of ([lo, hi] step `step`, plus bottom)^dim inside P.

    Vectorized in floats; quarter-integer data is exact in binary, and
    bottom is represented by -inf (never added to another -inf here since
    constraint shifts and coefficients are finite).
    """
    n = P.dim
    axis = np.arange(float(lo), float(hi) + 1e-9, float(step))
    axis = np.concatenate([[-np.inf], axis])
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1)
    ok = np.ones(len(X), dtype=bool)
    for c in P.constraints:
        if c.var is None:
            lhs = float(c.offset)
        else:
            lhs = float(c.offset) + X[:, c.var]
        rhs = np.full(len(X), float(c.rhs.const))
        for i, coef in enumerate(c.rhs.coeffs):
            if coef.is_bottom:
                continue
            rhs = np.maximum(rhs, float(coef) + X[:, i])
        ok &= lhs <= rhs
    return X[ok]

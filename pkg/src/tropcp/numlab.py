"""Numeric ground truth at finite t.

Instantiates LPs over Puiseux series at a concrete parameter, computes
entropic central-path points as means of exponential densities over the
polytope (hit-and-run with exact truncated-exponential chord sampling,
or closed-form oracles on axis-aligned boxes), computes logarithmic
central-path points by damped Newton, and runs log-limit convergence
experiments against the exact tropical prediction.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .puiseux import logt_map
from .tropical import TropValue, TropVector
from .troppoly import PuiseuxLP, barycenter
from .pathtrace import lw_instance


class NoInteriorFound(Exception):
    """No strictly feasible point could be produced."""


class ChordDegeneracy(Exception):
    """Hit-and-run repeatedly found zero-length chords."""


class MaxIterations(Exception):
    """Newton failed to reach the gradient tolerance."""


class LineSearchStall(Exception):
    """Backtracking could not find an acceptable feasible step."""


@dataclass(frozen=True)
class NumericLP:
    """Dense real instantiation {x : A x <= b} with objective c at parameter t."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    t: float

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    def slacks(self, x: np.ndarray) -> np.ndarray:
        return self.b - self.A @ x


@dataclass(frozen=True)
class SamplerConfig:
    chains: int = 8
    burn_in: int = 2000
    samples_per_chain: int = 20000
    seed: int = 20240901

    def __post_init__(self):
        if min(self.chains, self.burn_in, self.samples_per_chain) <= 0:
            raise ValueError("sampler configuration entries must be positive")


@dataclass(frozen=True)
class NewtonConfig:
    gradient_tolerance: float = 1e-9
    max_iterations: int = 200
    shrink: float = 0.5
    sufficient_decrease: float = 1e-4

    def __post_init__(self):
        if self.gradient_tolerance <= 0:
            raise ValueError("tolerance must be positive")


def instantiate(plp: PuiseuxLP, t: float) -> NumericLP:
    """Entrywise evaluation of a Puiseux LP at a concrete t > 1."""
    if t <= 1:
        raise ValueError("instantiation requires t > 1")
    m, n = plp.shape
    A = np.array([[plp.A[i][j].eval(t) for j in range(n)] for i in range(m)])
    b = np.array([plp.b[i].eval(t) for i in range(m)])
    c = np.array([plp.c[j].eval(t) for j in range(n)])
    return NumericLP(A, b, c, t)


def rescale_lp(nlp: NumericLP, exponents: Sequence[float]) -> NumericLP:
    """Diagonal substitution x_j = t^h_j u_j, with row renormalization.

    Returns the LP in u-coordinates; row scaling changes neither the
    polytope nor the log barrier's gradient.
    """
    scale = np.power(nlp.t, np.asarray(exponents, dtype=float))
    A = nlp.A * scale[None, :]
    b = nlp.b.copy()
    rows = np.maximum(np.abs(A).max(axis=1), np.abs(b))
    rows[rows == 0] = 1.0
    return NumericLP(A / rows[:, None], b / rows, nlp.c * scale, nlp.t)


def interior_seed(nlp: NumericLP, hint: Optional[TropVector] = None) -> np.ndarray:
    """A strictly feasible point, by lifting a hint or probing small multiples of 1.

    With a hint (an interior point of the tropicalized feasible set) the
    candidate is t**hint entrywise; otherwise delta * ones for
    delta in {1, 1/t, 1/t^2}.  The first candidate that is feasible with
    a relative margin is returned.
    """
    n = nlp.dim
    candidates = []
    if hint is not None:
        candidates.append(np.power(nlp.t, np.array([float(h) for h in hint])))
    else:
        for k in range(3):
            candidates.append(np.full(n, nlp.t ** (-k)))
    margin = 1e-12
    for x in candidates:
        s = nlp.slacks(x)
        if np.all(s > margin * np.maximum(1.0, np.abs(nlp.b))):
            return x
    raise NoInteriorFound("all interior candidates violated a constraint")


# -- truncated exponential primitives ---------------------------------------


def _trunc_exp_unit_sample(a: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse CDF on [0, 1] of the density proportional to exp(-a*s).

    Vectorized and stable for a of either sign and large magnitude.
    """
    a = np.asarray(a, dtype=float)
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    tiny = np.abs(a) < 1e-12
    out[tiny] = u[tiny]
    pos = (~tiny) & (a > 0)
    neg = (~tiny) & (a < 0)
    if pos.any():
        ap = a[pos]
        out[pos] = -np.log1p(u[pos] * np.expm1(-ap)) / ap
    if neg.any():
        # mirror symmetry avoids overflow in expm1 for very negative a
        an = -a[neg]
        out[neg] = 1.0 - (-np.log1p((1.0 - u[neg]) * np.expm1(-an)) / an)
    return out


def _trunc_exp_mean_fraction(a: np.ndarray) -> np.ndarray:
    """Mean on [0, 1] of the density proportional to exp(-a*s)."""
    a = np.asarray(a, dtype=float)
    out = np.empty_like(a)
    small = np.abs(a) < 1e-5
    out[small] = 0.5 - a[small] / 12.0
    big = ~small
    ab = a[big]
    # expm1 overflow to inf is the correct limit here: 1/inf == 0
    with np.errstate(over="ignore"):
        out[big] = 1.0 / ab - 1.0 / np.expm1(ab)
    return out


def box_oracle(
    lower: Sequence[float], upper: Sequence[float], rate: Sequence[float]
) -> tuple[float, np.ndarray]:
    """Exact log-integral and mean of exp(-<rate, x>) over a box.

    The box is the product of [lower_i, upper_i]; computed per coordinate
    in the log domain (the density factorizes).
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    r = np.asarray(rate, dtype=float)
    if lo.shape != hi.shape or lo.shape != r.shape:
        raise ValueError("shape mismatch")
    if np.any(hi < lo):
        raise ValueError("empty box")
    if np.any(r <= 0):
        raise ValueError("rates must be positive")
    w = hi - lo
    a = r * w
    small = a < 1e-8
    log1d = np.empty_like(a)
    log1d[small] = np.log(w[small]) + np.log1p(-a[small] / 2.0)
    ab = a[~small]
    log1d[~small] = np.log(-np.expm1(-ab)) - np.log(r[~small])
    log_integral = float(np.sum(-r * lo + log1d))
    mean = lo + w * _trunc_exp_mean_fraction(a)
    return log_integral, mean


# -- entropic path points by hit-and-run ------------------------------------


@dataclass(frozen=True)
class EntropicEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    chain_means: np.ndarray


def entropic_estimate(
    nlp: NumericLP,
    mu_t: float,
    cfg: SamplerConfig,
    start: Optional[np.ndarray] = None,
) -> EntropicEstimate:
    """Monte-Carlo mean of the density exp(-<c/mu, x>) over {A x <= b}.

    Hit-and-run with uniform sphere directions; the restriction of the
    density to a chord is a truncated exponential, sampled by its exact
    inverse CDF.  Chains advance in lockstep from perturbed copies of the
    start point; results are deterministic given the seed.
    """
    if mu_t <= 0:
        raise ValueError("mu must be positive")
    theta = nlp.c / mu_t
    x0 = interior_seed(nlp) if start is None else np.asarray(start, dtype=float)
    k, n, m = cfg.chains, nlp.dim, nlp.A.shape[0]
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))

    X = np.tile(x0, (k, 1))
    pert = 1.0 + 0.01 * (rng.random((k, n)) - 0.5)
    Xp = X * pert
    feas = np.all(nlp.b[None, :] - Xp @ nlp.A.T > 0, axis=1)
    X[feas] = Xp[feas]

    degenerate = 0
    sums = np.zeros((k, n))
    total = cfg.burn_in + cfg.samples_per_chain
    for step in range(total):
        d = rng.standard_normal((k, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        ad = d @ nlp.A.T
        slack = nlp.b[None, :] - X @ nlp.A.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = slack / ad
        hi = np.where(ad > 1e-14, ratio, np.inf).min(axis=1)
        lo = np.where(ad < -1e-14, ratio, -np.inf).max(axis=1)
        w = hi - lo
        ok = np.isfinite(w) & (w > 0)
        if not ok.all():
            degenerate += 1
            if degenerate > 100:
                raise ChordDegeneracy("repeated zero-length or unbounded chords")
        rate = (d @ theta) * w
        u = rng.random(k)
        s = lo + w * _trunc_exp_unit_sample(rate, u)
        X = np.where(ok[:, None], X + s[:, None] * d, X)
        if step >= cfg.burn_in:
            sums += X
    chain_means = sums / cfg.samples_per_chain
    mean = chain_means.mean(axis=0)
    stderr = chain_means.std(axis=0, ddof=1) / math.sqrt(k)
    return EntropicEstimate(mean, stderr, chain_means)


def entropic_point(
    nlp: NumericLP,
    mu_t: float,
    cfg: SamplerConfig,
    start: Optional[np.ndarray] = None,
) -> np.ndarray:
    return entropic_estimate(nlp, mu_t, cfg, start).mean


# -- logarithmic path points by damped Newton -------------------------------


def log_barrier_objective(
    nlp: NumericLP, mu_t: float, x: np.ndarray
) -> tuple[float, np.ndarray]:
    """Value and gradient of <c, x> - mu * sum_i log(b_i - A_i x)."""
    s = nlp.slacks(x)
    if np.any(s <= 0):
        raise ValueError("point is not strictly feasible")
    f = float(nlp.c @ x - mu_t * np.sum(np.log(s)))
    g = nlp.c + mu_t * (nlp.A.T @ (1.0 / s))
    return f, g


def log_point(
    nlp: NumericLP,
    mu_t: float,
    cfg: NewtonConfig,
    start: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Minimizer of the log-barrier objective, by damped Newton.

    Backtracking keeps iterates strictly feasible and enforces sufficient
    decrease; terminates when the gradient norm drops below the tolerance
    scaled by (1 + mu_t), the natural size of the barrier gradient.
    """
    x = interior_seed(nlp) if start is None else np.asarray(start, dtype=float).copy()
    gtol = cfg.gradient_tolerance * (1.0 + mu_t)
    f, g = log_barrier_objective(nlp, mu_t, x)
    for _ in range(cfg.max_iterations):
        if np.linalg.norm(g) <= gtol:
            return x
        s = nlp.slacks(x)
        W = nlp.A / s[:, None]
        H = mu_t * (W.T @ W)
        try:
            d = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            d = -np.linalg.solve(H + 1e-12 * np.eye(nlp.dim), g)
        gd = float(g @ d)
        if gd > 0:
            d, gd = -g, -float(g @ g)
        alpha = 1.0
        for _ in range(200):
            xn = x + alpha * d
            if np.all(nlp.slacks(xn) > 0):
                fn, gn = log_barrier_objective(nlp, mu_t, xn)
                if fn <= f + cfg.sufficient_decrease * alpha * gd:
                    break
            alpha *= cfg.shrink
        else:
            raise LineSearchStall("no acceptable feasible step found")
        x, f, g = xn, fn, gn
    if np.linalg.norm(g) <= gtol:
        return x
    raise MaxIterations("gradient tolerance not reached")


# -- convergence experiments ------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    t: float
    mu_exponent: Fraction
    barrier: str  # "entropic" or "log"
    coord: int
    logt_value: float
    tropical_target: float

    @property
    def abs_error(self) -> float:
        return abs(self.logt_value - self.tropical_target)


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ReportRow, ...]
    seed: int

    def errors(self, barrier: str, t: Optional[float] = None) -> list[float]:
        return [
            r.abs_error
            for r in self.rows
            if r.barrier == barrier and (t is None or r.t == t)
        ]

    def max_abs_error(self, barrier: str, t: float) -> float:
        return max(self.errors(barrier, t))

    def t_values(self) -> list[float]:
        seen = []
        for r in self.rows:
            if r.t not in seen:
                seen.append(r.t)
        return seen

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# seed={self.seed}\n")
        w = csv.writer(buf)
        w.writerow(
            ["t", "mu_exponent", "barrier", "coord", "logt_value",
             "tropical_target", "abs_error"]
        )
        for r in self.rows:
            w.writerow(
                [
                    f"{r.t:.17g}",
                    str(r.mu_exponent),
                    r.barrier,
                    r.coord,
                    f"{r.logt_value:.17g}",
                    f"{r.tropical_target:.17g}",
                    f"{r.abs_error:.17g}",
                ]
            )
        return buf.getvalue()


def box_lp(upper: Sequence[float], rate: Sequence[float], t: float = 10.0) -> NumericLP:
    """The box [0, upper] as an inequality system with objective `rate`."""
    hi = np.asarray(upper, dtype=float)
    r = np.asarray(rate, dtype=float)
    n = hi.size
    A = np.vstack([np.eye(n), -np.eye(n)])
    b = np.concatenate([hi, np.zeros(n)])
    return NumericLP(A, b, r, t)


def sampler_box_check(
    dim: int,
    seed: int,
    cfg: Optional[SamplerConfig] = None,
    num_boxes: int = 3,
) -> float:
    """Worst sampler deviation from the box oracle, in standard errors."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(num_boxes):
        hi = rng.uniform(1.0, 4.0, dim)
        rate = rng.uniform(0.2, 2.0, dim)
        box_cfg = cfg or SamplerConfig(seed=seed + i)
        est = entropic_estimate(box_lp(hi, rate), 1.0, box_cfg)
        _, mean = box_oracle(np.zeros(dim), hi, rate)
        z = np.abs(est.mean - mean) / np.maximum(est.stderr, 1e-12)
        worst = max(worst, float(z.max()))
    return worst


def interior_hint(target: TropVector, eps: Optional[Fraction] = None) -> TropVector:
    """Shift the barycenter into the interior of the tropical feasible set.

    Subtracting eps * (1, 2, ..., n) gives every upper-bound constraint of
    the instance family strict slack, since each variable only depends on
    lower-indexed ones.
    """
    n = len(target)
    eps = Fraction(1, 2 * n) if eps is None else Fraction(eps)
    return TropVector(
        TropValue(v.finite - eps * (i + 1)) for i, v in enumerate(target)
    )


def converge(
    lw_r: int,
    mu_exponent: Union[int, str, Fraction],
    t_grid: Sequence[float],
    scfg: Optional[SamplerConfig] = None,
    ncfg: Optional[NewtonConfig] = None,
    barriers: Sequence[str] = ("entropic", "log"),
    rescale: bool = True,
) -> ConvergenceReport:
    """Log-limit experiment: both central paths against the tropical target.

    For each t, the instance is instantiated, mu(t) = t^mu_exponent, and
    the base-t logarithms of the entropic and/or logarithmic path points
    are compared entrywise with the exact tropical barycenter.
    """
    t_grid = list(t_grid)
    if not t_grid:
        raise ValueError("t grid must be nonempty")
    if any(t <= 1 for t in t_grid) or sorted(t_grid) != t_grid:
        raise ValueError("t grid must be increasing with entries > 1")
    scfg = scfg or SamplerConfig()
    ncfg = ncfg or NewtonConfig()
    mu_exponent = Fraction(mu_exponent)

    inst = lw_instance(lw_r)
    target = barycenter(inst.tropP, inst.tropc, TropValue(mu_exponent))
    tgt = np.array([float(v) for v in target])
    hint = interior_hint(target)

    rows: list[ReportRow] = []
    for t in t_grid:
        nlp = instantiate(inst.plp, t)
        mu_t = t ** float(mu_exponent)
        h = tgt if rescale else np.zeros(nlp.dim)
        work = rescale_lp(nlp, h)
        hint_scaled = TropVector(
            TropValue(Fraction(v.finite) - Fraction(hj)) for v, hj in zip(hint, tgt if rescale else [0] * nlp.dim)
        )
        u0 = interior_seed(work, hint_scaled)
        for barrier_name in barriers:
            if barrier_name == "entropic":
                u = entropic_estimate(work, mu_t, scfg, start=u0).mean
            elif barrier_name == "log":
                u = log_point(work, mu_t, ncfg, start=u0)
            else:
                raise ValueError(f"unknown barrier {barrier_name!r}")
            logt = h + np.array(logt_map(u, t))
            for j in range(nlp.dim):
                rows.append(
                    ReportRow(t, mu_exponent, barrier_name, j + 1, float(logt[j]), float(tgt[j]))
                )
    return ConvergenceReport(tuple(rows), scfg.seed)

"""Acceptance gate: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math
import statistics
from fractions import Fraction

import numpy as np

from helpers import grid_members, random_system
from tropcp import numlab as N
from tropcp.pathtrace import (
    count_pieces,
    lw_instance,
    lw_recursive,
    lw_table,
    trace,
)
from tropcp.puiseux import PuiseuxSeries, logt_map, ps_cmp, ps_eval
from tropcp.tropical import TropValue, TropVector
from tropcp.troppoly import Empty, barycenter, greatest, member

T_GRID_ENTROPIC = [10.0, 10**1.5, 100.0, 10**2.5, 1000.0]
T_GRID_LOG = [100.0, 1000.0, 10000.0]
MU_EXPONENTS = (Fraction(0), Fraction(1), Fraction(3, 2))


def passline(i, text):
    print(f"\n[criterion {i:02d}] PASS  {text}")


def test_criterion_01_table_reproduction():
    r = 8
    inst = lw_instance(r)
    checked = 0
    for j in range(1, r):
        for k in range(2 ** (j - 1)):
            for mu, odd, even in lw_table(j, k):
                rec = lw_recursive(r, mu)
                assert rec[2 * j] == TropValue(odd)
                assert rec[2 * j + 1] == TropValue(even)
                assert barycenter(inst.tropP, inst.tropc, TropValue(mu)) == rec
                checked += 1
    passline(1, f"table values match recursion and barycenter exactly ({checked} triples)")


def test_criterion_02_piece_count():
    for r in range(1, 9):
        inst = lw_instance(r)
        path = trace(inst.tropP, inst.tropc, 0, 2, Fraction(1, 2 ** (2 * r + 4)))
        assert count_pieces(path) == 2 ** (r - 1)
    passline(2, "piece counts equal 2^(r-1) for r = 1..8")


def test_criterion_03_oracle_equivalence():
    rng = np.random.default_rng(2024)
    for r in range(1, 7):
        inst = lw_instance(r)
        for _ in range(64):
            d = int(rng.integers(1, 49))
            mu = Fraction(int(rng.integers(0, 2 * d + 1)), d)
            assert barycenter(inst.tropP, inst.tropc, TropValue(mu)) == lw_recursive(r, mu)
    passline(3, "fixpoint barycenter equals the closed-form recursion (6 x 64 draws)")


def test_criterion_04_grid_oracle():
    rng = np.random.default_rng(404)
    n_checked = 0
    for _ in range(200):
        P = random_system(rng)
        pts = grid_members(P)
        try:
            x = greatest(P)
        except Empty:
            assert len(pts) == 0
            n_checked += 1
            continue
        assert member(P, x)
        xf = np.array([float(v) for v in x])
        assert np.all(pts <= xf + 1e-9)
        n_checked += 1
    assert n_checked == 200
    passline(4, "grid enumeration confirms membership and domination on 200 systems")


def test_criterion_05_entropic_convergence():
    for exp in MU_EXPONENTS:
        rep = N.converge(2, exp, T_GRID_ENTROPIC, barriers=("entropic",))
        medians = [statistics.median(rep.errors("entropic", t)) for t in rep.t_values()]
        for a, b in zip(medians, medians[1:]):
            assert b < a + 0.02, f"median error not decreasing at exponent {exp}: {medians}"
        assert rep.max_abs_error("entropic", 1000.0) <= 0.25
    passline(5, "entropic log-t errors decrease in median and are <= 0.25 at t = 1e3")


def test_criterion_06_log_path_coincidence():
    for exp in MU_EXPONENTS:
        rep = N.converge(2, exp, T_GRID_LOG, barriers=("log",))
        maxes = [rep.max_abs_error("log", t) for t in rep.t_values()]
        for a, b in zip(maxes, maxes[1:]):
            assert b <= a + 0.02, f"log errors increased at exponent {exp}: {maxes}"
        assert maxes[-1] <= 0.2
    passline(6, "log-barrier path converges to the same tropical target (<= 0.2 at t = 1e4)")


def test_criterion_07_box_limits():
    rng = np.random.default_rng(77)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        mu = rng.uniform(0, 2)
        v = rng.uniform(0, 1, n)
        # keep the rate side strictly active so the finite-t offset decays
        u = mu + v + rng.uniform(0.3, 0.9, n)
        target = mu + v
        errs = {}
        for t in (1e2, 1e6):
            log_i, mean = N.box_oracle(np.zeros(n), t**u, t ** -(mu + v))
            err_i = abs(log_i / math.log(t) - target.sum())
            err_m = np.max(np.abs(np.array(logt_map(mean, t)) - target))
            errs[t] = max(err_i, err_m)
        assert errs[1e6] <= 0.01
        assert errs[1e6] < errs[1e2]
    passline(7, "box oracle log-t integral and mean converge to the entrywise min targets")


def test_criterion_08_sampler_calibration():
    rng = np.random.default_rng(808)
    cfg = N.SamplerConfig()
    for n in range(1, 5):
        hi = rng.uniform(1.0, 4.0, n)
        rate = rng.uniform(0.2, 2.0, n)
        nlp = N.box_lp(hi, rate)
        est = N.entropic_estimate(nlp, 1.0, cfg)
        _, mean = N.box_oracle(np.zeros(n), hi, rate)
        assert np.all(np.abs(est.mean - mean) <= 4 * np.maximum(est.stderr, 1e-12))
    again = N.entropic_estimate(nlp, 1.0, cfg)
    assert np.array_equal(est.mean, again.mean)
    passline(8, "sampler within 4 standard errors of the box oracle; bit-identical reruns")


def test_criterion_09_newton_correctness():
    T = 10.0
    nlp = N.NumericLP(
        np.array([[1.0], [-1.0]]), np.array([T, 0.0]), np.array([1.0]), 10.0
    )
    x = N.log_point(nlp, 1.0, N.NewtonConfig(gradient_tolerance=1e-12))
    exact = (T + 2 - math.sqrt(T**2 + 4)) / 2
    assert abs(x[0] - exact) / exact <= 1e-8

    work = N.rescale_lp(N.instantiate(lw_instance(2).plp, 10.0), [1.0, 1.0, 2.0, 1.5])
    rng = np.random.default_rng(9)
    x0 = N.interior_seed(work, TropVector(Fraction(-(i + 1), 8) for i in range(4)))
    tested = 0
    while tested < 5:
        xp = x0 * (1 + 0.2 * (rng.random(4) - 0.5))
        if not np.all(work.slacks(xp) > 0):
            continue
        _, g = N.log_barrier_objective(work, 3.0, xp)
        fd = np.empty(4)
        for j in range(4):
            h = 1e-6 * max(1.0, abs(xp[j]))
            e = np.zeros(4)
            e[j] = h
            fd[j] = (
                N.log_barrier_objective(work, 3.0, xp + e)[0]
                - N.log_barrier_objective(work, 3.0, xp - e)[0]
            ) / (2 * h)
        assert np.all(np.abs(g - fd) <= 1e-4 * np.maximum(np.abs(g), 1e-6))
        tested += 1
    passline(9, "1d closed form matched to 1e-8; finite differences agree to 1e-4")


def _strictly_interior(P, x):
    for c in P.constraints:
        lhs = c.offset if c.var is None else c.offset.plus(x[c.var])
        if not lhs < c.rhs(x):
            return False
    return True


def test_criterion_10_lift_and_instantiation():
    rng = np.random.default_rng(10)
    for r in (2, 3):
        inst = lw_instance(r)
        n = 2 * r
        target = greatest(inst.tropP)
        eps = Fraction(1, 2 * n)
        hint = TropVector(
            TropValue(v.finite - eps * (i + 1)) for i, v in enumerate(target)
        )
        assert _strictly_interior(inst.tropP, hint)
        for _ in range(10):
            # random positive series with valuation equal to the interior point
            x = []
            for j in range(n):
                # leads close to 1: t = 1e2 already separates the smallest
                # exponent gap 1/12 when coefficient ratios stay below 9/7
                lead = Fraction(int(rng.integers(7, 10)), 8)
                terms = [(hint[j].finite, lead)]
                if rng.random() < 0.5:
                    low = Fraction(int(rng.integers(-1, 2)), 4)
                    terms.append((hint[j].finite - 1, low))
                x.append(PuiseuxSeries(terms))
            assert all(xj > PuiseuxSeries.zero() for xj in x)
            assert TropVector(xj.val() for xj in x) == hint
            for i in range(len(inst.plp.A)):
                lhs = PuiseuxSeries.zero()
                for j in range(n):
                    lhs = lhs + inst.plp.A[i][j] * x[j]
                # symbolic membership (interior lifting)
                assert ps_cmp(lhs, inst.plp.b[i]) <= 0
                # instantiation keeps the inequalities at finite t
                for t in (1e2, 1e3):
                    assert ps_eval(lhs, t) <= ps_eval(inst.plp.b[i], t) + 1e-9
        # numeric lift of the hint is strictly feasible
        for t in (1e2, 1e3):
            nlp = N.instantiate(inst.plp, t)
            seed = N.interior_seed(nlp, hint)
            assert np.all(nlp.slacks(seed) > 0)
    passline(10, "interior lifts are members symbolically and after instantiation")

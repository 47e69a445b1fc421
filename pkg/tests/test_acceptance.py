"""Acceptance criteria 1-14, all exact (tolerance zero unless stated).

Each test records a one-line verdict; ``conftest.py`` prints the table at
the end of the run.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from schreierlab.config import Capacity, set_capacity
from schreierlab.estimates import SuiteConfig, domination_constant, ratio
from schreierlab.indices import h_rho_member
from schreierlab.ordinal import parse_ordinal
from schreierlab.report import dumps
from schreierlab.schreier import family
from schreierlab.spaces import (
    RatVec,
    Schreier,
    combine,
    dual_functionals,
    parse_space,
    random_block_sequence,
    random_coefficient,
)
from schreierlab.tensor import injective_norm, random_tensor, square_block_sum
from schreierlab.verify import run_all

from oracles import (
    brute_schreier_norm,
    heredity_violations,
    naive_member,
    shrink_violations,
    spreading_violations,
)

F = Fraction
e = RatVec.basis
RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, note: str):
    RESULTS[n] = (ok, note)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {note}")
    assert ok, note


@pytest.fixture(scope="module")
def full_run():
    t0 = time.perf_counter()
    first = dumps(run_all(SuiteConfig()))
    elapsed = time.perf_counter() - t0
    second = dumps(run_all(SuiteConfig()))
    return json.loads(first), elapsed, first == second


def suite(full_run, sid):
    return next(s for s in full_run[0]["suites"] if s["suite"] == sid)


def details_ok(rep, min_samples):
    return rep["pass"] and all(d.get("samples", min_samples) >= min_samples and d.get("violations", 0) == 0
                               for d in rep["details"])


# --- 1 ---------------------------------------------------------------------------


def test_criterion_01_schreier_membership():
    t0 = time.perf_counter()
    window = 30
    set_capacity(Capacity(enum_window=window))
    try:
        found = family(1).admissible(window)
    finally:
        set_capacity(None)
    # |F| <= min F, counted by minimum and size
    expected = 1 + sum(math.comb(window - m, s - 1) for m in range(1, window + 1) for s in range(1, m + 1))
    closed = all(len(F) <= F[0] for F in found if F)
    # the search visits every member and every one-point end extension; add
    # uniformly random subsets as a direct check on the rest of the cube
    rng = random.Random(30)
    fam1 = family(1)
    random_ok = True
    for _ in range(20000):
        G = tuple(k for k in range(1, window + 1) if rng.random() < rng.choice((0.1, 0.3, 0.5)))
        random_ok &= fam1.member(G) == (len(G) <= (G[0] if G else 0) or not G)
    two = parse_ordinal("2")
    fam2 = family(2)
    s2_ok = True
    for r in range(16):
        for G in itertools.combinations(range(1, 16), r):
            s2_ok &= fam2.member(G) == naive_member(G, two)
    elapsed = time.perf_counter() - t0
    ok = len(found) == expected and closed and random_ok and s2_ok and elapsed < 60
    record(1, ok, f"S_1 members on [1..30]: {len(found)} (closed form {expected}); "
                  f"S_2 matches partition search on [1..15]; {elapsed:.1f}s")


# --- 2 ---------------------------------------------------------------------------


def test_criterion_02_regularity():
    total = 0
    for alpha in ("1", "2", "3", "w", "w+1", "w*2", "w^2"):
        a = parse_ordinal(alpha)
        member = family(a).member
        total += len(heredity_violations(member, 10))
        total += len(spreading_violations(member, 10, 12))
        total += len(shrink_violations(member, 10, 12))
    record(2, total == 0, f"heredity, spreading, last-element shrink on [1..10], 7 ordinals: {total} violations")


# --- 3 ---------------------------------------------------------------------------


def test_criterion_03_norm_oracle():
    rng = random.Random(3)
    bad = 0
    for i in range(500):
        alpha = ("1", "2", "w")[i % 3]
        size = rng.randint(1, 12)
        idx = sorted(rng.sample(range(1, 25), size))
        x = RatVec({k: random_coefficient(rng) for k in idx})
        bad += Schreier(alpha).norm(x) != brute_schreier_norm(x, parse_ordinal(alpha))
    record(3, bad == 0, f"branch and bound vs admissible-set enumeration, 500 vectors: {bad} mismatches")


# --- 4 ---------------------------------------------------------------------------


def test_criterion_04_upper_estimate(full_run):
    rep = suite(full_run, "P31")
    X1 = Schreier(1)
    sharp = domination_constant([e(2), e(3)], X1, [1, 2], X1)
    r = ratio([e(2), e(3)], X1, [e(1), e(2)], X1, (1, 1))
    ok = details_ok(rep, 1000) and sharp.exact and sharp.lower_bound == 2 and sharp.witness == (1, 1) and r == 2
    record(4, ok, f"ratio <= 2 over 1000 samples x alpha in 1,2,w (max {F(*rep['max_ratio'])}); "
                  f"sharp pair constant {sharp.lower_bound}")


# --- 5 ---------------------------------------------------------------------------


def test_criterion_05_right_dominance():
    bad = 0
    for alpha in ("1", "2", "w"):
        X = Schreier(alpha)
        for i in range(1000):
            rng = random.Random(f"5:{alpha}:{i}")
            n = rng.randint(1, 6)
            ks = sorted(rng.sample(range(1, 15), n))
            ls = []
            low = 0
            for k in ks:
                low = rng.randint(max(k, low + 1), max(k, low + 1) + 4)
                ls.append(low)
            a = [random_coefficient(rng) for _ in range(n)]
            bad += X.norm(RatVec(zip(ks, a))) > X.norm(RatVec(zip(ls, a)))
    record(5, bad == 0, f"spread monotonicity, 1000 samples x 3 ordinals: {bad} violations")


# --- 6 ---------------------------------------------------------------------------


def _tuple_value(z: RatVec, m):
    """V = R (+)_1 c0 norm of the segment c0-masses placed at segment starts."""
    masses = {}
    for a, b in zip(m, m[1:]):
        mass = max((abs(z[k]) for k in range(a, b)), default=F(0))
        if mass:
            masses[a] = mass
    return masses.get(1, F(0)) + max((v for k, v in masses.items() if k != 1), default=F(0))


def test_criterion_06_late_breakpoints(full_run):
    ok = suite(full_run, "R212")["pass"]
    notes = []
    for n in range(1, 9):
        z = RatVec({2 * n: F(1, 2), 2 * n + 1: F(1, 2)})
        top = 2 * n + 2
        best = F(0)
        late_meeting, late_other = set(), set()
        for size in range(2, top + 1):
            for m in itertools.combinations(range(1, top + 1), size):
                v = _tuple_value(z, m)
                best = max(best, v)
                if m[0] >= 2 * n:
                    meets = any(a <= k < b for a, b in zip(m, m[1:]) for k in z.support)
                    (late_meeting if meets else late_other).add(v)
        W = parse_space("zv(c0, rsum1(c0))")
        ok &= best == 1 and W.norm(z) == 1 and late_meeting == {F(1, 2)} and late_other <= {F(0)}
    notes.append("norm 1 for n <= 8; every tuple with k_0 >= 2n that meets the support gives exactly 1/2")
    record(6, ok, "; ".join(notes))


# --- 7, 8, 9 ---------------------------------------------------------------------


def test_criterion_07_lower_estimate_zv(full_run):
    rep = suite(full_run, "L211")
    inst = [d["instance"] for d in rep["details"]]
    ok = details_ok(rep, 500) and len(inst) == 3
    record(7, ok, f"lower estimates over {', '.join(inst)}; "
                  f"{sum(d['samples'] for d in rep['details'])} samples, 0 violations required")


def test_criterion_08_interleaved_lower_estimate(full_run):
    rep = suite(full_run, "L213")
    ok = details_ok(rep, 500)
    record(8, ok, f"2C^2 bound on interleaved sums, max ratio {F(*rep['max_ratio'])}")


def test_criterion_09_free_reference_indices(full_run):
    rep = suite(full_run, "P24")
    ok = details_ok(rep, 500)
    record(9, ok, f"constant 2 with arbitrary valid indices, max ratio {F(*rep['max_ratio'])}")


# --- 10, 11 ------------------------------------------------------------------------


def test_criterion_10_derivatives(full_run):
    rep = suite(full_run, "DERIV")
    checks = {d["check"]: d for d in rep["details"]}
    ok = rep["pass"] and checks["S_1 closed form"]["cases"] > 0
    record(10, ok, f"rank of S_0 = 2, S_1 closed form on [1..60] x k <= 50 "
                   f"({checks['S_1 closed form']['cases']} cases), empty set survives 50 stages")


def test_criterion_11_l1_tree(full_run):
    rep = suite(full_run, "PR46")
    cases = {d["check"]: d["cases"] for d in rep["details"]}
    ok = rep["pass"] and F(*rep["max_ratio"]) == 1 and min(cases.values()) >= 200
    record(11, ok, f"h_rho minimum exactly 1 on {cases['h_rho minimum is 1']} sampled branches")


# --- 12 ----------------------------------------------------------------------------

STEP = 64


def _simplex_grid(n):
    pts = [c for c in itertools.product(range(STEP + 1), repeat=n - 1) if sum(c) <= STEP]
    return np.array([list(c) + [STEP - sum(c)] for c in pts], dtype=float) / STEP


def test_criterion_12_lp_vs_grid():
    rng = random.Random(12)
    spaces = ["c0", "l1", "schreier(1)", "schreier(2)", "rsum1(c0)"]
    worst_gap = F(0)
    ok = True
    for i in range(200):
        X = parse_space(spaces[i % len(spaces)])
        n = rng.randint(1, 4)
        xs = random_block_sequence(X, n, 8, rng=rng, max_support=2)
        cert = h_rho_member(xs, X, F(1, 2))
        window = max(x.support[-1] for x in xs)
        rows = {tuple(float(f.dot(x)) for x in xs) for f in dual_functionals(X, window)}
        Y = np.array(sorted(rows))
        grid = _simplex_grid(n)
        vals = np.abs(grid @ Y.T).max(axis=1)
        best = int(vals.argmin())
        a = [F(round(v * STEP), STEP) for v in grid[best]]
        grid_min = X.norm(combine(a, xs))
        gap = grid_min - cert.min_value
        worst_gap = max(worst_gap, gap)
        # moving a point of the simplex by d in l1 moves the norm by at most d
        ok &= 0 <= gap <= F(n, STEP) and cert.replay(X)
    record(12, ok, f"exact LP min <= grid min <= LP min + arity/64 on 200 instances (worst gap {worst_gap})")


# --- 13 ----------------------------------------------------------------------------


def test_criterion_13_tensor(full_run):
    rng = random.Random(13)
    fdd_ok = transpose_ok = True
    spaces = ["schreier(1)", "schreier(2)", "c0", "l1"]
    for _ in range(200):
        E, G = parse_space(rng.choice(spaces)), parse_space(rng.choice(spaces))
        u = random_tensor(rng, E, G, 8)
        fdd_ok &= square_block_sum(u) == u
        transpose_ok &= injective_norm(u, "rows") == injective_norm(u.transpose(), "rows")
    p61, l66 = suite(full_run, "P61"), suite(full_run, "L66")
    alphas = sorted(d["instance"] for d in p61["details"])
    ok = fdd_ok and transpose_ok and details_ok(p61, 200) and details_ok(l66, 200) and len(alphas) == 2
    record(13, ok, f"square blocks sum to u and transpose keeps the norm on 200 tensors; "
                   f"band bound max {F(*p61['max_ratio'])} <= 2, block bound max {F(*l66['max_ratio'])} <= 4")


# --- 14 ----------------------------------------------------------------------------


def test_criterion_14_run_all(full_run):
    doc, elapsed, identical = full_run
    ok = doc["pass"] and elapsed < 600 and identical
    record(14, ok, f"run_all pass={doc['pass']} in {elapsed:.0f}s, byte-identical rerun={identical}")

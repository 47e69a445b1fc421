"""Domination constants and the block-estimate inequality suites.

A sequence (f_n) in A is C-dominated by (g_n) in B when
``||sum a_n f_n||_A <= C ||sum a_n g_n||_B`` for all scalars.  Both norms are
maxima of finitely many linear functionals, so the unit ball
``{a : ||sum a_n g_n||_B <= 1}`` is a polytope and the least C is the
largest A-norm over its vertices.

Suites (all comparisons exact):

``P31``   normalized blocks of X_alpha against e_(min supp), constant 2.
``P24``   the same with any indices k_n, max supp x_(n-1) < k_n <= min supp x_n.
``L211``  lower estimates 2C in Z^V against v_(min supp).
``R212``  the block sequence ``(e_2n + e_(2n+1))/2`` in c0^V, V = R (+)_1 c0:
          norm 1, but breakpoints starting at 2n or later only reach 1/2.
``L213``  lower estimates 2C^2 in the interleaved sum Z (+)_inf V_(N minus M).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .config import capacity
from .errors import CapacityError, ConfigError, ContractError
from .ordinal import parse_ordinal
from .polytope import vertices
from .report import frac
from .spaces import (
    C0,
    ZV,
    DirectSum1,
    InterleaveInf,
    IndexSeq,
    RatVec,
    Schreier,
    Space,
    combine,
    parse_space,
    random_block_sequence,
    random_coefficient,
    zv_norm_by_breakpoints,
)

ONE = Fraction(1)
HALF = Fraction(1, 2)


@dataclass
class DominationReport:
    lower_bound: Fraction
    upper_bound: Fraction | None  # None: not verified
    exact: bool
    witness: tuple[Fraction, ...]
    mode: str  # "exact_vertex" or "sampled"
    vertices: int = 0

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "exact": self.exact,
            "lower_bound": frac(self.lower_bound),
            "upper_bound": frac(self.upper_bound) if self.upper_bound is not None else "unverified",
            "witness": [frac(a) for a in self.witness],
            "vertices": self.vertices,
        }


def ratio(fs, A: Space, gs, B: Space, a) -> Fraction | None:
    """``||sum a f||_A / ||sum a g||_B``, None when the denominator vanishes."""
    den = B.norm(combine(a, gs))
    if not den:
        return None
    return A.norm(combine(a, fs)) / den


def _exact(fs, A, gs, B) -> DominationReport:
    window = sorted(set().union(*(g.support for g in gs)))
    rows = {tuple(phi.dot(g) for g in gs) for phi in B.functionals(window)}
    rows.discard(tuple(Fraction(0) for _ in gs))
    if not rows:
        raise ContractError("reference sequence has zero norm")
    best = None
    verts = vertices(sorted(rows))
    for a in verts:
        key = (A.norm(combine(a, fs)), a)
        if best is None or key > best:
            best = key
    C, a = best
    scale = max(abs(v) for v in a)
    witness = tuple(v / scale for v in a)
    return DominationReport(C, C, True, witness, "exact_vertex", len(verts))


def _sampled(fs, A, gs, B, seed, samples) -> DominationReport:
    n = len(fs)
    rng = random.Random(f"{seed}:dominate")
    starts = [tuple(ONE for _ in range(n))]
    starts += [tuple(ONE if i == j else Fraction(0) for i in range(n)) for j in range(n)]
    if n <= capacity().sign_set:
        starts += [tuple(Fraction(s) for s in signs) for signs in itertools.product((1, -1), repeat=n)]
    starts += [tuple(random_coefficient(rng) for _ in range(n)) for _ in range(samples)]
    scored = []
    for a in starts:
        r = ratio(fs, A, gs, B, a)
        if r is not None:
            scored.append((r, a))
    scored.sort(reverse=True)
    best_r, best_a = scored[0]
    # coordinate ascent from the few best starts
    moves = (Fraction(0), HALF, 2 * ONE, -ONE)
    for r, a in scored[:3]:
        improved = True
        while improved:
            improved = False
            for i, m in itertools.product(range(n), moves):
                b = a[:i] + (a[i] * m,) + a[i + 1:]
                rb = ratio(fs, A, gs, B, b)
                if rb is not None and rb > r:
                    r, a, improved = rb, b, True
        if r > best_r:
            best_r, best_a = r, a
    scale = max(abs(v) for v in best_a)
    return DominationReport(best_r, None, False, tuple(v / scale for v in best_a), "sampled")


def dominate(fs: Sequence[RatVec], A: Space, gs: Sequence[RatVec], B: Space,
             mode: str = "exact", seed=0, samples: int = 200) -> DominationReport:
    """Least C with ``||sum a f||_A <= C ||sum a g||_B``.

    ``mode`` is ``exact``, ``sample`` or ``auto`` (exact up to the arity
    bound, sampling above it).
    """
    if len(fs) != len(gs) or not fs:
        raise ContractError("sequences must be nonempty and of equal length")
    if mode not in ("exact", "sample", "auto"):
        raise ConfigError(f"unknown mode {mode!r}")
    limit = capacity().exact_arity
    if mode == "exact" and len(fs) > limit:
        raise CapacityError(f"exact mode supports at most {limit} vectors, got {len(fs)}")
    if mode == "sample" or len(fs) > limit:
        return _sampled(fs, A, gs, B, seed, samples)
    return _exact(fs, A, gs, B)


def domination_constant(xs: Sequence[RatVec], X: Space, ref_indices: Sequence[int], V: Space,
                        mode: str = "exact", seed=0, samples: int = 200) -> DominationReport:
    """Least C with ``||sum a_n x_n||_X <= C ||sum a_n v_(k_n)||_V``."""
    if len(xs) != len(ref_indices):
        raise ContractError("one reference index per vector")
    if any(k < 1 for k in ref_indices) or any(a >= b for a, b in zip(ref_indices, ref_indices[1:])):
        raise ContractError("reference indices must be positive and increasing")
    for x in xs:
        if X.norm(x) != 1:
            raise ContractError(f"{x} is not normalized in {X}")
    return dominate(xs, X, [RatVec.basis(k) for k in ref_indices], V, mode, seed, samples)


# --- suites -----------------------------------------------------------------


DEFAULT_ALPHAS = {"P61": ("1", "2"), "L66": ("1", "2")}


@dataclass
class SuiteConfig:
    seed: int = 1
    samples: int = 1000
    alphas: tuple[str, ...] | None = None  # None: the suite's own default
    max_count: int = 4
    window: int = 16
    bound: Fraction | None = None  # override the constant under test
    pairs: tuple[tuple[str, str], ...] | None = None
    n_max: int = 8

    def alphas_for(self, suite: str) -> tuple[str, ...]:
        return tuple(self.alphas) if self.alphas else DEFAULT_ALPHAS.get(suite, ("1", "2", "w"))

    def to_json(self, suite: str) -> dict:
        out = {"seed": self.seed}
        if suite in ("P31", "P24", "P61", "L66"):
            out.update(samples=self.samples, alphas=list(self.alphas_for(suite)))
        elif suite in ("L211", "L213"):
            out["samples"] = self.samples
            out["instances"] = [list(p) for p in (self.pairs or DEFAULT_PAIRS[suite])]
        elif suite == "R212":
            out["n_max"] = self.n_max
        if suite != "R212":
            out.update(max_count=self.max_count, window=self.window)
        if self.bound is not None:
            out["bound_override"] = frac(self.bound)
        return out


@dataclass
class SuiteReport:
    suite: str
    config: dict
    passed: bool
    max_ratio: Fraction
    witness: dict | None = None
    details: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "config": self.config,
            "pass": self.passed,
            "max_ratio": frac(self.max_ratio),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        out["details"] = self.details
        return out


def _sample_rng(seed, suite, tag, i) -> random.Random:
    # one generator per sample, derived by counter so order never matters
    return random.Random(f"{seed}:{suite}:{tag}:{i}")


def _coefficients(rng, n, i):
    if i % 5 == 0:
        return [ONE] * n
    return [random_coefficient(rng) for _ in range(n)]


def _witness(xs, a, refs, lhs, rhs, label) -> dict:
    return {
        "instance": label,
        "vectors": [x.to_json() for x in xs],
        "coefficients": [frac(v) for v in a],
        "refs": list(refs),
        "lhs": frac(lhs),
        "rhs": frac(rhs),
    }


class _Tracker:
    """Collects the largest ratio and the first violation in sample order."""

    def __init__(self, bound: Fraction):
        self.bound = bound
        self.max_ratio = Fraction(0)
        self.best = None
        self.violation = None
        self.violations = 0
        self.count = 0

    def add(self, big, small, witness_fn):
        """Checks ``big <= bound * small``; the ratio is big / small."""
        self.count += 1
        r = big / small
        if big > self.bound * small:
            self.violations += 1
            if self.violation is None:
                self.violation = witness_fn()
        if r > self.max_ratio:
            self.max_ratio = r
            self.best = witness_fn

    def detail(self, label, **extra):
        return {
            "instance": label,
            "bound": frac(self.bound),
            "samples": self.count,
            "violations": self.violations,
            "max_ratio": frac(self.max_ratio),
            **extra,
        }


def _merge(suite, config, trackers_details) -> SuiteReport:
    details = [d for _, d in trackers_details]
    trackers = [t for t, _ in trackers_details]
    passed = all(t.violations == 0 for t in trackers)
    top = max(trackers, key=lambda t: t.max_ratio)
    if passed:
        witness = top.best() if top.best else None
    else:
        witness = next(t.violation for t in trackers if t.violation is not None)
    return SuiteReport(suite, config, passed, top.max_ratio, witness, details)


def sharp_upper_example() -> tuple[list[RatVec], list[Fraction]]:
    """Blocks ``(e_1/8 + e_2, e_3)`` with ``a = (1, 1)``: ratio 2 in X_alpha, alpha >= 1."""
    return [RatVec({1: Fraction(1, 8), 2: 1}), RatVec({3: 1})], [ONE, ONE]


def _upper_suite(suite: str, cfg: SuiteConfig, free_refs: bool) -> SuiteReport:
    bound = cfg.bound if cfg.bound is not None else Fraction(2)
    parts = []
    for alpha in cfg.alphas_for(suite):
        X = Schreier(parse_ordinal(alpha))
        t = _Tracker(bound)
        cases = []
        xs, a = sharp_upper_example()
        cases.append((xs, a, [x.support[0] for x in xs]))
        for i in range(cfg.samples):
            rng = _sample_rng(cfg.seed, suite, alpha, i)
            n = rng.randint(1, cfg.max_count)
            xs = random_block_sequence(X, n, cfg.window, rng=rng)
            a = _coefficients(rng, n, i)
            if free_refs:
                refs = []
                for j, x in enumerate(xs):
                    lo = xs[j - 1].support[-1] + 1 if j else 1
                    refs.append(rng.randint(lo, x.support[0]))
            else:
                refs = [x.support[0] for x in xs]
            cases.append((xs, a, refs))
        for xs, a, refs in cases:
            for x in xs:
                if X.norm(x) != 1:
                    raise AssertionError("sampled block is not normalized")
            lhs = X.norm(combine(a, xs))
            rhs = X.norm(RatVec(zip(refs, a)))
            t.add(lhs, rhs, lambda xs=xs, a=a, refs=refs, lhs=lhs, rhs=rhs:
                  _witness(xs, a, refs, lhs, rhs, f"schreier({alpha})"))
        parts.append((t, t.detail(f"schreier({alpha})")))
    return _merge(suite, cfg.to_json(suite), parts)


def run_block_upper(cfg: SuiteConfig) -> SuiteReport:
    return _upper_suite("P31", cfg, free_refs=False)


def run_free_reference_upper(cfg: SuiteConfig) -> SuiteReport:
    return _upper_suite("P24", cfg, free_refs=True)


# self-lower-estimate constants C: ||sum a v_(m_n)|| <= C ||sum a x_n|| for
# normalized blocks x_n of V with m_n = min supp x_n
SELF_LOWER = {
    "l1": Fraction(1),
    # R (+)_1 c0: at least max(|a_1|, max|a_n|) on the left, at most twice that
    # on the right; approached by x_1 = s v_1 + (1-s) v_2, x_2 = v_3 as s -> 0
    "rsum1(c0)": Fraction(2),
}


def self_lower_constant(v_text: str) -> Fraction:
    if v_text.startswith("schreier"):
        raise ConfigError(
            f"{v_text} has no lower block estimates in itself (its basis spreads "
            "to l1 sums on admissible sets but not beyond), so no constant exists"
        )
    try:
        return SELF_LOWER[v_text]
    except KeyError:
        raise ConfigError(f"no self-lower-estimate constant recorded for {v_text}") from None


def search_self_lower(V: Space, arity: int = 2, window: int = 5, denominator: int = 4) -> tuple[Fraction, dict]:
    """Exact search for ``sup ||sum a v_(m_n)|| / ||sum a x_n||`` over normalized
    block sequences of ``V`` inside ``[1..window]`` whose coordinates are
    nonnegative multiples of ``1/denominator``; each candidate sequence is
    solved exactly by vertex enumeration.  Returns a lower bound and its witness."""
    best = (Fraction(0), None)
    grid = [Fraction(k, denominator) for k in range(0, denominator + 1)]
    for cuts in itertools.combinations(range(1, window + 1), arity + 1):
        blocks = [range(cuts[j], cuts[j + 1]) if j + 1 < arity else range(cuts[j], window + 1)
                  for j in range(arity)]
        pools = []
        for blk in blocks:
            vecs = set()
            for vals in itertools.product(grid, repeat=len(blk)):
                x = RatVec(zip(blk, vals))
                if x and x.support[0] == blk[0]:
                    vecs.add(x / V.norm(x))
            pools.append(sorted(vecs, key=lambda x: x.items()))
        for xs in itertools.product(*pools):
            refs = [x.support[0] for x in xs]
            rep = dominate([RatVec.basis(k) for k in refs], V, list(xs), V)
            if rep.lower_bound > best[0]:
                best = (rep.lower_bound, {
                    "vectors": [x.to_json() for x in xs],
                    "coefficients": [frac(a) for a in rep.witness],
                })
    return best


DEFAULT_PAIRS = {
    "L211": (("c0", "l1"), ("schreier(1)", "l1"), ("c0", "rsum1(c0)")),
    "L213": (("l1", "l1", "2,4,..."), ("zv(c0, l1)", "l1", "2,4,..."), ("c0", "rsum1(c0)", "2,4,...")),
}

# lower-estimate constant of Z against V_M, per L213 instance
_Z_LOWER = {
    ("l1", "l1"): Fraction(1),
    ("zv(c0, l1)", "l1"): Fraction(2),  # the 2C lower estimate of Z^V with C = 1
    ("c0", "rsum1(c0)"): Fraction(1),  # V_M spans c0 when M avoids index 1
}


def half_pair_vector(n: int) -> RatVec:
    return RatVec({2 * n: HALF, 2 * n + 1: HALF})


def run_zv_lower(cfg: SuiteConfig) -> SuiteReport:
    pairs = cfg.pairs or DEFAULT_PAIRS["L211"]
    parts = []
    for z_text, v_text in pairs:
        C = self_lower_constant(v_text)
        bound = cfg.bound if cfg.bound is not None else 2 * C
        Z, V = parse_space(z_text), parse_space(v_text)
        W = ZV(Z, V)
        label = str(W)
        t = _Tracker(bound)
        cases = []
        if v_text == "rsum1(c0)" and z_text == "c0":
            xs = [half_pair_vector(n) for n in (1, 2, 3)]
            cases.append((xs, [ONE, ONE, ONE]))
        for i in range(cfg.samples):
            rng = _sample_rng(cfg.seed, "L211", label, i)
            n = rng.randint(1, cfg.max_count)
            xs = random_block_sequence(W, n, cfg.window, rng=rng, max_support=3)
            cases.append((xs, _coefficients(rng, n, i)))
        for xs, a in cases:
            refs = [x.support[0] for x in xs]
            big = V.norm(RatVec(zip(refs, a)))
            small = W.norm(combine(a, xs))
            t.add(big, small, lambda xs=xs, a=a, refs=refs, big=big, small=small:
                  _witness(xs, a, refs, big, small, label))
        parts.append((t, t.detail(label, self_lower_constant=frac(C))))
    return _merge("L211", cfg.to_json("L211"), parts)


def run_late_breakpoints(cfg: SuiteConfig) -> SuiteReport:
    V = DirectSum1(C0())
    Z = C0()
    W = ZV(Z, V)
    details = []
    ok = True
    witness = None
    worst = Fraction(0)
    for n in range(1, cfg.n_max + 1):
        z = half_pair_vector(n)
        full, count = zv_norm_by_breakpoints(Z, V, z)
        late, late_count = zv_norm_by_breakpoints(Z, V, z, predicate=lambda m, n=n: m[0] >= 2 * n)
        fast = W.norm(z)
        # the named tuple (1, 2n+1, 2n+2) reaches 1/2 + 1/2
        named = V.norm(RatVec({1: Z.norm(z.interval(1, 2 * n + 1)),
                               2 * n + 1: Z.norm(z.interval(2 * n + 1, 2 * n + 2))}))
        row_ok = full == 1 and fast == 1 and named == 1 and late == HALF
        details.append({
            "n": n,
            "norm": frac(full),
            "norm_fast": frac(fast),
            "named_tuple_value": frac(named),
            "late_max": frac(late),
            "tuples": count,
            "late_tuples": late_count,
            "pass": row_ok,
        })
        worst = max(worst, full / late) if late else worst
        if not row_ok and ok:
            ok = False
            witness = {"n": n, "vector": z.to_json()}
    return SuiteReport("R212", cfg.to_json("R212"), ok, worst, witness, details)


def run_interleaved_lower(cfg: SuiteConfig) -> SuiteReport:
    instances = cfg.pairs or DEFAULT_PAIRS["L213"]
    parts = []
    for inst in instances:
        z_text, v_text, m_text = inst
        if (z_text, v_text) not in _Z_LOWER:
            raise ConfigError(f"no lower-estimate constant recorded for Z={z_text} in V_M={v_text}")
        C = max(self_lower_constant(v_text), _Z_LOWER[(z_text, v_text)])
        bound = cfg.bound if cfg.bound is not None else 2 * C * C
        Z, V = parse_space(z_text), parse_space(v_text)
        raw = [s.strip() for s in m_text.split(",")]
        periodic = raw[-1] == "..."
        M = IndexSeq([int(s) for s in (raw[:-1] if periodic else raw)], periodic)
        W = InterleaveInf(Z, V, M)
        label = str(W)
        t = _Tracker(bound)
        for i in range(cfg.samples):
            rng = _sample_rng(cfg.seed, "L213", label, i)
            n = rng.randint(1, cfg.max_count)
            xs = random_block_sequence(W, n, cfg.window, rng=rng, max_support=3)
            a = _coefficients(rng, n, i)
            refs = [x.support[0] for x in xs]
            big = V.norm(RatVec(zip(refs, a)))
            small = W.norm(combine(a, xs))
            t.add(big, small, lambda xs=xs, a=a, refs=refs, big=big, small=small:
                  _witness(xs, a, refs, big, small, label))
        parts.append((t, t.detail(label, C=frac(C))))
    return _merge("L213", cfg.to_json("L213"), parts)


SUITES = {
    "P31": run_block_upper,
    "P24": run_free_reference_upper,
    "L211": run_zv_lower,
    "R212": run_late_breakpoints,
    "L213": run_interleaved_lower,
}


def run_suite(suite_id: str, cfg: SuiteConfig | None = None) -> SuiteReport:
    try:
        fn = SUITES[suite_id]
    except KeyError:
        raise ConfigError(f"unknown suite {suite_id!r}; expected one of {sorted(SUITES)}") from None
    return fn(cfg or SuiteConfig())

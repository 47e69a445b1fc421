"""Verification suites and the aggregate ``run_all`` report.

Besides the inequality suites of :mod:`estimates` and :mod:`tensor` this
adds three checks:

``DERIV``   derivative stages: the rank of S_0, the closed form
            ``|F| + k <= min F`` for S_1, the empty set surviving 50 stages
            of S_1, and the run probe against a far-right probe for higher
            families.
``PR46``    branches of the tree ``E -> e_(max E)`` span l1 isometrically:
            the exact h_rho minimum at rho = 1 is 1.
``ORACLE``  fast routines against slow literal ones: the Schreier norm
            against subset enumeration, block DP against partition search,
            and Z^V norms against breakpoint enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import replace
from fractions import Fraction
from functools import lru_cache

from .config import capacity
from .errors import CapacityError, ConfigError
from .estimates import SUITES as ESTIMATE_SUITES
from .estimates import SuiteConfig, SuiteReport, _coefficients, _sample_rng
from .indices import SchreierOracle, build_l1_tree, derivative_member, h_rho_member
from .ordinal import Ordinal, parse_ordinal
from .report import frac, header
from .schreier import family
from .spaces import (
    ZV,
    RatVec,
    Schreier,
    combine,
    parse_space,
    random_block_sequence,
    zv_norm_by_breakpoints,
)
from .tensor import run_square_block_upper, run_band_operators

ONE = Fraction(1)


class _Checks:
    """Named groups of boolean checks with the first failure kept."""

    def __init__(self):
        self.groups: dict[str, list[int]] = {}
        self.witness = None

    def add(self, group: str, ok: bool, witness_fn=None):
        total = self.groups.setdefault(group, [0, 0])
        total[0] += 1
        if not ok:
            total[1] += 1
            if self.witness is None:
                self.witness = {"check": group, **(witness_fn() if witness_fn else {})}

    @property
    def passed(self):
        return all(bad == 0 for _, bad in self.groups.values())

    def details(self):
        return [{"check": g, "cases": n, "failures": bad} for g, (n, bad) in self.groups.items()]


# --- derivatives --------------------------------------------------------------

S1_WINDOW = 60
S1_STAGES = 50


def schreier_rank_finite(alpha, max_stages: int) -> int | None:
    """Least k with the empty set outside the k-th derivative, if <= max_stages."""
    fam = SchreierOracle(alpha)
    for k in range(max_stages + 1):
        if not derivative_member((), fam, k):
            return k
    return None


def s1_class_representatives(window: int):
    """Nonempty F in [1..window] covering every (min F, |F|) shape twice, as
    the tightest run and as the set pushed to the right edge, plus all sets
    of size <= 2.

    The closed form depends only on min F and |F|; the probe also reads
    max F, whose two extremes are both covered.
    """
    seen = set()
    for m in range(1, window + 1):
        for s in range(1, window - m + 2):
            for F in ((m,) + tuple(range(m + 1, m + s)), (m,) + tuple(range(window - s + 2, window + 1))):
                if F not in seen:
                    seen.add(F)
                    yield F
    for a in range(1, window + 1):
        for b in range(a + 1, window + 1):
            if (a, b) not in seen:
                seen.add((a, b))
                yield (a, b)


def run_deriv(cfg: SuiteConfig) -> SuiteReport:
    checks = _Checks()
    rank0 = schreier_rank_finite(0, 5)
    checks.add("rank of S_0 is 2", rank0 == 2, lambda: {"rank": rank0})
    s1 = SchreierOracle(1)
    for F in s1_class_representatives(S1_WINDOW):
        for k in range(S1_STAGES + 1):
            got = derivative_member(F, s1, k)
            want = len(F) + k <= F[0]
            checks.add("S_1 closed form", got == want,
                       lambda F=F, k=k, got=got: {"set": list(F), "k": k, "got": got})
    survive = all(derivative_member((), s1, k) for k in range(S1_STAGES + 1))
    checks.add("empty set survives 50 stages of S_1", survive)
    # the run probe at max(max F + 1, k) against the run ending at a far horizon
    horizon = 40
    for alpha in ("2", "3", "w", "w+1"):
        oracle = SchreierOracle(alpha)
        fam = oracle.fam
        for r in range(0, 5):
            for F in itertools.combinations(range(1, 9), r):
                if not fam.member(F):
                    continue
                for k in range(1, 6):
                    far = F + tuple(range(horizon - k + 1, horizon + 1))
                    want = fam.member(far)
                    got = derivative_member(F, oracle, k)
                    checks.add("run probe matches far probe", got == want,
                               lambda F=F, k=k, alpha=alpha: {"alpha": alpha, "set": list(F), "k": k})
    config = {"seed": cfg.seed, "s1_window": S1_WINDOW, "s1_stages": S1_STAGES, "far_horizon": horizon}
    return SuiteReport("DERIV", config, checks.passed, Fraction(0), checks.witness, checks.details())


# --- Schreier tree branches ------------------------------------------------------

L1_TREE_WINDOW = 12


def run_l1_tree(cfg: SuiteConfig) -> SuiteReport:
    checks = _Checks()
    window = min(cfg.window, L1_TREE_WINDOW)
    samples = min(cfg.samples, 200)
    worst = ONE
    arity = capacity().exact_arity
    for alpha in cfg.alphas_for("PR46"):
        tree = build_l1_tree(alpha, window)
        X = Schreier(tree.alpha)
        nodes = sorted(tree.nodes, key=lambda E: (len(E), E))
        for i in range(samples):
            rng = _sample_rng(cfg.seed, "PR46", alpha, i)
            E = rng.choice(nodes)
            while len(E) > arity:
                E = rng.choice(nodes)
            cert = h_rho_member(tree.branch(E), X, 1)
            worst = min(worst, cert.min_value)
            checks.add("h_rho minimum is 1", cert.member and cert.min_value == 1 and cert.replay(X),
                       lambda E=E, alpha=alpha, cert=cert: {"alpha": alpha, "set": list(E), **cert.to_json()})
            a = _coefficients(rng, len(E), i)
            lhs = X.norm(combine(a, tree.branch(E)))
            checks.add("isometric l1 on sampled coefficients", lhs == sum(abs(v) for v in a),
                       lambda E=E, a=a: {"alpha": alpha, "set": list(E), "coefficients": [frac(v) for v in a]})
    config = {"seed": cfg.seed, "samples": samples, "alphas": list(cfg.alphas_for("PR46")), "window": window}
    return SuiteReport("PR46", config, checks.passed, worst, checks.witness, checks.details())


# --- oracle equivalence --------------------------------------------------------


def _cuts(F, max_blocks):
    n = len(F)
    for k in range(min(max_blocks, n)):
        for cut in itertools.combinations(range(1, n), k):
            bounds = (0,) + cut + (n,)
            yield [F[a:b] for a, b in zip(bounds, bounds[1:])]


@lru_cache(maxsize=None)
def naive_member(F: tuple, alpha: Ordinal) -> bool:
    """Membership by trying every cut into at most min F blocks."""
    if alpha.is_zero():
        return len(F) <= 1
    if not F:
        return True
    if alpha.is_successor():
        p = alpha.predecessor()
        return any(all(naive_member(b, p) for b in parts) for parts in _cuts(F, F[0]))
    return any(naive_member(F, alpha[n]) for n in range(1, F[0] + 1))


def subset_norm(x: RatVec, alpha: Ordinal) -> Fraction:
    items = x.items()
    best = Fraction(0)
    for r in range(len(items) + 1):
        for pick in itertools.combinations(items, r):
            if naive_member(tuple(k for k, _ in pick), alpha):
                best = max(best, sum((abs(v) for _, v in pick), Fraction(0)))
    return best


ORACLE_ZV = ("zv(c0, l1)", "zv(c0, rsum1(c0))", "zv(schreier(1), l1)")


def run_oracle(cfg: SuiteConfig) -> SuiteReport:
    checks = _Checks()
    samples = min(cfg.samples, 500)
    for alpha in cfg.alphas_for("ORACLE"):
        a = parse_ordinal(alpha)
        fam = family(a)
        for r in range(0, 11):
            for F in itertools.combinations(range(1, 11), r):
                checks.add("block DP matches partition search", fam.member(F) == naive_member(F, a),
                           lambda F=F, alpha=alpha: {"alpha": alpha, "set": list(F)})
        X = Schreier(a)
        for i in range(samples):
            rng = _sample_rng(cfg.seed, "ORACLE", alpha, i)
            size = rng.randint(1, 12)
            idx = sorted(rng.sample(range(1, 21), size))
            x = RatVec({k: _coefficients(rng, 1, 1)[0] for k in idx})
            fast, slow = X.norm(x), subset_norm(x, a)
            checks.add("Schreier norm matches subset enumeration", fast == slow,
                       lambda x=x, alpha=alpha: {"alpha": alpha, "vector": x.to_json()})
    for text in ORACLE_ZV:
        W = parse_space(text)
        assert isinstance(W, ZV)
        for i in range(min(samples, 100)):
            rng = _sample_rng(cfg.seed, "ORACLE", text, i)
            x = combine([ONE], random_block_sequence(W, 1, 8, rng=rng, max_support=8))
            slow, _ = zv_norm_by_breakpoints(W.base, W.v, x)
            checks.add("Z^V norm matches breakpoint enumeration", W.norm(x) == slow,
                       lambda x=x, text=text: {"space": text, "vector": x.to_json()})
    config = {"seed": cfg.seed, "samples": samples, "alphas": list(cfg.alphas_for("ORACLE"))}
    return SuiteReport("ORACLE", config, checks.passed, Fraction(0), checks.witness, checks.details())


# --- registry -------------------------------------------------------------------

SUITES = {
    **ESTIMATE_SUITES,
    "P61": run_band_operators,
    "L66": run_square_block_upper,
    "DERIV": run_deriv,
    "PR46": run_l1_tree,
    "ORACLE": run_oracle,
}
ORDER = ("P31", "P24", "L211", "R212", "L213", "P61", "L66", "DERIV", "PR46", "ORACLE")
assert set(ORDER) == set(SUITES)


def run_suite(suite_id: str, cfg: SuiteConfig | None = None) -> SuiteReport:
    try:
        fn = SUITES[suite_id.upper()]
    except KeyError:
        raise ConfigError(f"unknown suite {suite_id!r}; expected one of {list(ORDER)} or all") from None
    return fn(cfg or SuiteConfig())


def suite_document(report: SuiteReport, seed) -> dict:
    return {"header": header(seed), **report.to_json()}


def run_all(cfg: SuiteConfig | None = None, suites=ORDER) -> dict:
    """Every suite in fixed order; a capacity error fails only its own suite."""
    cfg = cfg or SuiteConfig()
    results = []
    for sid in suites:
        try:
            results.append(run_suite(sid, replace(cfg)).to_json())
        except CapacityError as exc:
            results.append({"suite": sid, "pass": False, "capacity_error": str(exc)})
    return {
        "header": header(cfg.seed),
        "pass": all(r["pass"] for r in results),
        "summary": [{"suite": r["suite"], "pass": r["pass"]} for r in results],
        "suites": results,
    }

"""Finite derivative stages of hereditary families and l1-lower trees.

For a hereditary family the derivative keeps the sets that can be extended
to the right by one more point and stay in the family; k derivatives keep
the F for which some G with ``|G| = k`` and ``G > F`` has ``F u G`` in the
family.  For spreading families G may always be pushed right, and for
Schreier families a single probe decides it: with
``Run(L, k) = {L, ..., L+k-1}``, membership of ``F u Run(L, k)`` is
nondecreasing in L and constant once ``L >= max(max F + 1, k)``.

H_rho is the tree of finite sequences whose nonnegative combinations keep
at least ``rho`` times their coefficient sum.  Testing a node is the linear
program ``min t`` over the simplex subject to ``f(sum a_n x_n) <= t`` for
each dual functional f, solved exactly by cutting planes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .config import capacity
from .errors import CapacityError, ContractError
from .ordinal import Ordinal
from .polytope import linprog
from .schreier import FinSet, as_finset, enumerate_admissible, family
from .spaces import RatVec, Schreier, Space, combine

ONE = Fraction(1)


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"  # horizon exhausted without a witness


class HorizonExhausted(ContractError):
    """A horizon-limited search found no witness; the answer is undecided."""


class FamilyOracle:
    def member(self, F: FinSet) -> bool:
        raise NotImplementedError

    def derivative(self, F: FinSet, k: int) -> tuple[Verdict, FinSet | None]:
        """Verdict for F in the k-th derivative, with an extension witness G."""
        raise NotImplementedError


class SchreierOracle(FamilyOracle):
    def __init__(self, alpha):
        self.fam = family(alpha)
        self.alpha = self.fam.alpha

    def member(self, F):
        return self.fam.member(F)

    def derivative(self, F, k):
        F = as_finset(F)
        if not self.member(F):
            return Verdict.NO, None
        start = max((F[-1] if F else 0) + 1, k)
        G = tuple(range(start, start + k))
        if self.fam._member(self.alpha, F + G):
            return Verdict.YES, G
        return Verdict.NO, None

    def __str__(self):
        return f"schreier({self.alpha})"


class ExplicitOracle(FamilyOracle):
    """A finite hereditary family given by its members."""

    def __init__(self, sets: Iterable[Iterable[int]]):
        members = {as_finset(F) for F in sets}
        members.add(())
        for F in members:
            for i in range(len(F)):
                if F[:i] + F[i + 1:] not in members:
                    raise ContractError(f"family is not hereditary: {list(F)} lacks a subset")
        self.members = frozenset(members)

    @classmethod
    def closure(cls, generators: Iterable[Iterable[int]]) -> "ExplicitOracle":
        """Hereditary closure of the generators."""
        out = set()
        for g in generators:
            g = as_finset(g)
            for mask in range(1 << len(g)):
                out.add(tuple(x for i, x in enumerate(g) if mask >> i & 1))
        return cls(out)

    def member(self, F):
        return as_finset(F) in self.members

    def derivative(self, F, k):
        F = as_finset(F)
        tail = F[-1] if F else 0
        for H in sorted(self.members):
            if len(H) == len(F) + k and H[:len(F)] == F and (not k or H[len(F)] > tail):
                return Verdict.YES, H[len(F):]
        return Verdict.NO, None

    def __str__(self):
        return f"explicit({len(self.members)} sets)"


class PredicateOracle(FamilyOracle):
    """A family given by a membership predicate, searched up to ``horizon``.

    With ``spreading=True`` the k-point run ending at the horizon is the only
    probe needed; otherwise all k-subsets past ``max F`` up to the horizon
    are tried.  Failure is UNKNOWN, never NO.
    """

    def __init__(self, predicate: Callable[[FinSet], bool], horizon: int, spreading: bool = False,
                 name: str = "predicate"):
        self.predicate = predicate
        self.horizon = horizon
        self.spreading = spreading
        self.name = name

    def member(self, F):
        return bool(self.predicate(as_finset(F)))

    def derivative(self, F, k):
        import itertools

        F = as_finset(F)
        if not self.member(F):
            return Verdict.NO, None
        if k == 0:
            return Verdict.YES, ()
        lo = (F[-1] if F else 0) + 1
        if self.spreading:
            G = tuple(range(self.horizon - k + 1, self.horizon + 1))
            if G and G[0] >= lo and self.predicate(F + G):
                return Verdict.YES, G
            return Verdict.UNKNOWN, None
        for G in itertools.combinations(range(lo, self.horizon + 1), k):
            if self.predicate(F + G):
                return Verdict.YES, G
        return Verdict.UNKNOWN, None

    def __str__(self):
        return f"{self.name}(horizon={self.horizon})"


class DerivedOracle(FamilyOracle):
    """The ``stages``-th derivative of ``base`` viewed as a family itself."""

    def __init__(self, base: FamilyOracle, stages: int):
        self.base = base
        self.stages = stages

    def member(self, F):
        return derivative_member(F, self.base, self.stages)

    def derivative(self, F, k):
        return self.base.derivative(F, self.stages + k)

    def __str__(self):
        return f"derived({self.base}, {self.stages})"


MAX_STAGES = 10_000


def derivative_verdict(F, fam: FamilyOracle, k: int) -> tuple[Verdict, FinSet | None]:
    if not 0 <= k <= MAX_STAGES:
        raise ContractError(f"stage count must lie in [0, {MAX_STAGES}]")
    F = as_finset(F)
    if k == 0:
        return (Verdict.YES, ()) if fam.member(F) else (Verdict.NO, None)
    return fam.derivative(F, k)


def derivative_member(F, fam: FamilyOracle, k: int) -> bool:
    verdict, _ = derivative_verdict(F, fam, k)
    if verdict is Verdict.UNKNOWN:
        raise HorizonExhausted(f"no extension of {list(F)} found within the horizon at stage {k}")
    return verdict is Verdict.YES


def cb_rank_finite(fam: ExplicitOracle) -> int:
    """Least k with an empty k-th derivative: one more than the largest set size."""
    if not isinstance(fam, ExplicitOracle):
        raise ContractError("finite ranks are computed for explicit families only")
    k = 0
    while fam.derivative((), k)[0] is Verdict.YES:
        k += 1
    return k


# --- H_rho -------------------------------------------------------------------


@dataclass
class L1LowerCertificate:
    rho: Fraction
    vectors: list[RatVec]
    min_value: Fraction
    minimizer: tuple[Fraction, ...]
    member: bool
    cuts: list[RatVec] = field(default_factory=list)  # functionals used by the final LP

    def replay(self, space: Space) -> bool:
        return (
            sum(self.minimizer) == 1
            and all(a >= 0 for a in self.minimizer)
            and space.norm(combine(self.minimizer, self.vectors)) == self.min_value
            and self.member == (self.min_value >= self.rho)
        )

    def to_json(self) -> dict:
        from .report import frac

        return {
            "rho": frac(self.rho),
            "member": self.member,
            "min_value": frac(self.min_value),
            "minimizer": [frac(a) for a in self.minimizer],
            "vectors": [x.to_json() for x in self.vectors],
            "cuts": len(self.cuts),
        }


def l1_lower_min(xs: Sequence[RatVec], X: Space) -> tuple[Fraction, tuple[Fraction, ...], list[RatVec]]:
    """Exact ``min ||sum a_n x_n||`` over the simplex by cutting planes.

    The LP over the functionals found so far gives a lower bound t at a
    point a; the norming functional of ``sum a_n x_n`` either certifies
    ``norm == t`` (optimal) or is a new cut.
    """
    n = len(xs)
    cuts: list[RatVec] = []
    seen = set()

    def add_cut(a):
        f = X.norming(combine(a, xs))
        if f not in seen:
            seen.add(f)
            cuts.append(f)

    add_cut([ONE / n] * n)
    for i in range(n):
        add_cut([ONE if j == i else Fraction(0) for j in range(n)])
    while True:
        # variables a_1..a_n, t
        A_ub = [[f.dot(x) for x in xs] + [-ONE] for f in cuts]
        res = linprog(
            [0] * n + [1],
            A_ub=A_ub,
            b_ub=[0] * len(cuts),
            A_eq=[[1] * n + [0]],
            b_eq=[1],
        )
        if res.status != "optimal":
            raise AssertionError(f"cutting-plane LP ended {res.status}")
        a = tuple(res.x[:n])
        t = res.x[n]
        value = X.norm(combine(a, xs))
        if value == t:
            return value, a, cuts
        before = len(cuts)
        add_cut(a)
        if len(cuts) == before:
            raise AssertionError("norming functional already present but not tight")


def h_rho_member(xs: Sequence[RatVec], X: Space, rho) -> L1LowerCertificate:
    rho = Fraction(rho)
    if not 0 < rho:
        raise ContractError("rho must be positive")
    if not xs:
        raise ContractError("need at least one vector")
    limit = capacity().exact_arity
    if len(xs) > limit:
        raise CapacityError(f"exact LP arity {len(xs)} exceeds {limit}")
    for x in xs:
        if X.norm(x) != 1:
            raise ContractError(f"{x} is not normalized in {X}")
    value, a, cuts = l1_lower_min(xs, X)
    return L1LowerCertificate(rho, list(xs), value, a, value >= rho, cuts)


# --- the Schreier witness tree -----------------------------------------------


@dataclass
class WitnessTree:
    alpha: Ordinal
    window: int
    nodes: dict  # nonempty admissible E -> basis index max E

    def branch(self, E) -> list[RatVec]:
        """Vectors along the chain of initial segments of E."""
        E = as_finset(E)
        if E not in self.nodes:
            raise ContractError(f"{list(E)} is not a node")
        return [RatVec.basis(self.nodes[E[: i + 1]]) for i in range(len(E))]

    def leaves(self) -> list[FinSet]:
        return [E for E in self.nodes if not any(
            G != E and G[: len(E)] == E for G in self.nodes)]


def build_l1_tree(alpha, window: int) -> WitnessTree:
    """``E -> e_(max E)`` over the nonempty admissible sets in ``[1..window]``."""
    fam = family(alpha)
    sets = enumerate_admissible(window, fam.alpha)
    return WitnessTree(fam.alpha, window, {E: E[-1] for E in sets if E})


def check_tree(tree: WitnessTree, rho=1, branches: Iterable | None = None) -> list[tuple[FinSet, L1LowerCertificate]]:
    X = Schreier(tree.alpha)
    targets = tree.leaves() if branches is None else [as_finset(b) for b in branches]
    return [(E, h_rho_member(tree.branch(E), X, rho)) for E in targets]

"""Schreier families S_alpha of finite subsets of the positive integers.

S_0 holds the empty set and the singletons.  A set belongs to S_(b+1) when it
splits into at most ``min F`` successive blocks, each in S_b.  For a limit
alpha, F belongs to S_alpha when F is in S_(alpha[n]) for some n <= min F,
with ``alpha[n]`` the fundamental sequence of :mod:`schreierlab.ordinal`.

Finite sets are plain strictly increasing tuples of positive integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Tuple, Union

from .config import capacity
from .errors import CapacityError, ContractError
from .ordinal import Ordinal, parse_ordinal

FinSet = Tuple[int, ...]

_MEMO_LIMIT = 1_000_000


def as_finset(elements: Iterable[int]) -> FinSet:
    """Sort and validate; duplicates and non-positive entries are rejected."""
    items = sorted(elements)
    for i, k in enumerate(items):
        if not isinstance(k, int) or k < 1:
            raise ContractError(f"finite sets hold positive integers, got {k!r}")
        if i and items[i - 1] == k:
            raise ContractError(f"duplicate element {k}")
    return tuple(items)


def set_min(F: FinSet) -> float:
    return F[0] if F else float("inf")


def set_max(F: FinSet) -> int:
    return F[-1] if F else 0


def is_spread(G: FinSet, F: FinSet) -> bool:
    """True when G is a spread of F: same size and G[i] >= F[i]."""
    return len(G) == len(F) and all(g >= f for g, f in zip(G, F))


@dataclass(frozen=True)
class Leaf:
    alpha: Ordinal
    elements: FinSet


@dataclass(frozen=True)
class Blocks:
    alpha: Ordinal
    elements: FinSet
    parts: Tuple["Certificate", ...]


@dataclass(frozen=True)
class LimitStep:
    alpha: Ordinal
    elements: FinSet
    n: int
    sub: "Certificate"


Certificate = Union[Leaf, Blocks, LimitStep]


class SchreierFamily:
    """Membership oracle for S_alpha with a per-instance memo.

    The memo is advisory: it maps ``(ordinal, set)`` to a verdict and is
    cleared wholesale once it grows past a fixed size.
    """

    def __init__(self, alpha: Ordinal):
        if isinstance(alpha, (int, str)):
            alpha = _coerce(alpha)
        self.alpha = alpha
        self._memo: dict = {}
        self._steps: dict = {}

    def __repr__(self):
        return f"SchreierFamily({str(self.alpha)!r})"

    def __contains__(self, F) -> bool:
        return self.member(F)

    def member(self, F: Iterable[int]) -> bool:
        return self._member(self.alpha, as_finset(F))

    def _member(self, beta: Ordinal, F: FinSet) -> bool:
        n = len(F)
        if n <= 1:
            return True
        if not beta.terms:
            return False
        key = (beta, F)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if beta.is_successor():
            result = self._blocks(self._step(beta, 0), F, F[0]) is not None
        else:
            result = any(self._member(self._step(beta, k), F) for k in range(1, F[0] + 1))
        if len(self._memo) >= _MEMO_LIMIT:
            self._memo.clear()
        self._memo[key] = result
        return result

    def _step(self, beta: Ordinal, k: int) -> Ordinal:
        """Predecessor (k = 0) or fundamental-sequence term, cached."""
        key = (beta, k)
        out = self._steps.get(key)
        if out is None:
            out = beta.predecessor() if k == 0 else beta[k]
            self._steps[key] = out
        return out

    def _blocks(self, pred: Ordinal, F: FinSet, limit: int):
        """Fewest successive S_pred blocks covering F, by dynamic programming.

        ``best[i]`` is the fewest blocks covering ``F[:i]``; every split
        point is tried, so no structural property of S_pred is assumed.
        Returns the block start offsets of an optimal cut, or None when more
        than ``limit`` blocks are needed.
        """
        n = len(F)
        if not pred.terms:
            # S_0 blocks are singletons
            return list(range(n)) if n <= limit else None
        member = self._member
        inf = n + 1
        best = [0] + [inf] * n
        back = [0] * (n + 1)
        for i in range(1, n + 1):
            for j in range(i):
                if best[j] + 1 < best[i] and member(pred, F[j:i]):
                    best[i] = best[j] + 1
                    back[i] = j
        if best[n] > limit:
            return None
        starts = []
        i = n
        while i > 0:
            i = back[i]
            starts.append(i)
        return starts[::-1]

    def witness(self, F: Iterable[int]) -> Certificate | None:
        F = as_finset(F)
        if not self.member(F):
            return None
        return self._certify(self.alpha, F)

    def _certify(self, beta: Ordinal, F: FinSet) -> Certificate:
        if not F or not beta.terms:
            return Leaf(beta, F)
        if beta.is_successor():
            pred = beta.predecessor()
            starts = self._blocks(pred, F, len(F))
            ends = starts[1:] + [len(F)]
            parts = tuple(self._certify(pred, F[j:i]) for j, i in zip(starts, ends))
            return Blocks(beta, F, parts)
        for k in range(1, F[0] + 1):
            if self._member(beta[k], F):
                return LimitStep(beta, F, k, self._certify(beta[k], F))
        raise AssertionError("certify called on a non-member")

    def can_extend(self, F: Iterable[int]) -> bool:
        """Whether F u {k} is admissible for some k > max F.

        One probe at ``max F + 1`` decides it: replacing the last element of
        an admissible set by any smaller value still above the rest keeps it
        admissible (the same holds blockwise through the recursion).
        """
        F = as_finset(F)
        if not F:
            return True
        return self._member(self.alpha, F + (F[-1] + 1,))

    def is_maximal(self, F: Iterable[int]) -> bool:
        F = as_finset(F)
        if not self.member(F):
            raise ContractError(f"{list(F)} is not in S_{self.alpha}")
        return not self.can_extend(F)

    def admissible(self, window: int, only_maximal: bool = False) -> list[FinSet]:
        """All members inside ``[1..window]`` in lexicographic order.

        With ``only_maximal`` keep the sets having no end-extension inside
        the window, which is weaker than :meth:`is_maximal` at the edge.
        """
        limit = capacity().enum_window
        if window > limit:
            raise CapacityError(f"window {window} exceeds enumeration bound {limit}")
        out: list[FinSet] = []
        stack: list[FinSet] = [()]
        while stack:
            F = stack.pop()
            children = [F + (k,) for k in range(set_max(F) + 1, window + 1)]
            children = [G for G in children if self._member(self.alpha, G)]
            if not only_maximal or not children:
                out.append(F)
            stack.extend(reversed(children))
        return out

    def maximal_subsets(self, indices: Iterable[int]) -> list[FinSet]:
        """Inclusion-maximal members contained in ``indices``."""
        pool = as_finset(indices)
        out = []
        stack = [((), 0)]
        while stack:
            F, start = stack.pop()
            grew = False
            for pos in range(start, len(pool)):
                G = F + (pool[pos],)
                if self._member(self.alpha, G):
                    stack.append((G, pos + 1))
                    grew = True
            if grew:
                continue
            chosen = set(F)
            if not any(
                k not in chosen and self._member(self.alpha, tuple(sorted(chosen | {k})))
                for k in pool
            ):
                out.append(F)
        return sorted(out)


def check_certificate(cert: Certificate) -> bool:
    """Replay a certificate against the recursion, independently of any memo."""
    F = cert.elements
    if list(F) != sorted(set(F)):
        return False
    if isinstance(cert, Leaf):
        return len(F) == 0 or (len(F) == 1 and cert.alpha.is_zero())
    if isinstance(cert, Blocks):
        if not cert.alpha.is_successor():
            return False
        pred = cert.alpha.predecessor()
        flat = tuple(k for part in cert.parts for k in part.elements)
        if flat != F or len(cert.parts) > F[0]:
            return False
        for a, b in zip(cert.parts, cert.parts[1:]):
            if not a.elements or not b.elements or a.elements[-1] >= b.elements[0]:
                return False
        return all(p.alpha == pred and check_certificate(p) for p in cert.parts)
    if isinstance(cert, LimitStep):
        if not cert.alpha.is_limit() or not F or not 1 <= cert.n <= F[0]:
            return False
        sub = cert.sub
        return sub.alpha == cert.alpha[cert.n] and sub.elements == F and check_certificate(sub)
    return False


def _coerce(alpha) -> Ordinal:
    if isinstance(alpha, Ordinal):
        return alpha
    if isinstance(alpha, int):
        return Ordinal.of(alpha)
    return parse_ordinal(alpha)


@lru_cache(maxsize=64)
def family(alpha) -> SchreierFamily:
    """Shared family instance per ordinal."""
    return SchreierFamily(_coerce(alpha))


def member(F, alpha) -> bool:
    return family(_coerce(alpha)).member(F)


def partition_witness(F, alpha) -> Certificate | None:
    return family(_coerce(alpha)).witness(F)


def can_extend(F, alpha) -> bool:
    return family(_coerce(alpha)).can_extend(F)


def is_maximal(F, alpha) -> bool:
    return family(_coerce(alpha)).is_maximal(F)


def enumerate_admissible(window: int, alpha, only_maximal: bool = False) -> list[FinSet]:
    return family(_coerce(alpha)).admissible(window, only_maximal)


def certificate_to_json(cert: Certificate):
    if isinstance(cert, Leaf):
        return {"kind": "leaf", "alpha": str(cert.alpha), "set": list(cert.elements)}
    if isinstance(cert, Blocks):
        return {
            "kind": "blocks",
            "alpha": str(cert.alpha),
            "set": list(cert.elements),
            "parts": [certificate_to_json(p) for p in cert.parts],
        }
    return {
        "kind": "limit",
        "alpha": str(cert.alpha),
        "set": list(cert.elements),
        "n": cert.n,
        "sub": certificate_to_json(cert.sub),
    }

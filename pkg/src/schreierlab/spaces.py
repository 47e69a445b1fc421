"""Exact polyhedral norms on finitely supported rational sequences.

Every space here has a normalized, 1-unconditional coordinate basis indexed
by the positive integers, and every norm is a maximum of finitely many
linear functionals on any finite window.  Each :class:`Space` offers

* ``norm(x)``       the exact value, a :class:`~fractions.Fraction`;
* ``norming(x)``    an extreme dual functional ``f`` supported in ``supp x``
                    with ``f(x) == norm(x)``;
* ``functionals(I)`` a finite list whose maximum is the norm on vectors
                    supported in the index set ``I``.

Space grammar (``parse_space`` / ``str``)::

    c0 | l1 | schreier(<ordinal>) | rsum1(<space>) | zv(<space>, <space>)
       | restrict(<space>; <indices>) | ilv(<space>, <space>; <indices>)

``<indices>`` is an increasing list such as ``2,4,6`` or ``2,4,...``; a
trailing ``...`` continues with the last step.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .config import capacity
from .errors import CapacityError, ContractError, SpaceSyntaxError
from .ordinal import Ordinal, parse_ordinal
from .schreier import SchreierFamily, family

ZERO = Fraction(0)
ONE = Fraction(1)


class RatVec:
    """Finitely supported vector with exact rational coordinates."""

    __slots__ = ("_c",)

    def __init__(self, coords: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = coords.items() if isinstance(coords, Mapping) else coords
        c = {}
        for k, v in items:
            if not isinstance(k, int) or k < 1:
                raise ContractError(f"coordinate index must be a positive integer, got {k!r}")
            v = Fraction(v)
            if v:
                c[k] = c.get(k, ZERO) + v
                if not c[k]:
                    del c[k]
        self._c = c

    @classmethod
    def basis(cls, k: int, value=1) -> "RatVec":
        return cls({k: value})

    @classmethod
    def dense(cls, values: Sequence, start: int = 1) -> "RatVec":
        return cls((start + i, v) for i, v in enumerate(values))

    @classmethod
    def _raw(cls, c: dict) -> "RatVec":
        out = cls.__new__(cls)
        out._c = c
        return out

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._c))

    def items(self) -> list[tuple[int, Fraction]]:
        return sorted(self._c.items())

    def __getitem__(self, k: int) -> Fraction:
        return self._c.get(k, ZERO)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __iter__(self):
        return iter(self.items())

    def __eq__(self, other):
        if not isinstance(other, RatVec):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "RatVec") -> "RatVec":
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, ZERO) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return RatVec._raw(c)

    def __neg__(self):
        return RatVec._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        a = Fraction(a)
        if not a:
            return RatVec()
        return RatVec._raw({k: a * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def __truediv__(self, a):
        return self * (1 / Fraction(a))

    def dot(self, other: "RatVec") -> Fraction:
        small, big = (self._c, other._c) if len(self._c) <= len(other._c) else (other._c, self._c)
        return sum((v * big[k] for k, v in small.items() if k in big), ZERO)

    def restrict(self, indices: Iterable[int]) -> "RatVec":
        keep = set(indices)
        return RatVec._raw({k: v for k, v in self._c.items() if k in keep})

    def interval(self, lo: int, hi: int | None = None) -> "RatVec":
        """Coordinates in ``[lo, hi)``; ``hi=None`` means unbounded."""
        return RatVec._raw(
            {k: v for k, v in self._c.items() if k >= lo and (hi is None or k < hi)}
        )

    def reindex(self, mapping) -> "RatVec":
        return RatVec((mapping(k), v) for k, v in self._c.items())

    def abs(self) -> "RatVec":
        return RatVec._raw({k: abs(v) for k, v in self._c.items()})

    def l1(self) -> Fraction:
        return sum((abs(v) for v in self._c.values()), ZERO)

    def to_json(self) -> list[list[int]]:
        return [[k, v.numerator, v.denominator] for k, v in self.items()]

    @classmethod
    def from_json(cls, data) -> "RatVec":
        if not isinstance(data, list):
            raise ContractError("vector JSON must be an array of [index, num, den]")
        items = []
        for entry in data:
            if (
                not isinstance(entry, list)
                or len(entry) != 3
                or not all(isinstance(e, int) and not isinstance(e, bool) for e in entry)
                or entry[2] == 0
            ):
                raise ContractError(f"bad vector entry {entry!r}")
            items.append((entry[0], Fraction(entry[1], entry[2])))
        if len({k for k, _ in items}) != len(items):
            raise ContractError("duplicate index in vector JSON")
        return cls(items)

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"RatVec({{{body}}})"


def combine(coeffs: Sequence, vectors: Sequence[RatVec]) -> RatVec:
    c: dict[int, Fraction] = {}
    for a, x in zip(coeffs, vectors):
        a = Fraction(a)
        if not a:
            continue
        for k, v in x._c.items():
            c[k] = c.get(k, ZERO) + a * v
    return RatVec._raw({k: v for k, v in c.items() if v})


def _sign(v) -> int:
    return 1 if v > 0 else -1


def _dedupe(functionals: Iterable[RatVec]) -> list[RatVec]:
    seen = set()
    out = []
    for f in functionals:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def _check_count(n: int):
    limit = capacity().functionals
    if n > limit:
        raise CapacityError(f"{n} dual functionals exceed the bound {limit}")


def _sign_patterns(indices: Sequence[int]) -> list[RatVec]:
    if len(indices) > capacity().sign_set:
        raise CapacityError(
            f"sign enumeration over {len(indices)} coordinates exceeds {capacity().sign_set}"
        )
    return [
        RatVec._raw({k: Fraction(s) for k, s in zip(indices, signs)})
        for signs in itertools.product((1, -1), repeat=len(indices))
    ]


class IndexSeq:
    """Increasing sequence of positive integers, optionally continued by a fixed step."""

    def __init__(self, prefix: Sequence[int], periodic: bool = False):
        prefix = tuple(prefix)
        if not prefix or any(k < 1 for k in prefix):
            raise ContractError("index sequences hold positive integers")
        if any(a >= b for a, b in zip(prefix, prefix[1:])):
            raise ContractError("index sequences must increase")
        if periodic and len(prefix) < 2:
            raise ContractError("'...' needs at least two leading terms")
        self.prefix = prefix
        self.periodic = periodic
        self.step = prefix[-1] - prefix[-2] if periodic else 0

    def __getitem__(self, n: int) -> int:
        if n < 1:
            raise ContractError("index sequences are 1-based")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        if not self.periodic:
            raise ContractError(f"index {n} beyond finite sequence {self}")
        return self.prefix[-1] + (n - len(self.prefix)) * self.step

    def rank(self, value: int) -> int | None:
        """n with ``self[n] == value``, else None."""
        if value <= self.prefix[-1]:
            try:
                return self.prefix.index(value) + 1
            except ValueError:
                return None
        if not self.periodic:
            return None
        q, r = divmod(value - self.prefix[-1], self.step)
        return len(self.prefix) + q if r == 0 else None

    def __eq__(self, other):
        return isinstance(other, IndexSeq) and (self.prefix, self.periodic) == (
            other.prefix,
            other.periodic,
        )

    def __hash__(self):
        return hash((self.prefix, self.periodic))

    def __str__(self):
        body = ",".join(map(str, self.prefix))
        return body + ",..." if self.periodic else body


class Space:
    """Base class for the norm oracles."""

    is_one_unconditional = True
    projection_constant_claim = ONE

    def norm(self, x: RatVec) -> Fraction:
        raise NotImplementedError

    def norming(self, x: RatVec) -> RatVec:
        raise NotImplementedError

    def functionals(self, indices: Iterable[int]) -> list[RatVec]:
        raise NotImplementedError

    def candidate_positions(self, lo: int, hi: int) -> list[int]:
        """Basis positions in ``[lo, hi]`` among which some maximizes the norm
        of ``c*v_p + (terms at positions outside [lo, hi])`` for ``c >= 0``,
        jointly across disjoint windows.  Default: all of them."""
        return list(range(lo, hi + 1))

    def __str__(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<space {self}>"

    def __eq__(self, other):
        return isinstance(other, Space) and str(self) == str(other)

    def __hash__(self):
        return hash(str(self))


class C0(Space):
    def norm(self, x):
        return max((abs(v) for _, v in x), default=ZERO)

    def norming(self, x):
        if not x:
            return RatVec()
        k, v = max(x.items(), key=lambda kv: (abs(kv[1]), -kv[0]))
        return RatVec._raw({k: Fraction(_sign(v))})

    def functionals(self, indices):
        return [RatVec._raw({k: Fraction(s)}) for k in sorted(set(indices)) for s in (1, -1)]

    def candidate_positions(self, lo, hi):
        return [hi]

    def __str__(self):
        return "c0"


class L1(Space):
    def norm(self, x):
        return x.l1()

    def norming(self, x):
        return RatVec._raw({k: Fraction(_sign(v)) for k, v in x})

    def functionals(self, indices):
        return _sign_patterns(sorted(set(indices)))

    def candidate_positions(self, lo, hi):
        return [hi]

    def __str__(self):
        return "l1"


class Schreier(Space):
    """The Schreier space X_alpha: the largest l1-mass of x on an admissible set."""

    def __init__(self, alpha: Ordinal | int | str):
        if isinstance(alpha, int):
            alpha = Ordinal.of(alpha)
        elif isinstance(alpha, str):
            alpha = parse_ordinal(alpha)
        self.alpha = alpha
        self.family: SchreierFamily = family(alpha)

    def best_set(self, x: RatVec) -> tuple[Fraction, tuple[int, ...]]:
        """Branch and bound over admissible subsets of ``supp x``.

        Sets grow in index order; an inadmissible prefix kills its subtree
        (the family is hereditary) and a branch stops once its mass plus
        all remaining mass cannot beat the incumbent.
        """
        items = x.items()
        n = len(items)
        if n > capacity().schreier_support:
            raise CapacityError(
                f"support size {n} exceeds Schreier bound {capacity().schreier_support}"
            )
        if not n:
            return ZERO, ()
        den = math.lcm(*(v.denominator for _, v in items))
        idx = [k for k, _ in items]
        w = [abs(v.numerator) * (den // v.denominator) for _, v in items]
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] + w[i]
        top = max(range(n), key=lambda i: w[i])
        best = [w[top], (idx[top],)]
        fam = self.family
        alpha = self.alpha

        def dfs(F, val, start):
            for p in range(start, n):
                if val + suffix[p] <= best[0]:
                    return
                G = F + (idx[p],)
                if not fam._member(alpha, G):
                    continue
                v = val + w[p]
                if v > best[0]:
                    best[0], best[1] = v, G
                dfs(G, v, p + 1)

        dfs((), 0, 0)
        return Fraction(best[0], den), best[1]

    def norm(self, x):
        return self.best_set(x)[0]

    def norming(self, x):
        _, E = self.best_set(x)
        return RatVec._raw({k: Fraction(_sign(x[k])) for k in E})

    def functionals(self, indices):
        out = []
        for A in self.family.maximal_subsets(set(indices)):
            out.extend(_sign_patterns(A))
        _check_count(len(out))
        return out

    def candidate_positions(self, lo, hi):
        # the family is spreading, so the basis is 1-right dominant
        return [hi]

    def __str__(self):
        return f"schreier({self.alpha})"


class DirectSum1(Space):
    """R (+)_1 right: coordinate 1 is the scalar summand, index k >= 2 is
    coordinate k - 1 of ``right``."""

    def __init__(self, right: Space):
        self.right = right

    def _rest(self, x):
        return RatVec._raw({k - 1: v for k, v in x._c.items() if k >= 2})

    def norm(self, x):
        return abs(x[1]) + self.right.norm(self._rest(x))

    def norming(self, x):
        f = self.right.norming(self._rest(x)).reindex(lambda k: k + 1)
        if x[1]:
            f = f + RatVec.basis(1, _sign(x[1]))
        return f

    def functionals(self, indices):
        indices = set(indices)
        rest = sorted(k - 1 for k in indices if k >= 2)
        tails = [f.reindex(lambda k: k + 1) for f in self.right.functionals(rest)] if rest else []
        if 1 not in indices:
            return tails
        heads = [RatVec.basis(1, s) for s in (1, -1)]
        if not tails:
            return heads
        out = [h + t for h in heads for t in tails]
        _check_count(len(out))
        return out

    def candidate_positions(self, lo, hi):
        out = [1] if lo <= 1 <= hi else []
        lo2 = max(lo, 2)
        if lo2 <= hi:
            out += [q + 1 for q in self.right.candidate_positions(lo2 - 1, hi - 1)]
        return out

    def __str__(self):
        return f"rsum1({self.right})"


class ZV(Space):
    """The renorming that maximizes, over breakpoints m_0 < ... < m_n, the
    V-norm of ``sum_i ||x on [m_(i-1), m_i)||_Z * v_(m_(i-1))``.

    Only segments meeting ``supp x`` carry mass, so a breakpoint tuple
    amounts to cutting ``supp x`` into consecutive runs and giving run j a
    position ``p_j`` with ``last(run j-1) < p_j <= first(run j)``.  The
    positions tried per run come from ``V.candidate_positions``; the
    exhaustive check against literal breakpoint enumeration lives in
    :func:`zv_norm_by_breakpoints`.
    """

    def __init__(self, base: Space, v: Space):
        self.base = base
        self.v = v

    def _structures(self, support: Sequence[int]):
        """Yield ``(runs, positions)`` with runs as (start, end) slices."""
        r = len(support)
        for cuts in itertools.product((False, True), repeat=max(r - 1, 0)):
            runs = []
            start = 0
            for i, cut in enumerate(cuts, start=1):
                if cut:
                    runs.append((start, i))
                    start = i
            runs.append((start, r))
            choices = []
            for a, _ in runs:
                lo = support[a - 1] + 1 if a else 1
                choices.append(self.v.candidate_positions(lo, support[a]))
            for positions in itertools.product(*choices):
                yield runs, positions

    def best(self, x: RatVec):
        support = x.support
        if len(support) > capacity().zv_support:
            raise CapacityError(
                f"support size {len(support)} exceeds ZV bound {capacity().zv_support}"
            )
        if not support:
            return ZERO, None
        run_norm: dict = {}

        def seg(a, b):
            key = (a, b)
            if key not in run_norm:
                run_norm[key] = self.base.norm(x.restrict(support[a:b]))
            return run_norm[key]

        best_val, best_struct = -ONE, None
        for runs, positions in self._structures(support):
            vec = RatVec((p, seg(a, b)) for (a, b), p in zip(runs, positions))
            val = self.v.norm(vec)
            if val > best_val:
                best_val, best_struct = val, (runs, positions, vec)
        return best_val, best_struct

    def norm(self, x):
        return self.best(x)[0]

    def norming(self, x):
        val, struct = self.best(x)
        if struct is None:
            return RatVec()
        runs, positions, vec = struct
        psi = self.v.norming(vec)
        support = x.support
        out = RatVec()
        for (a, b), p in zip(runs, positions):
            weight = abs(psi[p])
            if weight:
                out = out + weight * self.base.norming(x.restrict(support[a:b]))
        return out

    def functionals(self, indices):
        idx = sorted(set(indices))
        out = set()
        budget = capacity().functionals
        for runs, positions in self._structures(idx):
            psis = {f.abs() for f in self.v.functionals(positions)}
            per_run = [self.base.functionals(idx[a:b]) for a, b in runs]
            for psi in psis:
                weights = [psi[p] for p in positions]
                pools = [fs if w else [RatVec()] for fs, w in zip(per_run, weights)]
                for pick in itertools.product(*pools):
                    out.add(combine(weights, pick))
                    if len(out) > budget:
                        _check_count(len(out))
        return sorted(out, key=lambda f: f.items())

    def __str__(self):
        return f"zv({self.base}, {self.v})"


def zv_norm_by_breakpoints(base: Space, v: Space, x: RatVec, predicate=None):
    """Literal definition: every tuple ``1 <= m_0 < ... < m_n <= max supp + 1``.

    Breakpoints past ``max supp + 1`` only add segments of zero mass.
    ``predicate(tuple)`` optionally filters the tuples.  Returns the maximum
    and the number of tuples evaluated.
    """
    top = x.support[-1] + 1 if x else 2
    best = ZERO
    count = 0
    for size in range(2, top + 1):
        for m in itertools.combinations(range(1, top + 1), size):
            if predicate is not None and not predicate(m):
                continue
            vec = RatVec(
                (m[i - 1], base.norm(x.interval(m[i - 1], m[i]))) for i in range(1, len(m))
            )
            val = v.norm(vec)
            count += 1
            if val > best:
                best = val
    return best, count


class Restrict(Space):
    """V_M: coordinate n is the basis vector v_(M[n]) of ``v``."""

    def __init__(self, v: Space, m: IndexSeq):
        self.v = v
        self.m = m

    def _push(self, x):
        return RatVec._raw({self.m[k]: val for k, val in x._c.items()})

    def norm(self, x):
        return self.v.norm(self._push(x))

    def norming(self, x):
        f = self.v.norming(self._push(x))
        return RatVec._raw({self.m.rank(k): val for k, val in f._c.items()})

    def functionals(self, indices):
        pos = [self.m[k] for k in sorted(set(indices))]
        return _dedupe(
            RatVec._raw({self.m.rank(k): val for k, val in f._c.items()})
            for f in self.v.functionals(pos)
        )

    def __str__(self):
        return f"restrict({self.v}; {self.m})"


class InterleaveInf(Space):
    """Z (+)_inf V_(N minus M): index ``M[k]`` carries coordinate k of ``z``,
    every other index n carries v_n."""

    def __init__(self, z: Space, v: Space, m: IndexSeq):
        self.z = z
        self.v = v
        self.m = m

    def split(self, x: RatVec) -> tuple[RatVec, RatVec]:
        zc, vc = {}, {}
        for k, val in x._c.items():
            r = self.m.rank(k)
            if r is None:
                vc[k] = val
            else:
                zc[r] = val
        return RatVec._raw(zc), RatVec._raw(vc)

    def norm(self, x):
        zp, vp = self.split(x)
        return max(self.z.norm(zp), self.v.norm(vp))

    def norming(self, x):
        zp, vp = self.split(x)
        if self.z.norm(zp) >= self.v.norm(vp):
            f = self.z.norming(zp)
            return RatVec._raw({self.m[k]: val for k, val in f._c.items()})
        return self.v.norming(vp)

    def functionals(self, indices):
        idx = set(indices)
        zidx = sorted(self.m.rank(k) for k in idx if self.m.rank(k) is not None)
        vidx = sorted(k for k in idx if self.m.rank(k) is None)
        out = []
        if zidx:
            out += [
                RatVec._raw({self.m[k]: val for k, val in f._c.items()})
                for f in self.z.functionals(zidx)
            ]
        if vidx:
            out += self.v.functionals(vidx)
        return out

    def __str__(self):
        return f"ilv({self.z}, {self.v}; {self.m})"


def norm(space: Space, x: RatVec) -> Fraction:
    return space.norm(x)


def normalize(space: Space, x: RatVec) -> RatVec:
    n = space.norm(x)
    if not n:
        raise ContractError("cannot normalize the zero vector")
    return x / n


def dual_functionals(space: Space, window: int) -> tuple[RatVec, ...]:
    """Functionals whose maximum is the norm on vectors supported in ``[1..window]``."""
    return _dual_functionals(space, window, capacity())


@lru_cache(maxsize=64)
def _dual_functionals(space, window, cap):
    # the capacity is part of the key so a lowered bound is never bypassed
    return tuple(_dedupe(space.functionals(range(1, window + 1))))


# --- grammar ---------------------------------------------------------------


class _SpaceParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, msg):
        raise SpaceSyntaxError(f"{msg} at position {self.pos} in {self.text!r}")

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch):
        self.ws()
        if not self.text.startswith(ch, self.pos):
            self.fail(f"expected {ch!r}")
        self.pos += len(ch)

    def ident(self):
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        return self.text[start:self.pos]

    def balanced(self):
        """Raw text up to the ')' closing an already consumed '('."""
        depth = 0
        start = self.pos
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                if depth == 0:
                    return self.text[start:self.pos]
                depth -= 1
            self.pos += 1
        self.fail("unbalanced parentheses")

    def indices(self):
        self.ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] != ")":
            self.pos += 1
        raw = [s.strip() for s in self.text[start:self.pos].split(",")]
        periodic = bool(raw) and raw[-1] == "..."
        if periodic:
            raw = raw[:-1]
        try:
            return IndexSeq([int(s) for s in raw], periodic)
        except (ValueError, ContractError) as exc:
            self.fail(f"bad index list ({exc})")

    def space(self) -> Space:
        name = self.ident()
        if name == "c0":
            return C0()
        if name == "l1":
            return L1()
        if name == "schreier":
            self.expect("(")
            raw = self.balanced()
            self.expect(")")
            try:
                return Schreier(parse_ordinal(raw))
            except ValueError as exc:
                self.fail(str(exc))
        if name == "rsum1":
            self.expect("(")
            inner = self.space()
            self.expect(")")
            return DirectSum1(inner)
        if name == "zv":
            self.expect("(")
            z = self.space()
            self.expect(",")
            v = self.space()
            self.expect(")")
            return ZV(z, v)
        if name == "restrict":
            self.expect("(")
            v = self.space()
            self.expect(";")
            m = self.indices()
            self.expect(")")
            return Restrict(v, m)
        if name == "ilv":
            self.expect("(")
            z = self.space()
            self.expect(",")
            v = self.space()
            self.expect(";")
            m = self.indices()
            self.expect(")")
            return InterleaveInf(z, v, m)
        self.fail(f"unknown space {name!r}")


def parse_space(text: str) -> Space:
    p = _SpaceParser(text)
    sp = p.space()
    p.ws()
    if p.pos != len(text):
        p.fail("trailing input")
    return sp


# --- random inputs ---------------------------------------------------------

SIMPLE_COEFFS = tuple(Fraction(s) * c for c in (1, Fraction(1, 2), 2) for s in (1, -1))


def random_coefficient(rng: random.Random) -> Fraction:
    """Half the time one of +-1, +-1/2, +-2; otherwise +-p/q with q <= 8, p <= 2q."""
    if rng.random() < 0.5:
        return rng.choice(SIMPLE_COEFFS)
    q = rng.randint(1, 8)
    return Fraction(rng.randint(1, 2 * q), q) * rng.choice((1, -1))


def random_block_sequence(
    space: Space,
    count: int,
    window: int,
    seed=None,
    *,
    rng: random.Random | None = None,
    max_support: int = 4,
    density: float = 0.7,
) -> list[RatVec]:
    """Normalized vectors with successive supports inside ``[1..window]``.

    Interval lengths are uniform in ``[1, max_support]`` (shrunk to fit), the
    leftover room is spread over the gaps uniformly at random, each interval
    coordinate is nonzero with probability ``density`` (the first always),
    and values come from :func:`random_coefficient`.
    """
    if count < 1 or count > window:
        raise ContractError(f"cannot fit {count} blocks in a window of {window}")
    rng = rng if rng is not None else random.Random(seed)
    sizes = [rng.randint(1, max_support) for _ in range(count)]
    while sum(sizes) > window:
        i = max(range(count), key=lambda j: sizes[j])
        sizes[i] -= 1
    slack = window - sum(sizes)
    gaps = [0] * (count + 1)
    for _ in range(rng.randint(0, slack)):
        gaps[rng.randrange(count + 1)] += 1
    out = []
    pos = 1
    for i in range(count):
        pos += gaps[i]
        coords = {pos: random_coefficient(rng)}
        for k in range(pos + 1, pos + sizes[i]):
            if rng.random() < density:
                coords[k] = random_coefficient(rng)
        out.append(normalize(space, RatVec(coords)))
        pos += sizes[i]
    return out

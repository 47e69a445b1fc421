"""Exact rational linear programming and polytope vertex enumeration.

``linprog`` is a dense two-phase tableau simplex with Bland's rule, so it
terminates on degenerate problems.  ``vertices`` runs the double
description method on the homogenized cone of ``{y : A y <= 1}`` and
keeps the rays with positive homogenizing coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ContractError

ZERO = Fraction(0)
ONE = Fraction(1)

Matrix = list[list[Fraction]]


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list[Fraction] = field(default_factory=list)
    value: Fraction | None = None


def _pivot(T: Matrix, basis: list[int], r: int, c: int):
    row = T[r]
    p = row[c]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _simplex(T: Matrix, basis: list[int], allowed: int) -> bool:
    """Minimize the objective held in the last row; columns ``>= allowed``
    never enter.  Returns False when unbounded."""
    m = len(T) - 1
    obj = T[-1]
    while True:
        obj = T[-1]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False
        _pivot(T, basis, leave, enter)


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    maximize: bool = False,
) -> LPResult:
    """Optimize ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    cost = [Fraction(v) for v in c]
    if maximize:
        cost = [-v for v in cost]
    rows = [([Fraction(v) for v in a], Fraction(b), True) for a, b in zip(A_ub, b_ub)]
    rows += [([Fraction(v) for v in a], Fraction(b), False) for a, b in zip(A_eq, b_eq)]
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq) or any(len(a) != n for a, _, _ in rows):
        raise ContractError("constraint shapes do not match")
    m = len(rows)
    n_slack = len(A_ub)
    width = n + n_slack + m + 1  # structural, slack, artificial, rhs
    T: Matrix = []
    s = 0
    for i, (a, b, ub) in enumerate(rows):
        row = a + [ZERO] * (n_slack + m) + [b]
        if ub:
            row[n + s] = ONE
            s += 1
        if b < 0:
            row = [-v for v in row]
        row[n + n_slack + i] = ONE
        T.append(row)
    basis = [n + n_slack + i for i in range(m)]
    # phase one: minimize the sum of artificials
    phase1 = [ZERO] * width
    for row in T:
        phase1 = [p - v for p, v in zip(phase1, row)]
    for i in range(m):
        phase1[n + n_slack + i] = ZERO
    T.append(phase1)
    _simplex(T, basis, n + n_slack)
    if T[-1][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= n + n_slack:
            col = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
            if col is None:
                del T[i], basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    # phase two
    obj = cost + [ZERO] * (width - n)
    for i, b in enumerate(basis):
        f = obj[b]
        if f:
            obj = [o - f * v for o, v in zip(obj, T[i])]
    T[-1] = obj
    if not _simplex(T, basis, n + n_slack):
        return LPResult("unbounded")
    x = [ZERO] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = T[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult("optimal", x, Fraction(value))


# --- vertex enumeration ------------------------------------------------------


def solve(A: Matrix, b: Sequence) -> list[Fraction] | None:
    """Solve the square system ``A x = b`` exactly; None when singular."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _primitive(v: list[Fraction]) -> tuple[Fraction, ...]:
    """Positive rescaling to a primitive integer vector."""
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) or 1
    return tuple(Fraction(x // g) for x in ints)


def _independent_rows(rows: Matrix, dim: int) -> list[int]:
    chosen: list[int] = []
    basis: list[list[Fraction]] = []  # reduced rows with their pivot columns
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        v = list(row)
        for p, brow in zip(pivots, basis):
            if v[p]:
                f = v[p] / brow[p]
                v = [a - f * b for a, b in zip(v, brow)]
        col = next((j for j, a in enumerate(v) if a), None)
        if col is not None:
            chosen.append(idx)
            basis.append(v)
            pivots.append(col)
            if len(chosen) == dim:
                break
    return chosen


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def cone_rays(rows: Matrix) -> list[tuple[Fraction, ...]]:
    """Extreme rays of the pointed cone ``{z : r.z >= 0 for r in rows}``.

    Double description: start from the simplicial cone of ``dim``
    independent rows, whose rays are the columns of the inverse, then add
    the remaining rows one at a time.  Two rays are combined only when
    adjacent, tested combinatorially: their common active constraints
    number at least ``dim - 2`` and no third ray is active on all of them.
    """
    if not rows:
        raise ContractError("empty constraint system")
    dim = len(rows[0])
    init = _independent_rows(rows, dim)
    if len(init) < dim:
        raise ContractError("cone is not pointed (constraints do not span)")
    A0 = [rows[i] for i in init]
    rays = []
    for k in range(dim):
        # column k of the inverse: A0 z = e_k
        z = solve(A0, [ONE if i == k else ZERO for i in range(dim)])
        rays.append(_primitive(z))
    active = [frozenset(i for i, r in enumerate(init) if _dot(A0[i], z) == 0) for z in rays]
    done = list(init)
    done_set = set(init)
    for idx in range(len(rows)):
        if idx in done_set:
            continue
        row = rows[idx]
        pos, neg, zer = [], [], []
        vals = []
        for k, z in enumerate(rays):
            v = _dot(row, z)
            vals.append(v)
            (pos if v > 0 else neg if v < 0 else zer).append(k)
        if not neg:
            slot = len(done)
            done.append(idx)
            done_set.add(idx)
            active = [a | {slot} if vals[k] == 0 else a for k, a in enumerate(active)]
            continue
        slot = len(done)
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zer]
        new_active = [active[k] for k in pos] + [active[k] | {slot} for k in zer]
        for p in pos:
            for q in neg:
                common = active[p] & active[q]
                if len(common) < dim - 2:
                    continue
                if any(
                    k != p and k != q and common <= active[k] for k in range(len(rays))
                ):
                    continue
                vp, vq = vals[p], vals[q]
                z = [vp * b - vq * a for a, b in zip(rays[p], rays[q])]
                new_rays.append(_primitive(z))
                new_active.append(common | {slot})
        rays, active = new_rays, new_active
        done.append(idx)
        done_set.add(idx)
    # active sets above index into ``done``; rays are what callers need
    return sorted(set(rays))


def vertices(A: Sequence[Sequence], b: Sequence | None = None) -> list[tuple[Fraction, ...]]:
    """Vertices of the bounded polytope ``{y : A y <= b}`` with ``b > 0``
    (default all ones), sorted lexicographically."""
    A = [[Fraction(v) for v in row] for row in A]
    if not A:
        raise ContractError("no constraints")
    dim = len(A[0])
    b = [ONE] * len(A) if b is None else [Fraction(v) for v in b]
    if any(v <= 0 for v in b):
        raise ContractError("vertex enumeration needs the origin strictly inside")
    # z = (t, y) with t*b_i - a_i.y >= 0 and t >= 0
    rows = [[ONE] + [ZERO] * dim] + [[bi] + [-v for v in row] for row, bi in zip(A, b)]
    out = []
    for z in cone_rays(rows):
        if z[0] > 0:
            out.append(tuple(v / z[0] for v in z[1:]))
        elif any(z[1:]):
            raise ContractError("polyhedron is unbounded")
    return sorted(out)

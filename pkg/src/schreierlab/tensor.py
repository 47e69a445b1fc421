"""Finite injective tensor products E (x)_eps F of sequence spaces.

An element is a finite matrix ``u[i][j]`` (row i in E's basis, column j in
F's basis), read as the operator ``F* -> E`` sending ``y*`` to
``sum_ij u_ij y*(f_j) e_i``.  Its injective norm is the operator norm, so
with E normed by a finite functional list on the rows,
``||u|| = max_g ||u^T g||_F``.

The square blocking groups coordinates by ``max(i, j)``.  The n-th
projection ``P_[1,n] u Q*_[1,n] - P_[1,n) u Q*_[1,n)`` keeps exactly the
entries with ``max(i, j) = n``.

Only 1-unconditional coordinate bases are modeled, so the coordinate
projections have norm one; weak nullity of remainders is out of scope.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .config import capacity
from .errors import CapacityError, ContractError
from .estimates import SuiteConfig, SuiteReport, _coefficients, _merge, _sample_rng, _Tracker
from .ordinal import parse_ordinal
from .report import frac, frac_from
from .spaces import RatVec, Schreier, Space, parse_space, random_coefficient

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class TensorOp:
    entries: Mapping[tuple[int, int], Fraction]
    e_space: Space
    f_space: Space

    def __post_init__(self):
        clean = {}
        for (i, j), v in dict(self.entries).items():
            if not (isinstance(i, int) and isinstance(j, int) and i >= 1 and j >= 1):
                raise ContractError(f"matrix indices must be positive integers, got {(i, j)!r}")
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def outer(cls, x: RatVec, y: RatVec, e_space: Space, f_space: Space) -> "TensorOp":
        return cls({(i, j): a * b for i, a in x.items() for j, b in y.items()}, e_space, f_space)

    def with_entries(self, entries) -> "TensorOp":
        return TensorOp(entries, self.e_space, self.f_space)

    @property
    def rows(self) -> tuple[int, ...]:
        return tuple(sorted({i for i, _ in self.entries}))

    @property
    def cols(self) -> tuple[int, ...]:
        return tuple(sorted({j for _, j in self.entries}))

    @property
    def hsupport(self) -> tuple[int, ...]:
        """Indices n of the square-blocking components that are nonzero."""
        return tuple(sorted({max(i, j) for i, j in self.entries}))

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, TensorOp)
            and self.entries == other.entries
            and str(self.e_space) == str(other.e_space)
            and str(self.f_space) == str(other.f_space)
        )

    def __hash__(self):
        return hash((tuple(self.entries.items()), str(self.e_space), str(self.f_space)))

    def _same(self, other: "TensorOp"):
        if str(self.e_space) != str(other.e_space) or str(self.f_space) != str(other.f_space):
            raise ContractError("tensors live in different spaces")

    def __add__(self, other: "TensorOp") -> "TensorOp":
        self._same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, ZERO) + v
        return self.with_entries(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, a):
        a = Fraction(a)
        return self.with_entries({k: a * v for k, v in self.entries.items()})

    __rmul__ = __mul__

    def transpose(self) -> "TensorOp":
        return TensorOp({(j, i): v for (i, j), v in self.entries.items()}, self.f_space, self.e_space)

    def compress(self, rows: tuple[int, int] | None = None, cols: tuple[int, int] | None = None) -> "TensorOp":
        """``P_rows u Q*_cols`` for half-open index intervals (None keeps all)."""
        def inside(k, iv):
            return iv is None or iv[0] <= k < iv[1]

        return self.with_entries(
            {(i, j): v for (i, j), v in self.entries.items() if inside(i, rows) and inside(j, cols)}
        )

    def apply(self, y: RatVec) -> RatVec:
        """The image of the functional ``y`` on F, as a vector of E."""
        out: dict[int, Fraction] = {}
        for (i, j), v in self.entries.items():
            if y[j]:
                out[i] = out.get(i, ZERO) + v * y[j]
        return RatVec(out)

    def apply_transpose(self, g: RatVec) -> RatVec:
        out: dict[int, Fraction] = {}
        for (i, j), v in self.entries.items():
            if g[i]:
                out[j] = out.get(j, ZERO) + v * g[i]
        return RatVec(out)

    def to_json(self) -> dict:
        return {
            "e_space": str(self.e_space),
            "f_space": str(self.f_space),
            "entries": [[i, j, *frac(v)] for (i, j), v in self.entries.items()],
        }

    @classmethod
    def from_json(cls, data) -> "TensorOp":
        if not isinstance(data, dict) or not {"e_space", "f_space", "entries"} <= set(data):
            raise ContractError("tensor JSON needs e_space, f_space and entries")
        entries = {}
        for row in data["entries"]:
            if not isinstance(row, list) or len(row) != 4 or not all(isinstance(v, int) for v in row):
                raise ContractError(f"bad tensor entry {row!r}; expected [i, j, num, den]")
            i, j, num, den = row
            if (i, j) in entries:
                raise ContractError(f"duplicate tensor entry {(i, j)}")
            entries[(i, j)] = frac_from([num, den])
        return cls(entries, parse_space(data["e_space"]), parse_space(data["f_space"]))

    def __repr__(self):
        body = ", ".join(f"({i},{j}): {v}" for (i, j), v in self.entries.items())
        return f"TensorOp({{{body}}}, {self.e_space}, {self.f_space})"


def basis_tensor(i: int, j: int, e_space: Space, f_space: Space, value=1) -> TensorOp:
    return TensorOp({(i, j): value}, e_space, f_space)


def _one_per_sign_pair(functionals: Iterable[RatVec]) -> list[RatVec]:
    # the norm is symmetric, so g and -g give the same value
    out = []
    for g in functionals:
        items = g.items()
        if items and items[0][1] > 0:
            out.append(g)
    return out


def injective_norm(u: TensorOp, side: str = "rows") -> Fraction:
    """Exact injective norm.

    ``side="rows"`` maximizes ``||u^T g||_F`` over E's functionals on the
    rows of u; ``"cols"`` maximizes ``||u h||_E`` over F's functionals on the
    columns; ``"auto"`` picks the shorter list.
    """
    limit = capacity().tensor_window
    rows, cols = u.rows, u.cols
    if len(rows) > limit or len(cols) > limit:
        raise CapacityError(
            f"tensor support {len(rows)}x{len(cols)} exceeds {limit} indices per side"
        )
    if not u:
        return ZERO
    if side == "auto":
        gs = _one_per_sign_pair(u.e_space.functionals(rows))
        hs = _one_per_sign_pair(u.f_space.functionals(cols))
        side = "rows" if len(gs) <= len(hs) else "cols"
        pool = gs if side == "rows" else hs
    elif side == "rows":
        pool = _one_per_sign_pair(u.e_space.functionals(rows))
    elif side == "cols":
        pool = _one_per_sign_pair(u.f_space.functionals(cols))
    else:
        raise ContractError(f"side must be rows, cols or auto, not {side!r}")
    if side == "rows":
        return max(u.f_space.norm(u.apply_transpose(g)) for g in pool)
    return max(u.e_space.norm(u.apply(h)) for h in pool)


def square_block_projection(u: TensorOp, n: int) -> TensorOp:
    """``P_[1,n] u Q*_[1,n] - P_[1,n) u Q*_[1,n)``."""
    if n < 1:
        raise ContractError("square blocks are indexed from 1")
    return u.compress((1, n + 1), (1, n + 1)) - u.compress((1, n), (1, n))


def square_block_sum(u: TensorOp) -> TensorOp:
    out = TensorOp({}, u.e_space, u.f_space)
    for n in range(1, max(u.hsupport, default=0) + 1):
        out = out + square_block_projection(u, n)
    return out


def check_h_blocks(u_blocks: Sequence[TensorOp]) -> list[int]:
    """Validate an H-block sequence and return ``m_n = min hsupp u_n``."""
    mins = []
    prev = 0
    for u in u_blocks:
        if not u:
            raise ContractError("H-blocks must be nonzero")
        h = u.hsupport
        if h[0] <= prev:
            raise ContractError("tensors are not successive in the square blocking")
        mins.append(h[0])
        prev = h[-1]
    return mins


def split_square_blocks(u_blocks: Sequence[TensorOp], m: Sequence[int] | None = None):
    """Split each H-block as ``u_n = a_n + b_n``.

    ``a_n = P_[m_n, m_(n+1)) u_n Q*_[1, m_n)`` takes the rows of the new band
    against earlier columns; ``b_n = u_n Q*_[m_n, m_(n+1))`` takes the
    columns of the new band.  The last band ends past ``max hsupp``.
    """
    mins = check_h_blocks(u_blocks)
    if m is not None and list(m) != mins:
        raise ContractError(f"m = {list(m)} differs from the minimal H-supports {mins}")
    ends = mins[1:] + [u_blocks[-1].hsupport[-1] + 1] if u_blocks else []
    a_blocks, b_blocks = [], []
    for u, lo, hi in zip(u_blocks, mins, ends):
        a_blocks.append(u.compress((lo, hi), (1, lo)))
        b_blocks.append(u.compress(None, (lo, hi)))
    return a_blocks, b_blocks


# --- sampling -----------------------------------------------------------------


def random_tensor(rng: random.Random, e_space: Space, f_space: Space, window: int,
                  max_entries: int = 5) -> TensorOp:
    entries = {}
    for _ in range(rng.randint(1, max_entries)):
        entries[(rng.randint(1, window), rng.randint(1, window))] = random_coefficient(rng)
    return TensorOp(entries, e_space, f_space)


def normalize_tensor(u: TensorOp) -> TensorOp:
    n = injective_norm(u, side="auto")
    if not n:
        raise ContractError("cannot normalize the zero tensor")
    return u * (1 / n)


def random_h_blocks(rng: random.Random, e_space: Space, f_space: Space, count: int, window: int,
                    max_entries: int = 4) -> list[TensorOp]:
    """Normalized tensors whose square-blocking supports are successive in [1..window]."""
    if count < 1 or count > window:
        raise ContractError(f"cannot fit {count} H-blocks in a window of {window}")
    cuts = sorted(rng.sample(range(2, window + 1), count - 1))
    starts = [1] + cuts
    ends = cuts + [window + 1]
    # shift starts up inside their bands so m_1 is not always 1
    starts = [rng.randint(lo, hi - 1) for lo, hi in zip(starts, ends)]
    out = []
    for lo, hi in zip(starts, ends):
        entries = {}
        k = rng.randint(1, lo)
        entries[(lo, k) if rng.random() < 0.5 else (k, lo)] = random_coefficient(rng)
        for _ in range(rng.randint(0, max_entries - 1)):
            n = rng.randint(lo, hi - 1)
            k = rng.randint(1, n)
            entries[(n, k) if rng.random() < 0.5 else (k, n)] = random_coefficient(rng)
        out.append(normalize_tensor(TensorOp(entries, e_space, f_space)))
    return out


def random_band_operators(rng: random.Random, e_space: Space, f_space: Space, count: int,
                          window: int, max_entries: int = 4):
    """Operators with ranges in successive row bands ``[k_(n-1), k_n)``, ``k_0 = 1``."""
    if count < 1 or count > window:
        raise ContractError(f"cannot fit {count} bands in a window of {window}")
    cuts = sorted(rng.sample(range(2, window + 1), count - 1))
    ks = [1] + cuts + [window + 1]
    ops = []
    for lo, hi in zip(ks, ks[1:]):
        entries = {}
        for _ in range(rng.randint(1, max_entries)):
            entries[(rng.randint(lo, hi - 1), rng.randint(1, window))] = random_coefficient(rng)
        ops.append(TensorOp(entries, e_space, f_space))
    return ops, ks[:-1]


# --- suites -------------------------------------------------------------------

UPPER_CONSTANT = Fraction(2)  # X_alpha satisfies 2-upper block estimates in itself


def _tensor_window(cfg: SuiteConfig) -> int:
    return min(cfg.window, capacity().tensor_window)


def _tensor_witness(label, ops, coeffs, refs, lhs, rhs) -> dict:
    return {
        "instance": label,
        "tensors": [u.to_json()["entries"] for u in ops],
        "coefficients": [frac(c) for c in coeffs],
        "refs": list(refs),
        "lhs": frac(lhs),
        "rhs": frac(rhs),
    }


def _tensor_config(suite, cfg: SuiteConfig) -> dict:
    out = cfg.to_json(suite)
    out["window"] = _tensor_window(cfg)
    return out


def run_band_operators(cfg: SuiteConfig) -> SuiteReport:
    """``||sum u_n|| <= 2 ||sum ||u_n|| e_(k_(n-1))||`` for band operators on X_alpha."""
    bound = cfg.bound if cfg.bound is not None else UPPER_CONSTANT
    window = _tensor_window(cfg)
    parts = []
    for alpha in cfg.alphas_for("P61"):
        X = Schreier(parse_ordinal(alpha))
        label = f"{X} (x) {X}"
        t = _Tracker(bound)
        for i in range(cfg.samples):
            rng = _sample_rng(cfg.seed, "P61", alpha, i)
            n = rng.randint(1, min(cfg.max_count, window))
            ops, ks = random_band_operators(rng, X, X, n, window)
            norms = [injective_norm(u, side="auto") for u in ops]
            total = ops[0]
            for u in ops[1:]:
                total = total + u
            lhs = injective_norm(total, side="auto")
            rhs = X.norm(RatVec(zip(ks, norms)))
            t.add(lhs, rhs, lambda ops=ops, norms=norms, ks=ks, lhs=lhs, rhs=rhs:
                  _tensor_witness(label, ops, norms, ks, lhs, rhs))
        parts.append((t, t.detail(label)))
    return _merge("P61", _tensor_config("P61", cfg), parts)


def run_square_block_upper(cfg: SuiteConfig) -> SuiteReport:
    """``||sum c_n u_n|| <= 2C ||sum c_n e_(m_n)||`` with C = 2, plus the split identities."""
    bound = cfg.bound if cfg.bound is not None else 2 * UPPER_CONSTANT
    window = _tensor_window(cfg)
    parts = []
    for alpha in cfg.alphas_for("L66"):
        X = Schreier(parse_ordinal(alpha))
        label = f"{X} (x) {X}"
        t = _Tracker(bound)
        split_failures = 0
        first_split_failure = None
        for i in range(cfg.samples):
            rng = _sample_rng(cfg.seed, "L66", alpha, i)
            n = rng.randint(1, min(cfg.max_count, window))
            us = random_h_blocks(rng, X, X, n, window)
            c = _coefficients(rng, n, i)
            mins = check_h_blocks(us)
            a_parts, b_parts = split_square_blocks(us, mins)
            for u, a, b in zip(us, a_parts, b_parts):
                if a + b != u or injective_norm(a, "auto") > 1 or injective_norm(b, "auto") > 1:
                    split_failures += 1
                    if first_split_failure is None:
                        first_split_failure = {"sample": i, "tensor": u.to_json()["entries"]}
            total = us[0] * c[0]
            for cn, u in zip(c[1:], us[1:]):
                total = total + u * cn
            lhs = injective_norm(total, side="auto")
            rhs = X.norm(RatVec(zip(mins, c)))
            t.add(lhs, rhs, lambda us=us, c=c, mins=mins, lhs=lhs, rhs=rhs:
                  _tensor_witness(label, us, c, mins, lhs, rhs))
        if split_failures:
            t.violations += split_failures
            t.violation = t.violation or {"instance": label, "split_failure": first_split_failure}
        parts.append((t, t.detail(label, split_failures=split_failures)))
    return _merge("L66", _tensor_config("L66", cfg), parts)

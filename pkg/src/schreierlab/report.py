"""Deterministic JSON reports.

Rationals are written as ``[numerator, denominator]``, keys keep insertion
order, and nothing time- or host-dependent is recorded, so the same seed
and configuration give byte-identical output.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict
from fractions import Fraction

from . import __version__
from .config import ENV_VAR, capacity
from .errors import ContractError
from .ordinal import FUNDAMENTAL_SEQUENCE_CONVENTION


def frac(x) -> list[int]:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def frac_from(data) -> Fraction:
    if (
        not isinstance(data, (list, tuple))
        or len(data) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in data)
        or data[1] == 0
    ):
        raise ContractError(f"expected a rational [num, den] with den != 0, got {data!r}")
    return Fraction(data[0], data[1])


def header(seed=None, capacity_flag: str = "") -> dict:
    out = {
        "version": __version__,
        "fundamental_sequence": FUNDAMENTAL_SEQUENCE_CONVENTION,
        "capacity": asdict(capacity()),
        "seed": seed,
        "capacity_env": os.environ.get(ENV_VAR, ""),
    }
    if capacity_flag:
        out["capacity_flag"] = capacity_flag
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"

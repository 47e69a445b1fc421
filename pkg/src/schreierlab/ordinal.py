"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents, each exponent itself an :class:`Ordinal`.  Because the
representation is unique, structural equality is ordinal equality and the
dataclass ordering (lexicographic over terms) is ordinal order.

Text syntax::

    sum  := term ("+" term)*
    term := "w^" atom ("*" nat)? | "w" ("*" nat)? | nat
    atom := nat | "w" | "(" sum ")"

``ω`` is accepted as a synonym for ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

from .errors import ContractError, OrdinalSyntaxError

# Fundamental sequences: (b + w^(g+1))[n] = b + w^g * n and
# (b + w^g)[n] = b + w^(g[n]) for limit g.
FUNDAMENTAL_SEQUENCE_CONVENTION = "wainer-standard"


@dataclass(frozen=True, order=True)
class Ordinal:
    terms: Tuple[Tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal) or not isinstance(coeff, int) or coeff < 1:
                raise ContractError(f"bad CNF term {(exp, coeff)!r}")
            if prev is not None and not exp < prev:
                raise ContractError("CNF exponents must strictly decrease")
            prev = exp

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ContractError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, exponent: "Ordinal | int", coeff: int = 1) -> "Ordinal":
        if isinstance(exponent, int):
            exponent = cls.of(exponent)
        return cls(((exponent, coeff),))

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return all(exp.is_zero() for exp, _ in self.terms)

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def finite_value(self) -> int:
        if not self.is_finite():
            raise ContractError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def predecessor(self) -> "Ordinal":
        if not self.is_successor():
            raise ContractError(f"{self} is not a successor")
        exp, coeff = self.terms[-1]
        head = self.terms[:-1]
        return Ordinal(head + ((exp, coeff - 1),) if coeff > 1 else head)

    def successor(self) -> "Ordinal":
        if self.is_successor():
            exp, coeff = self.terms[-1]
            return Ordinal(self.terms[:-1] + ((exp, coeff + 1),))
        return Ordinal(self.terms + ((ZERO, 1),))

    def __hash__(self):
        # ordinals are hashed constantly as memo keys; cache it
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.terms)
            object.__setattr__(self, "_hash", h)
        return h

    def __getitem__(self, n: int) -> "Ordinal":
        return fundamental_sequence(self, n)

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Successor:
    predecessor: Ordinal


@dataclass(frozen=True)
class Limit:
    pass


Classification = Union[Zero, Successor, Limit]


def classify(a: Ordinal) -> Classification:
    if a.is_zero():
        return Zero()
    if a.is_successor():
        return Successor(a.predecessor())
    return Limit()


def compare(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return (a > b) - (a < b)


def fundamental_sequence(a: Ordinal, n: int) -> Ordinal:
    if not a.is_limit():
        raise ContractError(f"fundamental sequence requested for non-limit {a}")
    if n < 1:
        raise ContractError("fundamental sequence index starts at 1")
    exp, coeff = a.terms[-1]
    head = a.terms[:-1]
    if coeff > 1:
        head = head + ((exp, coeff - 1),)
    if exp.is_successor():
        return Ordinal(head + ((exp.predecessor(), n),))
    return Ordinal(head + ((fundamental_sequence(exp, n), 1),))


def format_ordinal(a: Ordinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for exp, coeff in a.terms:
        if exp.is_zero():
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        elif exp.is_finite() or exp == OMEGA:
            base = f"w^{format_ordinal(exp)}"
        else:
            base = f"w^({format_ordinal(exp)})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return " + ".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text.replace("ω", "w")
        self.pos = 0

    def error(self, message, pos=None):
        raise OrdinalSyntaxError(message, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def atom(self) -> Ordinal:
        ch = self.peek()
        if ch.isdigit():
            return Ordinal.of(self.nat())
        if ch == "w":
            self.pos += 1
            return OMEGA
        if ch == "(":
            self.pos += 1
            inner = self.sum()
            if not self.eat(")"):
                self.error("expected ')'")
            return inner
        self.error("expected exponent")

    def term(self) -> tuple[Ordinal, int]:
        ch = self.peek()
        if ch.isdigit():
            return ZERO, self.nat()
        if ch != "w":
            self.error("expected a term")
        self.pos += 1
        exp = self.atom() if self.eat("^") else ONE
        coeff = 1
        if self.eat("*"):
            coeff = self.nat()
            if coeff == 0:
                self.error("zero coefficient", self.pos - 1)
        return exp, coeff

    def sum(self) -> Ordinal:
        terms = []
        while True:
            self.skip()
            start = self.pos
            exp, coeff = self.term()
            if coeff == 0:
                if terms or self.peek() == "+":
                    self.error("zero term inside a sum", start)
                return Ordinal()
            if terms and not exp < terms[-1][0]:
                self.error("exponents must strictly decrease (not Cantor normal form)", start)
            terms.append((exp, coeff))
            if not self.eat("+"):
                return Ordinal(tuple(terms))


def parse_ordinal(text: str) -> Ordinal:
    p = _Parser(text)
    if not p.peek():
        p.error("empty ordinal")
    value = p.sum()
    if p.peek():
        p.error(f"unexpected {p.peek()!r}")
    return value

from hypothesis import given, settings, strategies as st
import pytest

from schreierlab.errors import ContractError, OrdinalSyntaxError
from schreierlab.ordinal import (
    FUNDAMENTAL_SEQUENCE_CONVENTION,
    OMEGA,
    Limit,
    Ordinal,
    Successor,
    Zero,
    classify,
    compare,
    format_ordinal,
    fundamental_sequence,
    parse_ordinal,
)

P = parse_ordinal


def ordinals(depth=2):
    """CNF ordinals with nested exponents up to ``depth`` levels."""
    if depth == 0:
        return st.integers(0, 6).map(Ordinal.of)
    exps = ordinals(depth - 1)

    def build(pairs):
        terms = {}
        for exp, coeff in pairs:
            terms[exp] = coeff
        return Ordinal(tuple(sorted(terms.items(), key=lambda t: t[0], reverse=True)))

    return st.lists(st.tuples(exps, st.integers(1, 5)), max_size=3).map(build)


def test_parse_examples():
    assert P("0") == Ordinal()
    w2 = Ordinal.omega_power(2, 3)
    assert P("w^2*3 + w + 5") == Ordinal(w2.terms + ((Ordinal.of(1), 1), (Ordinal(), 5)))
    assert P("ω^ω") == Ordinal.omega_power(OMEGA)
    assert P("w^(w+1)*2").terms[0][1] == 2


@pytest.mark.parametrize("text", ["w + w^2", "w + w", "3 + w", "", "w^", "w*0", "2 + 3", "w^2 )"])
def test_parse_rejects(text):
    with pytest.raises(OrdinalSyntaxError):
        P(text)


def test_cnf_violation_reports_position():
    with pytest.raises(OrdinalSyntaxError) as err:
        P("w + w^2")
    assert err.value.position == 4


def test_compare_examples():
    assert compare(OMEGA, Ordinal.of(2)) == 1
    assert compare(P("w^2 + w*3"), P("w^2+w*3")) == 0
    assert compare(P("w^3"), P("w^w")) == -1


def test_classify_examples():
    assert classify(P("w^2 + 5")) == Successor(P("w^2 + 4"))
    assert classify(P("w^2")) == Limit()
    assert classify(P("0")) == Zero()


def test_fundamental_sequence_examples():
    assert OMEGA[3] == Ordinal.of(3)
    assert P("w^2")[4] == P("w*4")
    assert P("w^w")[3] == P("w^3")
    assert P("w^2*2 + w")[5] == P("w^2*2 + 5")
    assert P("w^(w+1)")[2] == P("w^w*2")
    assert FUNDAMENTAL_SEQUENCE_CONVENTION == "wainer-standard"


@pytest.mark.parametrize("text", ["0", "5", "w + 1"])
def test_fundamental_sequence_contract(text):
    with pytest.raises(ContractError):
        fundamental_sequence(P(text), 1)
    with pytest.raises(ContractError):
        fundamental_sequence(OMEGA, 0)


LIMITS = ["w", "w*2", "w*3", "w^2", "w^2 + w", "w^2*2", "w^3", "w^w", "w^w + w", "w^w + w^2",
          "w^w*2"]


@pytest.mark.parametrize("text", LIMITS)
def test_fundamental_sequences_increase_below_limit(text):
    a = P(text)
    seq = [a[n] for n in range(1, 51)]
    assert all(compare(s, t) == -1 for s, t in zip(seq, seq[1:]))
    assert all(compare(s, a) == -1 for s in seq)


@settings(max_examples=1000)
@given(ordinals())
def test_format_parse_roundtrip(a):
    assert P(format_ordinal(a)) == a


@given(ordinals(), ordinals())
def test_compare_antisymmetric(a, b):
    assert compare(a, b) == -compare(b, a)
    assert (compare(a, b) == 0) == (a == b)


def small_ordinals():
    """Everything below w*3, in increasing order."""
    return [Ordinal.of(n) for n in range(12)] + [P(f"w + {n}") if n else OMEGA for n in range(12)] + [
        P(f"w*2 + {n}") if n else P("w*2") for n in range(12)
    ]


def test_trichotomy_and_predecessor_exhaustive():
    small = small_ordinals()
    assert all(compare(s, t) == -1 for s, t in zip(small, small[1:]))
    for i, a in enumerate(small):
        flags = [a.is_zero(), a.is_successor(), a.is_limit()]
        assert sum(flags) == 1
        c = classify(a)
        if isinstance(c, Successor):
            assert compare(c.predecessor, a) == -1
            # nothing strictly between: it is the previous entry in the list
            assert small[i - 1] == c.predecessor
            assert c.predecessor.successor() == a

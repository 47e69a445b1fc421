import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from schreierlab.errors import CapacityError, ContractError
from schreierlab.indices import (
    DerivedOracle,
    ExplicitOracle,
    HorizonExhausted,
    PredicateOracle,
    SchreierOracle,
    Verdict,
    build_l1_tree,
    cb_rank_finite,
    check_tree,
    derivative_member,
    derivative_verdict,
    h_rho_member,
)
from schreierlab.ordinal import parse_ordinal
from schreierlab.schreier import family
from schreierlab.spaces import C0, L1, RatVec, Schreier, combine, parse_space, random_block_sequence

from oracles import derivative_by_search, downsets, iterated_derivative_rank, naive_member

F = Fraction
e = RatVec.basis


def test_derivative_examples():
    S0, S1 = SchreierOracle(0), SchreierOracle(1)
    assert derivative_member((), S0, 1) is True
    assert derivative_member((), S0, 2) is False
    assert derivative_member((5,), S1, 3) is True
    assert derivative_member((5,), S1, 5) is False
    verdict, G = derivative_verdict((), S1, 50)
    assert verdict is Verdict.YES and len(G) == 50 and max(G) <= 200


def test_higher_family_needs_a_far_run():
    # extending {2} one point at a time fails in S_2, a far run does not
    S2 = SchreierOracle(2)
    assert not family(2).member(tuple(range(2, 13)))
    verdict, G = derivative_verdict((2,), S2, 10)
    assert verdict is Verdict.YES and family(2).member((2,) + G)


def test_non_member_is_never_in_a_derivative():
    assert derivative_member((1, 2), SchreierOracle(1), 0) is False
    assert derivative_member((1, 2), SchreierOracle(1), 3) is False


ALPHAS = ["1", "2", "3", "w", "w+1"]


@pytest.mark.parametrize("alpha", ALPHAS)
def test_run_probe_matches_combination_search(alpha):
    a = parse_ordinal(alpha)
    oracle = SchreierOracle(a)
    member = lambda G: naive_member(G, a)
    for r in range(0, 4):
        for F_ in itertools.combinations(range(1, 7), r):
            if not member(F_):
                continue
            for k in range(0, 4):
                want = member(F_) if k == 0 else derivative_by_search(F_, member, k, 16)
                assert derivative_member(F_, oracle, k) == want, (F_, k)


@pytest.mark.parametrize("alpha", ["2", "3", "w", "w+1", "w*2"])
def test_run_probe_matches_far_run(alpha):
    oracle = SchreierOracle(alpha)
    fam = oracle.fam
    for r in range(0, 4):
        for F_ in itertools.combinations(range(1, 9), r):
            if not fam.member(F_):
                continue
            for k in range(1, 7):
                far = F_ + tuple(range(50 - k + 1, 51))
                assert derivative_member(F_, oracle, k) == fam.member(far)


def test_s1_closed_form_small_window():
    S1 = SchreierOracle(1)
    for r in range(1, 6):
        for F_ in itertools.combinations(range(1, 13), r):
            for k in range(0, 13):
                assert derivative_member(F_, S1, k) == (len(F_) + k <= F_[0])


def test_rank_of_s0_and_s1_survival():
    S0 = SchreierOracle(0)
    assert [derivative_member((), S0, k) for k in range(4)] == [True, True, False, False]
    S1 = SchreierOracle(1)
    assert all(derivative_member((), S1, k) for k in range(60))


def test_explicit_family_examples():
    assert cb_rank_finite(ExplicitOracle([])) == 1
    assert cb_rank_finite(ExplicitOracle([(1,), (2,), (3,)])) == 2
    with pytest.raises(ContractError):
        ExplicitOracle([(1, 2)])
    with pytest.raises(ContractError):
        cb_rank_finite(SchreierOracle(1))


def test_ranks_of_all_hereditary_families_on_four_points():
    fams = downsets(4)
    assert len(fams) == 167
    for members in fams:
        oracle = ExplicitOracle(members)
        assert cb_rank_finite(oracle) == iterated_derivative_rank(members)


@pytest.mark.parametrize("seed", range(30))
def test_ranks_of_generated_families_on_six_points(seed):
    rng = random.Random(seed)
    gens = [tuple(sorted(rng.sample(range(1, 7), rng.randint(0, 4)))) for _ in range(rng.randint(1, 3))]
    oracle = ExplicitOracle.closure(gens)
    assert cb_rank_finite(oracle) == iterated_derivative_rank(oracle.members)
    for F_ in oracle.members:
        for k in range(0, 4):
            want = derivative_by_search(F_, oracle.member, k, 6) if k else True
            assert derivative_member(F_, oracle, k) == want


def test_predicate_oracle_reports_unknown():
    never = PredicateOracle(lambda F: len(F) <= 1, horizon=30)
    assert derivative_member((), never, 1) is True
    verdict, _ = derivative_verdict((3,), never, 1)
    assert verdict is Verdict.UNKNOWN
    with pytest.raises(HorizonExhausted):
        derivative_member((3,), never, 1)
    spread = PredicateOracle(lambda F: len(F) <= (F[0] if F else 0) or not F, horizon=200, spreading=True)
    assert derivative_member((), spread, 50) is True


def test_derived_oracle_composes():
    base = SchreierOracle(1)
    d2 = DerivedOracle(base, 2)
    for F_ in [(3,), (4,), (4, 5), (6, 7, 8)]:
        assert d2.member(F_) == derivative_member(F_, base, 2)
        assert derivative_member(F_, d2, 1) == derivative_member(F_, base, 3)


def test_stage_bounds():
    with pytest.raises(ContractError):
        derivative_member((), SchreierOracle(1), -1)


# --- h_rho ----------------------------------------------------------------------


def test_h_rho_c0_example():
    cert = h_rho_member([e(1), e(2)], C0(), F(3, 5))
    assert cert.min_value == F(1, 2) and cert.minimizer == (F(1, 2), F(1, 2))
    assert cert.member is False and cert.replay(C0())


def test_h_rho_l1_is_always_one():
    cert = h_rho_member([e(1), RatVec({2: F(1, 2), 3: F(-1, 2)}), e(5)], L1(), 1)
    assert cert.min_value == 1 and cert.member


def test_h_rho_contracts():
    with pytest.raises(ContractError):
        h_rho_member([RatVec({1: 2})], C0(), 1)
    with pytest.raises(ContractError):
        h_rho_member([e(1)], C0(), 0)
    with pytest.raises(CapacityError):
        h_rho_member([e(k) for k in range(1, 9)], C0(), 1)


@pytest.mark.parametrize("seed", range(20))
def test_h_rho_minimum_is_a_lower_bound_on_a_simplex_grid(seed):
    rng = random.Random(seed)
    X = parse_space(rng.choice(["c0", "schreier(1)", "schreier(2)", "rsum1(c0)"]))
    n = rng.randint(1, 3)
    xs = random_block_sequence(X, n, 9, rng=rng, max_support=3)
    cert = h_rho_member(xs, X, F(1, 2))
    assert cert.replay(X)
    steps = 8
    for c in itertools.product(range(steps + 1), repeat=n):
        if sum(c) == steps:
            assert X.norm(combine([F(v, steps) for v in c], xs)) >= cert.min_value


def test_l1_tree_branches():
    tree = build_l1_tree(1, 5)
    assert tree.nodes[(3, 4, 5)] == 5
    assert tree.branch((3, 4, 5)) == [e(3), e(4), e(5)]
    with pytest.raises(ContractError):
        tree.branch((1, 2))
    results = check_tree(tree)
    assert results and all(c.min_value == 1 for _, c in results)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["1", "2", "w"]), st.data())
def test_l1_tree_isometric(alpha, data):
    tree = build_l1_tree(alpha, 9)
    E = data.draw(st.sampled_from(sorted(E for E in tree.nodes if len(E) <= 6)))
    a = data.draw(st.lists(st.fractions(-3, 3, max_denominator=6), min_size=len(E), max_size=len(E)))
    X = Schreier(alpha)
    assert X.norm(combine(a, tree.branch(E))) == sum(abs(v) for v in a)

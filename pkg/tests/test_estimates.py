import itertools
import json
from fractions import Fraction

import pytest

from schreierlab.errors import CapacityError, ConfigError, ContractError
from schreierlab.estimates import (
    SuiteConfig,
    dominate,
    domination_constant,
    ratio,
    half_pair_vector,
    run_suite,
    search_self_lower,
    self_lower_constant,
    sharp_upper_example,
)
from schreierlab.report import dumps
from schreierlab.spaces import C0, L1, DirectSum1, RatVec, Schreier, combine, parse_space

F = Fraction
e = RatVec.basis


def test_sharp_pair_in_x1():
    X1 = Schreier(1)
    rep = domination_constant([e(2), e(3)], X1, [1, 2], X1)
    assert rep.exact and rep.lower_bound == rep.upper_bound == 2
    assert rep.witness == (1, 1)
    assert ratio([e(2), e(3)], X1, [e(1), e(2)], X1, rep.witness) == 2


def test_identity_constant_is_one():
    for text in ("c0", "l1", "schreier(2)"):
        X = parse_space(text)
        xs = [e(1), e(3), e(4)]
        assert dominate(xs, X, xs, X).lower_bound == 1


def test_l1_against_c0():
    # ||sum a e_n||_1 <= n ||sum a e_n||_inf, attained at all ones
    rep = dominate([e(1), e(2), e(3)], L1(), [e(1), e(2), e(3)], C0())
    assert rep.lower_bound == 3 and rep.witness == (1, 1, 1)


def test_exact_constant_dominates_every_grid_ratio():
    X1 = Schreier(1)
    fs = [RatVec({2: F(1, 2), 3: F(1, 2)}), e(4), RatVec({5: 1, 6: -1})]
    fs = [f / X1.norm(f) for f in fs]
    gs = [e(1), e(2), e(5)]
    rep = dominate(fs, X1, gs, X1)
    grid = [F(k, 2) for k in range(-4, 5)]
    seen = F(0)
    for a in itertools.product(grid, repeat=3):
        r = ratio(fs, X1, gs, X1, a)
        if r is not None:
            assert r <= rep.lower_bound
            seen = max(seen, r)
    assert ratio(fs, X1, gs, X1, rep.witness) == rep.lower_bound
    assert seen <= rep.lower_bound


def test_sampled_never_exceeds_exact():
    X = Schreier(2)
    fs = [RatVec({3: 1, 4: F(1, 3)}), e(6), RatVec({8: F(1, 2), 9: 1})]
    fs = [f / X.norm(f) for f in fs]
    gs = [e(3), e(5), e(8)]
    exact = dominate(fs, X, gs, X, "exact")
    sampled = dominate(fs, X, gs, X, "sample", seed=4, samples=50)
    assert not sampled.exact and sampled.upper_bound is None
    assert sampled.lower_bound <= exact.lower_bound


def test_permutation_of_coordinates_keeps_constant():
    X = L1()
    fs = [e(1) + e(2), e(3)]
    gs = [e(1), e(2)]
    a = dominate(fs, X, gs, C0()).lower_bound
    b = dominate(fs[::-1], X, gs[::-1], C0()).lower_bound
    assert a == b


def test_contract_errors():
    X1 = Schreier(1)
    with pytest.raises(ContractError):
        domination_constant([RatVec({2: 2})], X1, [1], X1)
    with pytest.raises(ContractError):
        domination_constant([e(2), e(3)], X1, [2, 2], X1)
    with pytest.raises(ContractError):
        dominate([e(1)], X1, [e(1), e(2)], X1)
    with pytest.raises(ConfigError):
        dominate([e(1)], X1, [e(1)], X1, mode="fast")


def test_exact_mode_capacity():
    xs = [e(k) for k in range(1, 9)]
    with pytest.raises(CapacityError):
        dominate(xs, C0(), xs, C0(), "exact")
    assert dominate(xs, C0(), xs, C0(), "auto", samples=5).mode == "sampled"


def test_self_lower_constants():
    assert self_lower_constant("l1") == 1
    assert self_lower_constant("rsum1(c0)") == 2
    with pytest.raises(ConfigError):
        self_lower_constant("schreier(1)")


def test_self_lower_search_is_below_two():
    # the supremum 2 for R (+)_1 c0 is approached, never reached
    lower, witness = search_self_lower(DirectSum1(C0()), arity=2, window=4, denominator=2)
    assert 1 < lower < 2


def test_half_pair_vector_norm():
    W = parse_space("zv(c0, rsum1(c0))")
    for n in range(1, 5):
        z = half_pair_vector(n)
        assert z == RatVec({2 * n: F(1, 2), 2 * n + 1: F(1, 2)})
        assert W.norm(z) == 1


def test_sharp_example_ratio_two():
    xs, a = sharp_upper_example()
    for alpha in (1, 2, "w"):
        X = Schreier(alpha)
        assert all(X.norm(x) == 1 for x in xs)
        lhs = X.norm(combine(a, xs))
        rhs = X.norm(RatVec({1: 1, 3: 1}))
        assert lhs / rhs == 2


@pytest.mark.parametrize("suite", ["P31", "P24", "L211", "L213"])
def test_suites_pass_small(suite):
    rep = run_suite(suite, SuiteConfig(samples=40, seed=7))
    assert rep.passed, rep.witness


def test_late_breakpoint_suite_small():
    rep = run_suite("R212", SuiteConfig(n_max=3))
    assert rep.passed
    assert [d["late_max"] for d in rep.details] == [[1, 2]] * 3


def test_injected_bound_fails_with_sharp_witness():
    rep = run_suite("P31", SuiteConfig(samples=5, bound=F(1)))
    assert not rep.passed
    assert F(*rep.witness["lhs"]) / F(*rep.witness["rhs"]) > 1


def test_reports_are_deterministic():
    cfg = SuiteConfig(samples=30, seed=11)
    a = dumps(run_suite("P24", cfg).to_json())
    b = dumps(run_suite("P24", SuiteConfig(samples=30, seed=11)).to_json())
    assert a == b
    assert json.loads(a)["max_ratio"][1] > 0


def test_witness_replays():
    rep = run_suite("P31", SuiteConfig(samples=60, seed=3))
    w = rep.witness
    X = Schreier(int(w["instance"][len("schreier("):-1]) if w["instance"][9:-1].isdigit() else w["instance"][9:-1])
    xs = [RatVec.from_json(v) for v in w["vectors"]]
    a = [F(*c) for c in w["coefficients"]]
    assert X.norm(combine(a, xs)) == F(*w["lhs"])
    assert X.norm(RatVec(zip(w["refs"], a))) == F(*w["rhs"])


def test_unknown_suite():
    with pytest.raises(ConfigError):
        run_suite("P99")


def test_unknown_pair_rejected():
    with pytest.raises(ConfigError):
        run_suite("L213", SuiteConfig(samples=1, pairs=(("l1", "c0", "2,4,..."),)))

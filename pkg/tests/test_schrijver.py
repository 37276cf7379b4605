import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from codebounds.delsarte import SpaceSpec, lp_bound
from codebounds.orthopoly import DomainError
from codebounds.schrijver import (build_schrijver, check_assembled, check_conditions, code_to_feasible_point,
                                  objective_of, omega_size, schrijver_bound)
from oracles import brute_max_code, distance_triples, min_distance


def random_code(n, delta, rng, tries=None):
    """Greedy code with minimum distance >= delta over a random word order."""
    words = list(range(2**n))
    rng.shuffle(words)
    C = []
    for w in words[: tries or len(words)]:
        if all(bin(w ^ c).count("1") >= delta for c in C):
            C.append(w)
    return C


def test_smallest_instance_structure():
    prob = build_schrijver(4, 4)
    assert [v.triple for v in prob.variables] == [(0, 4, 4)]
    assert prob.upper == [1]
    # each PSD block comes from one of the two families at some level
    assert len(prob.sdp.block_sizes) == len(prob.block_info) + 1
    assert prob.sdp.block_sizes[-1] < 0
    assert {kind for kind, _, _ in prob.block_info} == {"x", "tx"}


def test_domain():
    for n, d in [(4, 1), (4, 5)]:
        with pytest.raises(DomainError):
            build_schrijver(n, d)


def test_omega_size_matches_brute_force():
    for n in range(1, 7):
        assert omega_size(n) == len(distance_triples(n))


def test_feasible_point_examples():
    x = code_to_feasible_point([0], 4)
    assert x[(0, 0, 0)] == 1 and sum(x.values()) == 1
    x = code_to_feasible_point([0, 0b1111], 4)
    assert {t: v for t, v in x.items() if v} == {(0, 0, 0): 1, (0, 4, 4): 1, (4, 0, 4): 1, (4, 4, 0): 1}
    assert objective_of(x, 4) == 2
    with pytest.raises(ValueError):
        code_to_feasible_point([], 3)
    with pytest.raises(ValueError):
        code_to_feasible_point([16], 4)


@settings(max_examples=25)
@given(st.integers(3, 6), st.integers(0, 10**6), st.data())
def test_random_codes_are_feasible(n, seed, data):
    delta = data.draw(st.integers(2, n))
    C = random_code(n, delta, random.Random(seed))
    assert min_distance(C) >= delta or len(C) == 1
    x = code_to_feasible_point(C, n)
    assert check_conditions(x, n, delta) == []
    assert check_assembled(build_schrijver(n, delta), x) == []
    assert objective_of(x, n) == len(C)
    prob = build_schrijver(n, delta)
    assert prob.sdp.objective_exact(prob.vector(x)) == len(C)
    assert all(v <= u for v, u in zip(prob.vector(x), prob.upper))


def test_violation_is_reported():
    # distance 1 in a code that must have distance 3
    x = code_to_feasible_point([0, 1], 4)
    bad = check_conditions(x, 4, 3)
    assert any(b.startswith("forbidden distance") for b in bad)


@pytest.mark.parametrize("n", range(3, 11))
def test_dominates_lp(n):
    for delta in (d for d in (3, 4) if d <= n):
        b = schrijver_bound(n, delta)
        assert b.solution.ok
        lp = lp_bound(SpaceSpec.hamming(n, delta)).value
        assert b.solution.primal_value <= float(lp) + 1e-6
        assert b.rounded.floor <= math.floor(lp)
        assert b.rounded.value >= b.solution.primal_value - 1e-6


@pytest.mark.parametrize("n", range(3, 7))
def test_sandwich(n):
    for delta in range(2, n + 1):
        b = schrijver_bound(n, delta)
        assert brute_max_code(n, delta) <= b.rounded.floor


def test_deterministic():
    a, b = schrijver_bound(7, 3), schrijver_bound(7, 3)
    assert a.rounded.value == b.rounded.value
    assert a.solution.iterations == b.solution.iterations


@pytest.mark.filterwarnings("ignore:Solution may be inaccurate")
def test_unpruned_has_same_optimum():
    # without pruning there is no interior point, so only an external solver is asked
    a = build_schrijver(6, 3, prune=True)
    b = build_schrijver(6, 3, prune=False)
    assert sum(b.sdp.block_sizes[:-1]) >= sum(a.sdp.block_sizes[:-1])
    from codebounds.solvers import ipm_solve
    from oracles import cvxpy_sdp_value
    _, v = cvxpy_sdp_value(b.sdp)
    assert b.sdp.user_value(v) == pytest.approx(ipm_solve(a.sdp).primal_value, abs=1e-5)

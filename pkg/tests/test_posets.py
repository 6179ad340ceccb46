import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shapelab.generators import random_order_map, random_poset
from shapelab.posets import (
    DirectedPoset,
    OrderMap,
    PosetError,
    cofinality_witness,
    find_top,
    is_cofinal,
    restrict,
    validate_directed,
)


def powerset_poset():
    sets = [frozenset(), frozenset({1}), frozenset({2}), frozenset({1, 2})]
    return DirectedPoset.from_subsets(sets), sets


def antichain_plus_top():
    return DirectedPoset.from_relation(3, [(0, 2), (1, 2)])


def test_chain_is_valid():
    P = validate_directed([[True, True, True], [False, True, True], [False, False, True]])
    assert P.size == 3 and find_top(P) == 2


def test_antichain_not_directed():
    with pytest.raises(PosetError) as err:
        validate_directed([[True, False], [False, True]])
    assert err.value.kind == "not-directed" and err.value.witness == (0, 1)


def test_reflexivity_and_transitivity_witnesses():
    with pytest.raises(PosetError) as err:
        validate_directed([[False, True], [False, True]])
    assert err.value.kind == "not-reflexive" and err.value.witness == (0,)
    leq = [[True, True, False], [False, True, True], [False, False, True]]
    with pytest.raises(PosetError) as err:
        validate_directed(leq)
    assert err.value.kind == "not-transitive" and err.value.witness == (0, 1, 2)


def test_powerset_top():
    P, sets = powerset_poset()
    assert sets[find_top(P)] == frozenset({1, 2})


def test_cofinality_examples():
    P = antichain_plus_top()
    assert is_cofinal([2], P)
    assert all(P.le(a, 2) for a in (0, 1))
    assert not is_cofinal([0], DirectedPoset.chain(2))
    assert cofinality_witness([0], DirectedPoset.chain(2)) == 1
    assert not is_cofinal([0], P)


def test_equivalent_maxima_tie_break():
    P = DirectedPoset.from_relation(3, [(0, 1), (1, 2), (2, 1)])
    assert P.equivalent(1, 2)
    assert find_top(P) == 1


def test_union_closed_family_top():
    sets = [frozenset({0}), frozenset({1}), frozenset({0, 1}), frozenset({0, 1, 2})]
    P = DirectedPoset.from_subsets(sets)
    assert find_top(P) == 3


def test_order_map_checks():
    C2 = DirectedPoset.chain(2)
    with pytest.raises(PosetError) as err:
        OrderMap(C2, C2, (1, 0))
    assert err.value.kind == "not-order-preserving"
    with pytest.raises(PosetError):
        OrderMap(C2, C2, (0,))
    f = OrderMap(C2, C2, (1, 1))
    assert f.then(OrderMap.identity(C2)) == f
    assert not f.is_order_isomorphism()


def test_linear_extension_respects_order():
    rng = random.Random(5)
    for _ in range(30):
        P = random_poset(rng)
        pos = {a: i for i, a in enumerate(P.linear_extension())}
        for a, b in P.comparable_pairs():
            if not P.le(b, a):
                assert pos[a] < pos[b]


seeds = st.integers(0, 10**6)


@given(seeds)
def test_top_is_above_everything_and_cofinal(seed):
    P = random_poset(random.Random(seed))
    t = find_top(P)
    assert all(P.le(a, t) for a in P.elements())
    assert is_cofinal([t], P)
    assert all(not all(P.le(a, s) for a in P.elements()) for s in range(t))


@given(seeds)
def test_cofinality_is_transitive(seed):
    rng = random.Random(seed)
    P = random_poset(rng)
    S = sorted(rng.sample(list(P.elements()), rng.randint(1, P.size)) + [find_top(P)])
    S = sorted(set(S))
    assert is_cofinal(S, P)
    PS = restrict(P, S)
    T_local = sorted({find_top(PS)} | set(rng.sample(range(PS.size), rng.randint(0, PS.size))))
    assert is_cofinal(T_local, PS)
    assert is_cofinal([S[i] for i in T_local], P)


@given(seeds)
def test_random_order_maps_compose(seed):
    rng = random.Random(seed)
    A, B, C = (random_poset(rng, 5) for _ in range(3))
    f, g = random_order_map(rng, A, B), random_order_map(rng, B, C)
    h = f.then(g)
    assert all(h(a) == g(f(a)) for a in A.elements())
    for a, b in A.comparable_pairs():
        assert C.le(h(a), h(b))


def test_reversal_is_order_isomorphism():
    P = DirectedPoset.chain(3)
    Q = DirectedPoset.from_relation(3, [(2, 1), (1, 0)])
    rev = OrderMap(P, Q, (2, 1, 0))
    assert rev.is_order_isomorphism()
    assert rev.then(rev.inverse()) == OrderMap.identity(P)

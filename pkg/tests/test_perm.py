import random

import pytest
from hypothesis import given, strategies as st

from fradical import catalog
from fradical.oracle import closure
from fradical.perm import (NotAHomomorphism, PermError, PermGroup, QuotientRef, conj, format_cycles, from_cycles,
                           identity, inv, kernel_of_homomorphism, mul, parse_cycles)

perms = st.integers(min_value=1, max_value=7).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))).map(tuple), min_size=0, max_size=3).map(lambda gs: (n, gs)))


def test_symmetric_group_order():
    G = PermGroup(4, [from_cycles(4, [[0, 1]]), from_cycles(4, [[0, 1, 2, 3]])])
    assert G.order() == 24


def test_empty_generators_trivial():
    assert PermGroup(5, []).order() == 1


def test_psl27_order_matches_enumeration():
    G = catalog.psl2(7)
    H = PermGroup(8, G.gens)
    assert H.order() == 168 == len(closure(G.gens, 8))


def test_quotient_orders(S4, V4, A4):
    assert QuotientRef(S4, A4).order() == 2
    assert QuotientRef(S4, V4).order() == 6


def test_quotient_rejects_non_normal(S4):
    with pytest.raises(PermError):
        QuotientRef(S4, PermGroup(4, [from_cycles(4, [[0, 1]])]))


def test_membership(S4, A4, V4):
    assert not A4.contains(from_cycles(4, [[0, 1]]))
    assert S4.contains(from_cycles(4, [[0, 2]]))
    assert V4.contains(from_cycles(4, [[0, 1], [2, 3]]))
    with pytest.raises(PermError):
        S4.contains((0, 1, 2))


def test_malformed_permutation():
    with pytest.raises(PermError):
        PermGroup(3, [(0, 0, 1)])
    with pytest.raises(PermError):
        PermGroup(3, [(0, 1)])


def test_sign_kernel(S4):
    sign = [(1, 0) if sum(1 for i in range(4) for j in range(i + 1, 4) if g[i] > g[j]) % 2 else (0, 1)
            for g in S4.gens]
    assert kernel_of_homomorphism(S4, sign).order() == 12


def test_identity_map_kernel(S4):
    assert kernel_of_homomorphism(S4, list(S4.gens)).order() == 1


def test_conjugation_on_v4_involutions(S4):
    invs = [from_cycles(4, c) for c in ([[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]])]
    images = [tuple(invs.index(conj(x, g)) for x in invs) for g in S4.gens]
    K = kernel_of_homomorphism(S4, images)
    assert K == PermGroup(4, invs)


def test_bad_homomorphism(S4):
    with pytest.raises(NotAHomomorphism):
        kernel_of_homomorphism(S4, [(1, 0), (0, 1)])


def test_random_element_covers_s4(S4):
    rng = random.Random(1)
    seen = {S4.random_element(rng) for _ in range(10_000)}
    assert len(seen) == 24


def test_random_element_trivial_and_c2():
    rng = random.Random(0)
    assert PermGroup(3).random_element(rng) == identity(3)
    C2 = PermGroup(2, [(1, 0)])
    assert {C2.random_element(rng) for _ in range(50)} == {(0, 1), (1, 0)}


def test_cycle_round_trip():
    p = parse_cycles("(1 2 3)(4 5)", 6)
    assert p == (1, 2, 0, 4, 3, 5)
    assert parse_cycles(format_cycles(p), 6) == p


@pytest.mark.parametrize("text,col", [("(1 2", 5), ("(1 9)", 4), ("1 2)", 1), ("(1 (2))", 4)])
def test_cycle_errors_carry_columns(text, col):
    with pytest.raises(PermError, match=f"column {col}"):
        parse_cycles(text, 4)


def test_generator_count_reduced():
    rng = random.Random(3)
    n = 4
    gens = [tuple(rng.sample(range(n), n)) for _ in range(40)]
    G = PermGroup(n, gens)
    assert len(G.gens) <= n * n
    assert G.order() == len(closure(gens, n))


@given(perms)
def test_order_matches_closure(data):
    n, gens = data
    G = PermGroup(n, gens)
    E = closure(gens, n)
    assert G.order() == len(E)
    assert set(G.elements()) == set(E)


@given(perms, st.integers(0, 10**6))
def test_closed_under_products(data, seed):
    n, gens = data
    G = PermGroup(n, gens)
    rng = random.Random(seed)
    for _ in range(30):
        g, h = G.random_element(rng), G.random_element(rng)
        assert G.contains(mul(g, h)) and G.contains(inv(g))


@pytest.mark.parametrize("expr", ["sym(5)", "alt(6)", "psl2(11)", "wr(sym(3),cyclic(2))", "affine(2,3)"])
def test_sampled_closure(expr):
    G = catalog.build(expr)
    rng = random.Random(7)
    for _ in range(1000):
        assert G.contains(mul(G.random_element(rng), G.random_element(rng)))


@pytest.mark.parametrize("expr", ["sym(4)", "wr(cyclic(2),sym(3))", "prod(sym(3),cyclic(4))"])
def test_kernel_normal_and_index(expr):
    G = catalog.build(expr)
    # action on the orbit of point 0
    orbit = sorted({g[0] for g in G.elements()})
    idx = {x: i for i, x in enumerate(orbit)}
    images = [tuple(idx[g[x]] for x in orbit) for g in G.gens]
    K = kernel_of_homomorphism(G, images)
    image = PermGroup(len(orbit), images)
    assert K.order() * image.order() == G.order()
    assert K.is_normal_in(G)


def test_unbounded_order():
    assert catalog.sym(30).order() == 265252859812191058636308480000000

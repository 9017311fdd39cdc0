import math
import random

import pytest
from hypothesis import given, strategies as st

from conftest import reshuffle
from fradical import catalog, linalg, oracle
from fradical.perm import PermGroup, QuotientRef, from_cycles
from fradical.series import (NormalSection, SectionTooLarge, centralizer_of_section, chief_series, derived_subgroup,
                             identify_type, intersect_with_normal, minimal_normal_subgroups, normal_closure, o_sigma,
                             split_module)
from fradical.simple import (AllTypes, CoprimeTo, Cyclic, Named, NoTypes, SimpleType, name_for_order, p_soluble)

SMALL = ["sym(3)", "sym(4)", "sym(5)", "alt(4)", "alt(5)", "cyclic(6)", "dihedral(4)", "q8", "elemab(2,2)",
         "psl2(7)", "sl2(3)", "sl2(5)", "affine(1,5)", "prod(sym(3),sym(3))", "wr(sym(3),cyclic(2))",
         "wr(cyclic(2),sym(3))", "prod(alt(5),cyclic(6))", "wr(sym(2),sym(4))", "affine(2,3)", "sym(6)"]


def c(n, *cycles):
    return from_cycles(n, [list(x) for x in cycles])


# -- closures -----------------------------------------------------------------

def test_normal_closure_examples(S4, A4, V4):
    assert normal_closure(S4, [c(4, (0, 1, 2))]) == A4
    assert normal_closure(S4, [S4.identity]).order() == 1
    assert normal_closure(S4, [c(4, (0, 1), (2, 3))]) == V4


def test_normal_closure_rejects_outsider(A4):
    with pytest.raises(ValueError):
        normal_closure(A4, [c(4, (0, 1))], check=True)


def test_derived_subgroups(S4, A4, V4):
    assert derived_subgroup(S4) == A4
    assert derived_subgroup(catalog.alt(5)).order() == 60
    assert derived_subgroup(QuotientRef(S4, V4)) == A4


# -- centralizers -------------------------------------------------------------

def test_centralizer_examples(S4, A4, V4):
    assert centralizer_of_section(NormalSection(S4, V4, V4)) == S4
    assert centralizer_of_section(NormalSection(S4, PermGroup.trivial(4), V4)) == V4
    assert centralizer_of_section(NormalSection(S4, V4, A4)) == A4


@pytest.mark.parametrize("expr", SMALL)
def test_centralizers_match_oracle(expr):
    G = catalog.build(expr)
    cs = chief_series(G)
    for s in cs.sections():
        C = centralizer_of_section(s)
        assert C == oracle.centralizer_oracle(G, s.bottom, s.top)
        assert s.bottom.is_subgroup_of(C) and C.is_normal_in(G)


def test_section_bound_refusal(S4, V4, A4):
    # the coset orbits of A4/V4 have 2 points
    with pytest.raises(SectionTooLarge):
        centralizer_of_section(NormalSection(S4, V4, A4), bound=1)


# -- chief series ---------------------------------------------------------------

def test_s4_chief_series(S4, V4, A4):
    cs = chief_series(S4)
    assert cs.orders() == [1, 4, 12, 24]
    assert cs.terms[1] == V4 and cs.terms[2] == A4
    assert [str(t) for t in cs.factor_types] == ["C2^2", "C3", "C2"]


def test_simple_and_trivial_series():
    cs = chief_series(catalog.alt(5))
    assert cs.orders() == [1, 60] and cs.factor_types[0].name == "A5"
    assert chief_series(PermGroup.trivial(3)).orders() == [1]


def test_series_through_requested_term(S4, V4):
    Z = PermGroup(4, [c(4, (0, 1), (2, 3))])
    with pytest.raises(ValueError):
        chief_series(S4, through=[Z])
    cs = chief_series(catalog.build("wr(cyclic(2),sym(3))"), through=[])
    assert cs.orders()[-1] == 48


@pytest.mark.parametrize("expr", SMALL)
def test_chief_series_verified_by_oracle(expr):
    G = catalog.build(expr)
    cs = chief_series(G)
    assert oracle.verify_chief(cs)
    # types agree as a multiset (Jordan-Hoelder for chief series)
    assert sorted(map(str, cs.factor_types)) == sorted(map(str, oracle.chief_types(G)))
    for T in cs.terms:
        assert T.is_normal_in(G)


def test_verify_chief_rejects_gap(S4, A4):
    from fradical.series import ChiefSeries
    bad = ChiefSeries(S4, [PermGroup.trivial(4), A4, S4], [SimpleType.cyclic(3), SimpleType.cyclic(2)])
    assert not oracle.verify_chief(bad)


# -- module splitting ------------------------------------------------------------

def test_v4_is_irreducible_for_s4(S4, V4):
    assert split_module(NormalSection(S4, PermGroup.trivial(4), V4)) is None


def test_trivial_action_splits(V4):
    N = split_module(NormalSection(V4, PermGroup.trivial(4), V4))
    assert N is not None and N.order() == 2


def test_diagonal_action_eigenline():
    verdict, basis = linalg.split_module([[[1, 0], [0, 2]]], 3, 2, random.Random(0))
    assert verdict == "reducible"
    W = linalg.spin(basis, [[[1, 0], [0, 2]]], 3, 2)
    assert len(W) == 1 and (W.rows == [[1, 0]] or W.rows == [[0, 1]])


@given(st.integers(0, 10**6))
def test_meataxe_agrees_with_exhaustive(seed):
    rng = random.Random(seed)
    p, d = rng.choice([(2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
    mats = [[[rng.randrange(p) for _ in range(d)] for _ in range(d)] for _ in range(2)]
    v1, _ = linalg.split_module(mats, p, d, rng)
    v2, _ = linalg.exhaustive_split(mats, p, d)
    assert v1 in (v2, "undecided")


# -- types ------------------------------------------------------------------------

def test_identify_types(S4, V4):
    t = identify_type(NormalSection(S4, PermGroup.trivial(4), V4))
    assert t == SimpleType.cyclic(2, 2)
    A5 = catalog.alt(5)
    t = identify_type(NormalSection(A5, PermGroup.trivial(5), A5))
    assert (t.name, t.simple_order, t.width) == ("A5", 60, 1)
    W = catalog.build("wr(alt(5),cyclic(2))")
    cs = chief_series(W)
    assert str(cs.factor_types[0]) == "A5^2"


def test_order_20160_disambiguation():
    assert name_for_order(20160, True) == "A8"
    assert name_for_order(20160, False) == "PSL(3,4)"
    cs = chief_series(catalog.alt(8))
    assert cs.factor_types[0].name == "A8"


def test_unknown_simple_name():
    assert name_for_order(9999360) == "unknown-simple(9999360)"
    assert name_for_order(math.factorial(11) // 2) == "A11"


@pytest.mark.parametrize("expr", ["sym(4)", "wr(alt(5),cyclic(2))", "psl2(11)", "wr(cyclic(2),sym(5))", "sl2(5)"])
def test_types_stable_under_regeneration(expr):
    G = catalog.build(expr)
    want = [str(t) for t in chief_series(G).factor_types]
    for seed in range(10):
        H = reshuffle(G, seed)
        assert sorted(str(t) for t in chief_series(H, seed=seed + 1).factor_types) == sorted(want)


# -- O_sigma ---------------------------------------------------------------------

def test_o_sigma_examples(S4, V4):
    assert o_sigma(S4, Cyclic(frozenset([2]))) == V4
    assert o_sigma(S4, Cyclic()) == S4
    S3 = catalog.sym(3)
    assert o_sigma(S3, CoprimeTo(frozenset([2]))).order() == 3
    assert o_sigma(S4, NoTypes()).order() == 1 and o_sigma(S4, AllTypes()) == S4


SIGMAS = [Cyclic(frozenset([2])), Cyclic(), CoprimeTo(frozenset([2])), p_soluble(2), p_soluble(3),
          Named(frozenset(["A5"])), CoprimeTo(frozenset([3]))]


@pytest.mark.parametrize("expr", SMALL)
def test_o_sigma_matches_oracle(expr):
    G = catalog.build(expr)
    for sigma in SIGMAS:
        R = o_sigma(G, sigma)
        assert R == oracle.sigma_radical_oracle(G, sigma)
        assert R.is_normal_in(G)
        assert all(sigma(t) for t in chief_series(R).factor_types)


# -- intersections -------------------------------------------------------------------

def test_intersection_examples(S4, A4, V4):
    D8 = PermGroup(4, [c(4, (0, 1, 2, 3)), c(4, (0, 2))])
    assert intersect_with_normal(D8, A4, S4) == V4
    assert intersect_with_normal(D8, PermGroup.trivial(4), S4).order() == 1
    assert intersect_with_normal(A4, A4, S4) == A4


@given(st.integers(0, 10**6), st.sampled_from(["sym(5)", "wr(sym(3),cyclic(2))", "affine(2,3)", "sym(6)"]))
def test_intersection_matches_brute_force(seed, expr):
    G = catalog.build(expr)
    rng = random.Random(seed)
    H = PermGroup(G.degree, [G.random_element(rng) for _ in range(rng.randint(1, 2))])
    cs = chief_series(G)
    A = rng.choice(cs.terms)
    I = intersect_with_normal(H, A, G)
    assert set(I.elements()) == set(oracle.elements(H)) & set(oracle.elements(A))


# -- minimal normal subgroups ----------------------------------------------------------

def test_minimal_normal_examples(S4, V4):
    assert minimal_normal_subgroups(S4) == [V4]
    mins = minimal_normal_subgroups(catalog.alt(5))
    assert len(mins) == 1 and mins[0].order() == 60
    assert sorted(M.order() for M in minimal_normal_subgroups(catalog.cyclic(6))) == [2, 3]


@pytest.mark.parametrize("expr", ["elemab(2,2)", "prod(sym(3),sym(3))", "prod(alt(5),cyclic(6))", "q8"])
def test_minimal_normal_matches_oracle(expr):
    G = catalog.build(expr)
    got = sorted((M.order(), sorted(M.elements())) for M in minimal_normal_subgroups(G, samples=60))
    want = sorted((M.order(), sorted(M.elements())) for M in oracle.minimal_normal_oracle(G))
    assert got == want


# -- chain length bound ------------------------------------------------------------------

@pytest.mark.parametrize("expr", ["sym(2)", "sym(8)", "wr(cyclic(2),sym(4))", "wr(sym(2),sym(8))", "elemab(2,5)"])
def test_chain_bound(expr):
    G = catalog.build(expr)
    assert len(chief_series(G)) <= 2 * G.degree - 3


@pytest.mark.parametrize("expr", ["elemab(2,5)", "elemab(3,3)", "prod(q8,cyclic(3))", "prod(sl2(3),cyclic(5))"])
def test_central_layers_split_to_chief_factors(expr):
    G = catalog.build(expr)
    cs = chief_series(G)
    assert oracle.verify_chief(cs)
    assert sorted(map(str, cs.factor_types)) == sorted(map(str, oracle.chief_types(G)))

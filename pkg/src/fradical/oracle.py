"""Brute-force ground truth for small groups.

Everything here works on explicit element sets and never touches the
stabilizer-chain machinery, so it can be used to check it.  Groups are
limited to ``FRADICAL_ORACLE_BOUND`` elements (default 5000).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint

from . import formation as fm
from .perm import Perm, PermGroup, conj, inv, mul
from .series import ChiefSeries
from .simple import SimpleType, is_simple_order, name_for_order

DEFAULT_BOUND = 5000


class OracleRefusal(RuntimeError):
    """The group is too large for exhaustive enumeration."""


class NotFitting(RuntimeError):
    """Two incomparable maximal normal subgroups in the class."""


def oracle_bound() -> int:
    return int(os.environ.get("FRADICAL_ORACLE_BOUND", DEFAULT_BOUND))


Elems = frozenset


def closure(gens, n: int, bound: int | None = None) -> Elems:
    idn = tuple(range(n))
    gens = [tuple(g) for g in gens if tuple(g) != idn]
    out = {idn}
    todo = [idn]
    while todo:
        x = todo.pop()
        for g in gens:
            y = mul(x, g)
            if y not in out:
                out.add(y)
                todo.append(y)
                if bound is not None and len(out) > bound:
                    raise OracleRefusal(f"group has more than {bound} elements")
    return frozenset(out)


def elements(G: PermGroup, bound: int | None = None) -> Elems:
    bound = oracle_bound() if bound is None else bound
    return closure(G.gens, G.degree, bound)


def classes(E: Elems) -> list[Elems]:
    seen = set()
    out = []
    gens = _generators(E)
    for x in sorted(E):
        if x in seen:
            continue
        cl = {x}
        todo = [x]
        while todo:
            y = todo.pop()
            for g in gens:
                z = conj(y, g)
                if z not in cl:
                    cl.add(z)
                    todo.append(z)
        seen |= cl
        out.append(frozenset(cl))
    return out


@lru_cache(maxsize=4096)
def _generators(E: Elems) -> tuple:
    """A small generating set of the finite group ``E`` (greedy)."""
    n = len(next(iter(E)))
    gens: list = []
    cur = frozenset([tuple(range(n))])
    for x in sorted(E, key=lambda p: (-_order(p), p)):
        if x not in cur:
            gens.append(x)
            cur = closure(gens, n)
            if len(cur) == len(E):
                break
    return tuple(gens)


def _order(p: Perm) -> int:
    k, x, idn = 1, p, tuple(range(len(p)))
    while x != idn:
        x = mul(x, p)
        k += 1
    return k


def as_group(E: Elems) -> PermGroup:
    n = len(next(iter(E)))
    return PermGroup(n, _generators(E))


@lru_cache(maxsize=4096)
def normal_subgroups_of(E: Elems, K: Elems | None = None) -> tuple[Elems, ...]:
    """All normal subgroups of ``E`` containing ``K``: BFS over class unions."""
    n = len(next(iter(E)))
    base = K if K is not None else frozenset([tuple(range(n))])
    cls = classes(E)
    found = {base}
    todo = [base]
    while todo:
        N = todo.pop()
        for c in cls:
            if c <= N:
                continue
            M = _normal_closure_in(E, N, c, n)
            if M not in found:
                found.add(M)
                todo.append(M)
    return tuple(sorted(found, key=len))


def _normal_closure_in(E: Elems, N: Elems, c: Elems, n: int) -> Elems:
    # N is normal and c a class, so <N, c> is normal
    gens = list(_generators(N)) if len(N) > 1 else []
    return closure(gens + list(c), n)


@dataclass
class NormalLattice:
    group: PermGroup
    subgroups: list[Elems]
    containment: list[list[bool]]

    def as_groups(self) -> list[PermGroup]:
        return [as_group(S) for S in self.subgroups]


def normal_subgroups(G: PermGroup, max_order: int | None = None) -> NormalLattice:
    bound = oracle_bound() if max_order is None else max_order
    if G.order() > bound:
        raise OracleRefusal(f"|G| = {G.order()} exceeds the oracle bound {bound}")
    E = elements(G, bound)
    subs = list(normal_subgroups_of(E))
    cont = [[a <= b for b in subs] for a in subs]
    return NormalLattice(G, subs, cont)


# -- structure of quotients E/K -------------------------------------------

def _is_abelian_mod(H: Elems, K: Elems) -> bool:
    gs = _generators(H)
    return all(mul(mul(inv(a), inv(b)), mul(a, b)) in K for a in gs for b in gs)


def chief_factors(E: Elems, K: Elems) -> list[tuple[Elems, Elems]]:
    """Some chief series of ``E`` from ``K`` (as (bottom, top) pairs)."""
    subs = normal_subgroups_of(E, K)
    out = []
    cur = K
    while len(cur) < len(E):
        above = [S for S in subs if cur < S]
        nxt = min(above, key=len)
        # inclusion-minimal among those above cur
        nxt = next(S for S in sorted(above, key=len) if not any(cur < T < S for T in above))
        out.append((cur, nxt))
        cur = nxt
    return out


def factor_type(E: Elems, K: Elems, H: Elems) -> SimpleType:
    size = len(H) // len(K)
    if _is_abelian_mod(H, K):
        (p, d), = factorint(size).items()
        return SimpleType.cyclic(p, d)
    # smallest normal subgroup of H properly above K is a simple component
    T = min((S for S in normal_subgroups_of(H, K) if len(S) > len(K)), key=len)
    tsize = len(T) // len(K)
    k = round(math.log(size) / math.log(tsize))
    if tsize == 20160:
        has15 = any(_order_mod(x, K) % 15 == 0 for x in T)
        return SimpleType.nonabelian(name_for_order(tsize, has15), tsize, k)
    return SimpleType.nonabelian(name_for_order(tsize), tsize, k)


def _order_mod(x: Perm, K: Elems) -> int:
    k, y = 1, x
    while y not in K:
        y = mul(y, x)
        k += 1
    return k


def centralizer(E: Elems, K: Elems, H: Elems) -> Elems:
    """``{g in E : [g, h] in K for all h in H}``."""
    hs = _generators(H) if len(H) > 1 else ()
    return frozenset(g for g in E if all(mul(mul(inv(g), inv(h)), mul(g, h)) in K for h in hs))


def _product(A: Elems, B: Elems) -> Elems:
    return frozenset(mul(a, b) for a in A for b in B)


# -- formation membership by definition -------------------------------------

def member(F: fm.Formation, E: Elems, K: Elems) -> bool:
    """Is ``E/K`` in the class ``F``?"""
    if isinstance(F, fm.Empty):
        return False
    if isinstance(F, fm.Meet):
        return all(member(P, E, K) for P in F.parts)
    facs = chief_factors(E, K)
    if isinstance(F, fm.SigmaClass):
        return all(F.sigma(factor_type(E, a, b)) for a, b in facs)
    if isinstance(F, fm.Quasinilpotent):
        return all(len(_product(b, centralizer(E, a, b))) == len(E) for a, b in facs)
    if isinstance(F, fm.DirectPowers):
        return all(factor_type(E, a, b).same_simple(F.J)
                   and len(_product(b, centralizer(E, a, b))) == len(E) for a, b in facs)
    for a, b in facs:
        val = fm.baer_value(F, factor_type(E, a, b))
        if isinstance(val, fm.Empty):
            return False
        if not member(val, E, centralizer(E, a, b)):
            return False
    return True


def _radical_elems(E: Elems, K: Elems, test) -> Elems:
    subs = normal_subgroups_of(E, K)
    good = [S for S in subs if test(S)]
    tops = [S for S in good if not any(S < T for T in good)]
    if len(tops) != 1:
        raise NotFitting("class is not Fitting on this instance")
    top = tops[0]
    if not all(S <= top for S in good):
        raise NotFitting("radical does not contain every normal member")
    return top


def radical_oracle(G: PermGroup, F: fm.Formation, lattice: NormalLattice | None = None,
                   K: PermGroup | None = None) -> PermGroup:
    """Largest normal subgroup ``N/K`` of ``G/K`` lying in ``F``."""
    if isinstance(F, fm.Empty):
        raise ValueError("radical undefined for the empty class")
    E = lattice_elems(G, lattice)
    Ke = elements(K) if K is not None else frozenset([tuple(range(G.degree))])
    return as_group(_radical_elems(E, Ke, lambda S: member(F, S, Ke)))


def sigma_radical_oracle(G: PermGroup, sigma, K: PermGroup | None = None) -> PermGroup:
    """Largest normal subgroup whose composition factors all satisfy ``sigma``."""
    return radical_oracle(G, fm.SigmaClass(sigma), K=K)


def lattice_elems(G: PermGroup, lattice: NormalLattice | None) -> Elems:
    if lattice is not None:
        return lattice.subgroups[-1]
    return elements(G)


def verify_chief(series: ChiefSeries, lattice: NormalLattice | None = None) -> bool:
    G = series.ambient
    E = lattice_elems(G, lattice)
    terms = [elements(t) for t in series.terms]
    subs = normal_subgroups_of(E, terms[0])
    for a, b in zip(terms, terms[1:]):
        if not a < b:
            return False
        if any(a < S < b for S in subs):
            return False
    return terms[-1] == E


def chief_types(G: PermGroup, K: PermGroup | None = None) -> list[SimpleType]:
    E = elements(G)
    Ke = elements(K) if K is not None else frozenset([tuple(range(G.degree))])
    return [factor_type(E, a, b) for a, b in chief_factors(E, Ke)]


def centralizer_oracle(G: PermGroup, A: PermGroup, B: PermGroup) -> PermGroup:
    return as_group(centralizer(elements(G), elements(A), elements(B)))


def minimal_normal_oracle(G: PermGroup) -> list[PermGroup]:
    E = elements(G)
    subs = normal_subgroups_of(E)
    triv = subs[0]
    mins = [S for S in subs if len(S) > 1 and not any(triv < T < S for T in subs)]
    return [as_group(S) for S in mins]


# -- lengths ---------------------------------------------------------------

INF = math.inf


def length_oracle(G: PermGroup, kind: str, p: int = 2) -> float:
    """Nilpotent length ``h``, ``lp``, ``hstar`` or ``lambdap`` by iterated brute-force radicals."""
    E = elements(G)
    K = frozenset([tuple(range(G.degree))])
    nil = fm.parse("nil")
    qnil = fm.parse("qnil")
    sol = fm.parse("sol")
    psol = fm.SigmaClass(fm.p_soluble_pred(p))
    pnil = fm.parse(f"pnil({p})")
    if kind == "h" and not member(sol, E, K):
        return INF
    if kind == "lp" and not member(psol, E, K):
        return INF
    count = 0
    while True:
        if kind in ("h", "hstar") and K == E:
            return count
        if kind == "lp" and (len(E) // len(K)) % p:
            return count
        if kind == "lambdap" and member(psol, E, K):
            return count
        if kind == "h":
            K = _radical_elems(E, K, lambda S: member(nil, S, K))
        elif kind == "hstar":
            K = _radical_elems(E, K, lambda S: member(qnil, S, K))
        elif kind == "lp":
            K = _radical_elems(E, K, lambda S: member(pnil, S, K))
        else:
            R = _radical_elems(E, K, lambda S: member(psol, S, K))
            K = _radical_elems(E, R, lambda S: member(qnil, S, R))
        count += 1


# -- extension closure -------------------------------------------------------

def ef_member(F: fm.Formation, E: Elems, K: Elems) -> bool:
    """Does ``E/K`` have a normal series with factors in ``F``?

    Peels off the ``F``-radical repeatedly; the radical is the largest
    normal ``F``-subgroup, so a series exists iff this reaches the top.
    """
    while K != E:
        R = _radical_elems(E, K, lambda S, K=K: member(F, S, K))
        if R == K:
            return False
        K = R
    return True


def ef_radical_oracle(G: PermGroup, F: fm.Formation, K: PermGroup | None = None) -> PermGroup:
    E = elements(G)
    Ke = elements(K) if K is not None else frozenset([tuple(range(G.degree))])
    return as_group(_radical_elems(E, Ke, lambda S: ef_member(F, S, Ke)))

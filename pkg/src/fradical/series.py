"""Normal structure of permutation groups and their quotients.

All quotients ``G/A`` are handled through preimages: a subgroup of ``G/A``
is represented by the subgroup of ``G`` containing ``A`` that maps onto it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sympy import factorint, isprime

from . import linalg
from .perm import (COUNTERS, Perm, PermGroup, QuotientRef, _copy_chain, _ProductReplacement, _strong,
                   conj, comm, inv, mul, perm_order, power)
from .simple import (TABLE_BOUND, SimpleType, TypePredicate, is_simple_order,
                     name_for_order, singleton)

SECTION_BOUND = 10**5
REFINE_BUDGET = 12


class SectionTooLarge(RuntimeError):
    """A coset space needed for a centralizer exceeds the bound."""


class SeriesRefinementExhausted(RuntimeError):
    pass


class NotChief(ValueError):
    """A section claimed to be chief has a proper intermediate normal subgroup."""


def _rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(0 if seed is None else seed)


def trivial_like(G: PermGroup) -> PermGroup:
    return PermGroup.trivial(G.degree)


@dataclass(frozen=True, eq=False)
class NormalSection:
    """The section ``top/bottom`` of ``ambient``; both terms normal in it."""

    ambient: PermGroup
    bottom: PermGroup
    top: PermGroup

    def order(self) -> int:
        return self.top.order() // self.bottom.order()

    def validate(self) -> None:
        G, A, B = self.ambient, self.bottom, self.top
        if not (A.is_subgroup_of(B) and B.is_subgroup_of(G)):
            raise ValueError("section terms are not nested")
        if not (A.is_normal_in(G) and B.is_normal_in(G)):
            raise ValueError("section terms are not normal in the ambient group")


@dataclass(eq=False)
class ChiefSeries:
    ambient: PermGroup
    terms: list[PermGroup]
    factor_types: list[SimpleType] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.factor_types)

    def sections(self) -> list[NormalSection]:
        return [NormalSection(self.ambient, a, b) for a, b in zip(self.terms, self.terms[1:])]

    def orders(self) -> list[int]:
        return [t.order() for t in self.terms]


# -- closures ------------------------------------------------------------

def normal_closure(G: PermGroup, seeds: Iterable[Perm], base: PermGroup | None = None,
                   limit: int | None = None, check: bool = False) -> PermGroup:
    """Smallest subgroup containing ``seeds`` (and ``base``) normalised by ``G``.

    ``limit`` is a known upper bound for the order of the result.  Random
    conjugates fill the chain first; a deterministic pass then completes
    it and checks closure under conjugation.
    """
    seeds = list(seeds)
    if check:
        for s in seeds:
            if not G.contains(s):
                raise ValueError("seed element is not in the group")
    N0 = base if base is not None else trivial_like(G)
    chain = _copy_chain(N0._chain)
    gens = list(N0.gens)
    idn = chain.id

    def absorb(xs) -> bool:
        grew = False
        for x in xs:
            h, j = chain.sift(x)
            if h != idn:
                chain.add(h, j)
                gens.append(x)
                grew = True
        return grew

    if not absorb(seeds):
        return N0
    rng = random.Random(len(gens))
    done = lambda: limit is not None and chain.order() >= limit
    while not done():
        # reseed the sampler from the grown pool until a round adds nothing
        while True:
            size = chain.order()
            pr = _ProductReplacement(gens, G.degree, rng, burn=10)
            before = set(_strong(chain))
            chain.fill_random(lambda: conj(pr(), G.random_element(rng)), limit, patience=12)
            gens.extend(s for s in _strong(chain) if s not in before)
            if done() or chain.order() == size:
                break
        if done():
            break
        chain.close()
        if not absorb([conj(x, g) for x in gens for g in G.small_gens()]):
            break
    out = PermGroup.__new__(PermGroup)
    out._init(G.degree, tuple(gens), chain)
    return out


def derived_subgroup(Q: QuotientRef | PermGroup, limit: int | None = None) -> PermGroup:
    """Preimage of the derived subgroup of ``G/A``."""
    if isinstance(Q, PermGroup):
        Q = QuotientRef.of(Q)
    G, A = Q.ambient, Q.kernel
    gs = G.small_gens()
    cs = [comm(a, b) for i, a in enumerate(gs) for b in gs[i + 1:]]
    return normal_closure(G, cs, A, limit if limit is not None else G.order())


def product(M: PermGroup, N: PermGroup, limit: int | None = None) -> PermGroup:
    if N.is_subgroup_of(M):
        return M
    if M.is_subgroup_of(N):
        return N
    return M.extend(N.gens, limit)


# -- elements modulo a subgroup --------------------------------------------

def order_mod(x: Perm, A: PermGroup) -> int:
    """Order of the coset ``xA``."""
    m = perm_order(x)
    for q in factorint(m):
        while m % q == 0 and A.contains(power(x, m // q)):
            m //= q
    return m


def prime_power_mod(x: Perm, A: PermGroup) -> Perm | None:
    """A power of ``x`` of prime order modulo ``A``, or None if ``x`` is in ``A``."""
    m = order_mod(x, A)
    if m == 1:
        return None
    q = min(factorint(m))
    return power(x, m // q)


def canonical_coset(x: Perm, A: PermGroup) -> Perm:
    """Lexicographically least base image representative of ``Ax``."""
    levels = A._cache.get("canon")
    if levels is None:
        ch = A._chain
        levels = [(b, list(t), t) for b, t in zip(ch.base, ch.trans) if len(t) > 1]
        A._cache["canon"] = levels
    for b, pts, t in levels:
        d = min(pts, key=x.__getitem__)
        if d != b:
            x = mul(t[d], x)
    return x


# -- centralizers of sections ------------------------------------------------

def _orbit_with_transversal(K: PermGroup, pt, act, bound: int):
    """Orbit of ``pt`` under ``K`` (acting by ``act``) with transversal words."""
    trans = {pt: K.identity}
    todo = [pt]
    k = 0
    while k < len(todo):
        w = todo[k]
        k += 1
        u = trans[w]
        for s in K.small_gens():
            v = act(w, s)
            if v not in trans:
                trans[v] = mul(u, s)
                todo.append(v)
                if len(trans) > bound:
                    raise SectionTooLarge(f"orbit exceeds {bound} points")
    return trans


def stabilizer(K: PermGroup, pt, act, rng: random.Random, bound: int = SECTION_BOUND) -> PermGroup:
    """Stabilizer of ``pt`` via random Schreier generators and the exact order."""
    trans = _orbit_with_transversal(K, pt, act, bound)
    if len(trans) == 1:
        return K
    draw = K.sampler(rng)

    def sample() -> Perm:
        g = draw()
        return mul(g, inv(trans[act(pt, g)]))
    return PermGroup.from_sampler(K.degree, sample, K.order() // len(trans))


def action_kernel(G: PermGroup, reps: Sequence, act, rng: random.Random,
                  floor: int = 1, bound: int = SECTION_BOUND) -> PermGroup:
    """Kernel of the action of ``G`` on the union of the orbits of ``reps``.

    A normal subgroup fixing one point of an orbit fixes all of it, so
    stabilize the representatives and then test normality; a failing
    conjugate ``x^g`` names a further point ``s^(g^-1)`` moved by ``x``.
    """
    K = G
    fixed: list = []
    todo = list(reps)
    while True:
        for w in todo:
            if K.order() <= floor:
                break
            fixed.append(w)
            if any(act(w, s) != w for s in K.small_gens()):
                K = stabilizer(K, w, act, rng, bound)
        if K.order() <= floor:
            return K
        todo = []
        for x in K.small_gens():
            for g in G.small_gens():
                if K.contains(conj(x, g)):
                    continue
                gi = inv(g)
                for w in fixed:
                    t = act(w, gi)
                    if act(t, x) != t:
                        todo.append(t)
                        break
                break
            if todo:
                break
        if not todo:
            return K


def _coset_action(A: PermGroup):
    if A.is_trivial():
        return conj
    return lambda w, g: canonical_coset(conj(w, g), A)


def _support(x: Perm) -> int:
    return sum(1 for i, j in enumerate(x) if i != j)


def _smallest_orbit(G: PermGroup, starts: Sequence, act, cap: int) -> dict | None:
    """Grow the orbits of ``starts`` in lockstep; return the first to close."""
    states = [({c: G.identity}, [c], 0) for c in starts]
    gens = G.small_gens()
    live = list(range(len(states)))
    while live:
        for k in list(live):
            trans, todo, pos = states[k]
            if pos == len(todo):
                return trans
            w = todo[pos]
            u = trans[w]
            for s in gens:
                v = act(w, s)
                if v not in trans:
                    trans[v] = mul(u, s)
                    todo.append(v)
            states[k] = (trans, todo, pos + 1)
            if len(trans) > cap:
                live.remove(k)
    return None


def _generating_orbits(G: PermGroup, A: PermGroup, B: PermGroup, rng: random.Random,
                       bound: int, tries: int = 12, keep: int = 6) -> list:
    """Representatives of G-orbits of cosets ``yA`` whose members generate ``B`` modulo ``A``.

    Each round samples prime parts of random elements of ``B`` outside the
    closure found so far and keeps the one with the smallest orbit.
    """
    act = _coset_action(A)
    reps: list = []
    total = 0
    H = A
    full = B.order()
    while H.order() < full:
        cands = [canonical_coset(b, A) for b in B.gens if not H.contains(b)]
        for _ in range(tries):
            cands.extend(canonical_coset(y, A) for y in _prime_parts(B.random_element(rng), A)
                         if not H.contains(y))
        cands = sorted(set(cands), key=_support)[:keep]
        best = _smallest_orbit(G, cands, act, bound - total)
        if best is None:
            raise SectionTooLarge(f"coset space exceeds {bound} points")
        rep = next(iter(best))
        reps.append(rep)
        total += len(best)
        H = normal_closure(G, [rep], H, full)
    return reps


def _sym_centralizer(B: PermGroup, rng: random.Random, cap: int = SECTION_BOUND) -> PermGroup | None:
    """Centralizer of ``B`` in the full symmetric group, or None if larger than ``cap``.

    Orbits with equal point stabilizers are permuted among themselves; on
    one orbit the centralizer acts as ``N_B(B_a)/B_a``.
    """
    n = B.degree
    seen = [False] * n
    orbits = []
    for a in range(n):
        if seen[a]:
            continue
        orb = [a]
        seen[a] = True
        k = 0
        while k < len(orb):
            d = orb[k]
            k += 1
            for s in B.small_gens():
                e = s[d]
                if not seen[e]:
                    seen[e] = True
                    orb.append(e)
        orbits.append(orb)

    def fixed_by_stab(a: int, size: int) -> set:
        if size == 1:
            stab = B.small_gens()
        else:
            Ba = B.with_base([a], rng)
            stab = [s for l in Ba._chain.gens[1:] for s in l]
        return {x for x in range(n) if all(s[x] == x for s in stab)}

    def equiv_map(a: int, g: int) -> dict:
        m = {a: g}
        todo = [a]
        while todo:
            d = todo.pop()
            for s in B.small_gens():
                e = s[d]
                if e not in m:
                    m[e] = s[m[d]]
                    todo.append(e)
        return m

    def as_perm(m: dict, swap: bool) -> Perm:
        p = list(range(n))
        for x, y in m.items():
            p[x] = y
            if swap:
                p[y] = x
        return tuple(p)

    gens = []
    total = 1
    used = [False] * len(orbits)
    for i, oi in enumerate(orbits):
        if used[i]:
            continue
        used[i] = True
        a = oi[0]
        fix = fixed_by_stab(a, len(oi))
        cls = [j for j in range(i + 1, len(orbits))
               if not used[j] and len(orbits[j]) == len(oi) and not fix.isdisjoint(orbits[j])]
        for j in cls:
            used[j] = True
        own = sorted(fix.intersection(oi))
        total *= len(own) ** (1 + len(cls)) * math.factorial(1 + len(cls))
        if total > cap:
            return None
        for g in own:
            if g != a:
                gens.append(as_perm(equiv_map(a, g), False))
        for j in cls:
            g = min(fix.intersection(orbits[j]))
            gens.append(as_perm(equiv_map(a, g), True))
    Z = PermGroup(n, gens)
    if Z.order() != total:
        raise ArithmeticError("symmetric centralizer order mismatch")
    return Z


class OrbitQuotient:
    """Action of ``G`` on the orbits of a normal subgroup ``A``.

    ``kernel`` is the kernel of that action (it contains ``A``); ``Gbar`` is
    the image on ``m`` block points.
    """

    def __init__(self, G: PermGroup, blocks: list[list[int]], Gbar: PermGroup):
        self.G = G
        self.block_of = [0] * G.degree
        for i, b in enumerate(blocks):
            for x in b:
                self.block_of[x] = i
        self.m = len(blocks)
        self.Gbar = Gbar
        n, m = G.degree, self.m
        gs = G.small_gens()
        diag = [tuple(g) + tuple(n + x for x in self.image(g)) for g in gs]
        self.graph = PermGroup(n + m, diag, base=range(n, n + m), order=G.order())
        ch = self.graph._chain
        kgens = {s[:n] for l in ch.gens[m:] for s in l}
        self.kernel = PermGroup(n, kgens, order=G.order() // Gbar.order())

    def image(self, g: Perm) -> Perm:
        bo = self.block_of
        out = [0] * self.m
        for x in range(len(g)):
            out[bo[x]] = bo[g[x]]
        return tuple(out)

    def lift(self, c: Perm) -> Perm:
        n, m = self.G.degree, self.m
        ch = self.graph._chain
        x = tuple(range(n)) + tuple(n + y for y in c)
        for i in range(m):
            b = x[ch.base[i]]
            if b != ch.base[i]:
                x = mul(x, ch.uinv(i, b))
        return inv(x[:n])

    @classmethod
    def build(cls, G: PermGroup, A: PermGroup) -> "OrbitQuotient | None":
        if A.is_trivial():
            return None
        cache = G._cache.setdefault("orbit_quotient", {})
        key = (A.gens, A.order())
        if key in cache:
            return cache[key]
        seen = [False] * G.degree
        blocks = []
        for a in range(G.degree):
            if seen[a]:
                continue
            orb = [a]
            seen[a] = True
            for d in orb:
                for s in A.small_gens():
                    if not seen[s[d]]:
                        seen[s[d]] = True
                        orb.append(s[d])
            blocks.append(orb)
        out = None
        if len(blocks) < G.degree:
            bo = {x: i for i, b in enumerate(blocks) for x in b}
            imgs = [tuple(bo[g[b[0]]] for b in blocks) for g in G.small_gens()]
            out = cls(G, blocks, PermGroup(len(blocks), imgs))
        cache[key] = out
        return out


def _embeds(oq: OrbitQuotient, A: PermGroup, B: PermGroup) -> bool:
    img = PermGroup(oq.m, [oq.image(b) for b in B.small_gens()])
    return img.order() * A.order() == B.order()


def _centralizer_faithful(G: PermGroup, B: PermGroup, rng: random.Random, bound: int) -> PermGroup:
    """``C_G(B)`` for ``B`` normal in ``G`` (trivial bottom term)."""
    Z = _sym_centralizer(B, rng)
    if Z is not None:
        if Z.is_trivial():
            return trivial_like(G)
        return PermGroup(G.degree, [z for z in Z.elements() if G.contains(z)])
    A = trivial_like(G)
    reps = _generating_orbits(G, A, B, rng, bound)
    return action_kernel(G, reps, conj, rng, floor=1, bound=bound)


def centralizer_of_section(s: NormalSection, rng=None, bound: int = SECTION_BOUND) -> PermGroup:
    """Preimage of ``C_{G/A}(B/A)``: elements ``g`` with ``[g, B]`` inside ``A``.

    ``G`` acts by conjugation on cosets of ``A`` in ``B``; the centralizer is
    the kernel of that action on a few small orbits of cosets whose
    members generate ``B`` modulo ``A``.
    """
    rng = _rng(rng)
    G, A, B = s.ambient, s.bottom, s.top
    if B.order() == A.order():
        return G
    cache = G._cache.setdefault("centralizer", {})
    key = (A.gens, A.order(), B.gens, B.order())
    if key in cache:
        return cache[key]
    if A.is_trivial():
        C = _centralizer_faithful(G, B, rng, bound)
    elif (oq := OrbitQuotient.build(G, A)) is not None and _embeds(oq, A, B):
        # B meets the block kernel in A, so B/A embeds in the block action
        Bbar = PermGroup(oq.m, [oq.image(b) for b in B.small_gens()], order=B.order() // A.order())
        Cbar = _centralizer_faithful(oq.Gbar, Bbar, rng, bound)
        K = oq.kernel
        C = K.extend([oq.lift(c) for c in Cbar.gens], K.order() * Cbar.order())
    else:
        reps = _generating_orbits(G, A, B, rng, bound)
        C = action_kernel(G, reps, _coset_action(A), rng, floor=A.order(), bound=bound)
    cache[key] = C
    return C


# -- intersections -------------------------------------------------------

def intersect_with_normal(H: PermGroup, A: PermGroup, G: PermGroup | None = None) -> PermGroup:
    """``H ∩ A`` by backtrack over the stabilizer chain of ``H``.

    Partial base images are pruned by testing whether some element of
    ``A`` (rebuilt on the same base) can realise them.
    """
    if H.is_trivial() or A.is_trivial():
        return trivial_like(H)
    if H.is_subgroup_of(A):
        return H
    if A.is_subgroup_of(H):
        return A
    Hc = H._chain
    base = Hc.base
    L = len(base)
    Ac = A.with_base(base)._chain
    idn = Hc.id
    found: list[list[Perm]] = [[] for _ in range(L)]

    def orbit_of(i: int) -> set:
        gens = [g for l in found[i:] for g in l]
        orb = {base[i]}
        todo = [base[i]]
        while todo:
            d = todo.pop()
            for s in gens:
                e = s[d]
                if e not in orb:
                    orb.add(e)
                    todo.append(e)
        return orb

    def a_step(r: Perm, l: int) -> Perm | None:
        b = r[base[l]]
        if b not in Ac.trans[l]:
            return None
        return mul(r, Ac.uinv(l, b)) if b != base[l] else r

    def search(l: int, p: Perm, r: Perm) -> Perm | None:
        COUNTERS["backtrack_node"] += 1
        if l == L:
            rest, j = Ac.sift(r, L)
            return p if (j == len(Ac.base) and rest == idn) else None
        for u in Hc.trans[l].values():
            r2 = a_step(mul(u, r), l)
            if r2 is None:
                continue
            got = search(l + 1, mul(u, p), r2)
            if got is not None:
                return got
        return None

    orders = [1] * L
    for i in range(L - 1, -1, -1):
        orb = orbit_of(i)
        for d, u in Hc.trans[i].items():
            if d in orb:
                continue
            r = a_step(u, i)
            if r is None:
                continue
            r0 = r
            # levels before i are fixed by u; start search below level i
            g = search(i + 1, u, r0)
            if g is not None:
                found[i].append(g)
                orb = orbit_of(i)
        orders[i] = len(orb)
    gens = [g for l in found for g in l]
    return PermGroup(H.degree, gens, order=math.prod(orders))


# -- elementary abelian layers ---------------------------------------------

class ElementaryLayer:
    """Coordinates on an elementary abelian section ``B/A`` of order ``p^d``."""

    def __init__(self, A: PermGroup, B: PermGroup, p: int):
        self.A, self.B, self.p = A, B, p
        self.basis: list[Perm] = []
        self.chain = [A]
        cur = A
        for b in B.gens:
            if cur.order() == B.order():
                break
            if not cur.contains(b):
                cur = cur.extend([b], cur.order() * p)
                self.basis.append(b)
                self.chain.append(cur)
        if cur.order() != B.order():
            raise ValueError("section is not elementary abelian")
        self.d = len(self.basis)
        self._binv = [inv(b) for b in self.basis]

    def coords(self, x: Perm) -> list[int]:
        v = [0] * self.d
        for i in range(self.d - 1, -1, -1):
            sub = self.chain[i]
            y = x
            for e in range(self.p):
                if sub.contains(y):
                    v[i] = e
                    x = y
                    break
                y = mul(y, self._binv[i])
            else:
                raise ValueError("element outside the section")
        return v

    def element(self, v: Sequence[int]) -> Perm:
        x = self.A.identity
        for b, e in zip(self.basis, v):
            if e:
                x = mul(x, power(b, e))
        return x

    def matrix(self, g: Perm) -> linalg.Matrix:
        return [self.coords(conj(b, g)) for b in self.basis]


def split_module(s: NormalSection, rng=None) -> PermGroup | None:
    """Proper G-invariant subgroup strictly between ``A`` and ``B``, or None if irreducible."""
    rng = _rng(rng)
    G, A, B = s.ambient, s.bottom, s.top
    p = min(factorint(s.order()))
    lay = ElementaryLayer(A, B, p)
    mats = [lay.matrix(g) for g in G.small_gens()]
    verdict, basis = linalg.split_module(mats, p, lay.d, rng)
    if verdict == "undecided":
        verdict, basis = linalg.exhaustive_split(mats, p, lay.d) if p ** lay.d <= 10**4 else (verdict, None)
    if verdict == "undecided":
        raise SeriesRefinementExhausted("module splitting undecided")
    if verdict == "irreducible":
        return None
    return A.extend([lay.element(v) for v in basis], A.order() * p ** len(basis))


# -- refinement to chief factors -------------------------------------------

def _is_abelian_mod(B: PermGroup, A: PermGroup) -> bool:
    gs = B.small_gens()
    return all(A.contains(comm(a, b)) for i, a in enumerate(gs) for b in gs[i + 1:])


def _has_order_15_mod(T: PermGroup, A: PermGroup, rng: random.Random, tries: int = 400) -> bool:
    for _ in range(tries):
        if order_mod(T.random_element(rng), A) % 15 == 0:
            return True
    return False


def refine_layer(G: PermGroup, A: PermGroup, B: PermGroup, rng: random.Random,
                 budget: int = REFINE_BUDGET):
    """Either ``("chief", SimpleType)`` or ``("split", N)`` with ``A < N < B`` normal in ``G``."""
    size = B.order() // A.order()
    if _is_abelian_mod(B, A):
        if isprime(size):
            return "chief", SimpleType.cyclic(size)
        f = factorint(size)
        if len(f) > 1:
            p = min(f)
            e = size // p ** f[p]
            N = A.extend([power(b, e) for b in B.small_gens()], A.order() * p ** f[p])
            return "split", N
        (p, a), = f.items()
        Ag = A.extend([power(b, p) for b in B.small_gens()], B.order() // p)
        if Ag.order() > A.order():
            return "split", Ag
        bs = B.small_gens()
        if all(A.contains(comm(g, b)) for g in G.small_gens() for b in bs):
            # central layer: every subgroup between A and B is normal
            b = next(b for b in bs if not A.contains(b))
            return "split", A.extend([b], A.order() * p)
        N = split_module(NormalSection(G, A, B), rng)
        if N is not None:
            return "split", N
        return "chief", SimpleType.cyclic(p, a)
    D = derived_subgroup(QuotientRef(B, A), limit=B.order())
    if D.order() < B.order():
        return "split", normal_closure(G, D.gens, A, D.order())
    return _refine_perfect(G, A, B, size, rng, budget)


def _prime_parts(x: Perm, A: PermGroup) -> list[Perm]:
    """Elements of prime order modulo ``A`` in the cyclic group ``<x>``, one per prime."""
    m = order_mod(x, A)
    return [power(x, m // q) for q in factorint(m)] if m > 1 else []


def _refine_perfect(G: PermGroup, A: PermGroup, B: PermGroup, size: int,
                    rng: random.Random, budget: int):
    """Split a perfect layer or certify it as ``J^k`` with ``J`` simple.

    Sampling prime parts of random elements finds soluble normal
    subgroups with good probability (an element whose image modulo them
    has order prime to ``p`` powers into them).  Then descend through
    subnormal closures to one simple component.
    """
    full = B.order()
    for _ in range(budget // 2):
        for y in _prime_parts(B.random_element(rng), A):
            N = normal_closure(G, [y], A, full)
            if N.order() < full:
                return "split", N
    T = B
    stable = 0
    # a layer of simple order is its own component unless a sample shrinks it
    patience = 2 if is_simple_order(size) else budget // 3
    while stable < patience:
        ys = _prime_parts(T.random_element(rng), A)
        if not ys:
            continue
        shrunk = False
        for y in ys:
            S = normal_closure(T, [y], A, T.order())
            if S.order() < T.order():
                N = normal_closure(G, S.gens, A, full)
                if N.order() < full:
                    return "split", N
                T, shrunk = S, True
                break
        stable = 0 if shrunk else stable + 1
    tsize = T.order() // A.order()
    D = derived_subgroup(QuotientRef(T, A), limit=T.order())
    if D.order() < T.order() or not is_simple_order(tsize) and tsize <= TABLE_BOUND:
        raise SeriesRefinementExhausted(f"component of order {tsize} is not simple")
    k = round(math.log(size) / math.log(tsize))
    if tsize ** k != size:
        raise SeriesRefinementExhausted("section is not a power of its component")
    if tsize == 20160:
        name = name_for_order(tsize, _has_order_15_mod(T, A, rng))
    else:
        name = name_for_order(tsize)
    return "chief", SimpleType.nonabelian(name, tsize, k)


def identify_type(s: NormalSection, rng=None) -> SimpleType:
    kind, val = refine_layer(s.ambient, s.bottom, s.top, _rng(rng))
    if kind != "chief":
        raise NotChief("section is not a chief factor")
    return val


def _derived_layers(G: PermGroup, A: PermGroup, B: PermGroup) -> list[PermGroup]:
    terms = [B]
    while terms[-1].order() > A.order():
        D = derived_subgroup(QuotientRef(terms[-1], A), limit=terms[-1].order())
        if D.order() == terms[-1].order():
            break
        terms.append(D)
    if terms[-1].order() > A.order():
        terms.append(A)
    return terms[::-1]


def chief_series(Q: QuotientRef | PermGroup, through: Sequence[PermGroup] = (), seed=0) -> ChiefSeries:
    """Chief series of ``G`` from ``K`` to ``G`` through the given normal subgroups."""
    if isinstance(Q, PermGroup):
        Q = QuotientRef.of(Q)
    G, K = Q.ambient, Q.kernel
    key = ("chief", K.gens, K.order(), tuple((t.gens, t.order()) for t in through), seed
           if not isinstance(seed, random.Random) else None)
    cache = G._cache
    if key in cache:
        return cache[key]
    rng = _rng(seed)
    mids = sorted(through, key=PermGroup.order)
    for t in mids:
        if not (K.is_subgroup_of(t) and t.is_subgroup_of(G) and t.is_normal_in(G)):
            raise ValueError("requested term must be normal in G and contain K")
    for a, b in zip(mids, mids[1:]):
        if not a.is_subgroup_of(b):
            raise ValueError("requested terms are not totally ordered")
    stops = [K]
    for t in mids + [G]:
        if t.order() > stops[-1].order():
            stops.append(t)
    coarse = [K]
    for a, b in zip(stops, stops[1:]):
        coarse.extend(_derived_layers(G, a, b)[1:])
    terms = [K]
    types: list[SimpleType] = []

    def build(a: PermGroup, b: PermGroup) -> None:
        kind, val = refine_layer(G, a, b, rng)
        if kind == "chief":
            terms.append(b)
            types.append(val)
        else:
            build(a, val)
            build(val, b)

    for a, b in zip(coarse, coarse[1:]):
        build(a, b)
    cs = ChiefSeries(G, terms, types)
    cache[key] = cs
    return cs


# -- radicals of simple-type classes -----------------------------------------

def o_sigma(Q: QuotientRef | PermGroup, sigma: TypePredicate, seed=0) -> PermGroup:
    """Preimage of the largest normal subgroup of ``G/K`` with all composition types in ``sigma``.

    Sweeps a chief series ``K = G_0 < ... < G_m = G``.  With
    ``R_i = O_sigma(G_i)``: ``R_i`` meets ``G_{i-1}`` in ``R_{i-1}``, so it
    either equals ``R_{i-1}`` or complements ``G_{i-1}`` over it, and then
    centralizes ``G_{i-1}/R_{i-1}``.
    """
    if isinstance(Q, PermGroup):
        Q = QuotientRef.of(Q)
    G, K = Q.ambient, Q.kernel
    if sigma.is_all or G.order() == K.order():
        return G
    if sigma.is_none:
        return K
    cache = G._cache.setdefault("osigma", {})
    key = (K.gens, K.order(), sigma)
    if key in cache:
        return cache[key]
    rng = _rng(seed)
    cs = chief_series(Q, seed=seed)
    if all(sigma(t) for t in cs.factor_types):
        cache[key] = G
        return G
    F = K
    for prev, Gi, t in zip(cs.terms, cs.terms[1:], cs.factor_types):
        if not sigma(t):
            continue
        if F.order() == prev.order():
            # F = G_{i-1}: the whole factor extends the radical.
            F = Gi
            continue
        C = centralizer_of_section(NormalSection(Gi, F, prev), rng)
        if C.is_subgroup_of(prev):
            continue
        jk = t.section_order()
        if t.abelian:
            zf = C.order() // (jk * F.order())
            F = F.extend([power(c, zf) for c in C.small_gens()], F.order() * jk)
        else:
            D = derived_subgroup(QuotientRef(C, F), limit=C.order())
            if D.order() == F.order() * jk:
                F = D
    cache[key] = F
    return F


def minimal_normal_subgroups(Q: QuotientRef | PermGroup, seed=0, samples: int = 30) -> list[PermGroup]:
    """Minimal normal subgroups of ``G/K`` (as preimages)."""
    if isinstance(Q, PermGroup):
        Q = QuotientRef.of(Q)
    G, K = Q.ambient, Q.kernel
    if G.order() == K.order():
        raise ValueError("trivial quotient has no minimal normal subgroups")
    rng = _rng(seed)
    cs = chief_series(Q, seed=seed)
    found = [cs.terms[1]]
    for j in range(1, len(cs.terms)):
        for _ in range(samples // max(1, len(cs.terms) - 1) + 2):
            y = prime_power_mod(cs.terms[j].random_element(rng), K)
            if y is None:
                continue
            N = normal_closure(G, [y], K)
            if any(N == M for M in found):
                continue
            if refine_layer(G, K, N, rng)[0] == "chief":
                found.append(N)
    return found

"""Permutations, stabilizer chains and permutation groups.

Permutations are plain tuples of images on ``0..n-1``.  Products are read
left to right: ``mul(p, q)`` applies ``p`` first, then ``q``.  Conjugation
is ``x^g = g^-1 x g``.

Groups keep an eagerly built base and strong generating set.  Randomness
only enters through an explicit seed; a group value never changes after
construction.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from operator import itemgetter
from typing import Callable, Iterable, Iterator, Mapping, Sequence

Perm = tuple

__all__ = [
    "Perm", "PermGroup", "QuotientRef", "PermError", "NotAHomomorphism",
    "identity", "mul", "inv", "conj", "comm", "power", "perm_order",
    "from_cycles", "parse_cycles", "format_cycles", "check_perm",
    "group_from_generators", "order", "contains", "kernel_of_homomorphism",
    "random_element", "COUNTERS",
]

# Work counters reported by the bench command.
COUNTERS = {"sift": 0, "schreier_gen": 0, "backtrack_node": 0}


class PermError(ValueError):
    """Malformed permutation or degree mismatch."""


class NotAHomomorphism(ValueError):
    pass


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    """Product ``p`` then ``q``."""
    if len(p) > 1:
        return itemgetter(*p)(q)
    return tuple(q[i] for i in p)


def inv(p: Perm) -> Perm:
    r = [0] * len(p)
    for i, j in enumerate(p):
        r[j] = i
    return tuple(r)


def conj(x: Perm, g: Perm) -> Perm:
    """``g^-1 x g``: maps ``g[i]`` to ``g[x[i]]``."""
    r = [0] * len(x)
    for i, j in enumerate(x):
        r[g[i]] = g[j]
    return tuple(r)


def comm(a: Perm, b: Perm) -> Perm:
    """``a^-1 b^-1 a b``."""
    return mul(mul(inv(a), inv(b)), mul(a, b))


def power(p: Perm, e: int) -> Perm:
    if e < 0:
        p, e = inv(p), -e
    r = identity(len(p))
    while e:
        if e & 1:
            r = mul(r, p)
        p = mul(p, p)
        e >>= 1
    return r


def cycles(p: Perm) -> list[list[int]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            continue
        c = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            seen[j] = True
            c.append(j)
            j = p[j]
        out.append(c)
    return out


def perm_order(p: Perm) -> int:
    return math.lcm(1, *(len(c) for c in cycles(p)))


def check_perm(p: Sequence[int], n: int | None = None) -> Perm:
    p = tuple(p)
    if n is not None and len(p) != n:
        raise PermError(f"degree mismatch: expected {n}, got {len(p)}")
    if sorted(p) != list(range(len(p))):
        raise PermError(f"not a permutation: {p!r}")
    return p


def from_cycles(n: int, cyc: Iterable[Sequence[int]]) -> Perm:
    """Build a permutation from 0-indexed cycles (composed left to right)."""
    r = identity(n)
    for c in cyc:
        c = list(c)
        if len(set(c)) != len(c) or any(not 0 <= x < n for x in c):
            raise PermError(f"bad cycle {c!r} on {n} points")
        q = list(range(n))
        for a, b in zip(c, c[1:] + c[:1]):
            q[a] = b
        r = mul(r, tuple(q))
    return r


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\d+)|(,)|(\S))")


def parse_cycles(text: str, n: int, one_indexed: bool = True) -> Perm:
    """Parse cycle notation such as ``"(1 2 3)(4 5)"``.

    Raises ``PermError`` carrying the 1-based column of the first problem.
    """
    cyc: list[list[int]] = []
    cur: list[int] | None = None
    pos = 0
    for m in _TOKEN.finditer(text):
        pos = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        col = pos + 1
        if m.group(1):
            if cur is not None:
                raise PermError(f"column {col}: nested '('")
            cur = []
        elif m.group(2):
            if cur is None:
                raise PermError(f"column {col}: unmatched ')'")
            cyc.append(cur)
            cur = None
        elif m.group(3):
            if cur is None:
                raise PermError(f"column {col}: point outside a cycle")
            v = int(m.group(3)) - (1 if one_indexed else 0)
            if not 0 <= v < n:
                raise PermError(f"column {col}: point {m.group(3)} out of range for degree {n}")
            cur.append(v)
        elif m.group(4):
            if cur is None:
                raise PermError(f"column {col}: stray ','")
        else:
            raise PermError(f"column {col}: unexpected character {m.group(5)!r}")
    if cur is not None:
        raise PermError(f"column {len(text) + 1}: unbalanced cycle, missing ')'")
    return from_cycles(n, cyc)


def format_cycles(p: Perm, one_indexed: bool = True) -> str:
    off = 1 if one_indexed else 0
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(x + off) for x in c) + ")" for c in cs)


class _ProductReplacement:
    """Product replacement sampler; approximately uniform after burn-in."""

    def __init__(self, gens: Sequence[Perm], n: int, rng: random.Random, burn: int = 60):
        self.rng = rng
        slots = list(gens) or [identity(n)]
        while len(slots) < 10:
            slots = slots + slots
        self.slots = slots
        self.acc = identity(n)
        for _ in range(burn):
            self()

    def __call__(self) -> Perm:
        s = self.slots
        i, j = self.rng.sample(range(len(s)), 2)
        if self.rng.random() < 0.5:
            s[i] = mul(s[i], s[j])
        else:
            s[i] = mul(s[j], s[i])
        self.acc = mul(self.acc, s[i])
        return self.acc


class _Chain:
    """Mutable stabilizer chain used while building a group."""

    def __init__(self, n: int, base: Sequence[int] = ()):
        self.n = n
        self.id = identity(n)
        self.base: list[int] = []
        self.gens: list[list[Perm]] = []
        self.trans: list[dict[int, Perm]] = []
        self.tinv: list[dict[int, Perm]] = []
        for b in base:
            self._new_level(b)

    def _new_level(self, b: int) -> None:
        self.base.append(b)
        self.gens.append([])
        self.trans.append({b: self.id})
        self.tinv.append({b: self.id})

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def uinv(self, i: int, b: int) -> Perm:
        u = self.tinv[i].get(b)
        if u is None:
            u = inv(self.trans[i][b])
            self.tinv[i][b] = u
        return u

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        COUNTERS["sift"] += 1
        base, trans = self.base, self.trans
        for i in range(start, len(base)):
            b = g[base[i]]
            if b not in trans[i]:
                return g, i
            if b != base[i]:
                g = mul(g, self.uinv(i, b))
        return g, len(base)

    def _orbit(self, i: int, new: Perm | None = None) -> None:
        trans, gens = self.trans[i], self.gens[i]
        todo = []
        if new is None:
            todo = list(trans)
        else:
            # old points only need the new generator
            for d in list(trans):
                e = new[d]
                if e not in trans:
                    trans[e] = mul(trans[d], new)
                    todo.append(e)
        k = 0
        while k < len(todo):
            d = todo[k]
            k += 1
            u = trans[d]
            for s in gens:
                e = s[d]
                if e not in trans:
                    trans[e] = mul(u, s)
                    todo.append(e)

    def add(self, h: Perm, j: int) -> None:
        """Add residue ``h`` (fixing base[:j]) as a strong generator."""
        if j == len(self.base):
            b = next(x for x in range(self.n) if h[x] != x)
            self._new_level(b)
        for l in range(j + 1):
            self.gens[l].append(h)
            self._orbit(l, h)

    def close(self, top: int | None = None) -> None:
        """Deterministic Schreier-Sims completion from level ``top`` down."""
        i = len(self.base) - 1 if top is None else top
        idn = self.id
        while i >= 0:
            added = False
            trans = self.trans[i]
            for b in list(trans):
                u = trans[b]
                for s in list(self.gens[i]):
                    c = s[b]
                    us = mul(u, s)
                    if us == trans[c]:
                        continue
                    COUNTERS["schreier_gen"] += 1
                    h, j = self.sift(mul(us, self.uinv(i, c)), i + 1)
                    if h != idn:
                        self.add(h, j)
                        i = j
                        added = True
                        break
                if added:
                    break
            if not added:
                i -= 1

    def fill_random(self, sampler: Callable[[], Perm], target: int | None, patience: int = 25,
                    exact: bool = False) -> None:
        """Sift random elements until ``target`` is reached or ``patience`` sifts in a row add nothing.

        With ``exact`` the target order is known to be correct and only
        reaching it stops the loop.
        """
        idn = self.id
        quiet = 0
        while True:
            if target is not None and self.order() >= target:
                if self.order() > target:
                    raise ArithmeticError("random Schreier-Sims overshot the target order")
                return
            if not exact and quiet >= patience:
                return
            h, j = self.sift(sampler())
            if h != idn:
                self.add(h, j)
                quiet = 0
            else:
                quiet += 1


class PermGroup:
    """A permutation group on ``degree`` points with a built BSGS.

    Construct with generators (deterministic Schreier-Sims after a seeded
    random phase), or with ``PermGroup.from_sampler`` when the order and a
    uniform sampler are known.
    """

    def __init__(self, degree: int, gens: Iterable[Sequence[int]] = (), *, seed: int = 0,
                 order: int | None = None, base: Sequence[int] = ()):
        if degree < 1:
            raise PermError("degree must be at least 1")
        idn = identity(degree)
        gs: list[Perm] = []
        seen = set()
        for g in gens:
            g = check_perm(g, degree)
            if g != idn and g not in seen:
                seen.add(g)
                gs.append(g)
        chain = _Chain(degree, base)
        rng = random.Random(seed)
        if gs:
            if len(gs) > degree * degree:
                gs = _reduce_generators(degree, gs, base)
            chain.fill_random(_ProductReplacement(gs, degree, rng), order, exact=order is not None)
            if order is None:
                for g in gs:
                    h, j = chain.sift(g)
                    if h != idn:
                        chain.add(h, j)
                chain.close()
        self._init(degree, tuple(gs), chain)

    def _init(self, degree: int, gens: tuple, chain: _Chain) -> None:
        self.degree = degree
        self.gens = gens
        self._chain = chain
        self._order = chain.order()
        self._cache: dict = {}

    @classmethod
    def from_sampler(cls, degree: int, sampler: Callable[[], Perm], order: int,
                     base: Sequence[int] = ()) -> "PermGroup":
        """Group of known ``order`` whose uniform random elements come from ``sampler``."""
        chain = _Chain(degree, base)
        chain.fill_random(sampler, order, exact=True)
        g = cls.__new__(cls)
        sg = []
        for l in chain.gens:
            for s in l:
                if s not in sg:
                    sg.append(s)
        g._init(degree, tuple(sg), chain)
        return g

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree)

    # -- basic queries -------------------------------------------------
    def order(self) -> int:
        return self._order

    def __len__(self) -> int:
        return self._order

    def is_trivial(self) -> bool:
        return self._order == 1

    @property
    def identity(self) -> Perm:
        return self._chain.id

    @property
    def base(self) -> list[int]:
        return list(self._chain.base)

    def basic_orbits(self) -> list[list[int]]:
        return [sorted(t) for t in self._chain.trans]

    def strong_generators(self) -> list[Perm]:
        out = []
        for l in self._chain.gens:
            for s in l:
                if s not in out:
                    out.append(s)
        return out

    def contains(self, p: Sequence[int]) -> bool:
        if len(p) != self.degree:
            raise PermError(f"degree mismatch: group has degree {self.degree}, element {len(p)}")
        h, j = self._chain.sift(tuple(p))
        return j == len(self._chain.base) and h == self._chain.id

    __contains__ = contains

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return (self._order <= other._order and other._order % self._order == 0
                and all(other.contains(g) for g in self.gens))

    def __le__(self, other: "PermGroup") -> bool:
        return self.is_subgroup_of(other)

    def __lt__(self, other: "PermGroup") -> bool:
        return self._order < other._order and self.is_subgroup_of(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return (self.degree == other.degree and self._order == other._order
                and all(other.contains(g) for g in self.gens))

    def __hash__(self) -> int:
        return hash((self.degree, self._order))

    def __repr__(self) -> str:
        return f"<PermGroup degree={self.degree} order={self._order} gens={len(self.gens)}>"

    def small_gens(self) -> tuple:
        """A few generators (random elements), verified by reaching the known order."""
        c = self._cache.get("small_gens")
        if c is None:
            c = _small_generating_set(self)
            self._cache["small_gens"] = c
        return c

    def is_normal_in(self, G: "PermGroup") -> bool:
        return all(self.contains(conj(x, g)) for x in self.small_gens() for g in G.small_gens())

    def is_abelian(self) -> bool:
        gs = self.gens
        return all(mul(a, b) == mul(b, a) for i, a in enumerate(gs) for b in gs[i + 1:])

    # -- elements ------------------------------------------------------
    def random_element(self, rng: random.Random) -> Perm:
        """Exactly uniform element from the stabilizer chain."""
        g = self._chain.id
        for t in reversed(self._chain.trans):
            if len(t) > 1:
                g = mul(g, _pick(t, rng))
        return g

    def sampler(self, rng: random.Random) -> Callable[[], Perm]:
        trans = [list(t.values()) for t in reversed(self._chain.trans) if len(t) > 1]
        idn = self._chain.id

        def draw() -> Perm:
            g = idn
            for t in trans:
                g = mul(g, t[rng.randrange(len(t))])
            return g
        return draw

    def elements(self) -> Iterator[Perm]:
        levels = [list(t.values()) for t in reversed(self._chain.trans)]

        def rec(k: int, g: Perm) -> Iterator[Perm]:
            if k == len(levels):
                yield g
                return
            for u in levels[k]:
                yield from rec(k + 1, mul(g, u))
        yield from rec(0, self._chain.id)

    def with_base(self, prefix: Sequence[int], rng: random.Random | None = None) -> "PermGroup":
        """Same group, rebuilt so the base starts with ``prefix``."""
        if list(self._chain.base[:len(prefix)]) == list(prefix):
            return self
        rng = rng or random.Random(0)
        g = PermGroup.from_sampler(self.degree, self.sampler(rng), self._order, prefix)
        g.gens = self.gens
        return g

    def subgroup(self, gens: Iterable[Perm], order: int | None = None, seed: int = 0) -> "PermGroup":
        return PermGroup(self.degree, gens, seed=seed, order=order)

    def extend(self, extra: Iterable[Perm], limit: int | None = None) -> "PermGroup":
        """Group generated by this group and ``extra``.

        ``limit`` is a known upper bound on the result's order; reaching it
        ends the computation early.
        """
        chain = _copy_chain(self._chain)
        gens = list(self.gens)
        idn = chain.id
        grew = False
        for x in extra:
            if limit is not None and chain.order() >= limit:
                break
            h, j = chain.sift(x)
            if h != idn:
                gens.append(x)
                chain.add(h, j)
                grew = True
        if grew and (limit is None or chain.order() < limit):
            rng = random.Random(len(gens))
            before = set(_strong(chain))
            chain.fill_random(_ProductReplacement(gens, self.degree, rng, burn=20), limit)
            gens.extend(s for s in _strong(chain) if s not in before)
            if limit is None or chain.order() < limit:
                chain.close()
        g = PermGroup.__new__(PermGroup)
        g._init(self.degree, tuple(gens), chain)
        return g


def _small_generating_set(G: PermGroup) -> tuple:
    if len(G.gens) <= 3:
        return G.gens
    rng = random.Random(G.order())
    target = G.order()
    for k in range(2, 12):
        cand = [G.random_element(rng) for _ in range(k)]
        chain = _Chain(G.degree)
        chain.fill_random(_ProductReplacement(cand, G.degree, rng, burn=20), target, patience=40)
        if chain.order() == target:
            return tuple(cand)
    return G.gens


def _strong(c: _Chain) -> list[Perm]:
    return list(dict.fromkeys(s for l in c.gens for s in l))


def _pick(t: dict, rng: random.Random) -> Perm:
    vals = list(t.values())
    return vals[rng.randrange(len(vals))]


def _copy_chain(c: _Chain) -> _Chain:
    d = _Chain(c.n)
    d.base = list(c.base)
    d.gens = [list(l) for l in c.gens]
    d.trans = [dict(t) for t in c.trans]
    d.tinv = [dict(t) for t in c.tinv]
    return d


def _reduce_generators(n: int, gens: list[Perm], base: Sequence[int]) -> list[Perm]:
    chain = _Chain(n, base)
    kept = []
    for g in gens:
        h, j = chain.sift(g)
        if h != chain.id:
            kept.append(g)
            chain.add(h, j)
            chain.close(j)
    return kept


@dataclass(frozen=True, eq=False)
class QuotientRef:
    """The quotient ``ambient / kernel`` given by preimages."""

    ambient: PermGroup
    kernel: PermGroup

    def __post_init__(self):
        G, K = self.ambient, self.kernel
        if G.degree != K.degree:
            raise PermError("kernel and ambient degrees differ")
        if not all(G.contains(k) for k in K.gens):
            raise PermError("kernel is not a subgroup of the ambient group")
        if not K.is_normal_in(G):
            raise PermError("kernel is not normal in the ambient group")

    @classmethod
    def of(cls, G: PermGroup, K: PermGroup | None = None) -> "QuotientRef":
        return cls(G, K if K is not None else PermGroup.trivial(G.degree))

    def order(self) -> int:
        return self.ambient.order() // self.kernel.order()


def group_from_generators(degree: int, gens: Iterable[Sequence[int]], seed: int = 0) -> PermGroup:
    return PermGroup(degree, gens, seed=seed)


def order(G: PermGroup | QuotientRef) -> int:
    return G.order()


def contains(G: PermGroup, p: Sequence[int]) -> bool:
    return G.contains(p)


def random_element(G: PermGroup, rng: random.Random) -> Perm:
    return G.random_element(rng)


def kernel_of_homomorphism(G: PermGroup, images: Mapping[Perm, Sequence[int]] | Sequence[Sequence[int]],
                           seed: int = 0) -> PermGroup:
    """Kernel of the homomorphism fixed by generator images.

    ``images`` maps each generator of ``G`` (or lists images in generator
    order) to a permutation of some degree ``m``.  The graph subgroup of
    ``G x H`` on ``n + m`` points is built with the ``m`` image points first
    in the base; the kernel is the pointwise stabilizer of those points.
    """
    n = G.degree
    if isinstance(images, Mapping):
        imgs = [tuple(images[g]) for g in G.gens]
    else:
        imgs = [tuple(x) for x in images]
    if len(imgs) != len(G.gens):
        raise PermError("need one image per generator")
    if not imgs:
        return PermGroup.trivial(n)
    m = len(imgs[0])
    diag = [tuple(g) + tuple(n + x for x in check_perm(h, m)) for g, h in zip(G.gens, imgs)]
    base = list(range(n, n + m))
    D = PermGroup(n + m, diag, seed=seed, base=base)
    if D.order() != G.order():
        raise NotAHomomorphism("generator images do not define a homomorphism")
    ch = D._chain
    kgens = {s[:n] for l in ch.gens[m:] for s in l} if len(ch.base) > m else set()
    korder = math.prod(len(t) for t in ch.trans[m:])
    return PermGroup(n, kgens, order=korder)

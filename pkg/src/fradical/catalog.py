"""Named permutation group families.

Expressions such as ``sym(4)``, ``prod(alt(5),cyclic(6))`` or
``wr(sym(3),cyclic(2))`` are parsed by :func:`build`.
"""

from __future__ import annotations

import itertools
import re

from sympy import isprime, primitive_root

from .perm import Perm, PermError, PermGroup, from_cycles, identity


class CatalogError(ValueError):
    pass


def sym(n: int) -> PermGroup:
    if n < 1:
        raise CatalogError("sym needs n >= 1")
    gens = []
    if n >= 2:
        gens = [from_cycles(n, [[0, 1]]), from_cycles(n, [list(range(n))])]
    return PermGroup(n, gens, order=_fact(n))


def alt(n: int) -> PermGroup:
    if n < 1:
        raise CatalogError("alt needs n >= 1")
    gens = []
    if n >= 3:
        # Two generators suffice: a 3-cycle and an (n-1)- or n-cycle of even sign.
        long = list(range(n)) if n % 2 else list(range(1, n))
        gens = [from_cycles(n, [[0, 1, 2]]), from_cycles(n, [long])]
    return PermGroup(n, gens, order=max(1, _fact(n) // 2))


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise CatalogError("cyclic needs n >= 1")
    return PermGroup(n, [from_cycles(n, [list(range(n))])] if n > 1 else [], order=n)


def dihedral(n: int) -> PermGroup:
    """Symmetries of the n-gon, order 2n (n >= 3)."""
    if n < 3:
        raise CatalogError("dihedral needs n >= 3")
    r = from_cycles(n, [list(range(n))])
    s = tuple((-i) % n for i in range(n))
    return PermGroup(n, [r, s], order=2 * n)


def elemab(p: int, d: int) -> PermGroup:
    """``C_p^d`` acting on ``d`` disjoint blocks of size ``p``."""
    if not isprime(p) or d < 1:
        raise CatalogError("elemab needs a prime p and d >= 1")
    n = p * d
    gens = [from_cycles(n, [list(range(i * p, (i + 1) * p))]) for i in range(d)]
    return PermGroup(n, gens, order=p**d)


def psl2(p: int) -> PermGroup:
    """PSL(2,p) on the projective line ``0..p-1, oo`` (oo is point p)."""
    if not isprime(p) or p < 2:
        raise CatalogError("psl2 needs a prime p")
    inf = p

    def mob(f) -> Perm:
        return tuple(f(x) for x in range(p + 1))

    t = mob(lambda x: inf if x == inf else (x + 1) % p)
    s = mob(lambda x: 0 if x == inf else inf if x == 0 else (-pow(x, -1, p)) % p)
    order = p * (p * p - 1) // (2 if p > 2 else 1)
    return PermGroup(p + 1, [t, s], order=order)


def sl2(p: int) -> PermGroup:
    """SL(2,p) on the nonzero vectors of ``F_p^2``."""
    if not isprime(p):
        raise CatalogError("sl2 needs a prime p")
    vecs = [v for v in itertools.product(range(p), repeat=2) if v != (0, 0)]
    idx = {v: i for i, v in enumerate(vecs)}

    def act(m) -> Perm:
        (a, b), (c, d) = m
        return tuple(idx[((x * a + y * c) % p, (x * b + y * d) % p)] for x, y in vecs)

    return PermGroup(len(vecs), [act(((1, 1), (0, 1))), act(((0, p - 1), (1, 0)))],
                     order=p * (p * p - 1))


def q8() -> PermGroup:
    """Quaternion group in its regular representation."""
    # units 1,i,j,k as 0..3; element (sign, unit) -> index 4*sign + unit
    table = {(0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
             (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
             (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
             (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0)}

    def right(unit: int) -> Perm:
        out = []
        for e in range(8):
            s, u = divmod(e, 4)
            s2, w = table[(u, unit)]
            out.append(4 * ((s + s2) % 2) + w)
        return tuple(out)

    return PermGroup(8, [right(1), right(2)], order=8)


def affine(d: int, p: int) -> PermGroup:
    """AGL(d,p) on the vectors of ``F_p^d``."""
    if not isprime(p) or d < 1:
        raise CatalogError("affine needs d >= 1 and a prime p")
    vecs = list(itertools.product(range(p), repeat=d))
    idx = {v: i for i, v in enumerate(vecs)}

    def lin(m) -> Perm:
        return tuple(idx[tuple(sum(v[i] * m[i][j] for i in range(d)) % p for j in range(d))] for v in vecs)

    gens = [tuple(idx[((v[0] + 1) % p,) + v[1:]] for v in vecs)]
    a = primitive_root(p) if p > 2 else 1
    diag = [[(a if i == j == 0 else int(i == j)) for j in range(d)] for i in range(d)]
    if p > 2:
        gens.append(lin(diag))
    for i in range(d):
        for j in range(d):
            if i != j:
                m = [[int(r == c) for c in range(d)] for r in range(d)]
                m[i][j] = 1
                gens.append(lin(m))
    order = p**d
    for k in range(d):
        order *= p**d - p**k
    return PermGroup(p**d, gens, order=order)


def direct_product(a: PermGroup, b: PermGroup) -> PermGroup:
    """Disjoint-union action on ``deg a + deg b`` points."""
    n, m = a.degree, b.degree
    gens = [g + tuple(range(n, n + m)) for g in a.gens]
    gens += [tuple(range(n)) + tuple(n + x for x in h) for h in b.gens]
    return PermGroup(n + m, gens, order=a.order() * b.order())


def wreath(a: PermGroup, b: PermGroup) -> PermGroup:
    """Imprimitive wreath product: ``deg b`` blocks each carrying a copy of ``a``."""
    n, m = a.degree, b.degree
    N = n * m
    gens = []
    for g in a.gens:
        gens.append(tuple(g[x] if x < n else x for x in range(N)))
    for h in b.gens:
        gens.append(tuple(h[x // n] * n + x % n for x in range(N)))
    return PermGroup(N, gens, order=a.order() ** m * b.order())


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


FAMILIES = {
    "sym": sym, "alt": alt, "cyclic": cyclic, "dihedral": dihedral, "elemab": elemab,
    "psl2": psl2, "sl2": sl2, "q8": q8, "affine": affine,
}
PRODUCTS = {"prod": direct_product, "wr": wreath}

_TOK = re.compile(r"\s*(?:([A-Za-z_]\w*)|(\d+)|([(),]))")


def build(expr: str) -> PermGroup:
    """Parse a catalog expression."""
    toks = []
    pos = 0
    text = expr.strip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise CatalogError(f"column {pos + 1}: unexpected character {text[pos]!r}")
        toks.append((m.group(1) or m.group(2) or m.group(3), m.start() + len(m.group(0)) - len(m.group(0).lstrip()) + 1))
        pos = m.end()
    k = 0

    def peek():
        return toks[k][0] if k < len(toks) else None

    def take(want=None):
        nonlocal k
        if k >= len(toks):
            raise CatalogError(f"column {len(text) + 1}: unexpected end of expression")
        tok, col = toks[k]
        if want is not None and tok != want:
            raise CatalogError(f"column {col}: expected {want!r}, got {tok!r}")
        k += 1
        return tok, col

    def group() -> PermGroup:
        name, col = take()
        if name in PRODUCTS:
            take("(")
            a = group()
            take(",")
            b = group()
            take(")")
            return PRODUCTS[name](a, b)
        if name not in FAMILIES:
            raise CatalogError(f"column {col}: unknown family {name!r}")
        args = []
        if peek() == "(":
            take("(")
            while True:
                tok, c = take()
                if not tok.isdigit():
                    raise CatalogError(f"column {c}: expected an integer, got {tok!r}")
                args.append(int(tok))
                if peek() == ",":
                    take(",")
                    continue
                take(")")
                break
        try:
            return FAMILIES[name](*args)
        except TypeError:
            raise CatalogError(f"column {col}: wrong number of arguments for {name}") from None

    G = group()
    if k != len(toks):
        raise CatalogError(f"column {toks[k][1]}: trailing input")
    return G


def transitive_catalog(max_degree: int = 50) -> dict[str, PermGroup]:
    """Transitive catalog groups used by the performance suite."""
    out: dict[str, PermGroup] = {}
    for n in (10, 20, 30, 40, 50):
        if n <= max_degree:
            out[f"sym({n})"] = sym(n)
            out[f"alt({n})"] = alt(n)
            out[f"cyclic({n})"] = cyclic(n)
            out[f"dihedral({n})"] = dihedral(n)
    for p in (7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if p + 1 <= max_degree:
            out[f"psl2({p})"] = psl2(p)
    for d, p in ((2, 5), (2, 7), (3, 3), (5, 2), (4, 2)):
        if p**d <= max_degree:
            out[f"affine({d},{p})"] = affine(d, p)
    for e in ("wr(sym(3),sym(4))", "wr(sym(4),sym(3))", "wr(alt(5),cyclic(2))", "wr(cyclic(2),sym(5))",
              "wr(sym(5),sym(5))", "wr(cyclic(3),alt(5))", "wr(sym(2),sym(25))", "wr(psl2(7),cyclic(3))",
              "wr(alt(6),sym(4))", "wr(cyclic(5),sym(10))", "sl2(7)"):
        G = build(e)
        if G.degree <= max_degree:
            out[e] = G
    return out

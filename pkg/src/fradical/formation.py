"""Fitting formations as immutable expression trees.

Every constructor denotes a Fitting formation: classes ``E_sigma`` of
groups whose composition factors lie in a type class, Baer-local classes
given by a Baer function whose values are again formations of this kind,
the quasinilpotent class, and finite intersections.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from sympy import isprime

from .perm import PermGroup, QuotientRef
from .series import (NormalSection, chief_series, centralizer_of_section, o_sigma, product)
from .simple import (AllTypes, AndPred, Cyclic, NoTypes, PiSubset, SimpleType, TypePredicate,
                     canonical_name, p_soluble, singleton)


class Formation:
    __slots__ = ()

    def __str__(self) -> str:  # pragma: no cover - overridden
        return self.__class__.__name__


@dataclass(frozen=True)
class Empty(Formation):
    def __str__(self):
        return "empty"


@dataclass(frozen=True)
class SigmaClass(Formation):
    """Groups all of whose composition factors satisfy ``sigma``."""

    sigma: TypePredicate
    label: str = ""

    def __str__(self):
        return self.label or f"sigma[{self.sigma}]"

    def __eq__(self, other):
        return isinstance(other, SigmaClass) and self.sigma == other.sigma

    def __hash__(self):
        return hash(("sigma", self.sigma))


@dataclass(frozen=True)
class Local(Formation):
    """Local formation: ``f(J)`` is the meet of ``f(p)`` over the primes of ``J``."""

    per_prime: tuple[tuple[int, Formation], ...] = ()
    default: Formation = Empty()
    label: str = ""

    def value(self, p: int) -> Formation:
        return dict(self.per_prime).get(p, self.default)

    def __str__(self):
        if self.label:
            return self.label
        items = [f"{p}->{f}" for p, f in self.per_prime] + [f"*->{self.default}"]
        return "local(" + ",".join(items) + ")"

    def __eq__(self, other):
        return (isinstance(other, Local) and self.per_prime == other.per_prime
                and self.default == other.default)

    def __hash__(self):
        return hash(("local", self.per_prime, self.default))


@dataclass(frozen=True)
class Baer(Formation):
    per_prime: tuple[tuple[int, Formation], ...] = ()
    default_abelian: Formation = Empty()
    per_name: tuple[tuple[str, Formation], ...] = ()
    default_nonabelian: Formation = Empty()

    def __str__(self):
        items = [f"{p}->{f}" for p, f in self.per_prime] + [f"*a->{self.default_abelian}"]
        items += [f"{n}->{f}" for n, f in self.per_name] + [f"*n->{self.default_nonabelian}"]
        return "baer(" + ",".join(items) + ")"


@dataclass(frozen=True)
class Quasinilpotent(Formation):
    def __str__(self):
        return "qnil"


@dataclass(frozen=True)
class DirectPowers(Formation):
    """Direct powers of one nonabelian simple group (including the trivial group)."""

    J: SimpleType

    def __str__(self):
        return f"powers({self.J.name})"


@dataclass(frozen=True)
class Meet(Formation):
    parts: tuple[Formation, ...]

    def __str__(self):
        return "meet(" + ",".join(map(str, self.parts)) + ")"


# -- constructors ------------------------------------------------------------

TRIV = SigmaClass(NoTypes(), "triv")
ALL = SigmaClass(AllTypes(), "all")
SOL = SigmaClass(Cyclic(), "sol")
EMPTY = Empty()


def pgroups(p: int) -> SigmaClass:
    return SigmaClass(Cyclic(frozenset([p])), f"pgrp({p})")


def pigroups(primes) -> SigmaClass:
    ps = frozenset(primes)
    return SigmaClass(PiSubset(ps), "pigrp(" + ",".join(map(str, sorted(ps))) + ")")


def p_soluble_pred(p: int) -> TypePredicate:
    return p_soluble(p)


def psoluble(p: int) -> SigmaClass:
    return SigmaClass(p_soluble(p), f"psol({p})")


def local(per_prime: Mapping[int, Formation], default: Formation = EMPTY, label: str = "") -> Local:
    for p, f in per_prime.items():
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        _check(f)
    _check(default)
    return Local(tuple(sorted(per_prime.items())), default, label)


def baer(per_prime: Mapping[int, Formation] | None = None, default_abelian: Formation = EMPTY,
         per_name: Mapping[str, Formation] | None = None, default_nonabelian: Formation = EMPTY) -> Baer:
    per_prime = dict(per_prime or {})
    per_name = dict(per_name or {})
    for f in [*per_prime.values(), *per_name.values(), default_abelian, default_nonabelian]:
        _check(f)
    return Baer(tuple(sorted(per_prime.items())), default_abelian,
                tuple(sorted(per_name.items())), default_nonabelian)


def nilpotent() -> Local:
    return Local((), TRIV, "nil")


def pnilpotent(p: int) -> Local:
    """Groups with a normal p-complement; the radical is ``O_{p',p}``."""
    return Local(((p, TRIV),), ALL, f"pnil({p})")


def meet(*parts: Formation) -> Formation:
    """Intersection with syntactic simplification."""
    flat: list[Formation] = []
    for f in parts:
        _check(f)
        flat.extend(f.parts if isinstance(f, Meet) else [f])
    if any(isinstance(f, Empty) for f in flat):
        return EMPTY
    flat = [f for f in flat if f != ALL]
    sig = [f for f in flat if isinstance(f, SigmaClass)]
    rest = [f for f in flat if not isinstance(f, SigmaClass)]
    if len(sig) > 1:
        pred = AndPred(tuple(f.sigma for f in sig))
        merged = SigmaClass(pred, "meet(" + ",".join(map(str, sig)) + ")")
        sig = [TRIV] if pred.is_none else [merged]
    if TRIV in sig:
        return TRIV
    out: list[Formation] = []
    for f in sig + rest:
        if f not in out:
            out.append(f)
    if not out:
        return ALL
    if len(out) == 1:
        return out[0]
    return Meet(tuple(out))


def _check(f) -> None:
    if not isinstance(f, Formation):
        raise TypeError(f"not a formation expression: {f!r}")


def primitive_formation(level: int, spec) -> Formation:
    """Local tower of the given nesting depth.

    ``spec`` is a leaf name (``"empty"``, ``"triv"``, ``"sol"``) or a
    mapping from primes (and ``"*"``) to nested specs one level lower.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    leaves = {"empty": EMPTY, "triv": TRIV, "sol": SOL}
    if isinstance(spec, str):
        if spec not in leaves:
            raise ValueError(f"leaf {spec!r} is not one of empty, triv, sol")
        return leaves[spec]
    if level == 0:
        raise ValueError("nesting deeper than the requested level")
    per = {}
    default = EMPTY
    for k, v in spec.items():
        sub = primitive_formation(level - 1, v)
        if k == "*":
            default = sub
        else:
            per[int(k)] = sub
    return local(per, default)


# -- Baer values -------------------------------------------------------------

def baer_value(F: Formation, J: SimpleType) -> Formation:
    """The value ``f(J)`` of the Baer function carried by ``F``."""
    if isinstance(F, Local):
        if J.abelian:
            return F.value(J.simple_order)
        return meet(*(F.value(p) for p in sorted(J.pi)))
    if isinstance(F, Baer):
        if J.abelian:
            return dict(F.per_prime).get(J.simple_order, F.default_abelian)
        return dict(F.per_name).get(J.name, F.default_nonabelian)
    if isinstance(F, Quasinilpotent):
        return TRIV if J.abelian else DirectPowers(J.simple)
    if isinstance(F, SigmaClass):
        return ALL if F.sigma(J) else EMPTY
    if isinstance(F, DirectPowers):
        return EMPTY if J.abelian or not J.same_simple(F.J) else F
    raise TypeError(f"{F} carries no Baer function")


def has_baer_function(F: Formation) -> bool:
    return isinstance(F, (Local, Baer, Quasinilpotent, SigmaClass, DirectPowers))


# -- membership --------------------------------------------------------------

def _as_quotient(Q) -> QuotientRef:
    return QuotientRef.of(Q) if isinstance(Q, PermGroup) else Q


def innerizer(s: NormalSection, seed=0) -> PermGroup:
    """``H C_G(H/K)``."""
    return product(s.top, centralizer_of_section(s, seed))


def contains_group(F: Formation, Q: QuotientRef | PermGroup, seed=0) -> bool:
    """Is ``G/K`` a member of ``F``?"""
    Q = _as_quotient(Q)
    G, K = Q.ambient, Q.kernel
    if isinstance(F, Empty):
        return False
    if isinstance(F, Meet):
        return all(contains_group(P, Q, seed) for P in F.parts)
    if G.order() == K.order():
        return True
    cs = chief_series(Q, seed=seed)
    if isinstance(F, SigmaClass):
        return all(F.sigma(t) for t in cs.factor_types)
    full = G.order()
    if isinstance(F, (Quasinilpotent, DirectPowers)):
        for s, t in zip(cs.sections(), cs.factor_types):
            if isinstance(F, DirectPowers) and (t.abelian or not t.same_simple(F.J)):
                return False
            if innerizer(s, seed).order() != full:
                return False
        return True
    for s, t in zip(cs.sections(), cs.factor_types):
        val = baer_value(F, t)
        if isinstance(val, Empty):
            return False
        if val == ALL:
            continue
        C = centralizer_of_section(s, seed)
        if not contains_group(val, QuotientRef(G, C), seed):
            return False
    return True


class ChiefContractError(ValueError):
    """A section passed as chief is not chief."""


def chief_factor_in_f(F: Formation, s: NormalSection, J: SimpleType | None = None, seed=0) -> bool:
    """Is the chief factor ``H/K`` (as a group) in ``F``?

    Abelian factors are members exactly when ``f(H/K)`` is nonempty.  A
    nonabelian factor is perfect, so membership means its own
    ``f(J)``-radical is all of it.
    """
    if J is None:
        from .series import NotChief, identify_type
        try:
            J = identify_type(s, seed)
        except NotChief as e:
            raise ChiefContractError(str(e)) from None
    if isinstance(F, Empty):
        return False
    if isinstance(F, Meet):
        return all(chief_factor_in_f(P, s, J, seed) for P in F.parts)
    if isinstance(F, SigmaClass):
        return F.sigma(J)
    if isinstance(F, Quasinilpotent):
        return True
    if isinstance(F, DirectPowers):
        return (not J.abelian) and J.same_simple(F.J)
    val = baer_value(F, J)
    if isinstance(val, Empty):
        return False
    if J.abelian or val == ALL:
        return True
    from .radical import fradical
    H, K = s.top, s.bottom
    return fradical(QuotientRef(H, K), val, seed).subgroup.order() == H.order()


def ef_radical(Q: QuotientRef | PermGroup, F: Formation, seed=0, trace: list | None = None) -> PermGroup:
    """Preimage of the largest normal subgroup of ``G/K`` with a normal series of ``F``-factors.

    Sweeps a chief series upward; a factor of type ``J`` in ``F`` lets the
    accumulator grow to the ``{J}``-radical of ``G_i`` over it.
    """
    Q = _as_quotient(Q)
    G, K = Q.ambient, Q.kernel
    if isinstance(F, Quasinilpotent) or isinstance(F, SigmaClass) and F.sigma.is_all:
        # every chief factor lies in the class
        if trace is not None:
            trace.append({"all_factors_in_class": True, "accumulated_order": G.order()})
        return G
    cs = chief_series(Q, seed=seed)
    acc = K
    for i, (s, t) in enumerate(zip(cs.sections(), cs.factor_types)):
        ok = chief_factor_in_f(F, s, t, seed)
        if ok:
            if acc.order() == s.bottom.order():
                acc = s.top
            else:
                acc = o_sigma(QuotientRef(s.top, acc), singleton(t), seed)
        if trace is not None:
            trace.append({"factor": i + 1, "type": str(t), "in_class": ok, "accumulated_order": acc.order()})
    return acc


# -- grammar -------------------------------------------------------------------

class FormationSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"position {pos + 1}: {msg}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(->|\*a|\*n|\*|[A-Za-z_][A-Za-z0-9_]*|\d+|[(),])")


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            p = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormationSyntaxError(f"unexpected character {text[p]!r}", p)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


KEYWORDS = {"empty", "triv", "all", "sol", "nil", "qnil", "pgrp", "pigrp", "pnil", "psol",
            "local", "baer", "meet"}


def parse(text: str) -> Formation:
    """Parse a formation expression (whitespace-insensitive)."""
    toks = _tokenize(text)
    k = 0
    end = len(text)

    def peek():
        return toks[k][0] if k < len(toks) else None

    def take(want=None):
        nonlocal k
        if k >= len(toks):
            raise FormationSyntaxError("unexpected end of expression", end)
        tok, pos = toks[k]
        if want is not None and tok != want:
            raise FormationSyntaxError(f"expected {want!r}, found {tok!r}", pos)
        k += 1
        return tok, pos

    def prime():
        tok, pos = take()
        if not tok.isdigit() or not isprime(int(tok)):
            raise FormationSyntaxError(f"expected a prime, found {tok!r}", pos)
        return int(tok)

    def expr() -> Formation:
        tok, pos = take()
        simple = {"empty": EMPTY, "triv": TRIV, "all": ALL, "sol": SOL, "nil": nilpotent(),
                  "qnil": Quasinilpotent()}
        if tok in simple:
            return simple[tok]
        if tok in ("pgrp", "pnil", "psol"):
            take("(")
            p = prime()
            take(")")
            return {"pgrp": pgroups, "pnil": pnilpotent, "psol": psoluble}[tok](p)
        if tok == "pigrp":
            take("(")
            ps = [prime()]
            while peek() == ",":
                take(",")
                ps.append(prime())
            take(")")
            return pigroups(ps)
        if tok == "meet":
            take("(")
            a = expr()
            take(",")
            b = expr()
            take(")")
            return meet(a, b)
        if tok == "local":
            take("(")
            per, default = {}, EMPTY
            while True:
                key, kpos = take()
                take("->")
                val = expr()
                if key == "*":
                    default = val
                elif key.isdigit() and isprime(int(key)):
                    per[int(key)] = val
                else:
                    raise FormationSyntaxError(f"expected a prime or '*', found {key!r}", kpos)
                if peek() == ",":
                    take(",")
                    continue
                take(")")
                break
            return local(per, default)
        if tok == "baer":
            take("(")
            per, names = {}, {}
            da = dn = EMPTY
            while True:
                key, kpos = take()
                if key not in ("*a", "*n") and not key.isdigit() and peek() == "(":
                    # parametrised simple group name such as PSL(2,7)
                    take("(")
                    args = [take()[0]]
                    while peek() == ",":
                        take(",")
                        args.append(take()[0])
                    take(")")
                    key = f"{key}({','.join(args)})"
                take("->")
                val = expr()
                if key == "*a":
                    da = val
                elif key == "*n":
                    dn = val
                elif key.isdigit():
                    if not isprime(int(key)):
                        raise FormationSyntaxError(f"{key} is not prime", kpos)
                    per[int(key)] = val
                elif key[0].isalpha():
                    name = canonical_name(key)
                    if name is None:
                        raise FormationSyntaxError(f"unknown simple group {key!r}", kpos)
                    names[name] = val
                else:
                    raise FormationSyntaxError(f"unexpected key {key!r}", kpos)
                if peek() == ",":
                    take(",")
                    continue
                take(")")
                break
            return baer(per, da, names, dn)
        raise FormationSyntaxError(f"unknown formation {tok!r}", pos)

    if not toks:
        raise FormationSyntaxError("empty expression", 0)
    F = expr()
    if k != len(toks):
        raise FormationSyntaxError(f"trailing input {toks[k][0]!r}", toks[k][1])
    return F

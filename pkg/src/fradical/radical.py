"""Radicals of Fitting formations, the generalized Fitting subgroup and lengths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from . import formation as fm
from .perm import PermGroup, QuotientRef
from .series import (ChiefSeries, NormalSection, centralizer_of_section, chief_series,
                     intersect_with_normal, o_sigma, product)
from .simple import CoprimeTo, Cyclic, Named, SimpleType


class ContractViolation(ValueError):
    """A precondition on the arguments does not hold."""


class InternalInvariantViolation(RuntimeError):
    """Two independent routes to the same subgroup disagree."""


@dataclass
class RadicalReport:
    formation: str
    subgroup: PermGroup
    kernel: PermGroup
    route: str
    series: ChiefSeries | None = None
    factors: list[dict] = field(default_factory=list)
    intersection_order: int | None = None
    sweep: list[dict] = field(default_factory=list)

    def order(self) -> int:
        """Order of the radical as a subgroup of ``G/K``."""
        return self.subgroup.order() // self.kernel.order()

    def as_dict(self) -> dict:
        return {
            "formation": self.formation,
            "route": self.route,
            "order": self.order(),
            "chief_types": [str(t) for t in self.series.factor_types] if self.series else None,
            "factors": self.factors,
            "intersection_order": self.intersection_order,
            "sweep": self.sweep,
        }


def _quot(Q) -> QuotientRef:
    return QuotientRef.of(Q) if isinstance(Q, PermGroup) else Q


def generalized_centralizer(s: NormalSection, F: fm.Formation, J: SimpleType | None = None,
                            seed=0) -> PermGroup:
    """Preimage over ``C = C_G(H/K)`` of the ``f(H/K)``-radical of ``G/C``."""
    if J is None:
        from .series import identify_type
        J = identify_type(s, seed)
    val = fm.baer_value(F, J)
    if isinstance(val, fm.Empty):
        raise ContractViolation(f"f({J}) is empty")
    C = centralizer_of_section(s, seed)
    if isinstance(F, fm.Quasinilpotent):
        # f(H/K)-radical of G/C is HC/C
        return product(s.top, C)
    return fradical(QuotientRef(s.ambient, C), val, seed).subgroup


def _cache(G: PermGroup) -> dict:
    return G._cache.setdefault("fradical", {})


def fradical(Q: QuotientRef | PermGroup, F: fm.Formation, seed=0) -> RadicalReport:
    """The ``F``-radical of ``G/K`` as a preimage in ``G``."""
    Q = _quot(Q)
    G, K = Q.ambient, Q.kernel
    if isinstance(F, fm.Empty):
        raise ContractViolation("the empty class has no radical")
    key = (K.gens, K.order(), F, seed)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    if isinstance(F, fm.SigmaClass):
        rep = RadicalReport(str(F), o_sigma(Q, F.sigma, seed), K, "sigma")
    elif isinstance(F, fm.Meet):
        rep = _meet_radical(Q, F, seed)
    elif isinstance(F, fm.DirectPowers):
        R = o_sigma(Q, Named(frozenset([F.J.name])), seed)
        rep = RadicalReport(str(F), fradical(QuotientRef(R, K), fm.Quasinilpotent(), seed).subgroup,
                            K, "direct-powers")
    elif fm.has_baer_function(F):
        rep = _baer_radical(Q, F, seed)
    else:
        raise ContractViolation(f"unsupported formation {F}")
    cache[key] = rep
    return rep


def _meet_radical(Q: QuotientRef, F: fm.Meet, seed) -> RadicalReport:
    # alternate the part radicals until all are stable
    G, K = Q.ambient, Q.kernel
    N = G
    stable = 0
    i = 0
    while stable < len(F.parts):
        P = F.parts[i % len(F.parts)]
        M = fradical(QuotientRef(N, K), P, seed).subgroup
        if M.order() == N.order():
            stable += 1
        else:
            stable = 1
            N = M
        i += 1
    return RadicalReport(str(F), N, K, "meet")


def _baer_radical(Q: QuotientRef, F: fm.Formation, seed) -> RadicalReport:
    G, K = Q.ambient, Q.kernel
    cs = chief_series(Q, seed=seed)
    T = G
    factors = []
    for i, (s, t) in enumerate(zip(cs.sections(), cs.factor_types)):
        val = fm.baer_value(F, t)
        row = {"factor": i + 1, "type": str(t)}
        if isinstance(val, fm.Empty):
            row["skipped"] = True
        else:
            Cf = generalized_centralizer(s, F, t, seed)
            row["generalized_centralizer_order"] = Cf.order()
            if not T.is_subgroup_of(Cf):
                T = Cf if Cf.is_subgroup_of(T) else intersect_with_normal(T, Cf, G)
        factors.append(row)
    sweep: list[dict] = []
    R = fm.ef_radical(QuotientRef(T, K), F, seed, trace=sweep)
    return RadicalReport(str(F), R, K, "baer", cs, factors, T.order(), sweep)


def fstar(Q: QuotientRef | PermGroup, seed=0) -> PermGroup:
    """Generalized Fitting subgroup ``F*(G/K)`` as a preimage."""
    return fradical(Q, fm.Quasinilpotent(), seed).subgroup


def opp_radical(Q: QuotientRef | PermGroup, p: int, seed=0) -> PermGroup:
    """``O_{p',p}(G/K)``, cross-checked against ``O_p`` of ``G/O_{p'}``."""
    Q = _quot(Q)
    G = Q.ambient
    R = fradical(Q, fm.pnilpotent(p), seed).subgroup
    Op_ = o_sigma(Q, CoprimeTo(frozenset([p])), seed)
    R2 = o_sigma(QuotientRef(G, Op_), Cyclic(frozenset([p])), seed)
    if R != R2:
        raise InternalInvariantViolation(
            f"O_(p',p) by local formation has order {R.order()}, composite route {R2.order()}")
    return R


class LengthKind(Enum):
    H = "h"
    LP = "lp"
    HSTAR = "hstar"
    LAMBDAP = "lambdap"


def parse_kind(text: str) -> tuple[LengthKind, int]:
    """``h``, ``lp:<p>``, ``hstar``, ``lambdap:<p>`` or ``lambda`` (the case p = 2)."""
    name, _, arg = text.partition(":")
    if name == "lambda" and not arg:
        return LengthKind.LAMBDAP, 2
    try:
        kind = LengthKind(name)
    except ValueError:
        raise ContractViolation(f"unknown length kind {text!r}") from None
    if kind in (LengthKind.LP, LengthKind.LAMBDAP):
        from sympy import isprime
        if not arg.isdigit() or not isprime(int(arg)):
            raise ContractViolation(f"{name} needs a prime, as in {name}:2")
        return kind, int(arg)
    if arg:
        raise ContractViolation(f"{name} takes no parameter")
    return kind, 0


def flength(Q: QuotientRef | PermGroup, kind: LengthKind | str, p: int = 0, seed=0) -> float:
    """Length of the upper series of the chosen kind; ``inf`` when it never reaches the top."""
    Q = _quot(Q)
    if isinstance(kind, str):
        kind, q = parse_kind(kind)
        p = p or q
    G, K = Q.ambient, Q.kernel
    if kind == LengthKind.H and not fm.contains_group(fm.SOL, Q, seed):
        return math.inf
    if kind == LengthKind.LP and not fm.contains_group(fm.psoluble(p), Q, seed):
        return math.inf
    count = 0
    while True:
        Qk = QuotientRef(G, K)
        if kind in (LengthKind.H, LengthKind.HSTAR) and K.order() == G.order():
            return count
        if kind == LengthKind.LP and (G.order() // K.order()) % p:
            return count
        if kind == LengthKind.H:
            nxt = fradical(Qk, fm.nilpotent(), seed).subgroup
        elif kind == LengthKind.HSTAR:
            nxt = fstar(Qk, seed)
        elif kind == LengthKind.LP:
            nxt = opp_radical(Qk, p, seed)
        else:
            R = o_sigma(Qk, fm.psoluble(p).sigma, seed)
            if R.order() == G.order():
                return count
            nxt = fstar(QuotientRef(G, R), seed)
        if nxt.order() == K.order():
            raise InternalInvariantViolation(f"{kind.value} series stalled at order {K.order()}")
        K = nxt
        count += 1

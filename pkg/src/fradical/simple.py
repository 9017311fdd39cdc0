"""Simple group types and predicates on them."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import factorint


def primes_of(n: int) -> frozenset[int]:
    return frozenset(factorint(n)) if n > 1 else frozenset()


@lru_cache(maxsize=None)
def _prime_powers(limit: int) -> list[tuple[int, int, int]]:
    out = []
    for q in range(2, limit + 1):
        f = factorint(q)
        if len(f) == 1:
            (p, e), = f.items()
            out.append((q, p, e))
    return out


def _build_table(bound: int = 10**6) -> dict[int, list[str]]:
    names: dict[int, list[str]] = {}

    def put(order: int, name: str) -> None:
        if order <= bound and name not in names.setdefault(order, []):
            names[order].append(name)

    for n in range(5, 10):
        put(math.factorial(n) // 2, f"A{n}")
    for q, _, _ in _prime_powers(130):
        if q < 4:
            continue
        o = q * (q * q - 1) // math.gcd(2, q - 1)
        if o in (60, 360):
            continue  # A5 = PSL(2,4) = PSL(2,5), A6 = PSL(2,9)
        put(o, f"PSL(2,{q})")
    # Remaining simple groups of order at most 10^6.
    for order, name in [
        (5616, "PSL(3,3)"), (6048, "PSU(3,3)"), (7920, "M11"), (25920, "PSU(4,2)"),
        (29120, "Sz(8)"), (62400, "PSU(3,4)"), (95040, "M12"), (126000, "PSU(3,5)"),
        (175560, "J1"), (372000, "PSL(3,5)"), (443520, "M22"), (604800, "J2"),
        (979200, "PSp(4,4)"), (20160, "PSL(3,4)"),
    ]:
        put(order, name)
    return names


SIMPLE_ORDERS = _build_table()
TABLE_BOUND = 10**6


def _alternating_degree(order: int) -> int | None:
    n, f = 5, 60
    while f < order:
        n += 1
        f = f * n
    return n if f == order else None


def name_for_order(order: int, has_order_15: bool | None = None) -> str:
    """Name of the nonabelian simple group of this order.

    Order 20160 is shared by A8 and PSL(3,4); only A8 has elements of
    order 15.  Beyond the table, alternating orders are still named since
    no other simple group shares them.
    """
    names = SIMPLE_ORDERS.get(order)
    if not names:
        n = _alternating_degree(order) if order > TABLE_BOUND else None
        return f"A{n}" if n else f"unknown-simple({order})"
    if len(names) > 1:
        if has_order_15 is None:
            raise ValueError(f"order {order} is ambiguous; need the order-15 test")
        return "A8" if has_order_15 else "PSL(3,4)"
    return names[0]


KNOWN_NAMES = frozenset(n for names in SIMPLE_ORDERS.values() for n in names)
ALIASES = {"PSL(2,4)": "A5", "PSL(2,5)": "A5", "PSL(2,9)": "A6", "PSL(3,2)": "PSL(2,7)", "PSL(4,2)": "A8",
           "PSp(4,3)": "PSU(4,2)"}


def canonical_name(name: str) -> str | None:
    """The name chief series report for this simple group, or None if unrecognised."""
    name = ALIASES.get(name, name)
    if name in KNOWN_NAMES:
        return name
    m = re.fullmatch(r"A(\d+)", name)
    return name if m and int(m.group(1)) >= 5 else None


def is_simple_order(order: int) -> bool:
    """True for orders of known nonabelian simple groups (table or alternating)."""
    return order in SIMPLE_ORDERS or (order > TABLE_BOUND and _alternating_degree(order) is not None)


@dataclass(frozen=True)
class SimpleType:
    """Isomorphism type of a characteristically simple group ``J^width``."""

    name: str
    simple_order: int
    width: int = 1
    pi: frozenset[int] = field(default=frozenset())

    def __post_init__(self):
        if not self.pi:
            object.__setattr__(self, "pi", primes_of(self.simple_order))
        if self.width < 1:
            raise ValueError("width must be positive")

    @classmethod
    def cyclic(cls, p: int, width: int = 1) -> "SimpleType":
        return cls(f"C{p}", p, width, frozenset([p]))

    @classmethod
    def nonabelian(cls, name: str, order: int, width: int = 1) -> "SimpleType":
        return cls(name, order, width)

    @property
    def abelian(self) -> bool:
        return len(self.pi) == 1 and self.simple_order in self.pi

    @property
    def prime(self) -> int | None:
        return self.simple_order if self.abelian else None

    @property
    def simple(self) -> "SimpleType":
        """The simple group itself (width 1)."""
        return SimpleType(self.name, self.simple_order, 1, self.pi)

    def same_simple(self, other: "SimpleType") -> bool:
        return self.name == other.name and self.simple_order == other.simple_order

    def section_order(self) -> int:
        return self.simple_order ** self.width

    def __str__(self) -> str:
        return self.name if self.width == 1 else f"{self.name}^{self.width}"


class TypePredicate:
    """Decidable predicate on simple types; combine with ``&``, ``|``, ``~``."""

    def __call__(self, t: SimpleType) -> bool:
        raise NotImplementedError

    def __and__(self, other):
        return AndPred((self, other))

    def __or__(self, other):
        return OrPred((self, other))

    def __invert__(self):
        return NotPred(self)

    @property
    def is_none(self) -> bool:
        return False

    @property
    def is_all(self) -> bool:
        return False


@dataclass(frozen=True)
class AllTypes(TypePredicate):
    def __call__(self, t):
        return True

    @property
    def is_all(self):
        return True

    def __str__(self):
        return "all"


@dataclass(frozen=True)
class NoTypes(TypePredicate):
    def __call__(self, t):
        return False

    @property
    def is_none(self):
        return True

    def __str__(self):
        return "none"


@dataclass(frozen=True)
class Cyclic(TypePredicate):
    """Cyclic of prime order; restricted to ``primes`` when given."""

    primes: frozenset[int] | None = None

    def __call__(self, t):
        return t.abelian and (self.primes is None or t.simple_order in self.primes)

    def __str__(self):
        return "cyclic" if self.primes is None else f"cyclic{sorted(self.primes)}"


@dataclass(frozen=True)
class PiSubset(TypePredicate):
    """Types whose order involves only the given primes (pi-groups)."""

    primes: frozenset[int]

    def __call__(self, t):
        return t.pi <= self.primes

    def __str__(self):
        return f"pi{sorted(self.primes)}"


@dataclass(frozen=True)
class CoprimeTo(TypePredicate):
    primes: frozenset[int]

    def __call__(self, t):
        return not (t.pi & self.primes)

    def __str__(self):
        return f"coprime{sorted(self.primes)}"


@dataclass(frozen=True)
class Named(TypePredicate):
    """Finite list of simple types, matched by name."""

    names: frozenset[str]

    def __call__(self, t):
        return t.name in self.names

    def __str__(self):
        return "{" + ",".join(sorted(self.names)) + "}"


@dataclass(frozen=True)
class AndPred(TypePredicate):
    parts: tuple

    def __call__(self, t):
        return all(q(t) for q in self.parts)

    @property
    def is_none(self):
        return any(q.is_none for q in self.parts)

    @property
    def is_all(self):
        return all(q.is_all for q in self.parts)

    def __str__(self):
        return "(" + " & ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class OrPred(TypePredicate):
    parts: tuple

    def __call__(self, t):
        return any(q(t) for q in self.parts)

    @property
    def is_none(self):
        return all(q.is_none for q in self.parts)

    @property
    def is_all(self):
        return any(q.is_all for q in self.parts)

    def __str__(self):
        return "(" + " | ".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class NotPred(TypePredicate):
    inner: TypePredicate

    def __call__(self, t):
        return not self.inner(t)

    @property
    def is_none(self):
        return self.inner.is_all

    @property
    def is_all(self):
        return self.inner.is_none

    def __str__(self):
        return f"~{self.inner}"


def p_soluble(p: int) -> TypePredicate:
    """Types allowed in p-soluble groups: cyclic, or order prime to p."""
    return OrPred((Cyclic(), CoprimeTo(frozenset([p]))))


def singleton(t: SimpleType) -> TypePredicate:
    if t.abelian:
        return Cyclic(frozenset([t.simple_order]))
    return Named(frozenset([t.name]))

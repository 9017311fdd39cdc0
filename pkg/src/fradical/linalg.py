"""Linear algebra over prime fields and MeatAxe-style module splitting.

Vectors are lists of ints in ``0..p-1``; matrices are lists of rows and act
on row vectors from the right (``v -> v M``).
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from sympy import GF, Poly, symbols
from sympy.polys.matrices import DomainMatrix

Matrix = list[list[int]]

_X = symbols("x")


class Subspace:
    """Row space kept in reduced echelon form."""

    def __init__(self, p: int, dim: int):
        self.p = p
        self.dim = dim
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence[int]) -> list[int]:
        p = self.p
        v = [x % p for x in v]
        for r, c in zip(self.rows, self.pivots):
            a = v[c]
            if a:
                v = [(x - a * y) % p for x, y in zip(v, r)]
        return v

    def add(self, v: Sequence[int]) -> bool:
        """Insert ``v``; return True if it enlarged the space."""
        v = self.reduce(v)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        p = self.p
        s = pow(v[c], -1, p)
        v = [(x * s) % p for x in v]
        for k, r in enumerate(self.rows):
            a = r[c]
            if a:
                self.rows[k] = [(x - a * y) % p for x, y in zip(r, v)]
        self.rows.append(v)
        self.pivots.append(c)
        return True

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))


def vec_mat(v: Sequence[int], M: Matrix, p: int) -> list[int]:
    d = len(M[0]) if M else 0
    out = [0] * d
    for a, row in zip(v, M):
        if a:
            for j, x in enumerate(row):
                out[j] += a * x
    return [x % p for x in out]


def mat_mul(A: Matrix, B: Matrix, p: int) -> Matrix:
    return [vec_mat(r, B, p) for r in A]


def transpose(A: Matrix) -> Matrix:
    return [list(c) for c in zip(*A)]


def identity_matrix(d: int) -> Matrix:
    return [[int(i == j) for j in range(d)] for i in range(d)]


def mat_lincomb(terms: Sequence[tuple[int, Matrix]], p: int, d: int) -> Matrix:
    out = [[0] * d for _ in range(d)]
    for c, M in terms:
        for i in range(d):
            oi, mi = out[i], M[i]
            for j in range(d):
                oi[j] += c * mi[j]
    return [[x % p for x in r] for r in out]


def spin(vectors: Sequence[Sequence[int]], mats: Sequence[Matrix], p: int, d: int) -> Subspace:
    """Smallest subspace containing ``vectors`` and invariant under ``mats``."""
    W = Subspace(p, d)
    todo = []
    for v in vectors:
        if W.add(v):
            todo.append(list(v))
    while todo and len(W) < d:
        v = todo.pop()
        for M in mats:
            w = vec_mat(v, M, p)
            if W.add(w):
                todo.append(w)
    return W


def left_nullspace(M: Matrix, p: int) -> list[list[int]]:
    """Basis of ``{v : v M = 0}``."""
    d = len(M)
    # Row-reduce [M | I]; rows whose M part vanishes give the null vectors.
    aug = [list(M[i]) + [int(i == j) for j in range(d)] for i in range(d)]
    ncols = len(M[0]) if M else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, d) if aug[i][c] % p), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        s = pow(aug[r][c], -1, p)
        aug[r] = [(x * s) % p for x in aug[r]]
        for i in range(d):
            if i != r and aug[i][c] % p:
                a = aug[i][c]
                aug[i] = [(x - a * y) % p for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[ncols:] for row in aug[r:]]


def charpoly(M: Matrix, p: int) -> list[int]:
    F = GF(p)
    dm = DomainMatrix([[F(x) for x in row] for row in M], (len(M), len(M)), F)
    return [int(c) % p for c in dm.charpoly()]


def irreducible_factors(coeffs: Sequence[int], p: int) -> list[list[int]]:
    """Distinct monic irreducible factors over GF(p), lowest degree first."""
    _, facs = Poly(list(coeffs), _X, modulus=p).factor_list()
    out = []
    for f, _ in facs:
        c = [int(x) % p for x in f.all_coeffs()]
        s = pow(c[0], -1, p)
        out.append([(x * s) % p for x in c])
    out.sort(key=len)
    return out


def poly_at_matrix(coeffs: Sequence[int], M: Matrix, p: int) -> Matrix:
    """Horner evaluation; ``coeffs`` from the leading term down."""
    d = len(M)
    R = [[0] * d for _ in range(d)]
    for c in coeffs:
        R = mat_mul(R, M, p)
        for i in range(d):
            R[i][i] = (R[i][i] + c) % p
    return R


def complement_annihilator(W: Subspace, d: int, p: int) -> list[list[int]]:
    """Basis of ``{u : u . w = 0 for w in W}``."""
    return left_nullspace(transpose(W.rows), p) if W.rows else identity_matrix(d)


def split_module(mats: Sequence[Matrix], p: int, d: int, rng: random.Random,
                 budget: int = 40, exhaustive_bound: int = 10_000):
    """Find a proper nonzero invariant subspace or certify irreducibility.

    Returns ``("reducible", basis)``, ``("irreducible", None)`` or
    ``("undecided", None)``.  Uses random algebra elements and the
    Holt-Rees test; falls back to spinning every vector when ``p**d`` is
    at most ``exhaustive_bound``.
    """
    if d == 1:
        return "irreducible", None
    mats = [M for M in mats if M != identity_matrix(d)]
    if not mats:
        return "reducible", [[int(j == 0) for j in range(d)]]
    tmats = [transpose(M) for M in mats]
    pool = list(mats)
    for _ in range(budget):
        for _ in range(2):
            a, b = rng.choice(pool), rng.choice(pool)
            pool.append(mat_mul(a, b, p))
        terms = [(rng.randrange(1, p) if p > 2 else 1, M) for M in rng.sample(pool, min(len(pool), 3))]
        terms.append((rng.randrange(p), identity_matrix(d)))
        theta0 = mat_lincomb(terms, p, d)
        for f in irreducible_factors(charpoly(theta0, p), p):
            theta = poly_at_matrix(f, theta0, p)
            null = left_nullspace(theta, p)
            if not null:
                continue
            W = spin([null[0]], mats, p, d)
            if len(W) < d:
                return "reducible", W.rows
            if len(null) == len(f) - 1:
                tnull = left_nullspace(transpose(theta), p)
                W2 = spin([tnull[0]], tmats, p, d)
                if len(W2) < d:
                    return "reducible", complement_annihilator(W2, d, p)
                return "irreducible", None
    if p ** d <= exhaustive_bound:
        return exhaustive_split(mats, p, d)
    return "undecided", None


def exhaustive_split(mats: Sequence[Matrix], p: int, d: int):
    """Spin every normalised nonzero vector."""
    for v in itertools.product(range(p), repeat=d):
        nz = next((x for x in v if x), 0)
        if nz != 1:
            continue
        W = spin([list(v)], mats, p, d)
        if len(W) < d:
            return "reducible", W.rows
    return "irreducible", None

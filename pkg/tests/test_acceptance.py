"""Acceptance gate.

Each test checks one criterion at its stated tolerance, prints a single
PASS/FAIL line and records it for the end-of-run summary.
"""
import math
import random
import time

from conftest import ACCEPTANCE, reshuffle
from fradical import catalog, formation as fm, oracle, radical as rd
from fradical.cli import load_suite
from fradical.perm import PermGroup, mul
from fradical.series import (NormalSection, canonical_coset, centralizer_of_section, chief_series,
                             intersect_with_normal, o_sigma)
from fradical.simple import CoprimeTo, Cyclic, p_soluble

SUITE, FORMATIONS = load_suite(None)
GROUPS = [(name, Q.ambient) for name, Q in SUITE]


def report(n: int, title: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"{status} criterion {n}: {title}"
    if failures:
        line += f" ({len(failures)} failing, first: {failures[0]})"
    ACCEPTANCE[n] = line
    print(line)
    assert not failures, line


def meet_all(G: PermGroup, subs) -> PermGroup:
    X = G
    for C in subs:
        X = intersect_with_normal(X, C, G)
    return X


# -- 1 ------------------------------------------------------------------------

def test_criterion_1_oracle_equivalence():
    assert len(GROUPS) >= 30 and len(FORMATIONS) == 13
    assert all(G.order() <= 5000 for _, G in GROUPS)
    failures = []
    start = time.perf_counter()
    for name, G in GROUPS:
        L = oracle.normal_subgroups(G)
        for f in FORMATIONS:
            F = fm.parse(f)
            if rd.fradical(G, F).subgroup != oracle.radical_oracle(G, F, L):
                failures.append((name, f))
    elapsed = time.perf_counter() - start
    if elapsed >= 600:
        failures.append(f"took {elapsed:.0f}s")
    report(1, f"radicals equal the oracle on {len(GROUPS)} groups x {len(FORMATIONS)} formations "
              f"in {elapsed:.0f}s", failures)


# -- 2 ------------------------------------------------------------------------

def test_criterion_2_sigma_radicals():
    sigmas = {"Cyclic{2}": Cyclic(frozenset([2])), "Cyclic": Cyclic(), "CoprimeTo{2}": CoprimeTo(frozenset([2])),
              "p_soluble(2)": p_soluble(2)}
    failures = []
    start = time.perf_counter()
    # fresh group objects, so nothing cached by earlier criteria is reused
    for name, Q in load_suite(None)[0]:
        G = Q.ambient
        for label, sigma in sigmas.items():
            if o_sigma(G, sigma) != oracle.sigma_radical_oracle(G, sigma):
                failures.append((name, label))
    elapsed = time.perf_counter() - start
    if elapsed >= 120:
        failures.append(f"took {elapsed:.0f}s")
    report(2, f"O_sigma equals the oracle for {len(sigmas)} type classes on {len(GROUPS)} groups "
              f"in {elapsed:.0f}s", failures)


# -- 3 ------------------------------------------------------------------------

def test_criterion_3_intersection_identities():
    nil, pnil2, sol, qnil = (fm.parse(f) for f in ("nil", "pnil(2)", "sol", "qnil"))
    failures = []
    for name, G in GROUPS:
        L = oracle.normal_subgroups(G)
        cs = chief_series(G)
        secs = list(zip(cs.sections(), cs.factor_types))
        C = [centralizer_of_section(s) for s, _ in secs]
        fit = meet_all(G, C)
        opp = meet_all(G, [c for c, (s, _) in zip(C, secs) if (s.top.order() // s.bottom.order()) % 2 == 0])
        solrad = meet_all(G, [c for c, (_, t) in zip(C, secs) if not t.abelian])
        star = meet_all(G, [fm.innerizer(s) for s, _ in secs])
        checks = [("F", fit, oracle.radical_oracle(G, nil, L), rd.fradical(G, nil).subgroup),
                  ("O_2',2", opp, oracle.radical_oracle(G, pnil2, L), rd.opp_radical(G, 2)),
                  ("soluble radical", solrad, oracle.radical_oracle(G, sol, L), rd.fradical(G, sol).subgroup),
                  ("F*", star, oracle.radical_oracle(G, qnil, L), rd.fstar(G))]
        for label, got, want, engine in checks:
            if not (got == want == engine):
                failures.append((name, label))
    report(3, f"centralizer and innerizer intersections give F, O_2',2, R and F* on {len(GROUPS)} groups",
           failures)


# -- 4 ------------------------------------------------------------------------

class CosetImage:
    """``G/N`` acting on the right cosets of ``N``, built by enumeration."""

    def __init__(self, G: PermGroup, N: PermGroup):
        self.G, self.N = G, N
        self.reps = [G.identity]
        self.index = {canonical_coset(G.identity, N): 0}
        k = 0
        while k < len(self.reps):
            r = self.reps[k]
            k += 1
            for s in G.gens:
                x = mul(r, s)
                c = canonical_coset(x, N)
                if c not in self.index:
                    self.index[c] = len(self.reps)
                    self.reps.append(x)
        self.group = PermGroup(len(self.reps), [self.image(g) for g in G.gens])

    def image(self, g) -> tuple:
        return tuple(self.index[canonical_coset(mul(r, g), self.N)] for r in self.reps)

    def sub_image(self, H: PermGroup) -> PermGroup:
        return PermGroup(len(self.reps), [self.image(h) for h in H.gens])

    def preimage(self, X: PermGroup) -> PermGroup:
        # coset 0 is N itself, so x sends it to the coset of any lift
        return PermGroup(self.G.degree, list(self.N.gens) + [self.reps[x[0]] for x in X.gens])


def _quotient_instances(count: int, rng: random.Random):
    """Instances where the generalized centralizer differs from the plain one."""
    pool = ["sym(4)", "sym(5)", "sym(6)", "wr(cyclic(2),sym(3))", "prod(sym(3),sym(3))", "prod(alt(5),cyclic(6))",
            "sl2(5)", "affine(1,7)", "affine(2,3)", "wr(sym(3),cyclic(2))", "prod(q8,cyclic(3))",
            "wr(cyclic(2),alt(4))", "wr(alt(4),cyclic(2))", "prod(sym(4),cyclic(2))", "dihedral(6)"]
    forms = ["nil", "qnil", "pnil(2)", "pnil(3)", "local(*->nil)", "baer(*a->triv,*n->qnil)",
             "local(2->pgrp(2),*->sol)"]
    out = []
    while len(out) < count:
        G = catalog.build(rng.choice(pool))
        terms = chief_series(G).terms
        i = rng.randrange(len(terms) - 1)
        j = rng.randrange(i, len(terms) - 1)
        if G.order() // terms[i].order() > 720:
            continue
        F = fm.parse(rng.choice(forms))
        s = NormalSection(G, terms[j], terms[j + 1])
        if rd.generalized_centralizer(s, F) == centralizer_of_section(s):
            continue
        out.append((G, terms[i], terms[j], terms[j + 1], F))
    return out


def test_criterion_4_quotient_compatibility():
    failures = []
    instances = _quotient_instances(20, random.Random(4))
    for G, N, A, B, F in instances:
        down = rd.generalized_centralizer(NormalSection(G, A, B), F)
        Q = CosetImage(G, N)
        assert Q.group.order() == G.order() // N.order()
        Gb = Q.group
        up = rd.generalized_centralizer(NormalSection(Gb, Q.sub_image(A), Q.sub_image(B)), F)
        if Q.preimage(up) != down or not N.is_subgroup_of(down):
            failures.append((G.order(), N.order(), A.order(), B.order(), str(F)))
    report(4, f"generalized centralizers commute with passing to G/N on {len(instances)} instances", failures)


# -- 5 ------------------------------------------------------------------------

def test_criterion_5_chief_length_bound():
    groups = list(catalog.transitive_catalog(50).items()) + GROUPS
    failures = []
    for name, G in groups:
        if G.degree >= 2 and len(chief_series(G)) > 2 * G.degree - 3:
            failures.append(name)
    report(5, f"chief length at most 2n-3 on {len(groups)} groups", failures)


# -- 6 ------------------------------------------------------------------------

TABLE = [("sym(4)", "h", 3), ("alt(5)", "h", math.inf), ("sym(4)", "lp:2", 2), ("sym(3)", "lp:2", 1),
         ("sym(4)", "lambda", 0), ("sym(5)", "lambda", 1), ("alt(5)", "hstar", 1), ("sym(5)", "hstar", 2)]


def _oracle_length(G: PermGroup, kind: str) -> float:
    name, _, p = kind.partition(":")
    if name == "lambda":
        return oracle.length_oracle(G, "lambdap", 2)
    return oracle.length_oracle(G, name, int(p) if p else 2)


def test_criterion_6_length_table():
    failures = []
    for expr, kind, want in TABLE:
        G = catalog.build(expr)
        got = rd.flength(G, kind)
        if not (got == want == _oracle_length(G, kind)):
            failures.append((expr, kind, got))
    for name, G in GROUPS:
        lam = rd.flength(G, "lambda")
        if not (lam == rd.flength(G, "lambdap:2") == oracle.length_oracle(G, "lambdap", 2)):
            failures.append((name, "lambda_2", lam))
    report(6, f"{len(TABLE)} tabulated lengths and lambda_2 = lambda on {len(GROUPS)} groups", failures)


# -- 7 ------------------------------------------------------------------------

DETERMINISM = ["sym(4)", "wr(cyclic(2),sym(3))", "prod(sym(3),sym(3))", "prod(alt(5),cyclic(6))", "sl2(5)",
               "affine(2,3)", "wr(sym(3),cyclic(2))", "prod(q8,cyclic(3))", "elemab(2,3)", "wr(cyclic(2),alt(4))"]


def test_criterion_7_determinism():
    failures = []
    for expr in DETERMINISM:
        G = catalog.build(expr)
        for f in FORMATIONS:
            F = fm.parse(f)
            want = rd.fradical(G, F).subgroup
            for seed in range(1, 11):
                H = reshuffle(G, 100 * seed)
                if rd.fradical(H, F, seed=seed).subgroup != want:
                    failures.append((expr, f, seed))
    report(7, f"10 reruns with reshuffled generators and fresh seeds on {len(DETERMINISM)} groups x "
              f"{len(FORMATIONS)} formations", failures)


# -- 8 ------------------------------------------------------------------------

LIMIT = 5.0
RATIO_BOUND = 4.0
RATIO_FLOOR = 0.1
JOBS = [("nil", lambda G: rd.fradical(G, fm.nilpotent())), ("sol", lambda G: rd.fradical(G, fm.SOL)),
        ("qnil", lambda G: rd.fstar(G)), ("h", lambda G: rd.flength(G, "h")),
        ("lp:2", lambda G: rd.flength(G, "lp:2")), ("hstar", lambda G: rd.flength(G, "hstar")),
        ("lambda", lambda G: rd.flength(G, "lambda"))]


def _timed(make, job) -> float:
    G = make()
    t = time.perf_counter()
    job(G)
    return time.perf_counter() - t


def test_criterion_8_performance():
    failures = []
    family_times = {"sym": [], "alt": []}
    worst = (0.0, "")
    for n in range(2, 31):
        for fam, make in (("sym", lambda n=n: catalog.sym(n)), ("alt", lambda n=n: catalog.alt(n))):
            total = 0.0
            for label, job in JOBS:
                dt = _timed(make, job)
                total += dt
                worst = max(worst, (dt, f"{fam}({n}) {label}"))
                if dt >= LIMIT:
                    failures.append((f"{fam}({n})", label, round(dt, 2)))
            family_times[fam].append(total)
    for name in catalog.transitive_catalog(50):
        for label, job in JOBS:
            dt = _timed(lambda: catalog.build(name), job)
            worst = max(worst, (dt, f"{name} {label}"))
            if dt >= LIMIT:
                failures.append((name, label, round(dt, 2)))
    ratio = 0.0
    for fam, ts in family_times.items():
        for a, b in zip(ts, ts[1:]):
            r = max(b, RATIO_FLOOR) / max(a, RATIO_FLOOR)
            ratio = max(ratio, r)
    if ratio > RATIO_BOUND:
        failures.append(f"consecutive time ratio {ratio:.2f}")
    report(8, f"every run under {LIMIT:.0f}s (slowest {worst[0]:.2f}s: {worst[1]}), "
              f"max consecutive ratio {ratio:.2f}", failures)

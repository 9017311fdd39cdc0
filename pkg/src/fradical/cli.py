"""Command-line interface.

Every computation prints one JSON record per line with the keys
``command``, ``input``, ``result``, ``timings`` and ``seed``.  Exit codes:
0 success, 1 usage error, 2 refusal (a size bound was hit), 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from importlib import resources

import yaml

from . import catalog, formation as fm, oracle, radical as rd
from .loader import SpecError, load_mapping, parse_group, parse_kernel
from .perm import COUNTERS, PermGroup, QuotientRef, format_cycles
from .series import SectionTooLarge, SeriesRefinementExhausted, chief_series

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_INTERNAL = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def group_record(G: PermGroup) -> dict:
    return {"degree": G.degree, "order": G.order(),
            "generators": [format_cycles(g) for g in G.small_gens() if g != G.identity]}


def _length_value(x: float):
    return "infinity" if x == math.inf else int(x)


def _emit(out, command: str, inp: dict, result, started: float, seed: int) -> None:
    rec = {"command": command, "input": inp, "result": result,
           "timings": {"wall_seconds": round(time.perf_counter() - started, 6)}, "seed": seed}
    out.write(json.dumps(rec) + "\n")
    out.flush()


def _formation(text: str) -> fm.Formation:
    try:
        return fm.parse(text)
    except fm.FormationSyntaxError as e:
        raise UsageError(f"formation: {e}") from None


def _group(args) -> QuotientRef:
    try:
        Q = parse_group(args.group)
        if getattr(args, "mod", None):
            Q = QuotientRef(Q.ambient, parse_kernel(args.mod, Q.ambient))
    except (SpecError, OSError) as e:
        raise UsageError(f"group: {e}") from None
    return Q


def cmd_radical(args, out) -> int:
    t = time.perf_counter()
    Q = _group(args)
    F = _formation(args.formation)
    rep = rd.fradical(Q, F, args.seed)
    res = {"subgroup": group_record(rep.subgroup), "quotient_order": rep.order()}
    if args.report:
        res["report"] = rep.as_dict()
    _emit(out, "radical", {"group": args.group, "formation": str(F), "mod": args.mod}, res, t, args.seed)
    return EXIT_OK


def cmd_fstar(args, out) -> int:
    t = time.perf_counter()
    Q = _group(args)
    R = rd.fstar(Q, args.seed)
    _emit(out, "fstar", {"group": args.group}, {"subgroup": group_record(R)}, t, args.seed)
    return EXIT_OK


def cmd_length(args, out) -> int:
    t = time.perf_counter()
    Q = _group(args)
    try:
        kind, p = rd.parse_kind(args.kind)
    except rd.ContractViolation as e:
        raise UsageError(str(e)) from None
    val = rd.flength(Q, kind, p, args.seed)
    _emit(out, "length", {"group": args.group, "kind": args.kind}, {"length": _length_value(val)}, t, args.seed)
    return EXIT_OK


def cmd_chief(args, out) -> int:
    t = time.perf_counter()
    Q = _group(args)
    cs = chief_series(Q, seed=args.seed)
    res = {"terms": [group_record(T) for T in cs.terms],
           "factor_types": [str(x) for x in cs.factor_types], "length": len(cs.factor_types)}
    _emit(out, "chief-series", {"group": args.group}, res, t, args.seed)
    return EXIT_OK


def load_suite(path: str | None) -> tuple[list[tuple[str, QuotientRef]], list[str]]:
    if path is None:
        text = resources.files("fradical").joinpath("data/suite.yaml").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = yaml.safe_load(text)
    if not isinstance(data, dict) or "groups" not in data:
        raise SpecError("suite needs a 'groups' list")
    groups = []
    for g in data["groups"]:
        if isinstance(g, str):
            groups.append((g, QuotientRef.of(catalog.build(g))))
        else:
            groups.append((str(g.get("name", g.get("catalog", "group"))), load_mapping(g)))
    return groups, list(data.get("formations", ["nil", "sol", "qnil"]))


def cmd_check(args, out) -> int:
    try:
        groups, forms = load_suite(args.suite)
    except (SpecError, OSError, catalog.CatalogError) as e:
        raise UsageError(f"suite: {e}") from None
    formations = [(f, _formation(f)) for f in forms]
    bound = args.max_order if args.max_order is not None else oracle.oracle_bound()
    failures = 0
    for name, Q in groups:
        G, K = Q.ambient, Q.kernel
        t = time.perf_counter()
        if G.order() > bound:
            _emit(out, "check", {"group": name}, {"status": "skipped", "reason": f"order {G.order()} > {bound}"},
                  t, args.seed)
            continue
        lattice = oracle.normal_subgroups(G, bound)
        kernel = None if K.is_trivial() else K
        for text, F in formations:
            t = time.perf_counter()
            got = rd.fradical(Q, F, args.seed).subgroup
            want = oracle.radical_oracle(G, F, lattice, kernel)
            ok = got == want
            failures += not ok
            _emit(out, "check", {"group": name, "formation": text},
                  {"status": "pass" if ok else "fail", "engine_order": got.order(), "oracle_order": want.order()},
                  t, args.seed)
    return EXIT_OK if failures == 0 else EXIT_INTERNAL


BENCH_FAMILIES = {"sym": catalog.sym, "alt": catalog.alt, "cyclic": catalog.cyclic,
                  "dihedral": catalog.dihedral, "psl2": catalog.psl2}


def _range(text: str) -> range:
    a, sep, b = text.partition("..")
    if not sep or not a.strip().isdigit() or not b.strip().isdigit():
        raise UsageError(f"range must look like A..B, got {text!r}")
    return range(int(a), int(b) + 1)


def cmd_bench(args, out) -> int:
    if args.family not in BENCH_FAMILIES:
        raise UsageError(f"unknown bench family {args.family!r}; choose from {sorted(BENCH_FAMILIES)}")
    F = _formation(args.formation)
    rows = []
    for n in _range(args.range):
        try:
            G = BENCH_FAMILIES[args.family](n)
        except catalog.CatalogError:
            continue
        before = dict(COUNTERS)
        t = time.perf_counter()
        R = rd.fradical(G, F, args.seed).subgroup
        wall = time.perf_counter() - t
        counters = {k: COUNTERS[k] - before[k] for k in COUNTERS}
        rows.append((n, wall))
        _emit(out, "bench", {"family": args.family, "n": n, "formation": str(F)},
              {"degree": G.degree, "group_order": G.order(), "radical_order": R.order(),
               "wall_seconds": round(wall, 6), "counters": counters}, t, args.seed)
    ratios = [b[1] / max(a[1], 1e-4) for a, b in zip(rows, rows[1:])]
    summary = {"points": len(rows), "max_consecutive_time_ratio": round(max(ratios), 3) if ratios else None}
    _emit(out, "bench-summary", {"family": args.family, "range": args.range}, summary, time.perf_counter(), args.seed)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fradical", description="Radicals of Fitting formations in permutation groups.")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for all randomized steps")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_group(sp, mod=True):
        sp.add_argument("--group", required=True,
                        help="catalog expression, inline 'DEG:(cycles);(cycles)' or a YAML/JSON file")
        if mod:
            sp.add_argument("--mod", help="normal subgroup to factor out (same forms as --group)")

    r = sub.add_parser("radical", help="F-radical of G (or G/K)")
    with_group(r)
    r.add_argument("--formation", required=True)
    r.add_argument("--report", action="store_true", help="include the per-factor audit trail")
    r.set_defaults(func=cmd_radical)

    ln = sub.add_parser("length", help="h, lp:<p>, hstar, lambdap:<p> or lambda")
    with_group(ln)
    ln.add_argument("--kind", required=True)
    ln.set_defaults(func=cmd_length)

    c = sub.add_parser("chief-series", help="a chief series with factor types")
    with_group(c)
    c.set_defaults(func=cmd_chief)

    f = sub.add_parser("fstar", help="generalized Fitting subgroup")
    with_group(f)
    f.set_defaults(func=cmd_fstar)

    ch = sub.add_parser("check", help="compare the engine with the brute-force oracle on a suite")
    ch.add_argument("--suite", help="suite YAML (default: the bundled suite)")
    ch.add_argument("--max-order", type=int, help="skip groups above this order")
    ch.set_defaults(func=cmd_check)

    b = sub.add_parser("bench", help="wall time and work counters across a family")
    b.add_argument("--family", required=True)
    b.add_argument("--range", required=True, help="A..B")
    b.add_argument("--formation", required=True)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as e:
        print(f"fradical: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (oracle.OracleRefusal, SectionTooLarge, SeriesRefinementExhausted) as e:
        print(f"fradical: refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except (rd.InternalInvariantViolation, oracle.NotFitting) as e:
        print(f"fradical: internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

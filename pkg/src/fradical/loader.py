"""Group specifications: catalog expressions, inline generators and YAML/JSON files.

A file holds a mapping with ``degree``, ``generators`` (1-indexed cycle
strings) and an optional ``kernel`` (generator strings of a normal
subgroup).  A catalog expression may also be given under ``catalog``.
"""

from __future__ import annotations

import os

import yaml

from . import catalog
from .perm import PermError, PermGroup, QuotientRef, parse_cycles


class SpecError(ValueError):
    pass


def _cycles(strings, degree: int, where: str, marks=None) -> list:
    out = []
    for i, s in enumerate(strings):
        if not isinstance(s, str):
            raise SpecError(f"{where}[{i}]: expected a cycle string")
        try:
            out.append(parse_cycles(s, degree))
        except PermError as e:
            line = f"line {marks[i] + 1}, " if marks and i < len(marks) else ""
            raise SpecError(f"{where}[{i}]: {line}{e}") from None
    return out


def _item_lines(text: str, key: str) -> list[int]:
    """Source lines of the list items under ``key`` (best effort)."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return []
    if not isinstance(node, yaml.MappingNode):
        return []
    for k, v in node.value:
        if k.value == key and isinstance(v, yaml.SequenceNode):
            return [item.start_mark.line for item in v.value]
    return []


def load_mapping(data, text: str = "") -> QuotientRef:
    if not isinstance(data, dict):
        raise SpecError("group spec must be a mapping")
    if "catalog" in data:
        G = catalog.build(str(data["catalog"]))
    else:
        if "degree" not in data or "generators" not in data:
            raise SpecError("group spec needs 'degree' and 'generators' (or 'catalog')")
        n = data["degree"]
        if not isinstance(n, int) or n < 1:
            raise SpecError("'degree' must be a positive integer")
        G = PermGroup(n, _cycles(data["generators"], n, "generators", _item_lines(text, "generators")))
    K = PermGroup.trivial(G.degree)
    if data.get("kernel"):
        K = PermGroup(G.degree, _cycles(data["kernel"], G.degree, "kernel", _item_lines(text, "kernel")))
    return _quotient(G, K)


def _quotient(G: PermGroup, K: PermGroup) -> QuotientRef:
    try:
        return QuotientRef(G, K)
    except PermError as e:
        raise SpecError(f"kernel rejected: {e}") from None


def load_file(path: str) -> QuotientRef:
    with open(path) as fh:
        text = fh.read()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}: " if mark else ""
        raise SpecError(f"{path}: {where}{getattr(e, 'problem', e)}") from None
    return load_mapping(data, text)


def parse_inline(text: str, degree: int | None = None) -> PermGroup:
    """``"4:(1 2);(1 2 3 4)"``, or just generators when the degree is known."""
    head, sep, rest = text.partition(":")
    if sep and head.strip().isdigit():
        degree, text = int(head), rest
    if degree is None:
        raise SpecError("inline generators need a degree prefix such as '4:'")
    gens = [s for s in text.split(";") if s.strip()]
    return PermGroup(degree, _cycles(gens, degree, "generators"))


def parse_group(spec: str) -> QuotientRef:
    """A file path, inline generators or a catalog expression."""
    if os.path.isfile(spec):
        return load_file(spec)
    if ":" in spec or spec.lstrip().startswith("("):
        return QuotientRef.of(parse_inline(spec))
    try:
        return QuotientRef.of(catalog.build(spec))
    except catalog.CatalogError as e:
        raise SpecError(str(e)) from None


def parse_kernel(spec: str, G: PermGroup) -> PermGroup:
    if os.path.isfile(spec) or not (":" in spec or spec.lstrip().startswith("(")):
        K = parse_group(spec).ambient
    else:
        K = parse_inline(spec, G.degree)
    if K.degree != G.degree:
        raise SpecError("kernel degree differs from the group degree")
    return _quotient(G, K).kernel

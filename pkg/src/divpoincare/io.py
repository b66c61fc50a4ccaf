"""JSON input parsing and deterministic output.

Rationals may be written as JSON numbers or as "p/q" strings; output always
uses strings for coefficients so arbitrary precision survives a round trip.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .chain import (BNLocusDecomposition, ChainError, ChainOfLoops, MetricDivisor,
                    SubgroupTorusCoset, SymbolicLength)
from .graphs import GraphError, MultiGraph


class ParseError(ValueError):
    """Input is not well-formed JSON of the expected shape."""


class ValidationError(ValueError):
    """Input is well-formed but describes an invalid object."""


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _field(data, key, kind=None):
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"field {key!r} should be {kind.__name__}")
    return value


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"expected an integer, got {x!r}")
    try:
        return int(x)
    except ValueError as exc:
        raise ParseError(f"expected an integer, got {x!r}") from exc


def _rational(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ValidationError(f"malformed rational {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed rational {x!r}") from exc


# ---------------------------------------------------------------------------
# Graphs


def parse_graph(data) -> MultiGraph:
    if isinstance(data, dict) and "n" in data and "vertices" not in data:
        data = dict(data, vertices=data["n"])
    n = _int(_field(data, "vertices"))
    edges = _field(data, "edges", list)
    try:
        return MultiGraph(n, [[_int(x) for x in e] for e in edges])
    except GraphError as exc:
        raise ValidationError(str(exc)) from exc
    except TypeError as exc:
        raise ParseError(f"malformed edge list: {exc}") from exc


def parse_graph_divisors(data, G: MultiGraph) -> list:
    divisors = _field(data, "divisors", list)
    out = []
    for D in divisors:
        if not isinstance(D, list):
            raise ParseError("each graph divisor is a list of vertex coefficients")
        vec = [_int(x) for x in D]
        if len(vec) != G.n:
            raise ValidationError(f"divisor has {len(vec)} entries for {G.n} vertices")
        out.append(vec)
    if not out:
        raise ValidationError("at least one divisor is required")
    return out


# ---------------------------------------------------------------------------
# Chains


def _length(chain_gens: int, x) -> SymbolicLength:
    if not isinstance(x, list) or len(x) != chain_gens:
        raise ValidationError(f"length vector {x!r} does not match {chain_gens} generators")
    return SymbolicLength.of(_rational(v) for v in x)


def parse_chain(data) -> ChainOfLoops:
    gens = _field(data, "generators", list)
    loops = _field(data, "loops", list)
    n = len(gens)
    lengths, arcs = [], []
    for loop in loops:
        lengths.append(_length(n, _field(loop, "length")))
        arcs.append(_length(n, _field(loop, "arc")))
    try:
        return ChainOfLoops.make([str(s) for s in gens], lengths, arcs)
    except ChainError as exc:
        raise ValidationError(str(exc)) from exc


def _named_point(chain: ChainOfLoops, j: int, value):
    """A loop point from a residue vector or one of the names w, v, o (optionally suffixed _j)."""
    try:
        if isinstance(value, str):
            name, _, idx = value.partition("_")
            if idx and _int(idx) != j:
                raise ValidationError(f"point {value!r} does not lie on loop {j}")
            if name == "w":
                return chain.w(j)
            if name == "v":
                return chain.v(j)
            if name == "o":
                return chain.o(j)
            raise ValidationError(f"unknown point name {value!r}")
        return chain.point(j, _length(chain.ngens, value))
    except ChainError as exc:
        raise ValidationError(str(exc)) from exc


def parse_chain_divisor(data, chain: ChainOfLoops) -> MetricDivisor:
    terms = []
    for entry in _field(data, "points", list):
        j = _int(_field(entry, "loop"))
        if not 1 <= j <= chain.genus:
            raise ValidationError(f"loop index {j} out of range")
        terms.append((_named_point(chain, j, _field(entry, "residue")), _int(entry.get("coeff", 1))))
    wg = _int(data.get("w_g", 0))
    if wg:
        terms.append((chain.w(chain.genus), wg))
    return MetricDivisor.make(terms)


def parse_chain_divisors(data, chain: ChainOfLoops) -> list:
    divisors = _field(data, "divisors", list)
    if not divisors:
        raise ValidationError("at least one divisor is required")
    return [parse_chain_divisor(D, chain) for D in divisors]


def parse_loci(data, chain: ChainOfLoops) -> dict:
    out = {}
    for entry in _field(data, "loci", list):
        r, d = _int(_field(entry, "r")), _int(_field(entry, "d"))
        cosets = []
        for c in _field(entry, "cosets", list):
            free = [_int(j) for j in c.get("free", [])]
            fixed_raw = c.get("fixed", {})
            if not isinstance(fixed_raw, dict):
                raise ParseError("'fixed' must map loop indices to points")
            fixed = {}
            for key, value in fixed_raw.items():
                j = _int(key)
                if not 1 <= j <= chain.genus:
                    raise ValidationError(f"loop index {j} out of range")
                fixed[j] = _named_point(chain, j, value)
            try:
                cosets.append(SubgroupTorusCoset.make(chain, free, fixed))
            except ChainError as exc:
                raise ValidationError(str(exc)) from exc
        if (r, d) in out:
            raise ValidationError(f"locus ({r}, {d}) given twice")
        out[(r, d)] = BNLocusDecomposition(r, d, tuple(cosets))
    return out

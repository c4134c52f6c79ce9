"""Inclusion multiplicities between consecutive filtration steps.

Between level k and level k + 1 the block of v embeds into the block of u
with a multiplicity that has a closed combinatorial form: it is nonzero
exactly when u dominates v, u - v is a 0/1 vector, and every coordinate
that grows was already saturated at k; the value is then the number of
arrangements of the growth letters. The same number is recovered
numerically as rank(block-u image of the level-k unit of v) divided by
multinomial(v), which makes the q-independence of the diagram a testable
statement rather than an assumption.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .gicar import BadOrder, unit_operator
from .linalg import numeric_rank
from .rep import TruncatedFock
from .words import OccVector, multinomial, occ_range


class NonIntegralMultiplicity(ArithmeticError):
    """Numeric rank did not divide into an integral multiplicity."""

    def __init__(self, v: OccVector, u: OccVector, ratio: float):
        self.v = v
        self.u = u
        self.ratio = ratio
        super().__init__(f"multiplicity of {v} -> {u} is not integral: {ratio!r}")


@dataclass(frozen=True)
class BratteliEdge:
    k: int
    v: OccVector
    u: OccVector
    m: int


def multiplicity_closed(v: OccVector, u: OccVector, k: int) -> int:
    """Closed form for the embedding multiplicity of block v (level k) in block u."""
    n = v.n
    if not v <= OccVector.constant(k, n):
        raise BadOrder(f"v={v} is not inside the level-{k} box")
    if not u <= OccVector.constant(k + 1, n):
        raise BadOrder(f"u={u} is not inside the level-{k + 1} box")
    if not v <= u:
        return 0
    diff = u - v
    if diff.max_entry > 1:
        return 0
    if any(d == 1 and ve != k for d, ve in zip(diff.entries, v.entries)):
        return 0
    return math.factorial(diff.total)


def multiplicity_numeric(v: OccVector, u: OccVector, k: int, t: TruncatedFock,
                         integral_tol: float = 1e-6) -> int:
    """Embedding multiplicity read off the representation.

    Builds the level-k unit of v over the block family of level k + 1 and
    divides the rank of its block at u by multinomial(v).
    """
    cap = OccVector.constant(k + 1, t.n)
    if not u <= cap:
        raise BadOrder(f"u={u} is not inside the level-{k + 1} box")
    if cap.total > t.L:
        raise ValueError(f"truncation L={t.L} does not cover blocks up to {cap}")
    unit = unit_operator(v, k, t, block_cap=cap)
    rank = numeric_rank(unit.block(u, u))
    ratio = rank / multinomial(v)
    m = round(ratio)
    if abs(ratio - m) > integral_tol:
        raise NonIntegralMultiplicity(v, u, ratio)
    return m


def closed_edges(n: int, k: int) -> list[BratteliEdge]:
    """All edges with positive closed-form multiplicity between levels k and k+1."""
    edges = []
    for v in occ_range(OccVector.constant(k, n)):
        for u in occ_range(OccVector.constant(k + 1, n)):
            m = multiplicity_closed(v, u, k)
            if m:
                edges.append(BratteliEdge(k=k, v=v, u=u, m=m))
    return edges


def numeric_edges(k: int, t: TruncatedFock) -> list[BratteliEdge]:
    """All edges with positive numeric multiplicity between levels k and k+1."""
    edges = []
    for v in occ_range(OccVector.constant(k, t.n)):
        unit = unit_operator(v, k, t, block_cap=OccVector.constant(k + 1, t.n))
        for u in occ_range(OccVector.constant(k + 1, t.n)):
            rank = numeric_rank(unit.block(u, u))
            ratio = rank / multinomial(v)
            m = round(ratio)
            if abs(ratio - m) > 1e-6:
                raise NonIntegralMultiplicity(v, u, ratio)
            if m:
                edges.append(BratteliEdge(k=k, v=v, u=u, m=m))
    return edges


@dataclass
class Diagram:
    """Closed-form diagram data for levels 1..k_max+1.

    ``nodes`` lists (level, v, multinomial(v)) in level-lex order; ``edges``
    connect consecutive levels for k = 1..k_max. For each node above the
    first level the report records whether the incoming embeddings fill the
    whole block (sum of m * dim(source) equals dim(node)).
    """

    n: int
    k_max: int
    nodes: list[tuple[int, OccVector, int]]
    edges: list[BratteliEdge]
    unital: dict[tuple[int, OccVector], bool]


def build_diagram(n: int, k_max: int) -> Diagram:
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    nodes = []
    for level in range(1, k_max + 2):
        for v in occ_range(OccVector.constant(level, n)):
            nodes.append((level, v, multinomial(v)))
    edges = []
    for k in range(1, k_max + 1):
        edges.extend(closed_edges(n, k))
    unital = {}
    for level in range(2, k_max + 2):
        for u in occ_range(OccVector.constant(level, n)):
            incoming = sum(e.m * multinomial(e.v) for e in edges if e.k == level - 1 and e.u == u)
            unital[(level, u)] = incoming == multinomial(u)
    return Diagram(n=n, k_max=k_max, nodes=nodes, edges=edges, unital=unital)


def _node_id(level: int, v: OccVector) -> str:
    return f"L{level}_" + "_".join(str(e) for e in v.entries)


def diagram_dot(diagram: Diagram) -> str:
    out = ["digraph filtration {", "  rankdir=TB;", "  node [shape=box];"]
    by_level: dict[int, list[str]] = {}
    for level, v, dim in diagram.nodes:
        label = f"k={level} v={v} dim={dim}"
        out.append(f'  {_node_id(level, v)} [label="{label}"];')
        by_level.setdefault(level, []).append(_node_id(level, v))
    for level, ids in sorted(by_level.items()):
        out.append("  { rank=same; " + "; ".join(ids) + "; }")
    for e in diagram.edges:
        attrs = f' [label="{e.m}"]' if e.m > 1 else ""
        out.append(f"  {_node_id(e.k, e.v)} -> {_node_id(e.k + 1, e.u)}{attrs};")
    out.append("}")
    return "\n".join(out) + "\n"


def diagram_json(diagram: Diagram) -> str:
    payload = {
        "schema": 1,
        "n": diagram.n,
        "k_max": diagram.k_max,
        "nodes": [
            {
                "k": level,
                "v": list(v.entries),
                "dim": dim,
                **({"unital": diagram.unital[(level, v)]} if level > 1 else {}),
            }
            for level, v, dim in diagram.nodes
        ],
        "edges": [
            {"k": e.k, "v": list(e.v.entries), "u": list(e.u.entries), "m": e.m}
            for e in diagram.edges
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit_diagram(k_max: int, fmt: str, n: int) -> str:
    """Render the closed-form diagram for levels 1..k_max+1 as dot or json."""
    diagram = build_diagram(n, k_max)
    if fmt == "dot":
        return diagram_dot(diagram)
    if fmt == "json":
        return diagram_json(diagram)
    raise ValueError(f"unknown diagram format {fmt!r}; expected dot or json")

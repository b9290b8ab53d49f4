"""Defining graphs, Coxeter graphs and group presentations."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .polytope import CombinatorialPolyhedron, Pyramitoid, edge_key

INFINITY = None  # weight sentinel for "no relation"


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: tuple  # sorted pairs
    weights: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vs = set(self.vertices)
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"loop at {a}")
            if a not in vs or b not in vs:
                raise ValueError(f"edge ({a}, {b}) uses an unknown vertex")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"multi-edge ({a}, {b})")
            seen.add(key)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], vertices: Iterable | None = None, weights: dict | None = None) -> Graph:
        es = sorted({tuple(sorted(e)) for e in edges})
        vs = sorted(set(vertices) if vertices is not None else {x for e in es for x in e})
        return cls(tuple(vs), tuple(es), dict(weights or {}))

    def has_edge(self, a, b) -> bool:
        return tuple(sorted((a, b))) in set(self.edges)

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def components(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        count = len(parent)
        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                count -= 1
        return count

    def first_betti(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components()

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for a, b in self.edges:
            attr = ""
            if (a, b) in self.weights:
                w = self.weights[(a, b)]
                attr = f' [label="{"inf" if w is INFINITY else w}"]'
            lines.append(f'  "{a}" -- "{b}"{attr};')
        lines.append("}")
        return "\n".join(lines) + "\n"


def defining_graph(poly: CombinatorialPolyhedron, mirror_faces: Iterable[int]) -> Graph:
    """One vertex per mirror face, an edge when two mirror faces share an edge."""
    mirror = sorted(set(mirror_faces))
    if not mirror:
        raise ValueError("mirror set is empty")
    ms = set(mirror)
    edges = set()
    for fs in poly.edge_faces.values():
        if len(fs) == 2 and fs[0] in ms and fs[1] in ms:
            edges.add(tuple(sorted(fs)))
    return Graph.from_edges(edges, vertices=mirror)


def dome_graph(pyr: Pyramitoid) -> Graph:
    """Defining graph of the dome, relabelled by lateral position 0..n-1."""
    pos = {f: k for k, f in enumerate(pyr.lateral)}
    g = defining_graph(pyr.polyhedron, pyr.lateral)
    return Graph.from_edges(((pos[a], pos[b]) for a, b in g.edges), vertices=range(pyr.n))


def coxeter_graph(g: Graph) -> Graph:
    """Weighted companion graph: edges of weight > 2 plus the non-adjacent pairs (weight infinity).

    Right-angled input has no weight > 2, so the result is the complement
    with every weight set to the INFINITY sentinel.
    """
    heavy = {e for e in g.edges if g.weights.get(e, 2) > 2}
    present = set(g.edges)
    weights = {e: g.weights[e] for e in heavy}
    for a, b in combinations(g.vertices, 2):
        e = (a, b)
        if e not in present:
            weights[e] = INFINITY
    return Graph.from_edges(weights, vertices=g.vertices, weights=weights)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[str, ...], ...]  # words; a trailing "^-1" marks an inverse letter
    tag: str = "RACG"
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        gens = set(self.generators)
        for word in self.relations:
            for letter in word:
                if letter.removesuffix("^-1") not in gens:
                    raise ValueError(f"relation uses undeclared generator {letter}")

    @property
    def involutions(self) -> list[tuple[str, ...]]:
        return [w for w in self.relations if len(w) == 2 and w[0] == w[1]]

    @property
    def commutators(self) -> list[tuple[str, str]]:
        out = []
        for w in self.relations:
            if len(w) == 4 and w[0] == w[2] and w[1] == w[3] and w[0] != w[1]:
                out.append((w[0], w[1]))
        return out

    def to_text(self) -> str:
        lines = [f"# {self.tag}", "generators: " + " ".join(self.generators)]
        for w in self.relations:
            if len(w) == 2 and w[0] == w[1]:
                lines.append(f"{w[0]}^2")
            elif len(w) == 4 and w[0] == w[2] and w[1] == w[3]:
                lines.append(f"[{w[0]},{w[1]}]")
            else:
                lines.append(" ".join(w))
        for key, value in sorted(self.metadata.items()):
            lines.append(f"# {key}: {value}")
        return "\n".join(lines) + "\n"


def racg_presentation(g: Graph, prefix: str = "x") -> GroupPresentation:
    """x_v^2 = 1 for every vertex and (x_a x_b)^2 = 1 for every edge."""
    if any(w not in (2, INFINITY) for w in g.weights.values()):
        raise ValueError("racg_presentation needs a right-angled graph")
    name = {v: f"{prefix}{v}" for v in g.vertices}
    rels = [(name[v], name[v]) for v in g.vertices]
    rels += [(name[a], name[b], name[a], name[b]) for a, b in g.edges]
    return GroupPresentation(tuple(name[v] for v in g.vertices), tuple(rels), "RACG")


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(((k, (k + 1) % n) for k in range(n)), vertices=range(n))


def bipyramitoid_pi1_presentation(north_code, south_code) -> GroupPresentation:
    """Cycle RACG on g0..g{n-1} plus commutators at the arc endpoints of both codes.

    Both codes must use the same edge indexing of the common basis polygon.
    Emitted verbatim; the presentation is not checked against the fundamental group.
    """
    if north_code.n != south_code.n:
        raise ValueError("codes have different basis sizes")
    n = north_code.n
    base = racg_presentation(cycle_graph(n), prefix="g")
    extra = []
    for arc in list(north_code.arcs) + list(south_code.arcs):
        a, b = sorted(arc)
        extra.append((f"g{a}", f"g{b}", f"g{a}", f"g{b}"))
    rho = {f"g{k}": f"e{k}" for k in range(n)}
    return GroupPresentation(
        base.generators,
        base.relations + tuple(extra),
        "surface-kernel quotient",
        {"rho": " ".join(f"{k}->{v}" for k, v in rho.items()), "added_commutators": len(extra)},
    )

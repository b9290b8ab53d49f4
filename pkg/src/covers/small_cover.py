"""Small covers of right-angled mirror polytopes as integral cell complexes.

A base complex is a regular CW complex (polygon, polyhedron, or a subdivided
version of one) whose codimension-one cells may carry a mirror label.  The
cover has one cell (c, g) per base cell c and coset g of the subgroup of
(Z/2)^m generated by the mirrors whose closure contains c.  Coset
representatives are bit masks with the bits of that subgroup cleared, which
is the smallest mask in the coset.

Lifted incidence numbers equal base incidence numbers: a reflection fixing c
pointwise preserves the orientation transported to (c, g), so the sign does
not depend on the representative.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .homology import IntegerMatrix, chain_homology, chain_is_valid
from .polytope import CombinatorialPolyhedron, Pyramitoid, edge_key


class ComplexError(ValueError):
    pass


def submasks(mask: int):
    """All submasks of ``mask`` in increasing order."""
    bits = [1 << k for k in range(mask.bit_length()) if mask >> k & 1]
    out = [0]
    for b in bits:
        out += [x | b for x in out]
    return sorted(out)


@dataclass
class BaseComplex:
    """Regular CW complex with signed incidences and mirror labels.

    ``boundary[d][c]`` maps a d-cell to {(d-1)-cell: sign}.  ``labels`` maps
    (dimension, cell index) to a mirror generator index in range(m).
    """

    dim: int
    names: list
    boundary: list
    labels: dict
    m: int

    @classmethod
    def from_polygons(
        cls,
        faces: Sequence[Sequence[int]],
        solids: Sequence[Sequence[int]] = (),
        face_labels: dict | None = None,
        edge_labels: dict | None = None,
        m: int | None = None,
    ) -> BaseComplex:
        """Build from oriented face cycles and (optionally) solids given as face-id lists.

        Edges are oriented from the smaller vertex id to the larger.  Solid
        boundary signs are solved so that boundary of boundary vanishes.
        """
        vertices = sorted({v for f in faces for v in f})
        vindex = {v: k for k, v in enumerate(vertices)}
        edges = sorted({edge_key(f[k], f[(k + 1) % len(f)]) for f in faces for k in range(len(f))})
        eindex = {e: k for k, e in enumerate(edges)}
        d1 = [{vindex[u]: -1, vindex[v]: 1} for u, v in edges]
        d2 = []
        for f in faces:
            bd: dict[int, int] = {}
            for k in range(len(f)):
                u, v = f[k], f[(k + 1) % len(f)]
                e = eindex[edge_key(u, v)]
                bd[e] = bd.get(e, 0) + (1 if u < v else -1)
            d2.append({e: s for e, s in bd.items() if s})
        boundary = [[], d1, d2]
        names = [vertices, edges, [tuple(f) for f in faces]]
        dim = 2
        if solids:
            boundary.append([_shell_signs(d2, solid) for solid in solids])
            names.append([tuple(s) for s in solids])
            dim = 3
        labels = {}
        for fid, lab in (face_labels or {}).items():
            labels[(2, fid)] = lab
        for e, lab in (edge_labels or {}).items():
            labels[(1, eindex[edge_key(*e)])] = lab
        if m is None:
            m = max(labels.values(), default=-1) + 1
        cx = cls(dim, names, boundary, labels, m)
        for (d, _), lab in labels.items():
            if d != dim - 1:
                raise ComplexError("mirror labels must sit on codimension-one cells")
            if not 0 <= lab < m:
                raise ComplexError(f"label {lab} outside range({m})")
        return cx

    @property
    def sizes(self) -> list[int]:
        return [len(self.names[d]) for d in range(self.dim + 1)]

    @cached_property
    def cofaces(self) -> list[list[list[int]]]:
        out = [[[] for _ in range(len(self.names[d]))] for d in range(self.dim + 1)]
        for d in range(1, self.dim + 1):
            for c, bd in enumerate(self.boundary[d]):
                for f in bd:
                    out[d - 1][f].append(c)
        return out

    @cached_property
    def mirror_masks(self) -> list[list[int]]:
        """Bit mask of the mirrors whose closure contains each cell."""
        masks = [[0] * len(self.names[d]) for d in range(self.dim + 1)]
        for (d, c), lab in self.labels.items():
            masks[d][c] |= 1 << lab
        for d in range(self.dim, 0, -1):
            for c, bd in enumerate(self.boundary[d]):
                for f in bd:
                    masks[d - 1][f] |= masks[d][c]
        return masks

    def closure(self, d: int, cells: Iterable[int]) -> list[set[int]]:
        """Cells (per dimension) in the closure of the given d-cells."""
        out = [set() for _ in range(self.dim + 1)]
        out[d] = set(cells)
        for k in range(d, 0, -1):
            for c in out[k]:
                out[k - 1].update(self.boundary[k][c])
        return out

    def boundary_matrix(self, d: int) -> IntegerMatrix:
        return IntegerMatrix.from_triplets(
            len(self.names[d - 1]),
            len(self.names[d]),
            ((f, c, s) for c, bd in enumerate(self.boundary[d]) for f, s in bd.items()),
        )

    @property
    def boundaries(self) -> list[IntegerMatrix]:
        return [self.boundary_matrix(d) for d in range(1, self.dim + 1)]


def _shell_signs(face_boundary: list[dict], solid: Sequence[int]) -> dict[int, int]:
    """Signs s_f on the faces of a closed shell with sum of s_f * d(f) = 0."""
    by_edge: dict[int, list[int]] = {}
    for f in solid:
        for e in face_boundary[f]:
            by_edge.setdefault(e, []).append(f)
    signs = {solid[0]: 1}
    queue = deque([solid[0]])
    while queue:
        f = queue.popleft()
        for e, s in face_boundary[f].items():
            others = [g for g in by_edge[e] if g != f]
            if len(others) != 1:
                raise ComplexError(f"edge {e} is not shared by exactly two faces of the shell")
            g = others[0]
            want = -signs[f] * s * face_boundary[g][e]
            if g in signs:
                if signs[g] != want:
                    raise ComplexError("shell is not orientable")
            else:
                signs[g] = want
                queue.append(g)
    if len(signs) != len(solid):
        raise ComplexError("shell is not connected")
    return signs


def polyhedron_base(poly: CombinatorialPolyhedron, mirror_faces: Iterable[int]) -> BaseComplex:
    """The polyhedron as a 3-cell; mirror j is the j-th listed face."""
    mirror_faces = list(mirror_faces)
    if not mirror_faces:
        raise ComplexError("mirror set is empty")
    labels = {f: j for j, f in enumerate(mirror_faces)}
    return BaseComplex.from_polygons(poly.faces, [list(range(len(poly.faces)))], face_labels=labels)


def polygon_base(n: int, mirror_edges: Iterable[int] | None = None) -> BaseComplex:
    """The n-gon with vertices 0..n-1; edge k joins k and k+1; mirror j is the j-th listed edge."""
    if mirror_edges is None:
        mirror_edges = range(n)
    labels = {(k, (k + 1) % n): j for j, k in enumerate(mirror_edges)}
    return BaseComplex.from_polygons([tuple(range(n))], edge_labels=labels)


@dataclass
class SmallCoverComplex:
    base: BaseComplex
    cells: list  # per dimension: list of (base cell, mask)
    boundaries: list  # boundaries[k]: C_{k+1} -> C_k
    index: list = field(repr=False)

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.sizes))

    def cell_id(self, d: int, base_cell: int, mask: int) -> int:
        return self.index[d][(base_cell, mask & ~self.base.mirror_masks[d][base_cell])]

    def homology(self):
        return chain_homology(self.sizes, self.boundaries)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "cells": [[[c, g] for c, g in cells] for cells in self.cells],
            "boundaries": [{"rows": B.rows, "cols": B.cols, "triplets": B.triplets()} for B in self.boundaries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict())


def small_cover_complex(base: BaseComplex, restrict: list[set[int]] | None = None) -> SmallCoverComplex:
    """Lift every base cell (or only those in ``restrict``, per dimension)."""
    full = (1 << base.m) - 1
    masks = base.mirror_masks
    top = base.dim
    if restrict is not None:
        top = max((d for d in range(base.dim + 1) if restrict[d]), default=-1)
    cells, index = [], []
    for d in range(top + 1):
        chosen = range(len(base.names[d])) if restrict is None else sorted(restrict[d])
        lst = [(c, g) for c in chosen for g in submasks(full & ~masks[d][c])]
        cells.append(lst)
        index.append({cg: k for k, cg in enumerate(lst)})
    boundaries = []
    for d in range(1, top + 1):
        trip = []
        low = masks[d - 1]
        for col, (c, g) in enumerate(cells[d]):
            for f, s in base.boundary[d][c].items():
                trip.append((index[d - 1][(f, g & ~low[f])], col, s))
        boundaries.append(IntegerMatrix.from_triplets(len(cells[d - 1]), len(cells[d]), trip))
    return SmallCoverComplex(base, cells, boundaries, index)


def expected_cell_counts(base: BaseComplex) -> list[int]:
    return [
        sum(2 ** (base.m - bin(mk).count("1")) for mk in base.mirror_masks[d]) for d in range(base.dim + 1)
    ]


def cover_of_polyhedron(poly: CombinatorialPolyhedron, mirrors: str | Iterable[int] = "all") -> SmallCoverComplex:
    if mirrors == "all":
        mirrors = range(len(poly.faces))
    return small_cover_complex(polyhedron_base(poly, mirrors))


def dome_base(pyr: Pyramitoid) -> BaseComplex:
    """Base complex of a pyramitoid where lateral face i is mirror i and the basis is free."""
    return polyhedron_base(pyr.polyhedron, pyr.lateral)


def dome_cover(pyr: Pyramitoid) -> SmallCoverComplex:
    return small_cover_complex(dome_base(pyr))


def full_cover(pyr_or_poly) -> SmallCoverComplex:
    poly = pyr_or_poly.polyhedron if isinstance(pyr_or_poly, Pyramitoid) else pyr_or_poly
    return cover_of_polyhedron(poly, "all")


def polygon_cover(n: int, mirror_edges: Iterable[int] | None = None) -> SmallCoverComplex:
    return small_cover_complex(polygon_base(n, mirror_edges))


def free_cells(base: BaseComplex) -> list[set[int]]:
    """Closure of the unlabelled codimension-one cells."""
    d = base.dim - 1
    tops = {c for c in range(len(base.names[d])) if (d, c) not in base.labels}
    return base.closure(d, tops)


def boundary_subcomplex(cx: SmallCoverComplex) -> SmallCoverComplex:
    """The part of the cover lying over the non-mirror codimension-one cells.

    With every facet a mirror this is the empty complex.
    """
    restrict = free_cells(cx.base)
    if not restrict[cx.base.dim - 1]:
        return SmallCoverComplex(cx.base, [], [], [])
    return small_cover_complex(cx.base, restrict)


def check_dd_zero(cx) -> bool:
    return chain_is_valid(cx.boundaries)


def is_closed_surface(cx: SmallCoverComplex) -> bool:
    if cx.dim != 2:
        return False
    counts = [0] * cx.sizes[1]
    for (e, _), v in cx.boundaries[1].entries.items():
        counts[e] += abs(v)
    return all(k == 2 for k in counts)


# --- graphs inside covers ---------------------------------------------------


def core_graph(cx_dome: SmallCoverComplex, core_tree: Iterable[tuple[int, int]]):
    """Preimage of the core tree: a graph on lifted core vertices and edges."""
    from .coxeter import Graph

    base = cx_dome.base
    vertices = base.names[0]
    vindex = {v: k for k, v in enumerate(vertices)}
    eindex = {e: k for k, e in enumerate(base.names[1])}
    tree = [edge_key(*e) for e in core_tree]
    nodes, edges = set(), []
    vmask = base.mirror_masks[0]
    for e in tree:
        k = eindex[e]
        u, v = vindex[e[0]], vindex[e[1]]
        for c, g in cx_dome.cells[1]:
            if c == k:
                a = (vertices[u], g & ~vmask[u])
                b = (vertices[v], g & ~vmask[v])
                nodes.update((a, b))
                edges.append((a, b))
    for e in tree:
        for x in e:
            for c, g in cx_dome.cells[0]:
                if c == vindex[x]:
                    nodes.add((x, g))
    return Graph.from_edges(edges, vertices=sorted(nodes))


def graph_first_betti(vertices: Sequence, edges: Sequence[tuple]) -> int:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(parent)
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return len(edges) - len(parent) + comps

"""Combinatorial polyhedra, pyramitoids and the label calculus.

A polyhedron is stored as a list of faces, each face a cyclic sequence of
integer vertex ids.  Edges are derived.  All face cycles are expected to be
oriented coherently (every edge is traversed once in each direction), which
is the orientation used later for signed incidence numbers.
"""
from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class PolytopeError(ValueError):
    pass


class NotABasis(PolytopeError):
    pass


class NotSimple(PolytopeError):
    pass


class InvalidVertex(PolytopeError):
    pass


class NotATriangle(PolytopeError):
    pass


class NeighborUnderflow(PolytopeError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    cells: tuple = ()


@dataclass(frozen=True)
class CombinatorialPolyhedron:
    vertices: tuple[int, ...]
    faces: tuple[tuple[int, ...], ...]

    @classmethod
    def from_faces(cls, faces: Iterable[Sequence[int]], vertices: Iterable[int] | None = None):
        faces = tuple(tuple(int(v) for v in f) for f in faces)
        if vertices is None:
            vertices = sorted({v for f in faces for v in f})
        return cls(tuple(int(v) for v in vertices), faces)

    @cached_property
    def edge_faces(self) -> dict[Edge, tuple[int, ...]]:
        table: dict[Edge, list[int]] = defaultdict(list)
        for fid, face in enumerate(self.faces):
            for k in range(len(face)):
                table[edge_key(face[k], face[(k + 1) % len(face)])].append(fid)
        return {e: tuple(fs) for e, fs in sorted(table.items())}

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self.edge_faces)

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def valence(self, v: int) -> int:
        return len(self.neighbors[v])

    def face_edges(self, fid: int) -> list[Edge]:
        face = self.faces[fid]
        return [edge_key(face[k], face[(k + 1) % len(face)]) for k in range(len(face))]

    @cached_property
    def dart_face(self) -> dict[tuple[int, int], int]:
        """Map each directed edge (u, v) to the face traversing it in that direction."""
        table = {}
        for fid, face in enumerate(self.faces):
            for k in range(len(face)):
                table[(face[k], face[(k + 1) % len(face)])] = fid
        return table

    def next_in_face(self, dart: tuple[int, int]) -> tuple[int, int]:
        face = self.faces[self.dart_face[dart]]
        k = face.index(dart[1])
        return (dart[1], face[(k + 1) % len(face)])

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def face_sizes(self) -> list[int]:
        return [len(f) for f in self.faces]

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "faces": [list(f) for f in self.faces]}

    @classmethod
    def from_dict(cls, data: dict) -> CombinatorialPolyhedron:
        return cls.from_faces(data["faces"], data.get("vertices"))

    def relabeled(self) -> CombinatorialPolyhedron:
        """Copy with vertices renumbered 0..V-1 in sorted order."""
        index = {v: k for k, v in enumerate(sorted(self.vertices))}
        return CombinatorialPolyhedron(
            tuple(range(len(index))), tuple(tuple(index[v] for v in f) for f in self.faces)
        )


def load_polyhedron(source) -> CombinatorialPolyhedron:
    """Read a polyhedron from a JSON path, JSON text or an already parsed dict."""
    if isinstance(source, dict):
        return CombinatorialPolyhedron.from_dict(source)
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        source = Path(source).read_text(encoding="utf-8")
    return CombinatorialPolyhedron.from_dict(json.loads(source))


def dump_polyhedron(poly: CombinatorialPolyhedron) -> str:
    return json.dumps(poly.to_dict())


def validate_polyhedron(poly: CombinatorialPolyhedron) -> list[Diagnostic]:
    """Every violated structural invariant, with offending cells.  Empty means valid."""
    out: list[Diagnostic] = []
    declared = set(poly.vertices)
    if len(declared) != len(poly.vertices):
        out.append(Diagnostic("duplicate vertex", "vertex ids repeat"))
    for fid, face in enumerate(poly.faces):
        if len(face) < 3:
            out.append(Diagnostic("short face", f"face {fid} has {len(face)} vertices", (fid,)))
        if len(set(face)) != len(face):
            out.append(Diagnostic("face not simple", f"face {fid} repeats a vertex", (fid,)))
        missing = [v for v in face if v not in declared]
        if missing:
            out.append(Diagnostic("undeclared vertex", f"face {fid} uses {missing}", (fid, *missing)))
    used = {v for f in poly.faces for v in f}
    for v in sorted(declared - used):
        out.append(Diagnostic("isolated vertex", f"vertex {v} lies on no face", (v,)))

    two_sided = True
    for e, fs in poly.edge_faces.items():
        if len(fs) != 2:
            two_sided = False
            out.append(Diagnostic("face/edge mismatch", f"edge {e} lies in {len(fs)} faces", (e, *fs)))

    darts: dict[tuple[int, int], list[int]] = defaultdict(list)
    for fid, face in enumerate(poly.faces):
        for k in range(len(face)):
            darts[(face[k], face[(k + 1) % len(face)])].append(fid)
    if two_sided:
        for e, fs in poly.edge_faces.items():
            u, v = e
            if len(darts.get((u, v), ())) != 1 or len(darts.get((v, u), ())) != 1:
                out.append(Diagnostic("orientation", f"faces {fs} traverse edge {e} the same way", (e, *fs)))

    if two_sided:
        # a polytope needs vertex valence >= 3 and faces meeting in at most one edge
        for v in sorted(declared & used):
            if poly.valence(v) < 3:
                out.append(Diagnostic("low valence", f"vertex {v} has valence {poly.valence(v)}", (v,)))
        shared: dict[tuple[int, int], list] = defaultdict(list)
        for e, fs in poly.edge_faces.items():
            shared[tuple(sorted(fs))].append(e)
        for fs, es in sorted(shared.items()):
            if len(es) > 1:
                out.append(Diagnostic("faces share several edges", f"faces {fs} meet along {sorted(es)}", fs))

    if poly.faces and not _incidence_connected(poly):
        out.append(Diagnostic("disconnected", "face/edge/vertex incidence is not connected"))
    chi = poly.euler_characteristic
    if chi != 2:
        out.append(Diagnostic("euler", f"V - E + F = {chi}, expected 2"))
    return out


def _incidence_connected(poly: CombinatorialPolyhedron) -> bool:
    seen = {0}
    queue = deque([0])
    vertex_faces: dict[int, list[int]] = defaultdict(list)
    for fid, face in enumerate(poly.faces):
        for v in face:
            vertex_faces[v].append(fid)
    while queue:
        fid = queue.popleft()
        for v in poly.faces[fid]:
            for g in vertex_faces[v]:
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
    return len(seen) == len(poly.faces) and set(vertex_faces) >= set(poly.vertices)


def is_simple(poly: CombinatorialPolyhedron) -> bool:
    return all(poly.valence(v) == 3 for v in poly.vertices)


def orient(poly: CombinatorialPolyhedron) -> CombinatorialPolyhedron:
    """Flip face cycles so that adjacent faces induce opposite edge directions.

    Face 0 keeps its given direction.  Raises PolytopeError if the surface
    is not orientable or an edge is not shared by exactly two faces.
    """
    flip = {0: False}
    queue = deque([0])

    def directed(fid):
        face = poly.faces[fid]
        if flip[fid]:
            face = face[::-1]
        return {(face[k], face[(k + 1) % len(face)]) for k in range(len(face))}

    while queue:
        fid = queue.popleft()
        mine = directed(fid)
        for e in poly.face_edges(fid):
            fs = poly.edge_faces[e]
            if len(fs) != 2:
                raise PolytopeError(f"edge {e} lies in {len(fs)} faces")
            other = fs[1] if fs[0] == fid else fs[0]
            u, v = e
            forward = (u, v) in mine
            other_face = poly.faces[other]
            other_forward = any(
                (other_face[k], other_face[(k + 1) % len(other_face)]) == (u, v) for k in range(len(other_face))
            )
            want_flip = other_forward == forward
            if other in flip:
                if flip[other] != want_flip:
                    raise PolytopeError("surface is not orientable")
            else:
                flip[other] = want_flip
                queue.append(other)
    faces = tuple(f[::-1] if flip.get(k) else f for k, f in enumerate(poly.faces))
    return CombinatorialPolyhedron(poly.vertices, faces)


def canonical_form(poly: CombinatorialPolyhedron, mirror: bool = True) -> tuple:
    """Isomorphism invariant of an oriented polyhedral map.

    Darts are numbered by a breadth-first traversal from a starting dart using
    "next dart in the same face" and "reverse dart".  The code is the minimum
    over starting darts (and over both orientations when ``mirror`` is set).
    """
    variants = [poly]
    if mirror:
        variants.append(CombinatorialPolyhedron(poly.vertices, tuple(f[::-1] for f in poly.faces)))
    best = None
    for p in variants:
        darts = sorted(p.dart_face)
        nxt = {d: p.next_in_face(d) for d in darts}
        for start in darts:
            label = {start: 0}
            order = [start]
            k = 0
            while k < len(order):
                d = order[k]
                for succ in (nxt[d], (d[1], d[0])):
                    if succ not in label:
                        label[succ] = len(order)
                        order.append(succ)
                k += 1
            code = tuple((label[nxt[d]], label[(d[1], d[0])]) for d in order)
            if best is None or code < best:
                best = code
    return best


def isomorphic(p: CombinatorialPolyhedron, q: CombinatorialPolyhedron, mirror: bool = True) -> bool:
    if sorted(p.face_sizes()) != sorted(q.face_sizes()) or len(p.vertices) != len(q.vertices):
        return False
    return canonical_form(p, mirror) == canonical_form(q, mirror)


# --- labels -----------------------------------------------------------------


@dataclass(frozen=True)
class Label:
    """Cyclic label (b_1, ..., b_n): lateral face i has b_i + 3 sides.

    ``entries`` keeps the positional reading from a pyramitoid's anchor edge;
    ``canonical()`` gives the class representative (least rotation).
    """

    entries: tuple[int, ...]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def rotations(self) -> list[tuple[int, ...]]:
        e = self.entries
        return [e[k:] + e[:k] for k in range(len(e))]

    def canonical(self) -> Label:
        return Label(min(self.rotations()))

    def same_class(self, other) -> bool:
        return self.canonical() == Label(tuple(other)).canonical()

    def __str__(self):
        if all(0 <= b < 10 for b in self.entries):
            return "(" + "".join(map(str, self.entries)) + ")"
        return "(" + ",".join(map(str, self.entries)) + ")"

    @classmethod
    def parse(cls, text: str) -> Label:
        text = text.strip().strip("()")
        if "," in text:
            return cls(tuple(int(t) for t in text.split(",")))
        return cls(tuple(int(ch) for ch in text))


def validate_label(label, n: int | None = None) -> bool:
    """The four necessary conditions on a simple pyramitoid label.

    Necessary only: a label can pass and still not be realized, see
    ``enumeration.label_realizability``.
    """
    b = tuple(label)
    if n is None:
        n = len(b)
    if len(b) != n or n < 3:
        return False
    if any(x < 0 or x > n - 3 for x in b):
        return False
    if sum(1 for x in b if x == 0) < 2:
        return False
    if n != 3 and any(b[k] == 0 and b[(k + 1) % n] == 0 for k in range(n)):
        return False
    return sum(b) == 2 * (n - 3)


def truncation_rule(b: Sequence[int], i: int) -> tuple[int, ...]:
    """Label after truncating the basis vertex between lateral faces i and i+1."""
    b = list(b)
    n = len(b)
    if not 0 <= i < n:
        raise InvalidVertex(f"position {i} out of range for n={n}")
    if i == n - 1:
        return tuple([b[0] + 1] + b[1 : n - 1] + [b[n - 1] + 1, 0])
    return tuple(b[:i] + [b[i] + 1, 0, b[i + 1] + 1] + b[i + 2 :])


def contraction_rule(b: Sequence[int], i: int) -> tuple[int, ...]:
    """Label after contracting triangular lateral face i (b_i = 0).

    The reading starts at the lateral face that inherits the anchor edge:
    old face 1 when i = 0, old face 0 otherwise.
    """
    b = list(b)
    n = len(b)
    if b[i] != 0:
        raise NotATriangle(f"label entry {i} is {b[i]}, not 0")
    prev, nxt = (i - 1) % n, (i + 1) % n
    if b[prev] == 0 or b[nxt] == 0:
        raise NeighborUnderflow(f"a neighbour of position {i} has label 0")
    c = list(b)
    c[prev] -= 1
    c[nxt] -= 1
    if i == 0:
        return tuple(c[1:])
    return tuple(c[:i] + c[i + 1 :])


# --- pyramitoids ------------------------------------------------------------


@dataclass(frozen=True)
class Pyramitoid:
    polyhedron: CombinatorialPolyhedron
    basis: int
    basis_cycle: tuple[int, ...]
    lateral: tuple[int, ...]
    essential_tree: frozenset
    core_tree: frozenset
    leaves: frozenset

    @property
    def n(self) -> int:
        return len(self.basis_cycle)

    @property
    def basis_edges(self) -> list[Edge]:
        c = self.basis_cycle
        return [edge_key(c[k], c[(k + 1) % len(c)]) for k in range(len(c))]

    @property
    def core_vertices(self) -> frozenset:
        basis = set(self.basis_cycle)
        return frozenset(v for v in self.polyhedron.vertices if v not in basis)

    @property
    def label(self) -> Label:
        return label_of(self)

    def lateral_position(self, fid: int) -> int:
        return self.lateral.index(fid)

    def is_simple(self) -> bool:
        return is_simple(self.polyhedron)


def _shares_edge_with_all(poly: CombinatorialPolyhedron, fid: int) -> bool:
    touching = set()
    for e in poly.face_edges(fid):
        touching.update(poly.edge_faces[e])
    return touching >= set(range(len(poly.faces)))


def find_bases(poly: CombinatorialPolyhedron) -> list[int]:
    nf = len(poly.faces)
    return [fid for fid, f in enumerate(poly.faces) if len(f) == nf - 1 and _shares_edge_with_all(poly, fid)]


def as_pyramitoid(poly: CombinatorialPolyhedron, basis: int, start: int | None = None) -> Pyramitoid:
    """View ``poly`` as a pyramitoid on the given basis face.

    ``start`` is the basis vertex where basis edge 0 (the anchor) begins;
    edges, lateral faces and label entries are then read along the basis
    face's own cycle direction.
    """
    face = poly.faces[basis]
    if len(face) != len(poly.faces) - 1 or not _shares_edge_with_all(poly, basis):
        raise NotABasis(f"face {basis} is not a pyramitoid basis")
    if start is not None:
        k = face.index(start)
        face = face[k:] + face[:k]
    n = len(face)
    lateral = []
    for k in range(n):
        e = edge_key(face[k], face[(k + 1) % n])
        fs = poly.edge_faces[e]
        lateral.append(fs[0] if fs[1] == basis else fs[1])
    basis_edges = {edge_key(face[k], face[(k + 1) % n]) for k in range(n)}
    basis_vertices = set(face)
    essential = frozenset(e for e in poly.edges if e not in basis_edges)
    leaves = frozenset(e for e in essential if e[0] in basis_vertices or e[1] in basis_vertices)
    return Pyramitoid(poly, basis, tuple(face), tuple(lateral), essential, essential - leaves, leaves)


def label_of(pyr: Pyramitoid) -> Label:
    if not pyr.is_simple():
        raise NotSimple("labels are defined for simple pyramitoids")
    return Label(tuple(len(pyr.polyhedron.faces[f]) - 3 for f in pyr.lateral))


def tree_is_spanning(pyr: Pyramitoid) -> bool:
    """The essential tree is acyclic and touches every vertex."""
    parent = {v: v for v in pyr.polyhedron.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in pyr.essential_tree:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return len({find(v) for v in pyr.polyhedron.vertices}) == 1


# --- surgery ----------------------------------------------------------------


def truncate_poly_vertex(poly: CombinatorialPolyhedron, v: int):
    """Cut off a valence-3 vertex by a new triangular face.

    Returns (new polyhedron, new face id, {old neighbour: new vertex}).
    The new vertex on edge (v, u) is what replaces v next to u.
    """
    if v not in poly.neighbors or poly.valence(v) != 3:
        raise InvalidVertex(f"vertex {v} is not a valence-3 vertex")
    fresh = max(poly.vertices) + 1
    cut = {}
    for u in poly.neighbors[v]:
        cut[u] = fresh
        fresh += 1
    faces = []
    tri_darts = {}
    for face in poly.faces:
        if v not in face:
            faces.append(face)
            continue
        k = face.index(v)
        a, b = face[k - 1], face[(k + 1) % len(face)]
        rest = face[k + 1 :] + face[:k]
        new = (cut[a], cut[b]) + rest
        faces.append(new)
        tri_darts[cut[b]] = cut[a]
    start = min(tri_darts)
    tri = [start]
    while len(tri) < 3:
        tri.append(tri_darts[tri[-1]])
    faces.append(tuple(tri))
    vertices = tuple(sorted(set(poly.vertices) - {v} | set(cut.values())))
    return CombinatorialPolyhedron(vertices, tuple(faces)), len(faces) - 1, cut


def contract_poly_face(poly: CombinatorialPolyhedron, fid: int):
    """Collapse a triangular face to a single new vertex.  Returns (polyhedron, new vertex)."""
    tri = poly.faces[fid]
    if len(tri) != 3:
        raise NotATriangle(f"face {fid} has {len(tri)} sides")
    w = max(poly.vertices) + 1
    merged = set(tri)
    faces = []
    for k, face in enumerate(poly.faces):
        if k == fid:
            continue
        mapped = [w if x in merged else x for x in face]
        out = [x for j, x in enumerate(mapped) if x != mapped[j - 1]]
        if len(out) < 3:
            raise NeighborUnderflow(f"face {k} would collapse to {len(out)} sides")
        faces.append(tuple(out))
    vertices = tuple(sorted(set(poly.vertices) - merged | {w}))
    return CombinatorialPolyhedron(vertices, tuple(faces)), w


def truncate_vertex(pyr: Pyramitoid, i: int) -> Pyramitoid:
    """Truncate the basis vertex between lateral faces i and i+1 (0-based)."""
    n = pyr.n
    if not 0 <= i < n:
        raise InvalidVertex(f"position {i} out of range for n={n}")
    c = pyr.basis_cycle
    v = c[(i + 1) % n]
    poly, _, cut = truncate_poly_vertex(pyr.polyhedron, v)
    start = c[0] if v != c[0] else cut[c[1]]
    return as_pyramitoid(poly, pyr.basis, start)


def contract_triangle(pyr: Pyramitoid, i: int) -> Pyramitoid:
    """Contract triangular lateral face i to a point, giving an (n-1)-pyramitoid."""
    n = pyr.n
    if n < 4:
        raise PolytopeError("contraction needs n >= 4")
    fid = pyr.lateral[i]
    poly = pyr.polyhedron
    if len(poly.faces[fid]) != 3:
        raise NotATriangle(f"lateral face {i} has {len(poly.faces[fid])} sides")
    for j in ((i - 1) % n, (i + 1) % n):
        if len(poly.faces[pyr.lateral[j]]) < 4:
            raise NeighborUnderflow(f"lateral face {j} is a triangle")
    new_poly, w = contract_poly_face(poly, fid)
    basis = pyr.basis if pyr.basis < fid else pyr.basis - 1
    start = w if i in (0, n - 1) else pyr.basis_cycle[0]
    return as_pyramitoid(new_poly, basis, start)


# --- standard families ------------------------------------------------------


def n_pyramid(n: int) -> CombinatorialPolyhedron:
    """Pyramid over an n-gon: vertices 0..n-1 on the basis, apex n.  Basis is face 0."""
    if n < 3:
        raise PolytopeError("n must be at least 3")
    apex = n
    faces = [tuple(range(n - 1, -1, -1))]
    for k in range(n):
        faces.append((k, (k + 1) % n, apex))
    return CombinatorialPolyhedron.from_faces(faces)


def n_book_polyhedron(n: int) -> CombinatorialPolyhedron:
    """The n-prism with one vertical face collapsed to a segment.  Face 0 is the top n-gon."""
    if n < 3:
        raise PolytopeError("n must be at least 3")
    # top t_k = k, bottom s_k = n + k; t_0 = s_0 and t_{n-1} = s_{n-1} after the collapse
    t = list(range(n))
    s = [0] + [n + k for k in range(1, n - 1)] + [n - 1]
    faces = [tuple(t), tuple(reversed(s))]
    for k in range(n - 1):
        quad = [t[k + 1], t[k], s[k], s[k + 1]]
        face = [x for j, x in enumerate(quad) if x != quad[j - 1]]
        faces.append(tuple(face))
    return CombinatorialPolyhedron.from_faces(faces)


def n_book(n: int) -> Pyramitoid:
    return as_pyramitoid(n_book_polyhedron(n), 0)


def tetrahedron() -> CombinatorialPolyhedron:
    return n_pyramid(3)

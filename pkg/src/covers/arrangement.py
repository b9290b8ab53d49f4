"""Basis polygons cut by code arcs, and the refined base complexes built from them.

The polygon is placed on the parabola, corner k at (k, k^2), so it is convex
and counterclockwise; all geometry is exact (Fractions).  Arc endpoints on a
basis edge are ordered by descending forward offset to the other endpoint
edge, which keeps arcs of one code nested instead of crossing.  Arcs of two
different codes joining the same pair of edges are nested as well.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .polytope import Pyramitoid, edge_key
from .small_cover import BaseComplex, SmallCoverComplex, small_cover_complex

Point = tuple[Fraction, Fraction]
ArcKey = tuple[int, int]  # (family, index within family)


class CodeMismatch(ValueError):
    pass


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = _cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass
class Arrangement:
    n: int
    families: list  # list of arc lists; arc = (edge a, edge b)
    points: list = field(default_factory=list)
    edge_points: list = field(default_factory=list)  # per basis edge, vertex ids from corner k to corner k+1
    arc_paths: dict = field(default_factory=dict)  # ArcKey -> vertex ids from the edge-a end to the edge-b end
    crossings: dict = field(default_factory=dict)  # vertex id -> (ArcKey, ArcKey)
    faces: list = field(default_factory=list)  # counterclockwise vertex cycles

    def arcs(self):
        for fam, arcs in enumerate(self.families):
            for k, arc in enumerate(arcs):
                yield (fam, k), tuple(arc)

    @property
    def interior_edges(self) -> set:
        out = set()
        for path in self.arc_paths.values():
            out.update(edge_key(path[k], path[k + 1]) for k in range(len(path) - 1))
        return out


def build_arrangement(n: int, families: Sequence[Sequence[tuple[int, int]]]) -> Arrangement:
    arr = Arrangement(n, [list(map(tuple, f)) for f in families])
    corners = [(Fraction(k), Fraction(k * k)) for k in range(n)]
    arr.points = list(corners)

    # endpoint order on each basis edge
    on_edge: dict[int, list] = {k: [] for k in range(n)}
    for key, (a, b) in arr.arcs():
        if (b - a) % n in (0, 1, n - 1):
            raise ValueError(f"arc {key} joins adjacent or equal edges")
        for end, (here, other) in enumerate(((a, b), (b, a))):
            sign = 1 if here < other else -1
            on_edge[here].append(((-((other - here) % n), sign * key[0], key[1]), key, end))
    endpoint: dict[tuple, int] = {}
    arr.edge_points = []
    for k in range(n):
        items = sorted(on_edge[k])
        p, q = corners[k], corners[(k + 1) % n]
        ids = [k]
        for idx, (_, key, end) in enumerate(items):
            t = Fraction(idx + 1, len(items) + 1)
            arr.points.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
            vid = len(arr.points) - 1
            endpoint[(key, end)] = vid
            ids.append(vid)
        ids.append((k + 1) % n)
        arr.edge_points.append(ids)

    # boundary position of each endpoint, to decide crossings by interleaving
    position = {}
    for k in range(n):
        for j, vid in enumerate(arr.edge_points[k][:-1]):
            position[vid] = (k, j)
    keys = [key for key, _ in arr.arcs()]
    seg = {key: (endpoint[(key, 0)], endpoint[(key, 1)]) for key in keys}
    along: dict[ArcKey, list] = {key: [] for key in keys}
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            ka, kb = keys[i], keys[j]
            a0, a1 = sorted((position[seg[ka][0]], position[seg[ka][1]]))
            b0, b1 = position[seg[kb][0]], position[seg[kb][1]]
            if (a0 < b0 < a1) == (a0 < b1 < a1):
                continue
            if ka[0] == kb[0]:
                raise ValueError(f"arcs {ka} and {kb} of one code cross")
            P, Q = arr.points[seg[ka][0]], arr.points[seg[ka][1]]
            R, S = arr.points[seg[kb][0]], arr.points[seg[kb][1]]
            d1, d2 = _sub(Q, P), _sub(S, R)
            s = _cross(_sub(R, P), d2) / _cross(d1, d2)
            u = _cross(_sub(R, P), d1) / _cross(d1, d2)
            arr.points.append((P[0] + s * d1[0], P[1] + s * d1[1]))
            vid = len(arr.points) - 1
            arr.crossings[vid] = (ka, kb)
            along[ka].append((s, vid))
            along[kb].append((u, vid))
    for key in keys:
        mids = [vid for _, vid in sorted(along[key])]
        arr.arc_paths[key] = [seg[key][0]] + mids + [seg[key][1]]

    # planar graph and face tracing
    nbrs: dict[int, set] = {v: set() for v in range(len(arr.points))}

    def link(u, v):
        nbrs[u].add(v)
        nbrs[v].add(u)

    for ids in arr.edge_points:
        for j in range(len(ids) - 1):
            link(ids[j], ids[j + 1])
    for path in arr.arc_paths.values():
        for j in range(len(path) - 1):
            link(path[j], path[j + 1])
    order = {}
    for v, ns in nbrs.items():
        o = arr.points[v]
        order[v] = sorted(ns, key=cmp_to_key(lambda a, b, o=o: _angle_cmp(_sub(arr.points[a], o), _sub(arr.points[b], o))))
    seen = set()
    faces = []
    for u in nbrs:
        for v in nbrs[u]:
            if (u, v) in seen:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cyc.append(a)
                # interior on the left: at b, turn to the neighbour just clockwise of a
                ring = order[b]
                c = ring[(ring.index(a) - 1) % len(ring)]
                a, b = b, c
            area = sum(_cross(arr.points[cyc[k]], arr.points[cyc[(k + 1) % len(cyc)]]) for k in range(len(cyc)))
            if area > 0:
                faces.append(tuple(cyc))
    arr.faces = sorted(faces, key=lambda f: (min(f), f))
    return arr


# --- refined base complexes -------------------------------------------------


def matching_vertex_map(n: int, offset: int, flip: bool) -> dict[int, int]:
    """South basis-vertex position -> north basis-vertex position under an edge matching.

    North edge i joins north positions i, i+1 and is matched with south edge
    sigma(i).  A flip reverses orientation, the usual way two bases face each other.
    """
    out = {}
    for i in range(n):
        if flip:
            j = (offset - i) % n
            out[(j + 1) % n] = i
            out[j] = (i + 1) % n
        else:
            j = (offset + i) % n
            out[j] = i
            out[(j + 1) % n] = (i + 1) % n
    return out


def sigma(n: int, offset: int, flip: bool):
    return [((offset - i) if flip else (offset + i)) % n for i in range(n)]


def _splice(face: Sequence[int], boundary: dict[tuple[int, int], list[int]]) -> tuple[int, ...]:
    """Insert subdivision vertices on the face's edges that appear in ``boundary``."""
    out = []
    for k in range(len(face)):
        u, v = face[k], face[(k + 1) % len(face)]
        out.append(u)
        if (u, v) in boundary:
            out.extend(boundary[(u, v)])
    return tuple(out)


@dataclass
class SplitBase:
    """Refined base complex of one or two pyramitoids sharing a subdivided basis disk."""

    base: BaseComplex
    arrangement: Arrangement
    vertex_of: dict  # arrangement vertex id -> base vertex id
    region_faces: list  # base face ids of the disk regions
    solids: list  # base 3-cell ids (north first)
    n: int

    def vertex_index(self, arr_vid: int) -> int:
        return self._vertex_lookup[self.vertex_of[arr_vid]]

    def edge_index(self, u: int, v: int) -> tuple[int, int]:
        """Base edge id of the arrangement segment u-v and the sign of traversing u -> v."""
        a, b = self.vertex_of[u], self.vertex_of[v]
        e = self._edge_lookup[edge_key(a, b)]
        return e, (1 if a < b else -1)

    def __post_init__(self):
        self._edge_lookup = {e: k for k, e in enumerate(self.base.names[1])}
        self._vertex_lookup = {v: k for k, v in enumerate(self.base.names[0])}

    def restrict_solid(self, k: int):
        return self.base.closure(3, [self.solids[k]])

    def restrict_disk(self):
        return self.base.closure(2, self.region_faces)


def build_split_base(
    north: Pyramitoid,
    north_arcs: Sequence[tuple[int, int]],
    south: Pyramitoid | None = None,
    south_arcs: Sequence[tuple[int, int]] = (),
    offset: int = 0,
    flip: bool = True,
) -> SplitBase:
    """Refined base: north laterals (mirror k on north lateral k), the disk cut by all arcs,
    and optionally the south pyramitoid glued along the disk.

    ``south_arcs`` are pairs of south basis-edge indices; the south lateral
    matched with north edge i gets mirror i.
    """
    n = north.n
    sig = sigma(n, offset, flip)
    if south is not None:
        if south.n != n:
            raise ValueError("north and south bases differ in size")
        inv = {j: i for i, j in enumerate(sig)}
        south_in_north = [(inv[a], inv[b]) for a, b in south_arcs]
    else:
        south_in_north = []
    arr = build_arrangement(n, [list(north_arcs), south_in_north])

    c = north.basis_cycle
    fresh = max(north.polyhedron.vertices) + 1
    vertex_of = {}
    for vid in range(len(arr.points)):
        if vid < n:
            vertex_of[vid] = c[vid]
        else:
            vertex_of[vid] = fresh
            fresh += 1
    boundary = {}
    for k, ids in enumerate(arr.edge_points):
        inner = [vertex_of[v] for v in ids[1:-1]]
        boundary[(c[k], c[(k + 1) % n])] = inner
        boundary[(c[(k + 1) % n], c[k])] = inner[::-1]

    faces, labels = [], {}
    for k, fid in enumerate(north.lateral):
        labels[len(faces)] = k
        faces.append(_splice(north.polyhedron.faces[fid], boundary))
    north_faces = list(range(len(faces)))
    region_faces = []
    for f in arr.faces:
        region_faces.append(len(faces))
        faces.append(tuple(vertex_of[v] for v in f))
    solids = [north_faces + region_faces]

    if south is not None:
        d = south.basis_cycle
        vmap = matching_vertex_map(n, offset, flip)
        rename = {d[j]: c[i] for j, i in vmap.items()}
        for v in south.polyhedron.vertices:
            if v not in rename:
                rename[v] = fresh
                fresh += 1
        south_faces = []
        for j, fid in enumerate(south.lateral):
            face = tuple(rename[v] for v in south.polyhedron.faces[fid])
            labels[len(faces)] = inv[j]
            south_faces.append(len(faces))
            faces.append(_splice(face, boundary))
        solids.append(south_faces + region_faces)

    base = BaseComplex.from_polygons(faces, solids, face_labels=labels, m=n)
    return SplitBase(base, arr, vertex_of, region_faces, list(range(len(solids))), n)


# --- lifted curves ----------------------------------------------------------


@dataclass(frozen=True)
class LiftedCurve:
    arc: ArcKey
    coset: int  # mask with the two arc-edge bits cleared
    edges: tuple  # (base edge id, mask, sign) in traversal order
    vertices: tuple  # (base vertex id, canonical mask) in traversal order

    def chain(self, cx: SmallCoverComplex) -> dict[int, int]:
        out: dict[int, int] = {}
        for e, g, s in self.edges:
            k = cx.cell_id(1, e, g)
            out[k] = out.get(k, 0) + s
        return {k: v for k, v in out.items() if v}


def lift_arc(split: SplitBase, key: ArcKey) -> list[LiftedCurve]:
    """The 2^(n-2) closed curves over one arc, each made of four lifted arc copies."""
    arr = split.arrangement
    a, b = arr.families[key[0]][key[1]]
    path = arr.arc_paths[key]
    steps = [split.edge_index(path[k], path[k + 1]) for k in range(len(path) - 1)]
    vmasks = split.base.mirror_masks[0]
    emasks = split.base.mirror_masks[1]
    n = split.n
    sa, sb = 1 << a, 1 << b
    curves = []
    for g in range(1 << n):
        if g & (sa | sb):
            continue
        edges, verts = [], []
        # g: a -> b, g s_b: b -> a, g s_a s_b: a -> b, g s_a: b -> a
        for h, forward in ((g, True), (g ^ sb, False), (g ^ sa ^ sb, True), (g ^ sa, False)):
            seq = steps if forward else [(e, -s) for e, s in reversed(steps)]
            pts = path if forward else path[::-1]
            for e, s in seq:
                edges.append((e, h & ~emasks[e], s))
            for v in pts[:-1]:
                vi = split.vertex_index(v)
                verts.append((vi, h & ~vmasks[vi]))
        curves.append(LiftedCurve(key, g, tuple(edges), tuple(verts)))
    return curves


def lift_family(split: SplitBase, family: int) -> list[LiftedCurve]:
    out = []
    for k in range(len(split.arrangement.families[family])):
        out.extend(lift_arc(split, (family, k)))
    return out


def refined_dome(pyr: Pyramitoid, code) -> SplitBase:
    if code.n != pyr.n:
        raise CodeMismatch("code and pyramitoid have different basis sizes")
    return build_split_base(pyr, code.arcs)


def refined_dome_cover(pyr: Pyramitoid, code) -> tuple[SmallCoverComplex, SmallCoverComplex, SplitBase]:
    """(handlebody cover, boundary surface cover, refined base) with the code arcs as edges."""
    split = refined_dome(pyr, code)
    whole = small_cover_complex(split.base)
    surface = small_cover_complex(split.base, split.restrict_disk())
    surface.split = split
    whole.split = split
    return whole, surface, split


def lift_arcs(cx_surface: SmallCoverComplex, code) -> list[LiftedCurve]:
    """Meridian curves over the code arcs on a surface built by ``refined_dome_cover``."""
    split = getattr(cx_surface, "split", None)
    if split is None:
        raise CodeMismatch("surface was not refined by a code")
    arcs = [tuple(a) for a in split.arrangement.families[0]]
    if code.n != split.n or sorted(map(tuple, code.arcs)) != sorted(arcs):
        raise CodeMismatch("code does not match the refinement of this surface")
    return lift_family(split, 0)


def curve_is_closed(curve: LiftedCurve, cx: SmallCoverComplex) -> bool:
    chain = curve.chain(cx)
    bd: dict[int, int] = {}
    for (r, col), v in cx.boundaries[0].entries.items():
        if col in chain:
            bd[r] = bd.get(r, 0) + v * chain[col]
    return not any(bd.values())

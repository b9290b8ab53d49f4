"""Bipyramitoids, trapezohedra, smoothings and Heegaard splitting data."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .arrangement import SplitBase, build_split_base, lift_family, matching_vertex_map, sigma
from .enumeration import Code, Triangulation, code_of, pyramitoid_from_triangulation
from .homology import HomologyGroup, ImageTest
from .polytope import (
    CombinatorialPolyhedron,
    NotSimple,
    PolytopeError,
    Pyramitoid,
    as_pyramitoid,
    edge_key,
    is_simple,
    orient,
    validate_polyhedron,
)
from .small_cover import cover_of_polyhedron, small_cover_complex


class BasisMismatch(PolytopeError):
    pass


class EquatorInvalid(PolytopeError):
    pass


class CodeAlternationError(ValueError):
    pass


@dataclass(frozen=True)
class Bipyramitoid:
    """Two pyramitoids glued along their bases.

    North edge i meets south edge sigma(i) = offset + i (or offset - i when
    ``flip``).  Bases glued face to face need the flip; without it the south
    half enters as its mirror image.  ``equator`` lists the glued edges crossed by the cut, in the
    order of the north basis vertices; glued face i contains north lateral i.
    """

    north: Pyramitoid
    south: Pyramitoid
    offset: int
    flip: bool
    glued: CombinatorialPolyhedron
    equator: tuple

    @property
    def n(self) -> int:
        return self.north.n

    @property
    def sigma(self) -> list[int]:
        return sigma(self.n, self.offset, self.flip)

    def is_simple(self) -> bool:
        return is_simple(self.north.polyhedron) and is_simple(self.south.polyhedron)


def _side_path(face: Sequence[int], basis: set) -> tuple[list[int], int, int]:
    """Non-basis vertices of a lateral face, plus the basis vertex before and after them."""
    k = next(i for i in range(len(face)) if face[i] in basis and face[(i + 1) % len(face)] in basis)
    rot = list(face[k + 2 :]) + list(face[:k])
    rot = [v for v in rot if v not in basis]
    return rot, face[(k + 1) % len(face)], face[k]


def glue_bipyramitoid(north: Pyramitoid, south: Pyramitoid, offset: int = 0, flip: bool = True) -> Bipyramitoid:
    n = north.n
    if south.n != n:
        raise BasisMismatch(f"basis sizes differ: {n} and {south.n}")
    c, d = north.basis_cycle, south.basis_cycle
    vmap = matching_vertex_map(n, offset, flip)
    to_north = {d[j]: c[i] for j, i in vmap.items()}
    nbasis, sbasis = set(c), set(d)
    fresh = max(north.polyhedron.vertices) + 1
    rename = {}
    for v in south.polyhedron.vertices:
        if v not in sbasis:
            rename[v] = fresh
            fresh += 1
    sig = sigma(n, offset, flip)
    faces = []
    for i in range(n):
        p_path, p_start, p_end = _side_path(north.polyhedron.faces[north.lateral[i]], nbasis)
        q_path, q_start, q_end = _side_path(south.polyhedron.faces[south.lateral[sig[i]]], sbasis)
        q_path = [rename[v] for v in q_path]
        # north path runs p_start -> ... -> p_end; the south path must leave from p_end
        if to_north[q_start] == p_end:
            faces.append(tuple(p_path + q_path))
        elif to_north[q_end] == p_end:
            faces.append(tuple(p_path + q_path[::-1]))
        else:
            raise BasisMismatch(f"lateral {i} is not matched along a common basis edge")
        if len(faces[-1]) < 3:
            raise BasisMismatch(f"lateral {i} meets a triangle on both sides, leaving a {len(faces[-1])}-gon")
    glued = orient(CombinatorialPolyhedron.from_faces(faces))
    problems = validate_polyhedron(glued)
    if problems:
        raise BasisMismatch(f"glued polyhedron is invalid: {problems[0].message}")

    # the cut crosses, at each basis vertex, the edge formed by the two leaves there
    equator = []
    for i in range(n):
        a = next(u for u in north.polyhedron.neighbors[c[i]] if u not in nbasis)
        sv = next(s for s, nv in to_north.items() if nv == c[i])
        b = rename[next(u for u in south.polyhedron.neighbors[sv] if u not in sbasis)]
        equator.append(edge_key(a, b))
    return Bipyramitoid(north, south, offset, flip, glued, tuple(equator))


def _equator_faces(poly: CombinatorialPolyhedron, equator: Sequence[tuple[int, int]]) -> list[int]:
    eq = [edge_key(*e) for e in equator]
    if len(set(eq)) != len(eq):
        raise EquatorInvalid("equator repeats an edge")
    for e in eq:
        if e not in poly.edge_faces:
            raise EquatorInvalid(f"{e} is not an edge")
    faces = []
    for k in range(len(eq)):
        common = set(poly.edge_faces[eq[k]]) & set(poly.edge_faces[eq[(k + 1) % len(eq)]])
        if len(common) != 1:
            raise EquatorInvalid(f"edges {eq[k]} and {eq[(k + 1) % len(eq)]} do not share exactly one face")
        faces.append(common.pop())
    if sorted(faces) != list(range(len(poly.faces))):
        missed = sorted(set(range(len(poly.faces))) - set(faces))
        raise EquatorInvalid(f"equator misses faces {missed} or crosses a face twice")
    return faces


def _half(poly, eq, faces, side: set, cross_id: dict):
    parts, darts = [], {}
    for k, fid in enumerate(faces):
        face = poly.faces[fid]
        L = len(face)
        cut = {eq[k], eq[(k + 1) % len(eq)]}
        # walk the face from the end of one crossed edge to the start of the other
        for s in range(L):
            u, v = face[s], face[(s + 1) % L]
            if edge_key(u, v) in cut and v in side:
                entry = cross_id[edge_key(u, v)]
                path = [v]
                t = (s + 1) % L
                while True:
                    a, b = face[t], face[(t + 1) % L]
                    if edge_key(a, b) in cut:
                        exit_ = cross_id[edge_key(a, b)]
                        break
                    path.append(b)
                    t = (t + 1) % L
                parts.append(tuple([entry] + path + [exit_]))
                darts[entry] = exit_
                break
    basis = []
    start = cross_id[eq[0]]
    x = start
    while True:
        basis.append(x)
        x = darts[x]
        if x == start:
            break
    return parts, tuple(basis)


def split_bipyramitoid(poly: CombinatorialPolyhedron, equator: Sequence[tuple[int, int]]) -> Bipyramitoid:
    """Cut along the given cyclic list of crossed edges.

    North is the half whose basis, read along its own orientation, meets the
    crossing points in the given equator order.
    """
    eq = [edge_key(*e) for e in equator]
    faces = _equator_faces(poly, eq)
    parent = {v: v for v in poly.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cut = set(eq)
    for e in poly.edges:
        if e not in cut:
            parent[find(e[0])] = find(e[1])
    comps = defaultdict(set)
    for v in poly.vertices:
        comps[find(v)].add(v)
    if len(comps) != 2:
        raise EquatorInvalid(f"removing the equator leaves {len(comps)} components, not 2")
    sides = list(comps.values())
    for e in eq:
        if (e[0] in sides[0]) == (e[1] in sides[0]):
            raise EquatorInvalid(f"edge {e} does not join the two sides")
    fresh = max(poly.vertices) + 1
    cross_id = {e: fresh + k for k, e in enumerate(eq)}
    n = len(eq)
    halves = []
    for side in sides:
        parts, basis = _half(poly, eq, faces, side, cross_id)
        halves.append((parts, basis))
    order = [cross_id[e] for e in eq]
    north_idx = next(
        (k for k, (_, basis) in enumerate(halves) if n < 2 or basis[1] == order[1]), None
    )
    if north_idx is None:
        raise EquatorInvalid("neither side follows the equator order")
    pyrs = []
    for k in (north_idx, 1 - north_idx):
        parts, basis = halves[k]
        hp = CombinatorialPolyhedron.from_faces([basis] + parts)
        pyrs.append(as_pyramitoid(hp, 0, start=order[0]))
    return Bipyramitoid(pyrs[0], pyrs[1], n - 1, True, poly, tuple(eq))


# --- homology two ways ------------------------------------------------------


def z_homology_two_ways(b: Bipyramitoid) -> tuple[list[HomologyGroup], list[HomologyGroup], bool]:
    """Homology of the direct small cover of the glued polyhedron, and of the two dome
    covers glued along their common boundary surface."""
    if not b.is_simple():
        raise NotSimple("both halves must be simple")
    way1 = cover_of_polyhedron(b.glued, "all").homology()
    split = build_split_base(b.north, (), b.south, (), b.offset, b.flip)
    way2 = small_cover_complex(split.base).homology()
    return way1, way2, way1 == way2


# --- Heegaard data ----------------------------------------------------------


@dataclass
class HeegaardData:
    genus: int
    north_meridians: list
    south_meridians: list
    intersection: list
    split: SplitBase = field(repr=False)

    def to_dict(self) -> dict:
        def curves(cs):
            return [{"arc": list(c.arc), "coset": c.coset, "edges": [list(e) for e in c.edges]} for c in cs]

        return {
            "genus": self.genus,
            "north_meridians": curves(self.north_meridians),
            "south_meridians": curves(self.south_meridians),
            "intersection": self.intersection,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    def complexes(self):
        """(surface, north handlebody, south handlebody) covers over the refined base."""
        base = self.split.base
        surface = small_cover_complex(base, self.split.restrict_disk())
        north = small_cover_complex(base, self.split.restrict_solid(0))
        south = small_cover_complex(base, self.split.restrict_solid(1))
        return surface, north, south

    def meridian_report(self) -> dict:
        """Closedness, vanishing in the own handlebody, nonvanishing on F, and span ranks."""
        surface, north, south = self.complexes()
        F = ImageTest(surface.boundaries[1])
        out = {}
        for name, curves, handle in (("north", self.north_meridians, north), ("south", self.south_meridians, south)):
            H = ImageTest(handle.boundaries[1])
            chains = [c.chain(surface) for c in curves]
            closed = all(_is_cycle(surface, ch) for ch in chains)
            out[name] = {
                "count": len(curves),
                "closed": closed,
                "bound_in_handlebody": all(H.contains(c.chain(handle)) for c in curves),
                "nonzero_on_surface": all(not F.contains(ch, integral=False) for ch in chains),
                "span_rank": F.quotient_rank(chains),
            }
        return out


def _is_cycle(cx, chain: dict) -> bool:
    acc: dict = defaultdict(int)
    for (r, col), v in cx.boundaries[0].entries.items():
        if col in chain:
            acc[r] += v * chain[col]
    return not any(acc.values())


def heegaard_data(b: Bipyramitoid) -> HeegaardData:
    if not b.is_simple():
        raise NotSimple("both halves must be simple")
    ncode, scode = code_of(b.north), code_of(b.south)
    split = build_split_base(b.north, ncode.arcs, b.south, scode.arcs, b.offset, b.flip)
    surface_sizes = [0, 0, 0]
    closure = split.restrict_disk()
    masks = split.base.mirror_masks
    for d in range(3):
        surface_sizes[d] = sum(2 ** (split.n - bin(masks[d][c]).count("1")) for c in closure[d])
    chi = surface_sizes[0] - surface_sizes[1] + surface_sizes[2]
    north = lift_family(split, 0)
    south = lift_family(split, 1)
    crossing_vertices = {split.vertex_index(v) for v in split.arrangement.crossings}
    where = defaultdict(list)
    for j, cv in enumerate(south):
        for v in cv.vertices:
            if v[0] in crossing_vertices:
                where[v].append(j)
    matrix = [[0] * len(south) for _ in north]
    for i, cv in enumerate(north):
        for v in cv.vertices:
            for j in where.get(v, ()):
                matrix[i][j] += 1
    return HeegaardData((2 - chi) // 2, north, south, matrix, split)


def intersection_formula(b: Bipyramitoid) -> list[list[int]]:
    """Independent count: (arc crossings in the disk) x |gA intersect hB|."""
    hd_n, hd_s = code_of(b.north), code_of(b.south)
    n = b.n
    inv = {j: i for i, j in enumerate(b.sigma)}
    split = build_split_base(b.north, hd_n.arcs, b.south, hd_s.arcs, b.offset, b.flip)
    crosses = defaultdict(int)
    for ka, kb in split.arrangement.crossings.values():
        crosses[(ka, kb) if ka[0] == 0 else (kb, ka)] += 1
    rows = []
    narcs = [tuple(a) for a in hd_n.arcs]
    sarcs = [(inv[a], inv[b_]) for a, b_ in hd_s.arcs]
    ncurves = [(k, g) for k, (a, c) in enumerate(narcs) for g in range(1 << n) if not g & ((1 << a) | (1 << c))]
    scurves = [(k, g) for k, (a, c) in enumerate(sarcs) for g in range(1 << n) if not g & ((1 << a) | (1 << c))]
    for k, g in ncurves:
        a, c = narcs[k]
        A = {g, g ^ (1 << a), g ^ (1 << c), g ^ (1 << a) ^ (1 << c)}
        row = []
        for l, h in scurves:
            x = crosses.get(((0, k), (1, l)), 0)
            if not x:
                row.append(0)
                continue
            p, q = sarcs[l]
            B = {h, h ^ (1 << p), h ^ (1 << q), h ^ (1 << p) ^ (1 << q)}
            row.append(x * len(A & B))
        rows.append(row)
    return rows


def pi1_presentation(b: Bipyramitoid):
    from .coxeter import bipyramitoid_pi1_presentation

    inv = {j: i for i, j in enumerate(b.sigma)}
    ncode = code_of(b.north)
    scode = code_of(b.south)
    south_in_north = Code(b.n, tuple(tuple(sorted((inv[a], inv[c]))) for a, c in scode.arcs))
    return bipyramitoid_pi1_presentation(ncode, south_in_north)


# --- trapezohedra -----------------------------------------------------------


def trapezohedron_polyhedron(n: int) -> tuple[CombinatorialPolyhedron, list[tuple[int, int]]]:
    """Kites around two apices, and the zigzag equator through the middle edges.

    Apex N = 0, apex S = 1, upper vertices u_i = 2 + i, lower d_i = 2 + n + i.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    N, S = 0, 1

    def u(i):
        return 2 + i % n

    def d(i):
        return 2 + n + i % n

    faces = []
    for i in range(n):
        faces.append((N, u(i), d(i), u(i + 1)))
        faces.append((S, d(i), u(i + 1), d(i + 1)))
    poly = orient(CombinatorialPolyhedron.from_faces(faces))
    equator = []
    for i in range(n):
        equator.append(edge_key(u(i), d(i)))
        equator.append(edge_key(d(i), u(i + 1)))
    return poly, equator


def trapezohedron(n: int) -> Bipyramitoid:
    poly, equator = trapezohedron_polyhedron(n)
    return split_bipyramitoid(poly, equator)


def triangle_positions(pyr: Pyramitoid) -> list[int]:
    return [k for k, f in enumerate(pyr.lateral) if len(pyr.polyhedron.faces[f]) == 3]


def smoothing_codes(n: int, zeros_parity: int) -> list[Code]:
    """2n-codes whose label zeros sit exactly at the positions of one parity."""
    from .enumeration import enumerate_triangulations

    m = 2 * n
    out = []
    for t in enumerate_triangulations(m):
        zeros = [k for k, b in enumerate(t.degrees()) if b == 0]
        if zeros == list(range(zeros_parity, m, 2)):
            out.append(Code(m, t.key()))
    return out


def smooth_trapezohedron(n: int, north_code: Code | None = None, south_code: Code | None = None) -> Bipyramitoid:
    """Replace both apices of the n-trapezohedron by the given 2n-codes.

    Each code is read in its own half's basis indexing and must put its
    triangles exactly where that half of the trapezohedron has triangles.
    Defaults to the first admissible code on each side.
    """
    tr = trapezohedron(n)
    halves = []
    for half, code in ((tr.north, north_code), (tr.south, south_code)):
        tri = triangle_positions(half)
        if code is None:
            options = smoothing_codes(n, tri[0] % 2) if tri else []
            if not options:
                raise CodeAlternationError("no admissible code")
            code = options[0]
        if code.n != 2 * n or not code.is_valid():
            raise CodeAlternationError("code is not a valid 2n-code")
        t = Triangulation(code.n, frozenset(code.arcs))
        zeros = [k for k, b in enumerate(t.degrees()) if b == 0]
        if zeros != tri:
            raise CodeAlternationError(f"code triangles {zeros} do not sit on the alternating positions {tri}")
        halves.append(pyramitoid_from_triangulation(t))
    return glue_bipyramitoid(halves[0], halves[1], tr.offset, tr.flip)

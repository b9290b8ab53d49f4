"""Triangulations of the n-gon and their dictionary with simple pyramitoids.

Polygon vertex i stands for lateral face i of the pyramitoid (equivalently
basis edge i), a polygon side (i, i+1) for the leaf at the basis vertex
shared by faces i and i+1, a diagonal for a core edge, and a triangle for a
core vertex.  Lateral face i then has 3 + (number of diagonals at i) sides.
"""
from __future__ import annotations

import json
import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .polytope import (
    CombinatorialPolyhedron,
    Label,
    NotSimple,
    Pyramitoid,
    as_pyramitoid,
    is_simple,
    validate_label,
)

ENUMERATION_CAP = 14

Diagonal = tuple[int, int]


class EnumerationCapExceeded(ValueError):
    pass


def _check_cap(n: int, cap: int | None = None) -> None:
    cap = ENUMERATION_CAP if cap is None else cap
    if n < 3:
        raise ValueError("n must be at least 3")
    if n > cap:
        raise EnumerationCapExceeded(f"n={n} exceeds the enumeration cap {cap}")


def _crosses(a: Diagonal, b: Diagonal) -> bool:
    (p, q), (r, s) = a, b
    if len({p, q, r, s}) < 4:
        return False
    return (p < r < q) != (p < s < q)


@dataclass(frozen=True)
class Triangulation:
    n: int
    diagonals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "diagonals", frozenset(tuple(sorted(d)) for d in self.diagonals))

    def is_valid(self) -> bool:
        n = self.n
        ds = sorted(self.diagonals)
        if len(ds) != n - 3:
            return False
        for a, b in ds:
            if not (0 <= a < b < n) or b - a in (1, n - 1):
                return False
        return not any(_crosses(ds[i], ds[j]) for i in range(len(ds)) for j in range(i + 1, len(ds)))

    def degree(self, v: int) -> int:
        return sum(1 for d in self.diagonals if v in d)

    def degrees(self) -> tuple[int, ...]:
        return tuple(self.degree(v) for v in range(self.n))

    def rotate(self, r: int) -> Triangulation:
        n = self.n
        return Triangulation(n, frozenset(((a + r) % n, (b + r) % n) for a, b in self.diagonals))

    def reflect(self) -> Triangulation:
        n = self.n
        return Triangulation(n, frozenset(((-a) % n, (-b) % n) for a, b in self.diagonals))

    def key(self) -> tuple:
        return tuple(sorted(self.diagonals))

    def word(self) -> tuple:
        """Incidence word: for each vertex, the sorted forward offsets of its diagonals."""
        n = self.n
        out = []
        for v in range(n):
            offs = sorted((w - v) % n for d in self.diagonals if v in d for w in d if w != v)
            out.append(tuple(offs))
        return tuple(out)

    def canonical(self, dihedral: bool = False) -> Triangulation:
        variants = [self.rotate(r) for r in range(self.n)]
        if dihedral:
            ref = self.reflect()
            variants += [ref.rotate(r) for r in range(self.n)]
        return min(variants, key=lambda t: t.word())

    def stabilizer_size(self) -> int:
        return sum(1 for r in range(self.n) if self.rotate(r).diagonals == self.diagonals)

    def triangles(self) -> list[tuple[int, int, int]]:
        """The n-2 triangles, each as a sorted vertex triple."""
        n = self.n
        adj = {v: {(v + 1) % n, (v - 1) % n} for v in range(n)}
        for a, b in self.diagonals:
            adj[a].add(b)
            adj[b].add(a)
        # no diagonal enters a 3-cycle of chords, so every 3-cycle is a face
        tris = set()
        for a in range(n):
            for b in adj[a]:
                for c in adj[a] & adj[b]:
                    tris.add(tuple(sorted((a, b, c))))
        return sorted(tris)


@lru_cache(maxsize=None)
def _triangulations_of(vertices: tuple[int, ...]) -> tuple[frozenset, ...]:
    """All triangulations of the convex polygon on ``vertices`` (in cyclic order)."""
    if len(vertices) < 4:
        return (frozenset(),)
    first, last = vertices[0], vertices[-1]
    out = []
    for k in range(1, len(vertices) - 1):
        apex = vertices[k]
        left = _triangulations_of(vertices[: k + 1])
        right = _triangulations_of(vertices[k:])
        new = set()
        if k > 1:
            new.add((first, apex))
        if k < len(vertices) - 2:
            new.add((apex, last))
        for a in left:
            for b in right:
                out.append(frozenset(new) | a | b)
    return tuple(out)


def catalan_count(n: int) -> int:
    """C_{n-2}, the number of triangulations of a convex n-gon."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return comb(2 * n - 4, n - 2) // (n - 1)


def enumerate_triangulations(n: int, cap: int | None = None) -> list[Triangulation]:
    _check_cap(n, cap)
    ts = [Triangulation(n, d) for d in _triangulations_of(tuple(range(n)))]
    return sorted(ts, key=lambda t: t.key())


def rotation_classes(n: int, dihedral: bool = False, cap: int | None = None) -> list[list[Triangulation]]:
    """Orbits of triangulations, each sorted, ordered by canonical representative."""
    orbits: dict[tuple, list[Triangulation]] = {}
    for t in enumerate_triangulations(n, cap):
        orbits.setdefault(t.canonical(dihedral).word(), []).append(t)
    return [sorted(orbits[k], key=lambda t: t.key()) for k in sorted(orbits)]


def count_rotation_classes(n: int, dihedral: bool = False, cap: int | None = None) -> int:
    return len(rotation_classes(n, dihedral, cap))


def orbit_profile(n: int, cap: int | None = None) -> list[int]:
    return sorted((len(o) for o in rotation_classes(n, cap=cap)), reverse=True)


def burnside_count(n: int, cap: int | None = None) -> int:
    """Orbit count by Burnside's lemma: average number of fixed triangulations per rotation."""
    ts = enumerate_triangulations(n, cap)
    fixed = sum(1 for r in range(n) for t in ts if t.rotate(r).diagonals == t.diagonals)
    if fixed % n:
        raise ArithmeticError("Burnside average is not an integer")
    return fixed // n


def orbit_size_check(n: int, cap: int | None = None) -> bool:
    """Sum over class representatives of n / |stabilizer| equals the Catalan count."""
    reps = [o[0] for o in rotation_classes(n, cap=cap)]
    return sum(n // t.stabilizer_size() for t in reps) == catalan_count(n)


def count_rotation_classes_formula(n: int) -> int:
    """Closed count of rotation classes: Burnside with the rotation subgroups that can fix a triangulation.

    Only the identity, the half turn (n even) and the third turns (n divisible by 3)
    can fix a triangulation of an n-gon.
    """
    total = catalan_count(n)
    if n % 2 == 0 and n >= 4:
        # fixed by the half turn: a diameter (n/2 choices) plus a triangulated half
        total += (n // 2) * catalan_count(n // 2 + 1)
    if n % 3 == 0:
        # fixed by either third turn: a central triangle (n/3 choices) plus a triangulated cap
        total += 2 * (n // 3) * catalan_count(n // 3 + 1)
    return total // n


# --- pyramitoids from triangulations ----------------------------------------


def pyramitoid_from_triangulation(t: Triangulation) -> Pyramitoid:
    """The simple n-pyramitoid whose core tree is dual to ``t``.

    Basis vertices are 0..n-1 with basis vertex i shared by lateral faces i
    and i+1; core vertices are n + (triangle index).
    """
    if not t.is_valid():
        raise ValueError("not a triangulation")
    n = t.n
    tris = t.triangles()
    tri_id = {tri: n + k for k, tri in enumerate(tris)}
    faces = [tuple([n - 1] + list(range(n - 1)))]
    for i in range(n):
        fan = [tri for tri in tris if i in tri]

        def reach(tri, i=i):
            return max((x - i) % n for x in tri)

        fan.sort(key=reach, reverse=True)
        faces.append(tuple([i, (i - 1) % n] + [tri_id[tri] for tri in fan]))
    poly = CombinatorialPolyhedron.from_faces(faces)
    return as_pyramitoid(poly, 0, start=n - 1)


def triangulation_of(pyr: Pyramitoid) -> Triangulation:
    if not is_simple(pyr.polyhedron):
        raise NotSimple("triangulations are read off simple pyramitoids")
    poly = pyr.polyhedron
    pos = {f: k for k, f in enumerate(pyr.lateral)}
    diags = set()
    for e in pyr.core_tree:
        a, b = poly.edge_faces[e]
        diags.add(tuple(sorted((pos[a], pos[b]))))
    return Triangulation(pyr.n, frozenset(diags))


# --- codes ------------------------------------------------------------------


@dataclass(frozen=True)
class Code:
    """n-3 arcs in the basis polygon; arc (i, j) joins basis edges i and j."""

    n: int
    arcs: tuple[tuple[int, int], ...]

    def is_valid(self) -> bool:
        n = self.n
        if len(self.arcs) != n - 3 or len(set(self.arcs)) != len(self.arcs):
            return False
        for a, b in self.arcs:
            if not (0 <= a < n and 0 <= b < n) or (b - a) % n in (0, 1, n - 1):
                return False
        arcs = [tuple(sorted(x)) for x in self.arcs]
        return not any(_crosses(arcs[i], arcs[j]) for i in range(len(arcs)) for j in range(i + 1, len(arcs)))

    def triangulation(self) -> Triangulation:
        return Triangulation(self.n, frozenset(self.arcs))

    def endpoints_on(self, edge: int) -> list[int]:
        return [k for k, arc in enumerate(self.arcs) if edge in arc]

    def to_dict(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in self.arcs]}


def code_of(pyr: Pyramitoid) -> Code:
    t = triangulation_of(pyr)
    return Code(t.n, t.key())


def code_from_triangulation(t: Triangulation) -> Code:
    return Code(t.n, t.key())


# --- cell types -------------------------------------------------------------


@dataclass(frozen=True)
class CellTypeStats:
    m1: int
    m2: int
    m3: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.m1, self.m2, self.m3)


_TYPE_NAMES = {1: "I", 2: "II", 3: "III"}


def code_cells(pyr: Pyramitoid) -> tuple[list[tuple[tuple[int, int, int], str]], CellTypeStats]:
    """Cells of the basis cut by the code, with types from the core-vertex valence."""
    t = triangulation_of(pyr)
    if t.n < 4:
        raise ValueError("code cells need n >= 4")
    cells = []
    for tri in t.triangles():
        valence = sum(1 for k in range(3) if tuple(sorted((tri[k], tri[(k + 1) % 3]))) in t.diagonals)
        cells.append((tri, _TYPE_NAMES[valence]))
    counts = Counter(kind for _, kind in cells)
    return cells, CellTypeStats(counts["I"], counts["II"], counts["III"])


def ball_decomposition_counts(pyr: Pyramitoid) -> tuple[int, int | None, int | None]:
    """(balls_full, balls_reduced, meridians_reduced); the reduced counts need n > 4."""
    n = pyr.n
    _, stats = code_cells(pyr)
    full = (n - 2) * 2 ** (n - 3)
    if n <= 4:
        return full, None, None
    m1 = stats.m1
    return full, (n - 2 - m1) * 2 ** (n - 3), 2 ** (n - 3) * (2 * n - 6 - m1)


# --- classes, smoothing, realizability --------------------------------------


def class_representatives(n: int, dihedral: bool = False, cap: int | None = None) -> list[Pyramitoid]:
    return [pyramitoid_from_triangulation(orbit[0].canonical(dihedral)) for orbit in rotation_classes(n, dihedral, cap)]


def smoothing_options(n: int, cap: int | None = None) -> list[Pyramitoid]:
    """One simple n-pyramitoid per rotation class: the ways to smooth a valence-n vertex."""
    if n < 4:
        raise ValueError("smoothing needs valence n >= 4")
    return class_representatives(n, cap=cap)


def label_of_triangulation(t: Triangulation) -> Label:
    return Label(t.degrees())


@lru_cache(maxsize=None)
def realizable_labels(n: int) -> frozenset:
    return frozenset(label_of_triangulation(t).canonical().entries for t in enumerate_triangulations(n))


def label_realizability(label) -> bool:
    entries = tuple(label)
    n = len(entries)
    _check_cap(n)
    if not validate_label(entries, n):
        return False
    return Label(entries).canonical().entries in realizable_labels(n)


def enumerate_valid_labels(n: int) -> list[tuple[int, ...]]:
    """Canonical cyclic labels passing the four necessary conditions."""
    out = set()

    def rec(prefix, remaining):
        if len(prefix) == n:
            if remaining == 0 and validate_label(prefix, n):
                out.add(Label(tuple(prefix)).canonical().entries)
            return
        for b in range(0, min(n - 3, remaining) + 1):
            rec(prefix + [b], remaining - b)

    rec([], 2 * (n - 3))
    return sorted(out)


def realizability_report(n: int) -> dict:
    """Labels passing the necessary conditions versus those realized by a pyramitoid."""
    valid = enumerate_valid_labels(n)
    real = realizable_labels(n)
    return {
        "n": n,
        "valid": len(valid),
        "realized": len(real),
        "unrealized": [list(b) for b in valid if b not in real],
    }


def has_consecutive_010(label) -> bool:
    b = tuple(label)
    n = len(b)
    return any(b[k] == 0 and b[(k + 1) % n] == 1 and b[(k + 2) % n] == 0 for k in range(n))


# --- exports and cache ------------------------------------------------------


def enumeration_row(n: int) -> dict:
    return {
        "n": n,
        "catalan": catalan_count(n),
        "N_n": count_rotation_classes(n),
        "orbit_sizes": orbit_profile(n),
    }


def class_records(n: int, dihedral: bool = False) -> list[dict]:
    out = []
    for k, orbit in enumerate(rotation_classes(n, dihedral)):
        rep = orbit[0].canonical(dihedral)
        pyr = pyramitoid_from_triangulation(rep)
        _, stats = code_cells(pyr) if n >= 4 else (None, None)
        out.append(
            {
                "class": k,
                "label": str(label_of_triangulation(rep).canonical()),
                "orbit_size": len(orbit),
                "code": [list(a) for a in code_of(pyr).arcs],
                "cell_types": list(stats.as_tuple()) if stats else None,
            }
        )
    return out


def cached_class_records(n: int, dihedral: bool = False, cache_dir: str | os.PathLike | None = None) -> list[dict]:
    """class_records memoized as JSON under COVERS_CACHE_DIR (when set)."""
    cache_dir = cache_dir or os.environ.get("COVERS_CACHE_DIR")
    if not cache_dir:
        return class_records(n, dihedral)
    path = Path(cache_dir) / f"classes_n{n}{'_dihedral' if dihedral else ''}.json"
    if path.exists():
        return json.loads(path.read_text(encoding="utf-8"))
    records = class_records(n, dihedral)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(records), encoding="utf-8")
    return records


def iter_all_pyramitoids(ns: Iterable[int]) -> Iterable[Pyramitoid]:
    for n in ns:
        yield from class_representatives(n)

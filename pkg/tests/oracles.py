"""Independent constructions used as test oracles."""
from __future__ import annotations

from covers.polytope import CombinatorialPolyhedron, edge_key, orient


def pentagonal_prism(offset: int):
    top = [offset + k for k in range(5)]
    bot = [offset + 5 + k for k in range(5)]
    faces = [tuple(top), tuple(reversed(bot))]
    for k in range(5):
        faces.append((top[(k + 1) % 5], top[k], bot[k], bot[(k + 1) % 5]))
    return faces


def gyrobipentaprism() -> CombinatorialPolyhedron:
    """Two right-angled pentagonal prisms stacked on a square face with a quarter turn.

    Faces meeting across an edge of the glued square make a straight angle and
    merge; the square's corners then have valence two and disappear.
    """
    A, B = pentagonal_prism(0), pentagonal_prism(10)
    qa, qb = A[2], B[2]  # lateral squares
    # face to face with a quarter turn: reverse and shift the second square
    rb = list(reversed(qb))
    phi = {rb[(k + 1) % 4]: qa[k] for k in range(4)}
    A_rest = [f for f in A if f != qa]
    B_rest = [tuple(phi.get(v, v) for v in f) for f in B if f != qb]
    corners = set(qa)
    merged = []
    used = set()
    for k in range(4):
        e = edge_key(qa[k], qa[(k + 1) % 4])
        fa = next(f for f in A_rest if e in {edge_key(f[i], f[(i + 1) % len(f)]) for i in range(len(f))})
        fb = next(f for f in B_rest if e in {edge_key(f[i], f[(i + 1) % len(f)]) for i in range(len(f))})
        used.update((fa, fb))

        def path(f):
            i = next(i for i in range(len(f)) if edge_key(f[i], f[(i + 1) % len(f)]) == e)
            rot = list(f[i + 2 :]) + list(f[: i])
            return [v for v in rot if v not in corners]

        pa, pb = path(fa), path(fb)
        merged.append(tuple(pa + pb))
    others = [tuple(v for v in f if v not in corners) for f in A_rest + B_rest if f not in used]
    poly = CombinatorialPolyhedron.from_faces(merged + others)
    return orient(poly).relabeled()


# --- triangulations by recursive splitting ------------------------------------


def brute_triangulations(n: int) -> set:
    """Every triangulation of the n-gon as a frozenset of diagonals.

    Backtracks over the diagonal list, keeping pairwise non-crossing choices
    of the maximal size n-3; unrelated to the library's recursive splitter.
    """
    diags = [(a, b) for a in range(n) for b in range(a + 2, n) if (a, b) != (0, n - 1)]

    def cross(d, e):
        (p, q), (r, s) = d, e
        return len({p, q, r, s}) == 4 and ((p < r < q) != (p < s < q))

    out = set()
    chosen: list = []

    def rec(k):
        if len(chosen) == n - 3:
            out.add(frozenset(chosen))
            return
        if len(chosen) + len(diags) - k < n - 3:
            return
        d = diags[k]
        if not any(cross(d, e) for e in chosen):
            chosen.append(d)
            rec(k + 1)
            chosen.pop()
        rec(k + 1)

    rec(0)
    return out


def brute_rotation_orbits(n: int) -> list[int]:
    """Orbit sizes of the rotation action, by explicit orbit collection."""
    todo = set(brute_triangulations(n))
    sizes = []
    while todo:
        t = todo.pop()
        orbit = {t}
        for r in range(1, n):
            orbit.add(frozenset(tuple(sorted(((a + r) % n, (b + r) % n))) for a, b in t))
        todo -= orbit
        sizes.append(len(orbit))
    return sorted(sizes, reverse=True)


# --- homology of reflection covers from nerves ------------------------------


def _reduced_betti(vertices, simplices_by_dim) -> list[int]:
    """Reduced rational Betti numbers of a simplicial complex (degrees -1..2)."""
    import numpy as np

    chains = [[()]] + [sorted(s) for s in simplices_by_dim]  # dim -1, 0, 1, 2
    ranks = []
    for d in range(1, len(chains)):
        rows = {s: i for i, s in enumerate(chains[d - 1])}
        M = np.zeros((len(chains[d - 1]), len(chains[d])))
        for j, s in enumerate(chains[d]):
            for k in range(len(s)):
                face = s[:k] + s[k + 1 :]
                M[rows[face], j] = (-1) ** k
        ranks.append(int(np.linalg.matrix_rank(M)) if M.size else 0)
    ranks = [0] + ranks + [0]
    return [len(chains[d]) - ranks[d] - ranks[d + 1] for d in range(len(chains))]


def nerve_betti(poly: CombinatorialPolyhedron, mirrors) -> list[int]:
    """Betti numbers of the reflection cover: sum over mirror subsets J of the
    reduced homology of the union of the faces in J, shifted up by one.

    The union of a set of faces of a simple polyhedron deformation retracts to
    its nerve (faces as vertices, shared edges, shared vertices).
    """
    from itertools import combinations

    mirrors = sorted(mirrors)
    face_sets = {f: set(poly.faces[f]) for f in mirrors}
    betti = [0, 0, 0, 0]
    for size in range(len(mirrors) + 1):
        for J in combinations(mirrors, size):
            verts = [(f,) for f in J]
            edges = [(a, b) for a, b in combinations(J, 2) if len(face_sets[a] & face_sets[b]) >= 2]
            tris = [(a, b, c) for a, b, c in combinations(J, 3) if face_sets[a] & face_sets[b] & face_sets[c]]
            red = _reduced_betti(J, [verts, edges, tris])
            for d, r in enumerate(red):  # reduced degree d-1 lands in degree d
                if r:
                    betti[d] += r
    return betti

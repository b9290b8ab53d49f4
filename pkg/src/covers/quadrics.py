"""Linear systems cutting out the regular polygon and pyramid, and their quadric lifts.

Floating point lives here only. Edge j of the polygon has inward normal at
angle -2*pi*j/n, so edges run clockwise like the basis edges elsewhere.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

TOL = 1e-9


@dataclass(frozen=True)
class AffineMap:
    """r_j = a_j x + b_j y + c_j, with c_j scaled by (1 - z) when lifted."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    lifted: bool = False

    @property
    def domain_dim(self) -> int:
        return 3 if self.lifted else 2

    @property
    def codomain_dim(self) -> int:
        return len(self.a) + (1 if self.lifted else 0)

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, y = pts[:, 0:1], pts[:, 1:2]
        if not self.lifted:
            out = x * self.a + y * self.b + self.c
        else:
            z = pts[:, 2:3]
            out = np.hstack([x * self.a + y * self.b + (1.0 - z) * self.c, z])
        return out[0] if np.ndim(points) == 1 else out

    def perturbed(self, eps: float, seed: int = 0) -> AffineMap:
        rng = np.random.default_rng(seed)
        n = len(self.a)
        return AffineMap(self.a + eps * rng.standard_normal(n), self.b, self.c, self.lifted)


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray  # rows = equations, cols = r variables
    rhs: np.ndarray

    @property
    def n_equations(self) -> int:
        return self.matrix.shape[0]

    def residual(self, r) -> np.ndarray:
        r = np.atleast_2d(np.asarray(r, dtype=float))
        return np.abs(r @ self.matrix.T - self.rhs).max(axis=1)

    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.matrix))

    def to_text(self) -> str:
        rows = []
        for row, value in zip(self.matrix, self.rhs):
            rows.append(" ".join(f"{v: .17g}" for v in row) + " | " + f"{value:.17g}")
        return "\n".join(rows) + "\n"


def tau(n: int) -> float:
    return math.cos(2 * math.pi / n)


def _angles(n: int) -> np.ndarray:
    return -2 * np.pi * np.arange(n) / n


def polygon_support_lines(n: int) -> AffineMap:
    if n < 3:
        raise ValueError("a polygon needs n >= 3")
    th = _angles(n)
    return AffineMap(-np.cos(th) / n, -np.sin(th) / n, np.full(n, 1.0 / n))


def polygon_vertices(n: int) -> np.ndarray:
    """Vertex k sits between edges k-1 and k."""
    th = _angles(n) + np.pi / n
    rad = 1.0 / math.cos(math.pi / n)
    return rad * np.column_stack([np.cos(th), np.sin(th)])


def _relations(n: int, cols: int) -> np.ndarray:
    k = 2 * tau(n) + 1
    rows = np.zeros((n - 3, cols))
    for i in range(n - 3):
        rows[i, i] += 1
        rows[i, i + 3] -= 1
        rows[i, i + 2] += k
        rows[i, i + 1] -= k
    return rows


def polygon_system(n: int) -> LinearSystem:
    if n < 4:
        raise ValueError("the relations need n >= 4")
    m = np.vstack([np.ones((1, n)), _relations(n, n)])
    rhs = np.zeros(n - 2)
    rhs[0] = 1.0
    return LinearSystem(m, rhs)


def pyramid_system(n: int) -> tuple[LinearSystem, AffineMap]:
    """Sum over n+1 coordinates, same relations on the lateral ones, apex at (0, 0, 1)."""
    if n < 4:
        raise ValueError("the relations need n >= 4")
    m = np.vstack([np.ones((1, n + 1)), _relations(n, n + 1)])
    rhs = np.zeros(n - 2)
    rhs[0] = 1.0
    phi = polygon_support_lines(n)
    return LinearSystem(m, rhs), AffineMap(phi.a, phi.b, phi.c, lifted=True)


def sample_polygon(n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points: pick a fan triangle around the centre, then a point inside it."""
    verts = polygon_vertices(n)
    k = rng.integers(0, n, size=samples)
    u, v = rng.random(samples), rng.random(samples)
    flip = u + v > 1
    u[flip], v[flip] = 1 - u[flip], 1 - v[flip]
    p, q = verts[k], verts[(k + 1) % n]
    return u[:, None] * p + v[:, None] * q


def sample_pyramid(n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    # slice area goes like (1 - z)^2
    z = 1.0 - rng.random(samples) ** (1.0 / 3.0)
    xy = sample_polygon(n, samples, rng) * (1.0 - z)[:, None]
    return np.column_stack([xy, z])


def _quadric_residual(system: LinearSystem, r: np.ndarray, rng: np.random.Generator) -> float:
    signs = rng.choice([-1.0, 1.0], size=r.shape)
    x = signs * np.sqrt(np.clip(r, 0.0, None))
    return float(system.residual(x * x).max())


def verify_embedding(n: int, samples: int = 100, tol: float = TOL, seed: int = 0,
                     phi: AffineMap | None = None, points=None) -> float:
    """Largest residual of the linear system and of its quadric lift over sampled points.

    n = 3 has no relations, so only the sum equation is checked there.
    Negative coordinates (points outside the polygon) count toward the residual.
    """
    rng = np.random.default_rng(seed)
    phi = phi or polygon_support_lines(n)
    pts = sample_polygon(n, samples, rng) if points is None else np.atleast_2d(np.asarray(points, float))
    if n >= 4:
        system = polygon_system(n)
    else:
        system = LinearSystem(np.ones((1, n)), np.ones(1))
    r = phi(pts)
    lin = float(system.residual(r).max())
    quad = _quadric_residual(system, r, rng)
    outside = float(max(0.0, -r.min()))
    return max(lin, quad, outside)


def verify_pyramid_embedding(n: int, samples: int = 100, seed: int = 0, psi: AffineMap | None = None,
                             points=None) -> float:
    rng = np.random.default_rng(seed)
    system, default = pyramid_system(n)
    psi = psi or default
    pts = sample_pyramid(n, samples, rng) if points is None else np.atleast_2d(np.asarray(points, float))
    r = psi(pts)
    lin = float(system.residual(r).max())
    quad = _quadric_residual(system, r, rng)
    return max(lin, quad, float(max(0.0, -r.min())))


@dataclass(frozen=True)
class ResidualRow:
    n: int
    samples: int
    seed: int
    polygon: float
    pyramid: float | None
    tol: float

    @property
    def ok(self) -> bool:
        return self.polygon < self.tol and (self.pyramid is None or self.pyramid < self.tol)

    def to_dict(self) -> dict:
        return {"n": self.n, "samples": self.samples, "seed": self.seed, "polygon_residual": self.polygon,
                "pyramid_residual": self.pyramid, "tol": self.tol, "ok": self.ok}


def residual_table(ns, samples: int = 100, seed: int = 0, tol: float = TOL) -> list[ResidualRow]:
    out = []
    for n in ns:
        pyr = verify_pyramid_embedding(n, samples, seed) if n >= 4 else None
        out.append(ResidualRow(n, samples, seed, verify_embedding(n, samples, tol, seed), pyr, tol))
    return out


def residuals_csv(rows: list[ResidualRow]) -> str:
    buf = io.StringIO()
    fields = ["n", "samples", "seed", "polygon_residual", "pyramid_residual", "tol", "ok"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        d = row.to_dict()
        d["polygon_residual"] = f"{row.polygon:.3e}"
        d["pyramid_residual"] = "" if row.pyramid is None else f"{row.pyramid:.3e}"
        w.writerow(d)
    return buf.getvalue()

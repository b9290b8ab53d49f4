"""Exact integral homology: sparse Smith normal form and GF(2) ranks."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence

CERTIFY_MAX_COLS = 200
_SPOT_PRIME = (1 << 61) - 1


class ChainComplexInvalid(ValueError):
    pass


@dataclass(frozen=True)
class IntegerMatrix:
    """Sparse integer matrix; ``entries`` maps (row, col) to a nonzero int."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                raise ValueError("stored zero")

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, int]]) -> IntegerMatrix:
        acc: dict = {}
        for r, c, v in triplets:
            acc[(r, c)] = acc.get((r, c), 0) + int(v)
        return cls(rows, cols, {k: v for k, v in acc.items() if v})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> IntegerMatrix:
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(r, c): int(v) for r, row in enumerate(data) for c, v in enumerate(row) if v})

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        return cls(n, n, {(k, k): 1 for k in range(n)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def triplets(self) -> list[tuple[int, int, int]]:
        return [(r, c, v) for (r, c), v in sorted(self.entries.items())]

    def row_dicts(self) -> list[dict]:
        out: list[dict] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        right = other.row_dicts()
        acc: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in right[k].items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return IntegerMatrix(self.rows, other.cols, {key: x for key, x in acc.items() if x})

    def is_zero(self) -> bool:
        return not self.entries

    def to_text(self) -> str:
        """Triplet text: a ``rows cols`` header then one ``row col value`` per line."""
        lines = [f"{self.rows} {self.cols}"]
        lines += [f"{r} {c} {v}" for r, c, v in self.triplets()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> IntegerMatrix:
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip() and not ln.startswith("#")]
        rows, cols = int(lines[0][0]), int(lines[0][1])
        return cls.from_triplets(rows, cols, ((int(a), int(b), int(c)) for a, b, c in lines[1:]))


@dataclass(frozen=True)
class SNFResult:
    factors: tuple[int, ...]
    U: IntegerMatrix | None = None
    V: IntegerMatrix | None = None
    U_inv: IntegerMatrix | None = None
    V_inv: IntegerMatrix | None = None
    certified: bool | None = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def _add_scaled(target: dict, source: dict, k: int) -> None:
    for key, v in source.items():
        x = target.get(key, 0) + k * v
        if x:
            target[key] = x
        else:
            target.pop(key, None)


class _Reducer:
    """Working state for the elimination.  Tracks U, V and their inverses on request."""

    def __init__(self, M: IntegerMatrix, track: bool):
        self.m, self.n = M.rows, M.cols
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for (r, c), v in M.entries.items():
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, set()).add(r)
        self.track = track
        if track:
            self.U = [{r: 1} for r in range(self.m)]
            self.U_inv_cols = [{r: 1} for r in range(self.m)]
            self.V_cols = [{c: 1} for c in range(self.n)]
            self.V_inv_rows = [{c: 1} for c in range(self.n)]
        self.pivots: list[tuple[int, int, int]] = []

    def row_add(self, t: int, p: int, k: int) -> None:
        """row_t += k * row_p"""
        if k == 0:
            return
        row_t = self.rows.setdefault(t, {})
        for c, v in self.rows[p].items():
            x = row_t.get(c, 0) + k * v
            if x:
                if c not in row_t:
                    self.cols.setdefault(c, set()).add(t)
                row_t[c] = x
            else:
                del row_t[c]
                self.cols[c].discard(t)
        if not row_t:
            del self.rows[t]
        if self.track:
            _add_scaled(self.U[t], self.U[p], k)
            _add_scaled(self.U_inv_cols[p], self.U_inv_cols[t], -k)

    def col_add(self, j: int, c: int, k: int) -> None:
        """col_j += k * col_c"""
        if k == 0:
            return
        for r in list(self.cols.get(c, ())):
            row = self.rows[r]
            x = row.get(j, 0) + k * row[c]
            if x:
                if j not in row:
                    self.cols.setdefault(j, set()).add(r)
                row[j] = x
            else:
                del row[j]
                self.cols[j].discard(r)
        if self.track:
            self.col_add_transforms(j, c, k)

    def col_add_transforms(self, j: int, c: int, k: int) -> None:
        _add_scaled(self.V_cols[j], self.V_cols[c], k)
        _add_scaled(self.V_inv_rows[c], self.V_inv_rows[j], -k)

    def isolate(self, p: int, c: int) -> None:
        v = self.rows[p][c]
        if self.track:
            for j, w in self.rows[p].items():
                if j != c:
                    # v is a unit here and column c is zero off row p
                    self.col_add_transforms(j, c, -w * v)
        for j in self.rows[p]:
            self.cols[j].discard(p)
            if not self.cols[j]:
                del self.cols[j]
        del self.rows[p]
        self.cols.pop(c, None)
        self.pivots.append((p, c, v))

    def unit_phase(self) -> None:
        heap = [(len(rs), c) for c, rs in self.cols.items()]
        heapq.heapify(heap)
        while heap:
            size, c = heapq.heappop(heap)
            rs = self.cols.get(c)
            if not rs:
                continue
            if len(rs) != size:
                heapq.heappush(heap, (len(rs), c))
                continue
            best = None
            for r in rs:
                if abs(self.rows[r][c]) == 1:
                    cost = len(self.rows[r])
                    if best is None or cost < best[0] or (cost == best[0] and r < best[1]):
                        best = (cost, r)
            if best is None:
                continue
            p = best[1]
            v = self.rows[p][c]
            for t in sorted(rs - {p}):
                self.row_add(t, p, -self.rows[t][c] * v)
            touched = [j for j in self.rows[p] if j != c]
            self.isolate(p, c)
            for j in touched:
                if j in self.cols:
                    heapq.heappush(heap, (len(self.cols[j]), j))

    def general_phase(self) -> None:
        while self.rows:
            _, p, c = min(
                (abs(v), r, col) for r, row in self.rows.items() for col, v in row.items()
            )
            while True:
                v = self.rows[p][c]
                moved = False
                for t in sorted(self.cols[c] - {p}):
                    q = self.rows[t][c] // v
                    self.row_add(t, p, -q)
                rem = [(abs(self.rows[t][c]), t) for t in self.cols[c] if t != p]
                if rem:
                    p = min(rem)[1]
                    continue
                for j in sorted(set(self.rows[p]) - {c}):
                    q = self.rows[p][j] // v
                    self.col_add(j, c, -q)
                rem = [(abs(w), j) for j, w in self.rows[p].items() if j != c]
                if rem:
                    c = min(rem)[1]
                    continue
                for t, row in sorted(self.rows.items()):
                    if t != p and any(w % v for w in row.values()):
                        self.row_add(p, t, 1)
                        moved = True
                        break
                if moved:
                    continue
                self.isolate(p, c)
                break


def smith_normal_form(M: IntegerMatrix, transforms: bool | None = None) -> SNFResult:
    """Invariant factors of ``M`` (nonzero diagonal entries, divisibility chain).

    With ``transforms`` (default: when M has at most CERTIFY_MAX_COLS columns)
    the unimodular U, V with U M V = D are built together with their inverses
    and the identities are checked exactly; ``certified`` reports the outcome.
    Larger matrices get rank spot checks modulo 2 and a large prime instead.
    """
    if transforms is None:
        transforms = M.cols <= CERTIFY_MAX_COLS
    red = _Reducer(M, transforms)
    red.unit_phase()
    red.general_phase()

    # each pivot divides every later one, so the isolation order is already a chain
    pivots = sorted(enumerate(red.pivots), key=lambda t: (abs(t[1][2]), t[0]))
    pivots = [pv for _, pv in pivots]
    factors = tuple(abs(v) for _, _, v in pivots)
    if not transforms:
        ok = _spot_check(M, factors)
        return SNFResult(factors, certified=ok)

    for p, _, v in pivots:
        if v < 0:
            red.U[p] = {k: -x for k, x in red.U[p].items()}
            red.U_inv_cols[p] = {k: -x for k, x in red.U_inv_cols[p].items()}
    row_order = [p for p, _, _ in pivots]
    row_order += sorted(set(range(M.rows)) - set(row_order))
    col_order = [c for _, c, _ in pivots]
    col_order += sorted(set(range(M.cols)) - set(col_order))
    U = IntegerMatrix(M.rows, M.rows, {(i, k): x for i, r in enumerate(row_order) for k, x in red.U[r].items()})
    U_inv = IntegerMatrix(
        M.rows, M.rows, {(k, i): x for i, r in enumerate(row_order) for k, x in red.U_inv_cols[r].items()}
    )
    V = IntegerMatrix(M.cols, M.cols, {(k, i): x for i, c in enumerate(col_order) for k, x in red.V_cols[c].items()})
    V_inv = IntegerMatrix(
        M.cols, M.cols, {(i, k): x for i, c in enumerate(col_order) for k, x in red.V_inv_rows[c].items()}
    )
    D = IntegerMatrix(M.rows, M.cols, {(k, k): d for k, d in enumerate(factors)})
    ok = (
        (U @ M) @ V == D
        and U @ U_inv == IntegerMatrix.identity(M.rows)
        and V @ V_inv == IntegerMatrix.identity(M.cols)
    )
    return SNFResult(factors, U, V, U_inv, V_inv, ok)


def _spot_check(M: IntegerMatrix, factors: Sequence[int]) -> bool:
    if rank_mod2(M) != sum(1 for d in factors if d % 2):
        return False
    return rank_mod_p(M, _SPOT_PRIME) == sum(1 for d in factors if d % _SPOT_PRIME)


def rank_mod2(M: IntegerMatrix) -> int:
    rows: dict[int, int] = {}
    for (r, c), v in M.entries.items():
        if v & 1:
            rows[r] = rows.get(r, 0) ^ (1 << c)
    basis: dict[int, int] = {}
    for bits in rows.values():
        while bits:
            lead = bits.bit_length() - 1
            if lead in basis:
                bits ^= basis[lead]
            else:
                basis[lead] = bits
                break
    return len(basis)


def rank_mod_p(M: IntegerMatrix, p: int) -> int:
    rows = [dict() for _ in range(M.rows)]
    for (r, c), v in M.entries.items():
        if v % p:
            rows[r][c] = v % p
    basis: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            piv = basis.get(lead)
            if piv is None:
                inv = pow(row[lead], -1, p)
                basis[lead] = {k: x * inv % p for k, x in row.items()}
                break
            k = row[lead]
            for c, x in piv.items():
                y = (row.get(c, 0) - k * x) % p
                if y:
                    row[c] = y
                else:
                    row.pop(c, None)
    return len(basis)


def rank_over_q(M: IntegerMatrix) -> int:
    return smith_normal_form(M, transforms=False).rank


# --- homology ---------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = self.torsion
        if any(d <= 1 for d in t) or any(t[k + 1] % t[k] for k in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain of factors > 1")

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def chain_is_valid(boundaries: Sequence[IntegerMatrix]) -> bool:
    for k in range(len(boundaries) - 1):
        if not (boundaries[k] @ boundaries[k + 1]).is_zero():
            return False
    return True


def chain_homology(sizes: Sequence[int], boundaries: Sequence[IntegerMatrix], check: bool = True) -> list[HomologyGroup]:
    """Homology of C_top -> ... -> C_0.  ``boundaries[k]`` is the map C_{k+1} -> C_k."""
    top = len(sizes) - 1
    if len(boundaries) != top:
        raise ChainComplexInvalid("need one boundary matrix per positive degree")
    for k, B in enumerate(boundaries):
        if (B.rows, B.cols) != (sizes[k], sizes[k + 1]):
            raise ChainComplexInvalid(f"boundary {k + 1} has shape {B.rows}x{B.cols}")
    if check and not chain_is_valid(boundaries):
        raise ChainComplexInvalid("boundary of boundary is not zero")
    snf = [smith_normal_form(B, transforms=False) for B in boundaries]
    ranks = [0] + [s.rank for s in snf] + [0]
    out = []
    for k in range(top + 1):
        torsion = snf[k].torsion if k < top else ()
        out.append(HomologyGroup(sizes[k] - ranks[k] - ranks[k + 1], torsion))
    return out


def chain_betti_mod2(sizes: Sequence[int], boundaries: Sequence[IntegerMatrix]) -> list[int]:
    ranks = [0] + [rank_mod2(B) for B in boundaries] + [0]
    return [sizes[k] - ranks[k] - ranks[k + 1] for k in range(len(sizes))]


def homology(cx) -> list[HomologyGroup]:
    """Integral homology of a cell complex exposing ``sizes`` and ``boundaries``."""
    return chain_homology(cx.sizes, cx.boundaries)


def betti_mod2(cx) -> list[int]:
    return chain_betti_mod2(cx.sizes, cx.boundaries)


def mod2_from_integral(groups: Sequence[HomologyGroup]) -> list[int]:
    """Universal coefficients: dim H_k(Z/2) = beta_k + t_k + t_{k-1}, t = even factors."""
    even = [sum(1 for d in g.torsion if d % 2 == 0) for g in groups]
    return [g.free_rank + even[k] + (even[k - 1] if k else 0) for k, g in enumerate(groups)]


class ImageTest:
    """Membership in the column span of B, decided from its Smith form U B V = D.

    x lies in the integral image iff (U x)_k is divisible by d_k for k < rank
    and vanishes beyond; rationally only the vanishing matters.
    """

    def __init__(self, B: IntegerMatrix):
        self.B = B
        self.snf = smith_normal_form(B, transforms=True)
        self._u_rows = self.snf.U.row_dicts()

    def coordinates(self, vector: dict) -> list[int]:
        return [sum(x * vector.get(k, 0) for k, x in row.items()) for row in self._u_rows]

    def contains(self, vector: dict, integral: bool = True) -> bool:
        y = self.coordinates(vector)
        r = self.snf.rank
        if any(y[r:]):
            return False
        return not integral or all(y[k] % d == 0 for k, d in enumerate(self.snf.factors))

    def quotient_rank(self, vectors: Sequence[dict]) -> int:
        """Rank of the span of ``vectors`` in Q^rows / colspan(B)."""
        r = self.snf.rank
        tail = [self.coordinates(v)[r:] for v in vectors]
        if not tail or not tail[0]:
            return 0
        return rank_over_q(IntegerMatrix.from_dense(tail))


def in_boundary_span(B: IntegerMatrix, vector: dict, integral: bool = True) -> bool:
    return ImageTest(B).contains(vector, integral)


def span_rank(B: IntegerMatrix, vectors: Sequence[dict]) -> int:
    return ImageTest(B).quotient_rank(vectors)


# --- closed forms -----------------------------------------------------------


def b_n_formula(n: int) -> int:
    if n == 3:
        return 0
    if n < 4:
        raise ValueError("b_n is defined for n >= 3")
    return (n - 4) * 2 ** (n - 3) + 1


def b_n_recurrence(n: int) -> int:
    b = 0
    for k in range(4, n + 1):
        b = 2 * b + 2 ** (k - 3) - 1
    return b


def b_n_recurrence_check(limit: int = 24) -> bool:
    return all(b_n_formula(n) == b_n_recurrence(n) for n in range(4, limit + 1))


def surface_euler_formula(n: int) -> int:
    return n * 2 ** (n - 2) - n * 2 ** (n - 1) + 2**n


def surface_genus_formula(n: int) -> int:
    if n < 3:
        raise ValueError("n must be at least 3")
    chi = surface_euler_formula(n)
    return (2 - chi) // 2

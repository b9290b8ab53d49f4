"""Acceptance checks shared by the CLI and the test suite.

Each check returns a CheckResult; ``run_checks`` runs them in criterion order.
Level "fast" keeps cover computations to n <= 6, "full" goes to n <= 7.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from . import enumeration as en
from .arrangement import curve_is_closed, lift_arcs, lift_family, refined_dome, refined_dome_cover
from .fixtures import load_fixture
from .homology import (
    CERTIFY_MAX_COLS,
    b_n_formula,
    b_n_recurrence_check,
    chain_is_valid,
    smith_normal_form,
)
from .polytope import contract_triangle, contraction_rule, is_simple, isomorphic, tetrahedron
from .quadrics import TOL, verify_embedding, verify_pyramid_embedding
from .small_cover import boundary_subcomplex, core_graph, cover_of_polyhedron, dome_cover, full_cover
from .surgery import heegaard_data, smooth_trapezohedron, split_bipyramitoid, z_homology_two_ways

LEVELS = ("fast", "full")


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion:2d} {self.name}: {self.detail} ({self.seconds:.2f}s)"

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


def _betti(groups) -> tuple:
    return tuple(g.free_rank for g in groups)


def _torsion_free(groups) -> bool:
    return all(not g.torsion for g in groups)


def _max_n(level: str) -> int:
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    return 6 if level == "fast" else 7


# --- criteria ---------------------------------------------------------------


def check_counting(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    counts = [en.count_rotation_classes(n) for n in range(4, 9)]
    catalan = [len(en.enumerate_triangulations(n)) for n in range(4, 11)]
    formula = [en.catalan_count(n) for n in range(4, 11)]
    dt = time.perf_counter() - t
    ok = counts == [1, 1, 4, 6, 19] and catalan == formula == [2, 5, 14, 42, 132, 429, 1430] and dt < 5
    return CheckResult(1, "counting", ok, f"N_4..N_8={counts} catalan={catalan}", dt)


def check_orbit_profile(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    prof = sorted(en.orbit_profile(6), reverse=True)
    return CheckResult(2, "orbit profile n=6", prof == [6, 3, 3, 2], f"{prof}", time.perf_counter() - t)


def check_b_n(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    ok = b_n_recurrence_check(24) and b_n_formula(8) == 129
    return CheckResult(3, "b_n", ok, f"closed form = recurrence for n<=24, b_8={b_n_formula(8)}", time.perf_counter() - t)


def check_full_covers(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    bad, seen = [], 0
    pyrs = [p for n in range(4, _max_n(level) + 1) for p in en.class_representatives(n)]
    for p in pyrs:
        cx = full_cover(p)
        h = cx.homology()
        b = b_n_formula(p.n)
        seen += 1
        if _betti(h) != (1, b, b, 1) or not _torsion_free(h) or cx.euler_characteristic != 0:
            bad.append(str(p.label))
    detail = f"{seen} classes up to n={max(p.n for p in pyrs)}" + (f", failing {bad}" if bad else "")
    return CheckResult(4, "full-mirror covers", not bad, detail, time.perf_counter() - t)


def check_handlebodies(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    bad, seen = [], 0
    for n in range(4, _max_n(level) + 1):
        b = b_n_formula(n)
        for p in en.class_representatives(n):
            seen += 1
            cx = dome_cover(p)
            h = cx.homology()
            surf = boundary_subcomplex(cx)
            genus = (2 - surf.euler_characteristic) // 2
            core = core_graph(cx, p.core_tree).first_betti()
            ok = (
                h[1].free_rank == b
                and not h[1].torsion
                and h[2].free_rank == 0
                and not h[2].torsion
                and genus == b
                and core == b
            )
            if not ok:
                bad.append(str(p.label))
    detail = f"{seen} dome covers n=4..{_max_n(level)}" + (f", failing {bad}" if bad else "")
    return CheckResult(5, "handlebodies", not bad, detail, time.perf_counter() - t)


CLASSICAL = {"tetrahedron": (1, 0, 0, 1), "prism": (1, 1, 1, 1), "cube": (1, 3, 3, 1)}


def check_classical(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    got = {}
    ok = True
    for name, want in CLASSICAL.items():
        h = cover_of_polyhedron(load_fixture(name).polyhedron, "all").homology()
        got[name] = _betti(h)
        ok = ok and got[name] == want and _torsion_free(h)
    return CheckResult(6, "classical manifolds", ok, f"{got}", time.perf_counter() - t)


def gluing_cases() -> dict:
    out = {}
    for name in ("tetrahedron", "prism", "cube"):
        fx = load_fixture(name)
        out[name] = split_bipyramitoid(fx.polyhedron, fx.equator)
    out["gyrobipentaprism"] = smooth_trapezohedron(4)
    return out


def check_gluing(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    got, ok = {}, True
    cases = gluing_cases()
    ok = isomorphic(cases["gyrobipentaprism"].glued, load_fixture("gyrobipentaprism").polyhedron)
    for name, b in cases.items():
        direct, glued, agree = z_homology_two_ways(b)
        got[name] = _betti(direct)
        ok = ok and agree and direct == glued
    return CheckResult(7, "gluing consistency", ok, f"{got}", time.perf_counter() - t)


def check_code_statistics(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    bad, seen, closed_checked = [], 0, 0
    for n in range(4, 9):
        for p in en.class_representatives(n):
            seen += 1
            cells, st = en.code_cells(p)
            code = en.code_of(p)
            split = refined_dome(p, code)
            curves = lift_family(split, 0)
            full, reduced, mer_reduced = en.ball_decomposition_counts(p)
            ok = st.m2 == n - 2 * st.m1 and st.m3 == st.m1 - 2
            ok = ok and len(curves) == (n - 3) * 2 ** (n - 2) and _four_copies(split, curves)
            ok = ok and full == len(cells) * 2 ** (n - 3) == (n - 2) * 2 ** (n - 3)
            if reduced is not None:
                ok = ok and reduced == (len(cells) - st.m1) * 2 ** (n - 3)
                ok = ok and mer_reduced == len(curves) - st.m1 * 2 ** (n - 3)
            if n <= _max_n(level):
                _, surface, _ = refined_dome_cover(p, code)
                cs = lift_arcs(surface, code)
                ok = ok and all(curve_is_closed(c, surface) for c in cs)
                closed_checked += 1
            if not ok:
                bad.append(str(p.label))
    detail = f"{seen} classes n=4..8, closedness on {closed_checked}" + (f", failing {bad}" if bad else "")
    return CheckResult(8, "code statistics", not bad, detail, time.perf_counter() - t)


def _four_copies(split, curves) -> bool:
    """Each curve is four copies of its arc, and the copies over one arc tile the group."""
    used: dict = {}
    for c in curves:
        a, b = split.arrangement.families[c.arc[0]][c.arc[1]]
        steps = len(split.arrangement.arc_paths[c.arc]) - 1
        if len(c.edges) != 4 * steps:
            return False
        sa, sb = 1 << a, 1 << b
        tiles = used.setdefault(c.arc, set())
        for h in (c.coset, c.coset ^ sa, c.coset ^ sb, c.coset ^ sa ^ sb):
            if h in tiles:
                return False
            tiles.add(h)
    return all(len(t) == 2**split.n for t in used.values())


def soundness_corpus(level: str = "fast") -> list:
    """Every kind of complex the package builds, at desk scale."""
    cxs = []
    for name in ("tetrahedron", "prism", "cube", "pyramid_5", "book_5", "y5", "gyrobipentaprism"):
        fx = load_fixture(name)
        cxs.append(cover_of_polyhedron(fx.polyhedron, "all"))
    for n in range(4, _max_n(level) + 1):
        for p in en.class_representatives(n):
            cxs.append(full_cover(p))
            dome = dome_cover(p)
            cxs += [dome, boundary_subcomplex(dome)]
            whole, surface, _ = refined_dome_cover(p, en.code_of(p))
            cxs += [whole, surface]
    for name, b in gluing_cases().items():
        if name != "gyrobipentaprism":
            cxs += list(heegaard_data(b).complexes())
    return cxs


def check_soundness(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    cxs = soundness_corpus(level)
    dd = all(chain_is_valid(cx.boundaries) for cx in cxs)
    certified = spot = 0
    ok = dd
    for cx in cxs:
        for B in cx.boundaries:
            if B.cols <= CERTIFY_MAX_COLS:
                r = smith_normal_form(B, transforms=True)
                certified += 1
            else:
                r = smith_normal_form(B, transforms=False)
                spot += 1
            ok = ok and bool(r.certified)
    detail = f"{len(cxs)} complexes, dd=0: {dd}, {certified} certified, {spot} spot-checked"
    return CheckResult(9, "chain-complex soundness", ok, detail, time.perf_counter() - t)


def check_quadrics(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    worst = 0.0
    for n in range(3, 13):
        worst = max(worst, verify_embedding(n, 100, TOL, seed=n))
        if n >= 4:
            worst = max(worst, verify_pyramid_embedding(n, 100, seed=n))
    dt = time.perf_counter() - t
    return CheckResult(10, "quadrics", worst < TOL and dt < 1, f"max residual {worst:.2e}", dt)


def reduction_path(pyr) -> tuple[bool, int]:
    """Contract triangles down to the tetrahedron, checking every legal step on the way.

    Returns (ok, number of contractions checked).
    """
    checked = 0
    while pyr.n > 3:
        b = pyr.label.entries
        n = pyr.n
        legal = [i for i in range(n) if b[i] == 0 and b[(i - 1) % n] > 0 and b[(i + 1) % n] > 0]
        if not legal:
            return False, checked
        nxt = None
        for i in legal:
            q = contract_triangle(pyr, i)
            if q.label.entries != contraction_rule(b, i) or not is_simple(q.polyhedron):
                return False, checked
            checked += 1
            nxt = nxt or q
        pyr = nxt
    return isomorphic(pyr.polyhedron, tetrahedron()), checked


def check_reachability(level: str = "fast") -> CheckResult:
    t = time.perf_counter()
    bad, steps, seen = [], 0, 0
    for n in range(4, 9):
        for p in en.class_representatives(n):
            seen += 1
            ok, k = reduction_path(p)
            steps += k
            if not ok:
                bad.append(str(p.label))
    detail = f"{seen} classes, {steps} contractions checked" + (f", failing {bad}" if bad else "")
    return CheckResult(11, "reachability", not bad, detail, time.perf_counter() - t)


CHECKS: list[Callable[[str], CheckResult]] = [
    check_counting,
    check_orbit_profile,
    check_b_n,
    check_full_covers,
    check_handlebodies,
    check_classical,
    check_gluing,
    check_code_statistics,
    check_soundness,
    check_quadrics,
    check_reachability,
]


def run_checks(level: str = "fast", only=None) -> list[CheckResult]:
    _max_n(level)
    out = []
    for k, fn in enumerate(CHECKS, start=1):
        if only and k not in only:
            continue
        try:
            out.append(fn(level))
        except Exception as exc:  # report, don't abort the suite
            out.append(CheckResult(k, fn.__name__.removeprefix("check_"), False, f"{type(exc).__name__}: {exc}"))
    return out

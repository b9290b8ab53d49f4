"""Command line front end: ``covers enumerate|cover|bipyramitoid|quadrics|verify``."""
from __future__ import annotations

import csv
import io
import json
import sys
import time

import click

from . import enumeration as en
from .coxeter import coxeter_graph, defining_graph, dome_graph
from .fixtures import load_fixture
from .homology import b_n_formula
from .polytope import PolytopeError, Pyramitoid, as_pyramitoid, validate_polyhedron
from .quadrics import TOL, polygon_system, residual_table, residuals_csv
from .small_cover import boundary_subcomplex, cover_of_polyhedron, dome_cover
from .surgery import (
    CodeAlternationError,
    glue_bipyramitoid,
    heegaard_data,
    pi1_presentation,
    smooth_trapezohedron,
    split_bipyramitoid,
    trapezohedron,
    z_homology_two_ways,
)
from .verify import LEVELS, run_checks

FORMATS = click.Choice(["table", "json", "csv"])


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v) if v and isinstance(v[0], (list, tuple)) else "(" + ",".join(map(str, v)) + ")"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return "" if v is None else str(v)


def emit(report: dict, fmt: str) -> None:
    """Print a report: summary lines plus an optional table of rows."""
    rows = report.get("rows") or []
    if fmt == "json":
        click.echo(json.dumps(report, indent=2))
        return
    if fmt == "csv":
        data = rows or [report["summary"]]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(data[0]), lineterminator="\n")
        w.writeheader()
        for r in data:
            w.writerow({k: _cell(v) for k, v in r.items()})
        click.echo(buf.getvalue(), nl=False)
        return
    click.echo(f"# covers {report['command']} " + " ".join(f"{k}={v}" for k, v in report["parameters"].items()))
    for k, v in report["summary"].items():
        click.echo(f"{k}: {_cell(v)}")
    if rows:
        keys = list(rows[0])
        table = [[_cell(r[k]) for k in keys] for r in rows]
        width = [max(len(k), *(len(t[i]) for t in table)) for i, k in enumerate(keys)]
        click.echo("  ".join(k.ljust(w) for k, w in zip(keys, width)).rstrip())
        for t in table:
            click.echo("  ".join(c.ljust(w) for c, w in zip(t, width)).rstrip())
    for name, ok in report.get("checks", {}).items():
        click.echo(f"[{'PASS' if ok else 'FAIL'}] {name}")


def _finish(ctx, report: dict, fmt: str, started: float) -> None:
    if ctx.obj.get("timing"):
        report["wall_time"] = round(time.perf_counter() - started, 3)
    emit(report, fmt)
    if not all(report.get("checks", {}).values()):
        ctx.exit(1)


def _fail(msg: str, code: int = 2):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _fixture(ctx, name):
    try:
        fx = load_fixture(name, ctx.obj.get("fixtures_dir"))
    except FileNotFoundError:
        _fail(f"no fixture {name!r}")
    except (ValueError, KeyError, TypeError) as exc:
        _fail(f"cannot parse fixture {name!r}: {exc}")
    diags = validate_polyhedron(fx.polyhedron)
    if diags:
        for d in diags:
            click.echo(f"invalid: {d.code}: {d.message} {list(d.cells)}", err=True)
        _fail(f"fixture {name!r} failed validation", 1)
    return fx


def _groups(hs) -> list[str]:
    return [str(h) for h in hs]


@click.group()
@click.option("--fixtures-dir", type=click.Path(file_okay=False), default=None, help="Directory of polyhedron JSON files.")
@click.option("--timing", is_flag=True, help="Add wall time to reports (output is then not reproducible).")
@click.pass_context
def main(ctx, fixtures_dir, timing):
    """Pyramitoids, small covers and their homology."""
    ctx.ensure_object(dict)
    ctx.obj.update(fixtures_dir=fixtures_dir, timing=timing)


@main.command("enumerate")
@click.argument("n", type=int)
@click.option("--dihedral", is_flag=True, help="Count up to reflection as well as rotation.")
@click.option("--format", "fmt", type=FORMATS, default="table")
@click.pass_context
def cmd_enumerate(ctx, n, dihedral, fmt):
    """Rotation classes of simple n-pyramitoids with labels and codes."""
    started = time.perf_counter()
    if n < 4:
        _fail("n must be at least 4")
    try:
        records = en.cached_class_records(n, dihedral)
        count = en.count_rotation_classes(n, dihedral)
        profile = sorted(en.orbit_profile(n), reverse=True)
    except en.EnumerationCapExceeded as exc:
        _fail(str(exc))
    rows = [
        {
            "class": r["class"],
            "label": r["label"],
            "orbit": r["orbit_size"],
            "code": r["code"],
            "m1_m2_m3": r["cell_types"],
        }
        for r in sorted(records, key=lambda r: r["class"])
    ]
    report = {
        "command": "enumerate",
        "parameters": {"n": n, "dihedral": dihedral},
        "summary": {
            "catalan": en.catalan_count(n),
            "N_n": count,
            "orbit_profile": profile,
            "closed_form": en.count_rotation_classes_formula(n) if not dihedral else None,
        },
        "rows": rows,
        "checks": {"count matches closed form": dihedral or count == en.count_rotation_classes_formula(n)},
    }
    _finish(ctx, report, fmt, started)


@main.command("cover")
@click.argument("fixture")
@click.option("--mirrors", type=click.Choice(["all", "dome"]), default="all")
@click.option("--homology/--no-homology", default=True)
@click.option("--dot", type=click.Path(dir_okay=False, writable=True), default=None, help="Write the defining graph here.")
@click.option("--coxeter-dot", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--format", "fmt", type=FORMATS, default="table")
@click.pass_context
def cmd_cover(ctx, fixture, mirrors, homology, dot, coxeter_dot, fmt):
    """Small cover of a fixture with every face (or the dome) as mirrors."""
    started = time.perf_counter()
    fx = _fixture(ctx, fixture)
    checks = {}
    summary = {"faces": len(fx.polyhedron.faces)}
    try:
        if mirrors == "all":
            cx = cover_of_polyhedron(fx.polyhedron, "all")
            graph = defining_graph(fx.polyhedron, range(len(fx.polyhedron.faces)))
        else:
            pyr = fx.pyramitoid()
            cx = dome_cover(pyr)
            graph = dome_graph(pyr)
            summary["label"] = str(pyr.label.canonical())
            surf = boundary_subcomplex(cx)
            summary["boundary_genus"] = (2 - surf.euler_characteristic) // 2
            checks["boundary genus = b_n"] = summary["boundary_genus"] == b_n_formula(pyr.n)
    except PolytopeError as exc:
        _fail(f"{fixture}: {exc}", 1)
    summary["cells"] = cx.sizes
    summary["euler_characteristic"] = cx.euler_characteristic
    if homology:
        hs = cx.homology()
        summary["homology"] = _groups(hs)
        summary["betti"] = [h.free_rank for h in hs]
        summary["torsion_free"] = all(not h.torsion for h in hs)
    if dot:
        with open(dot, "w", encoding="utf-8") as fh:
            fh.write(graph.to_dot(fx.name.replace("-", "_")))
    if coxeter_dot:
        with open(coxeter_dot, "w", encoding="utf-8") as fh:
            fh.write(coxeter_graph(graph).to_dot(fx.name.replace("-", "_") + "_coxeter"))
    report = {
        "command": "cover",
        "parameters": {"fixture": fx.name, "mirrors": mirrors},
        "summary": summary,
        "checks": checks,
    }
    _finish(ctx, report, fmt, started)


def _pyr_from(ctx, name) -> Pyramitoid:
    fx = _fixture(ctx, name)
    try:
        return fx.pyramitoid()
    except (PolytopeError, IndexError) as exc:
        _fail(f"{name} is not a pyramitoid: {exc}", 1)


@main.command("bipyramitoid")
@click.argument("north", required=False)
@click.argument("south", required=False)
@click.option("--offset", type=int, default=0, help="South lateral j meets north lateral offset - j (mod n).")
@click.option("--flip/--no-flip", default=True, help="Glue basis to basis (default) or the mirrored south.")
@click.option("--trapezohedron", "trap", type=int, default=None,
              help="Use the n-trapezohedron instead, smoothed at both apices when n >= 4.")
@click.option("--heegaard/--no-heegaard", default=True)
@click.option("--meridians", is_flag=True, help="Check meridian curves (slower).")
@click.option("--pi1", is_flag=True, help="Print the group presentation.")
@click.option("--format", "fmt", type=FORMATS, default="table")
@click.pass_context
def cmd_bipyramitoid(ctx, north, south, offset, flip, trap, heegaard, meridians, pi1, fmt):
    """Glue two pyramitoids (or split a fixture with an equator) and compare homology."""
    started = time.perf_counter()
    try:
        if trap is not None:
            if trap < 3:
                _fail("a trapezohedron needs n >= 3")
            b = trapezohedron(trap)
            smoothed = not b.is_simple()
            if smoothed:
                b = smooth_trapezohedron(trap)
            params = {"trapezohedron": trap, "smoothed": smoothed}
        elif north and south:
            b = glue_bipyramitoid(_pyr_from(ctx, north), _pyr_from(ctx, south), offset, flip)
            params = {"north": north, "south": south, "offset": offset, "flip": flip}
        elif north:
            fx = _fixture(ctx, north)
            if fx.equator is None:
                _fail(f"{north} has no equator; give a south half")
            b = split_bipyramitoid(fx.polyhedron, fx.equator)
            params = {"fixture": fx.name}
        else:
            _fail("give NORTH [SOUTH] or --trapezohedron N")
    except (PolytopeError, CodeAlternationError) as exc:
        _fail(str(exc), 1)
    if not b.is_simple():
        _fail("the glued halves are not simple; small covers need simple polytopes", 1)
    direct, glued, agree = z_homology_two_ways(b)
    summary = {
        "n": b.n,
        "north_label": str(b.north.label.canonical()),
        "south_label": str(b.south.label.canonical()),
        "faces": len(b.glued.faces),
        "simple": b.is_simple(),
        "homology": _groups(direct),
        "homology_from_halves": _groups(glued),
    }
    checks = {"homology agrees": agree}
    if heegaard and b.is_simple():
        hd = heegaard_data(b)
        summary["genus"] = hd.genus
        summary["meridians"] = [len(hd.north_meridians), len(hd.south_meridians)]
        summary["intersection_total"] = sum(map(sum, hd.intersection))
        checks["genus = 2^(n-3)(n-4)+1"] = hd.genus == b_n_formula(b.n)
        if meridians:
            rep = hd.meridian_report()
            for side, r in rep.items():
                checks[f"{side} meridians closed"] = r["closed"]
                checks[f"{side} meridians bound"] = r["bound_in_handlebody"]
                checks[f"{side} meridians nonzero on surface"] = r["nonzero_on_surface"]
                summary[f"{side}_span_rank"] = r["span_rank"]
    report = {"command": "bipyramitoid", "parameters": params, "summary": summary, "checks": checks}
    if pi1:
        report["pi1"] = pi1_presentation(b).to_text()
    _finish(ctx, report, fmt, started)
    if pi1 and fmt == "table":
        click.echo(report["pi1"], nl=False)


@main.command("quadrics")
@click.option("--n", "ns", type=int, multiple=True, help="Polygon sizes (default 3..12).")
@click.option("--samples", type=int, default=100)
@click.option("--seed", type=int, default=0)
@click.option("--tol", type=float, default=TOL)
@click.option("--system", "show_system", is_flag=True, help="Print the linear system matrix for each n >= 4.")
@click.option("--format", "fmt", type=FORMATS, default="table")
@click.pass_context
def cmd_quadrics(ctx, ns, samples, seed, tol, show_system, fmt):
    """Residuals of the polygon and pyramid systems on seeded samples."""
    started = time.perf_counter()
    ns = sorted(set(ns)) or list(range(3, 13))
    if min(ns) < 3:
        _fail("n must be at least 3")
    rows = residual_table(ns, samples, seed, tol)
    if fmt == "csv":
        click.echo(residuals_csv(rows), nl=False)
        if not all(r.ok for r in rows):
            ctx.exit(1)
        return
    report = {
        "command": "quadrics",
        "parameters": {"n": ns, "samples": samples, "seed": seed, "tol": tol},
        "summary": {"max_residual": f"{max(max(r.polygon, r.pyramid or 0.0) for r in rows):.3e}"},
        "rows": [
            {
                "n": r.n,
                "polygon_residual": f"{r.polygon:.3e}",
                "pyramid_residual": "" if r.pyramid is None else f"{r.pyramid:.3e}",
                "ok": r.ok,
            }
            for r in rows
        ],
        "checks": {f"n={r.n} residual < tol": r.ok for r in rows},
    }
    if show_system:
        report["systems"] = {str(n): polygon_system(n).to_text() for n in ns if n >= 4}
    _finish(ctx, report, fmt, started)
    if show_system and fmt == "table":
        for n, text in report["systems"].items():
            click.echo(f"# system n={n}")
            click.echo(text, nl=False)


@main.command("verify")
@click.option("--level", type=click.Choice(LEVELS), default="fast")
@click.option("--only", type=int, multiple=True, help="Run only these criterion numbers.")
@click.option("--format", "fmt", type=FORMATS, default="table")
@click.pass_context
def cmd_verify(ctx, level, only, fmt):
    """Run the acceptance checks; exit 1 if any fails."""
    started = time.perf_counter()
    results = run_checks(level, set(only) or None)
    timing = ctx.obj.get("timing")
    rows = []
    for r in results:
        d = r.to_dict()
        if not timing:
            d.pop("seconds")
        rows.append(d)
    report = {
        "command": "verify",
        "parameters": {"level": level},
        "summary": {"passed": sum(r.passed for r in results), "total": len(results)},
        "rows": rows,
        "checks": {},
    }
    if fmt == "table":
        report["rows"] = []
        report["checks"] = {f"{r.criterion:2d} {r.name}: {r.detail}": r.passed for r in results}
    _finish(ctx, report, fmt, started)
    if not all(r.passed for r in results):
        ctx.exit(1)


if __name__ == "__main__":
    main()

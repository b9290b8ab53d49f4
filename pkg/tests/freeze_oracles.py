"""Regenerate tests/data/derived.json from the oracles (python3 tests/freeze_oracles.py)."""
from __future__ import annotations

import json
from pathlib import Path

from covers.enumeration import class_representatives
from covers.fixtures import list_fixtures, load_fixture
from covers.polytope import is_simple

from oracles import brute_rotation_orbits, brute_triangulations, nerve_betti

OUT = Path(__file__).with_name("data") / "derived.json"


def build() -> dict:
    data: dict = {"triangulations": {}, "orbits": {}, "full_cover_betti": {}, "dome_betti": {}}
    for n in range(4, 13):
        data["triangulations"][str(n)] = len(brute_triangulations(n))
    for n in range(4, 11):
        data["orbits"][str(n)] = brute_rotation_orbits(n)
    for name in list_fixtures():
        poly = load_fixture(name).polyhedron
        if not is_simple(poly):  # the nerve model needs simple vertices
            continue
        data["full_cover_betti"][name] = nerve_betti(poly, range(len(poly.faces)))
    for n in range(4, 8):
        for p in class_representatives(n):
            key = str(p.label.canonical())
            data["full_cover_betti"][key] = nerve_betti(p.polyhedron, range(len(p.polyhedron.faces)))
            data["dome_betti"][key] = nerve_betti(p.polyhedron, p.lateral)
    return data


if __name__ == "__main__":
    OUT.parent.mkdir(exist_ok=True)
    OUT.write_text(json.dumps(build(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")

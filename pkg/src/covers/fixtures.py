"""Shipped polyhedron fixtures (JSON under the fixtures directory)."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .polytope import CombinatorialPolyhedron, as_pyramitoid, find_bases

FIXTURE_DIR = Path(__file__).with_name("fixtures")


@dataclass(frozen=True)
class Fixture:
    name: str
    polyhedron: CombinatorialPolyhedron
    basis: int | None = None
    equator: tuple | None = None

    def pyramitoid(self):
        basis = self.basis if self.basis is not None else find_bases(self.polyhedron)[0]
        return as_pyramitoid(self.polyhedron, basis)


def fixture_dir(override: str | os.PathLike | None = None) -> Path:
    return Path(override) if override else FIXTURE_DIR


def list_fixtures(directory=None) -> list[str]:
    return sorted(p.stem for p in fixture_dir(directory).glob("*.json"))


def load_fixture(name_or_path, directory=None) -> Fixture:
    path = Path(name_or_path)
    if not path.suffix:
        path = fixture_dir(directory) / f"{name_or_path}.json"
    data = json.loads(path.read_text(encoding="utf-8"))
    poly = CombinatorialPolyhedron.from_dict(data)
    equator = tuple(tuple(e) for e in data["equator"]) if "equator" in data else None
    return Fixture(data.get("name", path.stem), poly, data.get("basis"), equator)

import csv
import io
import json

import pytest
from click.testing import CliRunner

from covers.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return go


def test_enumerate_table(run):
    res = run("enumerate", 6)
    assert res.exit_code == 0
    assert "N_n: 4" in res.output
    assert "orbit_profile: (6,3,3,2)" in res.output
    assert "(020202)" in res.output and "[PASS]" in res.output


def test_enumerate_json(run):
    data = json.loads(run("enumerate", 8, "--format", "json").output)
    assert data["summary"]["N_n"] == 19
    assert data["summary"]["catalan"] == 132
    assert all(data["checks"].values())


def test_enumerate_csv(run):
    rows = list(csv.reader(io.StringIO(run("enumerate", 5, "--format", "csv").output)))
    assert len(rows) >= 2


def test_enumerate_cap(run):
    res = run("enumerate", 20)
    assert res.exit_code == 2
    assert "cap" in res.output


def test_cover_tetrahedron(run):
    res = run("cover", "tetrahedron")
    assert res.exit_code == 0
    assert "homology: (Z,0,0,Z)" in res.output


def test_cover_dome_json(run):
    data = json.loads(run("cover", "y5", "--mirrors", "dome", "--format", "json").output)
    assert data["summary"]["betti"] == [1, 5, 0, 0]
    assert data["summary"]["boundary_genus"] == 5


def test_cover_writes_dot(run, tmp_path):
    path = tmp_path / "g.dot"
    res = run("cover", "cube", "--no-homology", "--dot", path)
    assert res.exit_code == 0
    text = path.read_text()
    assert text.startswith(("graph", "digraph"))


def test_bipyramitoid_cube(run):
    res = run("bipyramitoid", "cube")
    assert res.exit_code == 0
    assert "genus: 17" in res.output
    assert "[FAIL]" not in res.output


def test_bipyramitoid_mismatch(run):
    res = run("bipyramitoid", "prism", "y5")
    assert res.exit_code != 0


def test_quadrics(run):
    data = json.loads(run("quadrics", "--n", 7, "--format", "json").output)
    assert run("quadrics", "--n", 7).exit_code == 0
    assert "7" in json.dumps(data)


def test_verify_fast(run):
    res = run("verify", "--only", 1, "--only", 10)
    assert res.exit_code == 0
    assert res.output.count("[PASS]") == 2


def test_output_is_reproducible(run):
    for args in (("enumerate", 7), ("cover", "prism"), ("quadrics", "--n", 5, "--format", "csv")):
        assert run(*args).output == run(*args).output


def test_unknown_fixture(run):
    assert run("cover", "nope").exit_code == 2


def test_invalid_fixture_file(run, tmp_path):
    (tmp_path / "broken.json").write_text(json.dumps({"faces": [[0, 1, 2], [0, 2, 1]]}))
    res = run("--fixtures-dir", tmp_path, "cover", "broken")
    assert res.exit_code == 1
    assert "low valence" in res.output


def test_trapezohedron_is_smoothed(run):
    res = run("bipyramitoid", "--trapezohedron", 4, "--no-heegaard")
    assert res.exit_code == 0
    assert "smoothed=True" in res.output
    assert "homology: (Z,Z^31,Z^31,Z)" in res.output
    assert run("bipyramitoid", "--trapezohedron", 2).exit_code == 2


def test_help_lists_commands(run):
    out = run("--help").output
    for cmd in ("enumerate", "cover", "bipyramitoid", "quadrics", "verify"):
        assert cmd in out

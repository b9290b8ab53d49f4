import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covers.enumeration import class_representatives
from covers.fixtures import list_fixtures, load_fixture
from covers.polytope import (
    CombinatorialPolyhedron,
    InvalidVertex,
    Label,
    NeighborUnderflow,
    NotABasis,
    NotATriangle,
    NotSimple,
    PolytopeError,
    as_pyramitoid,
    canonical_form,
    contract_triangle,
    contraction_rule,
    dump_polyhedron,
    find_bases,
    is_simple,
    isomorphic,
    label_of,
    load_polyhedron,
    n_book,
    n_book_polyhedron,
    n_pyramid,
    orient,
    tetrahedron,
    tree_is_spanning,
    truncate_vertex,
    truncation_rule,
    validate_label,
    validate_polyhedron,
)

ALL_PYRS = [p for n in range(4, 8) for p in class_representatives(n)]


def _pyr(name):
    return load_fixture(name).pyramitoid()


def test_valid_fixtures_have_no_diagnostics():
    for name in list_fixtures():
        assert validate_polyhedron(load_fixture(name).polyhedron) == [], name


def test_prism_counts_by_hand():
    p = load_fixture("prism").polyhedron
    assert (len(p.vertices), len(p.edges), len(p.faces)) == (6, 9, 5)
    assert p.euler_characteristic == 2


def test_cube_with_a_triangle_is_reported():
    cube = load_fixture("cube").polyhedron
    faces = list(cube.faces)
    faces[0] = faces[0][:3]
    diags = validate_polyhedron(CombinatorialPolyhedron.from_faces(faces, cube.vertices))
    codes = {d.code for d in diags}
    assert "face/edge mismatch" in codes
    assert any(0 in d.cells for d in diags if d.code == "face/edge mismatch")


def test_diagnostics_orientation_and_euler():
    t = tetrahedron()
    flipped = [tuple(reversed(t.faces[0]))] + list(t.faces[1:])
    codes = {d.code for d in validate_polyhedron(CombinatorialPolyhedron.from_faces(flipped))}
    assert "orientation" in codes
    two = CombinatorialPolyhedron.from_faces(list(t.faces) + [(10, 11, 12), (12, 11, 10)])
    codes = {d.code for d in validate_polyhedron(two)}
    assert codes & {"disconnected", "euler"}


def test_orient_repairs_a_flipped_face():
    t = tetrahedron()
    flipped = CombinatorialPolyhedron.from_faces([tuple(reversed(t.faces[0]))] + list(t.faces[1:]))
    assert validate_polyhedron(orient(flipped)) == []


def test_json_round_trip(tmp_path):
    cube = load_fixture("cube").polyhedron
    path = tmp_path / "c.json"
    path.write_text(dump_polyhedron(cube))
    again = load_polyhedron(path)
    assert again == cube
    assert load_polyhedron(json.loads(dump_polyhedron(cube))) == cube


def test_is_simple_examples():
    assert is_simple(tetrahedron())
    assert not is_simple(n_pyramid(4))
    assert is_simple(load_fixture("gyrobipentaprism").polyhedron)


def test_n_pyramid_4():
    p = n_pyramid(4)
    assert len(p.faces) == 5
    assert p.valence(4) == 4


def test_find_bases():
    assert find_bases(tetrahedron()) == [0, 1, 2, 3]
    assert len(find_bases(n_book_polyhedron(4))) == 3
    assert len(find_bases(n_book_polyhedron(5))) == 2
    # non-books have one basis
    for p in ALL_PYRS:
        nb = len(find_bases(p.polyhedron))
        assert nb == (2 if max(p.label) == p.n - 3 else 1) or p.n == 4


def test_not_a_basis():
    cube = load_fixture("cube").polyhedron
    with pytest.raises(NotABasis):
        as_pyramitoid(cube, 0)


def test_core_trees():
    assert len(_pyr("prism").core_tree) == 1
    y5 = _pyr("y5")
    assert len(y5.core_tree) == 2
    t = as_pyramitoid(tetrahedron(), 2)
    assert len(t.core_tree) == 0 and len(t.core_vertices) == 1


@pytest.mark.parametrize("pyr", ALL_PYRS, ids=lambda p: str(p.label))
def test_pyramitoid_counts(pyr):
    n = pyr.n
    poly = pyr.polyhedron
    assert (len(poly.vertices), len(poly.edges), len(poly.faces)) == (2 * (n - 1), 3 * (n - 1), n + 1)
    assert len(pyr.essential_tree) == 2 * n - 3
    assert len(pyr.core_tree) == n - 3
    assert len(pyr.core_vertices) == n - 2
    assert tree_is_spanning(pyr)


def test_labels_of_named_examples():
    assert _pyr("prism").label.same_class((0, 1, 0, 1))
    assert str(_pyr("y5").label.canonical()) == "(01102)"
    assert any(str(p.label.canonical()) == "(020202)" for p in class_representatives(6))


def test_label_needs_simple():
    with pytest.raises(NotSimple):
        label_of(as_pyramitoid(n_pyramid(4), 0))


def test_label_parse_and_str():
    assert Label.parse("(01102)").entries == (0, 1, 1, 0, 2)
    assert Label.parse("1,10,0").entries == (1, 10, 0)
    assert str(Label((1, 10, 0))) == "(1,10,0)"
    assert Label((2, 0, 1, 1, 0)).canonical() == Label((0, 1, 1, 0, 2))


def test_validate_label_examples():
    assert validate_label((0, 1, 0, 1), 4)
    assert not validate_label((0, 0, 1, 1, 2), 5)
    assert validate_label((0, 0, 0), 3)
    assert not validate_label((0, 1, 0, 1), 5)


@given(st.lists(st.integers(0, 6), min_size=4, max_size=9))
def test_validate_label_matches_conditions(b):
    n = len(b)
    want = (
        all(0 <= x <= n - 3 for x in b)
        and b.count(0) >= 2
        and not any(b[k] == 0 and b[(k + 1) % n] == 0 for k in range(n))
        and sum(b) == 2 * (n - 3)
    )
    assert validate_label(b, n) == want


def test_truncation_examples():
    prism = _pyr("prism")
    five = truncate_vertex(prism, 1)
    assert five.label.same_class((0, 1, 1, 0, 2))
    t = as_pyramitoid(tetrahedron(), 0)
    assert truncate_vertex(t, 0).label.same_class((0, 1, 0, 1))
    assert truncation_rule((0, 0, 0), 0) == (1, 0, 1, 0)


def test_truncate_y7_fixture():
    y7 = _pyr("y7_311")
    for i in range(7):
        y8 = truncate_vertex(y7, i)
        assert validate_label(y8.label, 8) and sum(y8.label) == 10


@pytest.mark.parametrize("pyr", ALL_PYRS, ids=lambda p: str(p.label))
def test_truncation_rule_matches_complex(pyr):
    for i in range(pyr.n):
        assert truncate_vertex(pyr, i).label.entries == truncation_rule(pyr.label.entries, i)


def test_invalid_vertex():
    with pytest.raises(InvalidVertex):
        truncate_vertex(_pyr("prism"), 4)
    with pytest.raises(InvalidVertex):
        truncation_rule((0, 1, 0, 1), -1)


def test_contraction_examples():
    y5 = _pyr("y5")
    first = list(y5.label).index(0)
    assert contract_triangle(y5, first).label.same_class((0, 1, 0, 1))
    prism = _pyr("prism")
    for i in (k for k, b in enumerate(prism.label) if b == 0):
        q = contract_triangle(prism, i)
        assert q.label.entries == (0, 0, 0)
        assert isomorphic(q.polyhedron, tetrahedron())


def test_contraction_errors():
    prism = _pyr("prism")
    nonzero = next(k for k, b in enumerate(prism.label) if b)
    with pytest.raises(NotATriangle):
        contract_triangle(prism, nonzero)
    with pytest.raises(NotATriangle):
        contraction_rule((0, 1, 0, 1), 1)
    with pytest.raises(NeighborUnderflow):
        contraction_rule((0, 0, 2, 1), 0)
    with pytest.raises(PolytopeError):
        contract_triangle(as_pyramitoid(tetrahedron(), 0), 0)


@pytest.mark.parametrize("pyr", [p for p in ALL_PYRS if p.n == 6], ids=lambda p: str(p.label))
def test_contract_then_truncate_round_trip(pyr):
    b = pyr.label.entries
    for i in (k for k in range(6) if b[k] == 0):
        small = contract_triangle(pyr, i)
        back = [truncate_vertex(small, j).label for j in range(5)]
        assert any(lab.same_class(b) for lab in back)
        assert any(isomorphic(truncate_vertex(small, j).polyhedron, pyr.polyhedron) for j in range(5))


def test_no_adjacent_triangles():
    for p in ALL_PYRS:
        b = p.label
        assert not any(b[k] == 0 and b[(k + 1) % p.n] == 0 for k in range(p.n))


def test_books():
    b5 = n_book(5)
    assert 2 in b5.label and len(find_bases(b5.polyhedron)) == 2
    with pytest.raises(PolytopeError):
        n_book_polyhedron(2)
    with pytest.raises(PolytopeError):
        n_pyramid(2)


def test_canonical_form_is_a_relabelling_invariant():
    cube = load_fixture("cube").polyhedron
    shuffled = CombinatorialPolyhedron.from_faces([tuple(100 - v for v in f) for f in cube.faces])
    assert canonical_form(cube) == canonical_form(shuffled)
    assert isomorphic(cube, shuffled)
    assert not isomorphic(cube, load_fixture("prism").polyhedron)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ALL_PYRS), st.data())
def test_anchor_choice_rotates_the_label(pyr, data):
    k = data.draw(st.integers(0, pyr.n - 1))
    moved = as_pyramitoid(pyr.polyhedron, pyr.basis, pyr.basis_cycle[k])
    assert moved.label.entries == pyr.label.entries[k:] + pyr.label.entries[:k]


def test_dihedron_is_not_a_polytope():
    dihedron = CombinatorialPolyhedron.from_faces([(0, 1, 2), (0, 2, 1)])
    codes = {d.code for d in validate_polyhedron(dihedron)}
    assert {"low valence", "faces share several edges"} <= codes
    assert "euler" not in codes

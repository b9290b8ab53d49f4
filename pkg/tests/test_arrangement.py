import pytest

from covers.arrangement import (
    CodeMismatch,
    build_arrangement,
    curve_is_closed,
    lift_arcs,
    matching_vertex_map,
    refined_dome,
    refined_dome_cover,
    sigma,
)
from covers.enumeration import Code, class_representatives, code_of
from covers.homology import ImageTest, b_n_formula
from covers.small_cover import check_dd_zero, is_closed_surface

PYRS = {str(p.label.canonical()): p for n in range(4, 7) for p in class_representatives(n)}


def test_disk_regions_follow_euler():
    # chords in a disk: regions = 1 + arcs + crossings
    arr = build_arrangement(6, [[(0, 3)], [(1, 4)]])
    assert len(arr.crossings) == 1
    assert len(arr.faces) == 1 + 2 + 1
    arr = build_arrangement(6, [[(0, 2), (0, 3)], [(1, 4)]])
    assert len(arr.crossings) == 2
    assert len(arr.faces) == 1 + 3 + 2
    arr = build_arrangement(6, [[(1, 3), (1, 4), (1, 5)]])
    assert not arr.crossings and len(arr.faces) == 4


def test_one_code_never_crosses_itself():
    for p in PYRS.values():
        arr = build_arrangement(p.n, [code_of(p).arcs])
        assert not arr.crossings
        assert len(arr.faces) == p.n - 2


def test_rejects_bad_arcs():
    with pytest.raises(ValueError):
        build_arrangement(5, [[(0, 1)]])
    with pytest.raises(ValueError):
        build_arrangement(6, [[(0, 3), (1, 4)]])


def test_parallel_arcs_from_two_families_do_not_cross():
    arr = build_arrangement(4, [[(0, 2)], [(0, 2)]])
    assert not arr.crossings
    assert len(arr.faces) == 3


def test_matching_maps():
    n = 5
    for offset in range(n):
        for flip in (True, False):
            vm = matching_vertex_map(n, offset, flip)
            assert sorted(vm) == sorted(vm.values()) == list(range(n))
            assert sorted(sigma(n, offset, flip)) == list(range(n))


@pytest.mark.parametrize("key,count", [("(0101)", 4), ("(01102)", 16)])
def test_lift_counts(key, count):
    pyr = PYRS[key]
    _, surface, _ = refined_dome_cover(pyr, code_of(pyr))
    curves = lift_arcs(surface, code_of(pyr))
    assert len(curves) == count
    per_arc = {}
    for c in curves:
        per_arc[c.arc] = per_arc.get(c.arc, 0) + 1
    assert set(per_arc.values()) == {2 ** (pyr.n - 2)}


@pytest.mark.parametrize("key", sorted(PYRS))
def test_meridians_bound_in_handlebody_not_on_surface(key):
    pyr = PYRS[key]
    code = code_of(pyr)
    whole, surface, split = refined_dome_cover(pyr, code)
    assert check_dd_zero(whole) and check_dd_zero(surface)
    assert is_closed_surface(surface)
    assert [h.free_rank for h in whole.homology()] == [1, b_n_formula(pyr.n), 0, 0]
    curves = lift_arcs(surface, code)
    H = ImageTest(whole.boundaries[1])
    F = ImageTest(surface.boundaries[1])
    chains = [c.chain(surface) for c in curves]
    assert all(curve_is_closed(c, surface) for c in curves)
    assert all(H.contains(c.chain(whole)) for c in curves)
    assert all(not F.contains(ch, integral=False) for ch in chains)
    # together they kill a half-rank subgroup of H_1(F)
    assert F.quotient_rank(chains) == b_n_formula(pyr.n)


def test_code_mismatch():
    pyr = PYRS["(01102)"]
    _, surface, _ = refined_dome_cover(pyr, code_of(pyr))
    with pytest.raises(CodeMismatch):
        lift_arcs(surface, Code(5, ((0, 2), (2, 4))))
    with pytest.raises(CodeMismatch):
        refined_dome(pyr, Code(4, ((0, 2),)))
    with pytest.raises(CodeMismatch):
        lift_arcs(whole_without_split(), code_of(pyr))


def whole_without_split():
    from covers.small_cover import polygon_cover

    return polygon_cover(4)

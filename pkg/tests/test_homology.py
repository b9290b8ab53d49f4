import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from covers.homology import (
    ChainComplexInvalid,
    HomologyGroup,
    ImageTest,
    IntegerMatrix,
    b_n_formula,
    b_n_recurrence,
    b_n_recurrence_check,
    betti_mod2,
    chain_homology,
    in_boundary_span,
    mod2_from_integral,
    rank_mod2,
    rank_mod_p,
    rank_over_q,
    smith_normal_form,
    span_rank,
    surface_euler_formula,
    surface_genus_formula,
)
from covers.fixtures import load_fixture
from covers.small_cover import cover_of_polyhedron, polygon_cover


def _sympy_factors(dense):
    if not dense or not dense[0]:
        return []
    D = sympy_snf(Matrix(dense), domain=ZZ)
    return sorted(abs(int(D[k, k])) for k in range(min(D.shape)) if D[k, k] != 0)


def test_snf_examples():
    assert smith_normal_form(IntegerMatrix.identity(3)).factors == (1, 1, 1)
    r = smith_normal_form(IntegerMatrix.from_dense([[2, 4], [6, 8]]))
    assert r.factors == (2, 4) and r.certified
    assert smith_normal_form(IntegerMatrix(3, 4, {})).factors == ()


def test_snf_against_sympy_random():
    rng = random.Random(7)
    for _ in range(150):
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        density = rng.random()
        dense = [[rng.randint(-6, 6) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]
        M = IntegerMatrix.from_dense(dense)
        r = smith_normal_form(M)
        assert sorted(r.factors) == _sympy_factors(dense)
        assert r.certified
        assert all(r.factors[k + 1] % r.factors[k] == 0 for k in range(len(r.factors) - 1))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=1, max_size=5))
def test_certificate_identity(dense):
    M = IntegerMatrix.from_dense(dense)
    r = smith_normal_form(M, transforms=True)
    D = IntegerMatrix(M.rows, M.cols, {(k, k): d for k, d in enumerate(r.factors)})
    assert (r.U @ M) @ r.V == D
    assert r.U @ r.U_inv == IntegerMatrix.identity(M.rows)
    assert r.V @ r.V_inv == IntegerMatrix.identity(M.cols)


def test_spot_check_path():
    rng = random.Random(3)
    dense = [[rng.choice([-1, 0, 0, 1, 2]) for _ in range(12)] for _ in range(9)]
    M = IntegerMatrix.from_dense(dense)
    fast = smith_normal_form(M, transforms=False)
    assert fast.U is None and fast.certified
    assert fast.factors == smith_normal_form(M, transforms=True).factors


def test_large_entries_do_not_overflow():
    big = 10**40
    M = IntegerMatrix.from_dense([[big, 0], [0, big * 3]])
    assert smith_normal_form(M).factors == (big, 3 * big)


def test_ranks():
    M = IntegerMatrix.from_dense([[2, 0], [0, 3]])
    assert rank_mod2(M) == 1
    assert rank_mod_p(M, 3) == 1
    assert rank_over_q(M) == 2


def test_matrix_text_round_trip():
    M = IntegerMatrix.from_dense([[1, 0, -2], [0, 5, 0]])
    assert IntegerMatrix.from_text(M.to_text()) == M
    assert M.transpose().transpose() == M


def test_matrix_rejects_bad_entries():
    with pytest.raises(ValueError):
        IntegerMatrix(2, 2, {(0, 0): 0})
    with pytest.raises(IndexError):
        IntegerMatrix(2, 2, {(2, 0): 1})


def test_homology_examples():
    def ranks(name):
        h = cover_of_polyhedron(load_fixture(name).polyhedron, "all").homology()
        return [str(g) for g in h]

    assert ranks("tetrahedron") == ["Z", "0", "0", "Z"]
    assert ranks("prism") == ["Z", "Z", "Z", "Z"]
    assert ranks("cube") == ["Z", "Z^3", "Z^3", "Z"]


def test_torsion_is_reported():
    # RP^2 from its standard cell structure: 1 vertex, 1 edge, 1 face with boundary 2a
    d1 = IntegerMatrix(1, 1, {})
    d2 = IntegerMatrix(1, 1, {(0, 0): 2})
    h = chain_homology([1, 1, 1], [d1, d2])
    assert h == [HomologyGroup(1), HomologyGroup(0, (2,)), HomologyGroup(0)]
    assert str(h[1]) == "Z/2"
    assert mod2_from_integral(h) == [1, 1, 1]


def test_invalid_chain_complex():
    d1 = IntegerMatrix.from_dense([[1, 1]])
    d2 = IntegerMatrix.from_dense([[1], [0]])
    with pytest.raises(ChainComplexInvalid):
        chain_homology([1, 2, 1], [d1, d2])
    with pytest.raises(ChainComplexInvalid):
        chain_homology([1, 2], [d1, d2])


def test_betti_mod2_examples():
    assert betti_mod2(cover_of_polyhedron(load_fixture("tetrahedron").polyhedron)) == [1, 0, 0, 1]
    assert betti_mod2(cover_of_polyhedron(load_fixture("y5").polyhedron)) == [1, 5, 5, 1]
    assert betti_mod2(polygon_cover(4)) == [1, 2, 1]


def test_image_test():
    B = IntegerMatrix.from_dense([[2], [0]])
    t = ImageTest(B)
    assert t.contains({0: 4})
    assert not t.contains({0: 1})
    assert t.contains({0: 1}, integral=False)
    assert not t.contains({1: 1}, integral=False)
    assert in_boundary_span(B, {0: 2})
    assert span_rank(B, [{0: 1}, {1: 3}, {1: 1}]) == 1


def test_b_n():
    assert [b_n_formula(n) for n in (4, 5, 6, 7, 8)] == [1, 5, 17, 49, 129]
    assert b_n_formula(3) == 0 and b_n_recurrence(3) == 0
    assert b_n_recurrence_check(24)
    with pytest.raises(ValueError):
        b_n_formula(2)


@pytest.mark.parametrize("n", range(4, 25))
def test_surface_genus_matches_b_n(n):
    assert surface_genus_formula(n) == b_n_formula(n)


def test_surface_formula_examples():
    assert surface_euler_formula(5) == -8
    assert surface_genus_formula(4) == 1
    assert surface_genus_formula(8) == 129

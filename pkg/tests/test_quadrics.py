import csv
import io
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covers import quadrics as q


def test_centre_maps_to_equal_coordinates():
    for n in range(3, 10):
        r = q.polygon_support_lines(n)([0.0, 0.0])
        assert np.allclose(r, 1.0 / n)


def test_vertices_have_two_zeros():
    for n in range(3, 9):
        phi = q.polygon_support_lines(n)
        for k, v in enumerate(q.polygon_vertices(n)):
            r = phi(v)
            zeros = {j for j in range(n) if abs(r[j]) < 1e-12}
            assert zeros == {(k - 1) % n, k}
            assert r.min() > -1e-12


def test_relation_coefficients():
    # square: tau = 0, so r_0 - r_3 + r_2 - r_1 = 0
    assert q.tau(4) == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(q.polygon_system(4).matrix[1], [1, -1, 1, -1])
    # hexagon: 2 tau + 1 = 2
    assert np.allclose(q.polygon_system(6).matrix[1, :4], [1, -2, 2, -1])
    golden = (1 + math.sqrt(5)) / 2
    assert 2 * q.tau(5) + 1 == pytest.approx(golden)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 14), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_coordinates_sum_to_one(n, x, y):
    r = q.polygon_support_lines(n)([x, y])
    assert abs(r.sum() - 1.0) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 14), st.floats(-3, 3), st.floats(-3, 3))
def test_relations_hold_on_the_whole_plane(n, x, y):
    r = q.polygon_support_lines(n)([x, y])
    assert q.polygon_system(n).residual(r).max() < 1e-12


@pytest.mark.parametrize("n", range(4, 13))
def test_rank(n):
    s = q.polygon_system(n)
    assert s.n_equations == n - 2
    assert s.rank() == n - 2


@pytest.mark.parametrize("n", range(3, 13))
def test_residuals_below_tolerance(n):
    assert q.verify_embedding(n, samples=200, seed=n) < q.TOL


@pytest.mark.parametrize("n", range(4, 13))
def test_pyramid_residuals(n):
    assert q.verify_pyramid_embedding(n, samples=200, seed=n) < q.TOL


def test_perturbed_map_is_caught():
    for n in (5, 7, 9):
        bad = q.polygon_support_lines(n).perturbed(1e-3, seed=1)
        assert q.verify_embedding(n, phi=bad) > q.TOL


def test_points_outside_are_caught():
    assert q.verify_embedding(6, points=[[5.0, 0.0]]) > q.TOL
    assert q.verify_embedding(6, points=q.polygon_vertices(6)) < q.TOL


def test_pyramid_apex_and_base():
    system, psi = q.pyramid_system(6)
    apex = psi([0.0, 0.0, 1.0])
    assert np.allclose(apex, [0] * 6 + [1])
    base = psi([0.1, -0.2, 0.0])
    assert base[-1] == 0.0
    assert np.allclose(base[:-1], q.polygon_support_lines(6)([0.1, -0.2]))
    assert psi.domain_dim == 3 and psi.codomain_dim == 7
    assert system.residual(apex).max() < 1e-15


def test_small_n_rejected():
    with pytest.raises(ValueError):
        q.polygon_system(3)
    with pytest.raises(ValueError):
        q.pyramid_system(3)
    with pytest.raises(ValueError):
        q.polygon_support_lines(2)


@pytest.mark.parametrize("n", [5, 7, 11])
def test_relation_in_high_precision(n):
    mpmath.mp.dps = 50
    x, y = mpmath.mpf("0.123"), mpmath.mpf("-0.0456")
    th = [-2 * mpmath.pi * j / n for j in range(n)]
    r = [(1 - x * mpmath.cos(t) - y * mpmath.sin(t)) / n for t in th]
    k = 2 * mpmath.cos(2 * mpmath.pi / n) + 1
    for i in range(n - 3):
        assert abs(r[i] - r[i + 3] + k * (r[i + 2] - r[i + 1])) < mpmath.mpf(10) ** -45


def test_exports():
    rows = q.residual_table(range(3, 7), samples=20, seed=2)
    assert rows[0].pyramid is None and all(r.ok for r in rows)
    parsed = list(csv.DictReader(io.StringIO(q.residuals_csv(rows))))
    assert [int(r["n"]) for r in parsed] == [3, 4, 5, 6]
    assert rows[1].to_dict()["ok"] is True
    text = q.polygon_system(5).to_text()
    assert len(text.strip().splitlines()) == 3
    assert q.residual_table([5], 20, 2) == q.residual_table([5], 20, 2)

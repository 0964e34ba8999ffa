import numpy as np
import pytest

from localcert import geometry
from localcert.linalg import haar_unitary, reflection_example
from localcert.numrange import (
    boundary,
    contains_zero,
    dist_origin,
    expectation,
    support_value,
    v_unitary,
    zero_achiever,
)

from oracles import hull_distance_bruteforce, sampled_support

D = np.diag
JORDAN = np.array([[0, 1], [0, 0]], dtype=complex)


def assert_result_consistent(X, res):
    assert abs(abs(res.value) - res.distance) <= 1e-8
    assert abs(expectation(X, res.achiever) - res.value) <= 1e-10
    assert abs(np.linalg.norm(res.achiever) - 1) <= 1e-12


# geometry helpers


def test_hull_square_and_interior_points():
    pts = [1, 1j, -1, -1j, 0, 0.2 + 0.1j, 1 + 1e-12]
    hull = geometry.convex_hull(pts)
    assert len(hull) == 4
    assert set(np.round(hull, 12)) == {1, 1j, -1, -1j}
    assert geometry.polygon_area(hull) > 0  # counterclockwise


def test_hull_degenerate():
    assert len(geometry.convex_hull([2, 2, 2 + 1e-12])) == 1
    seg = geometry.convex_hull([0, 1, 0.5, 0.25])
    assert sorted(seg.real) == [0, 1]


def test_hull_merges_scattered_duplicates():
    pts = [0, 1, 1j, 0.3, 0.3 + 1e-11j, 0.3 + 2e-11, 1 + 1e-13]
    hull = geometry.convex_hull(pts)
    assert len(hull) == 3


def test_polygon_distance_matches_bruteforce():
    rng = np.random.default_rng(0)
    for _ in range(50):
        pts = np.exp(1j * rng.uniform(0, 2 * np.pi, 5))
        z = complex(*rng.uniform(-1.2, 1.2, 2))
        hull = geometry.convex_hull(pts)
        assert abs(geometry.polygon_distance(z, hull)[0] - hull_distance_bruteforce(z, pts)) <= 1e-12


# support_value


def test_support_value_examples():
    lam, _ = support_value(np.eye(3), 0.0)
    assert lam == pytest.approx(1.0)
    lam, v = support_value(D([1.0, -1.0]), 0.0)
    assert lam == pytest.approx(-1.0)
    assert abs(abs(v[1]) - 1) <= 1e-12


def test_support_value_eigvec_consistency():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    for theta in np.linspace(0, 2 * np.pi, 7):
        lam, v = support_value(X, theta)
        assert abs((np.exp(-1j * theta) * expectation(X, v)).real - lam) <= 1e-9


def test_support_value_matches_sampling_envelope():
    rng = np.random.default_rng(2)
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    X /= np.linalg.norm(X, 2)
    theta = 0.7
    lam, _ = support_value(X, theta)
    sampled = sampled_support(X, theta, 10**6, rng)
    assert sampled >= lam - 1e-12
    assert sampled - lam <= 1e-3


# boundary


def test_boundary_square():
    poly = boundary(D([1, 1j, -1, -1j]), 64)
    assert len(poly.vertices) == 4
    for v in (1, 1j, -1, -1j):
        assert np.min(np.abs(poly.vertices - v)) <= 1e-8


def test_boundary_identity_single_point():
    poly = boundary(np.eye(3), 32)
    assert len(poly.vertices) == 1
    assert abs(poly.vertices[0] - 1) <= 1e-12


def test_boundary_jordan_disk():
    poly = boundary(JORDAN, 256)
    assert np.max(np.abs(np.abs(poly.vertices) - 0.5)) <= 1e-6


def test_boundary_rejects_few_angles():
    with pytest.raises(ValueError):
        boundary(np.eye(2), 8)


def test_boundary_polygon_convex_and_contains_spectrum():
    U = haar_unitary(5, 3)
    poly = boundary(U, 128)
    V = poly.vertices
    edges = np.roll(V, -1) - V
    cross = (np.conj(edges) * np.roll(edges, -1)).imag
    assert np.all(cross >= -1e-12)
    for lam in np.linalg.eigvals(U):
        assert poly.contains(lam, 1e-8)


def test_boundary_area_monotone_in_angles():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    areas = [boundary(X, n).area() for n in (16, 32, 64, 128, 256)]
    assert all(b >= a - 1e-12 for a, b in zip(areas, areas[1:]))


# dist_origin


def test_dist_origin_examples():
    assert dist_origin(D([1.0, -1.0])).distance == pytest.approx(0, abs=1e-12)
    res = dist_origin(D([1, 1j]))
    assert res.distance == pytest.approx(np.sqrt(2) / 2, abs=1e-9)
    assert_result_consistent(D([1, 1j]), res)
    for d in (2, 3, 4, 5):
        R = reflection_example(d)
        res = dist_origin(R)
        assert res.distance <= 1e-7
        assert_result_consistent(R, res)


def test_dist_origin_identity_and_jordan():
    assert dist_origin(np.eye(4)).distance == pytest.approx(1.0, abs=1e-12)
    res = dist_origin(JORDAN)
    assert res.distance <= 1e-7
    assert_result_consistent(JORDAN, res)


def test_dist_origin_degenerate_face():
    # W is the segment [1 + i, 1 - i] reached through a two-dimensional face
    X = D([1 + 1j, 1 - 1j, 2, 3])
    res = dist_origin(X)
    assert res.distance == pytest.approx(1.0, abs=1e-9)
    assert_result_consistent(X, res)


def test_dist_origin_positive_haar_like():
    rng = np.random.default_rng(5)
    for _ in range(5):
        phases = rng.uniform(0, 2.5, 4)
        W = haar_unitary(4, rng)
        U = W @ D(np.exp(1j * phases)) @ W.conj().T
        res = dist_origin(U)
        assert res.distance > 0
        assert_result_consistent(U, res)
        assert abs(res.distance - hull_distance_bruteforce(0, np.exp(1j * phases))) <= 1e-8


def test_contains_zero():
    assert contains_zero(D([1.0, -1.0]))
    assert not contains_zero(np.eye(2))
    assert contains_zero(JORDAN)


def test_zero_achiever_general_matrices():
    rng = np.random.default_rng(6)
    for n in (2, 3, 5):
        for _ in range(10):
            X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            X -= np.trace(X) / n * np.eye(n)  # traceless, so 0 lies in W(X)
            psi = zero_achiever(X)
            assert abs(np.linalg.norm(psi) - 1) <= 1e-12
            assert abs(expectation(X, psi)) <= 1e-8


# v_unitary


def test_v_unitary_examples():
    assert v_unitary(D([1, 1j])).distance == pytest.approx(np.sqrt(2) / 2, abs=1e-12)
    assert v_unitary(np.eye(3)).distance == pytest.approx(1.0)


def test_v_unitary_matches_dist_origin():
    rng = np.random.default_rng(7)
    for _ in range(10):
        U = haar_unitary(4, rng)
        a, b = v_unitary(U), dist_origin(U)
        assert abs(a.distance - b.distance) <= 1e-8
        assert_result_consistent(U, a)


def test_v_unitary_interior_origin_achiever():
    U = D([1, 1j, -1, -1j])
    res = v_unitary(U)
    assert res.distance == 0
    assert abs(res.value) <= 1e-12

"""Planar convex geometry on complex numbers."""

from __future__ import annotations

import numpy as np


def _cross(o: complex, a: complex, b: complex) -> float:
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def convex_hull(points, merge_tol: float = 1e-10) -> np.ndarray:
    """Counterclockwise hull vertices (Andrew's monotone chain).

    Points closer than ``merge_tol`` are merged first. Collinear points on the
    hull boundary are dropped, so a segment yields its two endpoints and a single
    point yields itself.
    """
    pts = np.asarray(points, dtype=np.complex128).ravel()
    if pts.size == 0:
        return pts
    pts = pts[np.lexsort((pts.imag, pts.real))]
    unique = [pts[0]]
    for p in pts[1:]:
        # sorted by real part, so only the trailing window can be within merge_tol
        dup = False
        for q in reversed(unique):
            if q.real < p.real - merge_tol:
                break
            if abs(p - q) <= merge_tol:
                dup = True
                break
        if not dup:
            unique.append(p)
    if len(unique) <= 2:
        if len(unique) == 2 and abs(unique[0] - unique[1]) <= merge_tol:
            return np.array(unique[:1])
        return np.array(unique)

    def half(seq):
        chain: list[complex] = []
        for p in seq:
            while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= merge_tol * abs(chain[-1] - chain[-2]):
                chain.pop()
            chain.append(p)
        return chain

    lower = half(unique)
    upper = half(reversed(unique))
    hull = lower[:-1] + upper[:-1]
    return np.array(hull, dtype=np.complex128)


def segment_nearest(z: complex, a: complex, b: complex) -> tuple[float, float]:
    """Distance from ``z`` to segment [a, b] and the parameter s of the nearest point a + s(b-a)."""
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(z - a), 0.0
    s = ((z - a) * np.conj(ab)).real / denom
    s = min(1.0, max(0.0, s))
    return abs(z - (a + s * ab)), s


def inside_convex(z: complex, vertices: np.ndarray, tol: float = 0.0) -> bool:
    """Membership of ``z`` in the convex polygon inflated by ``tol``."""
    return polygon_distance(z, vertices)[0] <= tol


def polygon_distance(z: complex, vertices: np.ndarray) -> tuple[float, int, float]:
    """Distance from ``z`` to a closed convex polygon (0 inside).

    Returns ``(distance, edge, s)`` where the nearest point is
    ``vertices[edge] + s * (vertices[edge+1] - vertices[edge])``; ``edge`` is -1
    when ``z`` is interior.
    """
    v = np.asarray(vertices, dtype=np.complex128)
    n = v.size
    if n == 1:
        return abs(z - v[0]), 0, 0.0
    if n == 2:
        d, s = segment_nearest(z, v[0], v[1])
        return d, 0, s
    best = (np.inf, 0, 0.0)
    inside = True
    for k in range(n):
        a, b = v[k], v[(k + 1) % n]
        if _cross(a, b, z) < 0:
            inside = False
        d, s = segment_nearest(z, a, b)
        if d < best[0]:
            best = (d, k, s)
    if inside:
        return 0.0, -1, 0.0
    return best


def triangle_weights(z: complex, a: complex, b: complex, c: complex) -> np.ndarray | None:
    """Barycentric weights of ``z`` in triangle abc, or None if outside/degenerate."""
    M = np.array([[a.real, b.real, c.real], [a.imag, b.imag, c.imag], [1.0, 1.0, 1.0]])
    if abs(np.linalg.det(M)) < 1e-14:
        return None
    w = np.linalg.solve(M, np.array([z.real, z.imag, 1.0]))
    if np.all(w >= -1e-12):
        w = np.clip(w, 0.0, None)
        return w / w.sum()
    return None


def polygon_area(vertices: np.ndarray) -> float:
    v = np.asarray(vertices, dtype=np.complex128)
    if v.size < 3:
        return 0.0
    x, y = v.real, v.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

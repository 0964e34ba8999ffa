"""Numerical range W(X) = {<psi|X|psi>} of a square matrix.

Everything reduces to Hermitian eigenproblems through the support function:
for ``H(theta) = (e^{-i theta} X + e^{i theta} X^dag) / 2`` the smallest
eigenvalue is ``min Re(e^{-i theta} w)`` over ``w`` in W(X), and the distance
from the origin to W(X) is ``max(0, max_theta lambda_min(H(theta)))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import geometry
from .linalg import as_square, as_unitary, eig_unitary

N_SCAN = 360
ANGLE_TOL = 1e-10
ZERO_TOL = 1e-7
ACHIEVER_TOL = 1e-8


@dataclass(frozen=True)
class NumRangePolygon:
    vertices: np.ndarray  # counterclockwise complex points
    n_angles: int

    def contains(self, z: complex, tol: float = 1e-8) -> bool:
        return geometry.inside_convex(complex(z), self.vertices, tol)

    def area(self) -> float:
        return geometry.polygon_area(self.vertices)


@dataclass(frozen=True)
class NumRangeResult:
    distance: float
    achiever: np.ndarray
    value: complex
    converged: bool
    iterations: int


def expectation(X: np.ndarray, psi: np.ndarray) -> complex:
    return complex(np.vdot(psi, X @ psi))


def rotated_hermitian(X: np.ndarray, theta: float) -> np.ndarray:
    Y = np.exp(-1j * theta) * X
    return (Y + Y.conj().T) / 2


def _rotated_skew(X: np.ndarray, theta: float) -> np.ndarray:
    Y = np.exp(-1j * theta) * X
    return (Y - Y.conj().T) / 2j


def _lam_min_2x2(X: np.ndarray, theta) -> np.ndarray:
    # closed form for [[a, b], [conj(b), c]]: (a + c)/2 - sqrt(((a - c)/2)^2 + |b|^2)
    e = np.exp(-1j * np.asarray(theta, dtype=float))
    a = (e * X[0, 0]).real
    c = (e * X[1, 1]).real
    b = (e * X[0, 1] + np.conj(e * X[1, 0])) / 2
    return (a + c) / 2 - np.hypot((a - c) / 2, np.abs(b))


def _lam_min(X: np.ndarray, theta) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if X.shape[0] == 2:
        return _lam_min_2x2(X, theta)
    Y = np.exp(-1j * theta)[:, None, None] * X[None]
    H = (Y + np.conj(np.swapaxes(Y, 1, 2))) / 2
    return np.linalg.eigvalsh(H)[:, 0]


def support_value(X, theta: float) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of ``H(theta)`` and a unit eigenvector for it."""
    X = as_square(X, "X")
    w, V = np.linalg.eigh(rotated_hermitian(X, theta))
    return float(w[0]), V[:, 0]


def support_points(X: np.ndarray, thetas) -> tuple[np.ndarray, np.ndarray]:
    """Boundary touch points ``<v|X|v>`` for the lambda_min eigenvectors at each angle."""
    thetas = np.asarray(thetas, dtype=float)
    Y = np.exp(-1j * thetas)[:, None, None] * X[None]
    H = (Y + np.conj(np.swapaxes(Y, 1, 2))) / 2
    _, V = np.linalg.eigh(H)
    vecs = V[:, :, 0]
    values = np.einsum("ki,ij,kj->k", vecs.conj(), X, vecs)
    return values, vecs


def _corners_between(X: np.ndarray, thetas: np.ndarray, values: np.ndarray, scale: float) -> list[complex]:
    """Corners of W(X) hidden between consecutive support directions.

    For each chord between neighbouring touch points, query the support at the
    chord normal. A point beyond the chord that stays put under a small change
    of angle is a corner (it has a normal cone of positive width) and is kept;
    the search then recurses on the two new chords. Smooth boundary pieces are
    left at grid resolution.
    """
    found: list[complex] = []
    chords = [(thetas[k], values[k], thetas[(k + 1) % len(thetas)], values[(k + 1) % len(thetas)])
              for k in range(len(thetas))]
    tol = 1e-12 * scale
    for _ in range(64):
        chords = [c for c in chords if abs(c[3] - c[1]) > 1e-10 * scale]
        if not chords:
            break
        normals = []
        for t1, p, t2, q in chords:
            mid = t1 + np.mod(t2 - t1, 2 * np.pi) / 2
            base = np.angle(q - p) + np.pi / 2
            # of the two chord normals take the one nearest the bracketing angles
            normals.append(min((base, base + np.pi), key=lambda t: abs(np.angle(np.exp(1j * (t - mid))))))
        normals = np.array(normals)
        pts, _ = support_points(X, normals)
        chord_val = np.array([(np.exp(-1j * t) * c[1]).real for t, c in zip(normals, chords)])
        beyond = chord_val - (np.exp(-1j * normals) * pts).real > tol
        if not np.any(beyond):
            break
        idx = np.flatnonzero(beyond)
        eps = 1e-7
        lo, _ = support_points(X, normals[idx] - eps)
        hi, _ = support_points(X, normals[idx] + eps)
        corner = (np.abs(lo - pts[idx]) <= 1e-9 * scale) & (np.abs(hi - pts[idx]) <= 1e-9 * scale)
        new_chords = []
        for j, is_corner in zip(idx, corner):
            if not is_corner:
                continue
            t1, p, t2, q = chords[j]
            r = pts[j]
            found.append(r)
            new_chords += [(t1, p, normals[j], r), (normals[j], r, t2, q)]
        chords = new_chords
    return found


def boundary(X, n_angles: int = 256) -> NumRangePolygon:
    """Inner polygonal approximation of W(X) from ``n_angles`` support directions.

    Corners missed by the angle grid are added, so for normal X the polygon is
    the exact hull of the spectrum.
    """
    if n_angles < 16:
        raise ValueError("n_angles must be at least 16")
    X = as_square(X, "X")
    thetas = 2 * np.pi * np.arange(n_angles) / n_angles
    values, _ = support_points(X, thetas)
    scale = max(1.0, float(np.max(np.abs(X))))
    extra = _corners_between(X, thetas, values, scale)
    return NumRangePolygon(geometry.convex_hull(np.concatenate([values, extra])), n_angles)


def _lam_min_scalar(X: np.ndarray, theta: float) -> float:
    if X.shape[0] == 2:
        return float(_lam_min_2x2(X, theta))
    Y = np.exp(-1j * theta) * X
    return float(np.linalg.eigvalsh((Y + Y.conj().T) / 2)[0])


def _maximize_support(X: np.ndarray) -> tuple[float, float, int]:
    thetas = 2 * np.pi * np.arange(N_SCAN) / N_SCAN
    f = _lam_min(X, thetas)
    k = int(np.argmax(f))
    step = 2 * np.pi / N_SCAN
    # bounded Brent: golden-section steps plus parabolic ones where f is smooth.
    # Search over the offset from the scan angle: the method adds sqrt(eps)*|x|
    # to its tolerance, which would otherwise cap the accuracy near 1e-8.
    res = minimize_scalar(
        lambda u: -_lam_min_scalar(X, thetas[k] + u),
        bounds=(-step, step),
        method="bounded",
        options={"xatol": ANGLE_TOL},
    )
    theta, f_opt = float(thetas[k] + res.x), -float(res.fun)
    if f[k] > f_opt:
        theta, f_opt = thetas[k], f[k]
    return float(theta), float(f_opt), int(res.nfev)


def _face_achiever(X: np.ndarray, theta: float) -> np.ndarray:
    """Minimum-modulus point on the supporting face at angle ``theta``.

    The face is the numerical range of X compressed to the lambda_min
    eigenspace of H(theta); it is a segment on the line Re(e^{-i theta} w) = const,
    parametrised by the eigenvalues of the rotated skew part.
    """
    w, V = np.linalg.eigh(rotated_hermitian(X, theta))
    scale = max(1.0, float(np.max(np.abs(w))))
    P = V[:, w - w[0] <= 1e-8 * scale]
    if P.shape[1] == 1:
        return P[:, 0]
    s, S = np.linalg.eigh(P.conj().T @ _rotated_skew(X, theta) @ P)
    lo, hi = P @ S[:, 0], P @ S[:, -1]
    if s[0] >= 0:
        return lo
    if s[-1] <= 0:
        return hi
    c2 = s[-1] / (s[-1] - s[0])
    return np.sqrt(c2) * lo + np.sqrt(1 - c2) * hi


def _real_combination(X, u, w, zu, zw, target_imag: bool):
    """Combine ``u`` and ``w`` into a unit vector whose value is real.

    With ``target_imag`` the inputs straddle the real axis (Im zu >= 0 >= Im zw)
    and the result lies on it; otherwise the inputs have real values of opposite
    sign (zu > 0 >= zw) and the result has value exactly zero. The relative phase
    is chosen so that the cross term is real, which keeps the whole path
    ``cos t u + e^{i phi} sin t w`` on the real axis (or moving only in Im).
    """
    c, cp = np.vdot(u, X @ w), np.vdot(w, X @ u)
    D = c - np.conj(cp)
    phi0 = -np.angle(D) if abs(D) > 1e-300 else 0.0
    overlap = np.vdot(u, w)
    best = None
    for phi in (phi0, phi0 + np.pi):
        e = np.exp(1j * phi)
        cross = (e * c + np.conj(e) * cp).real
        if target_imag:
            a, b = zu.imag, -zw.imag
            t = np.arctan(np.sqrt(a / b)) if b > 0 else np.pi / 2
        else:
            a, b = zu.real, zw.real

            def f(t):
                return np.cos(t) ** 2 * a + np.sin(t) ** 2 * b + np.sin(t) * np.cos(t) * cross

            t = brentq(f, 0.0, np.pi / 2, xtol=1e-16, rtol=4 * np.finfo(float).eps)
        g = np.cos(t) * u + e * np.sin(t) * w
        norm2 = 1 + 2 * np.sin(t) * np.cos(t) * (e * overlap).real
        if best is None or norm2 > best[0]:
            best = (norm2, g)
    g = best[1]
    return g / np.linalg.norm(g)


def _left_axis_point(Y: np.ndarray) -> np.ndarray:
    """Unit vector whose Y-value is real and <= 0, assuming 0 in W(Y).

    Support points for angles in [-pi/2, pi/2] run counterclockwise along the
    left arc of W(Y) from its top to its bottom, so their imaginary part is
    monotone in the angle and bisection finds the real-axis crossing.
    """
    tol = 1e-13 * max(1.0, float(np.max(np.abs(Y))))

    def point(theta):
        _, v = support_value(Y, theta)
        return v, expectation(Y, v)

    v0, z0 = point(0.0)
    if abs(z0.imag) <= tol:
        return v0
    lo, hi = (0.0, np.pi / 2) if z0.imag > 0 else (-np.pi / 2, 0.0)
    (vlo, zlo), (vhi, zhi) = ((v0, z0), point(hi)) if z0.imag > 0 else (point(lo), (v0, z0))
    for _ in range(200):
        if hi - lo <= 1e-15:
            break
        mid = (lo + hi) / 2
        vm, zm = point(mid)
        if abs(zm.imag) <= tol:
            return vm
        if zm.imag > 0:
            lo, vlo, zlo = mid, vm, zm
        else:
            hi, vhi, zhi = mid, vm, zm
    if abs(zlo.imag) <= tol:
        return vlo
    if abs(zhi.imag) <= tol:
        return vhi
    return _real_combination(Y, vlo, vhi, zlo, zhi, target_imag=True)


def zero_achiever(X, theta_hint: float = 0.0) -> np.ndarray:
    """Unit ``psi`` with ``<psi|X|psi> = 0``, assuming 0 lies in W(X).

    Picks a vector with a nonzero value ``r e^{i beta}``, finds a second vector
    whose value lies on the opposite ray, and joins the two along a path of
    real values (in the rotated frame) to hit zero exactly.
    """
    X = as_square(X, "X")
    scale = max(1.0, float(np.max(np.abs(X))))
    angles = theta_hint + np.pi * np.arange(8) / 4
    _, V = np.linalg.eigh(np.stack([rotated_hermitian(X, t) for t in angles]))
    starts = [V[k, :, j] for k in range(len(angles)) for j in (0, -1)]
    starts.sort(key=lambda v: -abs(expectation(X, v)))
    best, best_val = None, np.inf
    for y1 in starts[:6]:
        z1 = expectation(X, y1)
        if abs(z1) <= 1e-14 * scale:
            return y1
        Y = np.exp(-1j * np.angle(z1)) * X
        y2 = _left_axis_point(Y)
        r2 = expectation(Y, y2)
        if abs(r2) <= 1e-14 * scale:
            return y2
        if r2.real > 0:
            continue
        psi = _real_combination(Y, y1, y2, complex(abs(z1)), r2, target_imag=False)
        val = abs(expectation(X, psi))
        if val < best_val:
            best, best_val = psi, val
        if val <= 1e-12 * scale:
            break
    if best is None:
        raise RuntimeError("could not construct a zero of the numerical range")
    return best


def dist_origin(X) -> NumRangeResult:
    """Distance from 0 to W(X) with a state attaining the minimum modulus."""
    X = as_square(X, "X")
    theta, f_opt, it = _maximize_support(X)
    if f_opt > 1e-12:
        psi = _face_achiever(X, theta)
        distance = f_opt
    else:
        psi = zero_achiever(X, theta)
        distance = 0.0
    value = expectation(X, psi)
    converged = abs(abs(value) - distance) <= ACHIEVER_TOL
    return NumRangeResult(distance, psi, value, converged, it)


def contains_zero(X) -> bool:
    return dist_origin(X).distance <= ZERO_TOL


def v_unitary(U) -> NumRangeResult:
    """Distance from 0 to W(U) for unitary U, using W(U) = conv(spectrum)."""
    U = as_unitary(U)
    phases, Z = eig_unitary(U)
    lam = np.exp(1j * phases)
    hull = geometry.convex_hull(lam)
    # map hull vertices back to eigenvector columns
    idx = [int(np.argmin(np.abs(lam - h))) for h in hull]
    dist, edge, s = geometry.polygon_distance(0j, hull)
    if edge >= 0:
        j = idx[edge]
        k = idx[(edge + 1) % len(idx)]
        psi = np.sqrt(1 - s) * Z[:, j] + np.sqrt(s) * Z[:, k] if j != k else Z[:, j]
    else:
        psi = None
        for m in range(1, len(hull) - 1):
            w = geometry.triangle_weights(0j, hull[0], hull[m], hull[m + 1])
            if w is not None:
                cols = Z[:, [idx[0], idx[m], idx[m + 1]]]
                psi = cols @ np.sqrt(w)
                break
        if psi is None:
            psi = zero_achiever(U)
    psi = psi / np.linalg.norm(psi)
    value = expectation(U, psi)
    return NumRangeResult(float(dist), psi, value, abs(abs(value) - dist) <= ACHIEVER_TOL, 0)

"""Product numerical range W_{d1:d2}(X) and its distance from the origin.

``z(X) = min |<a,b|X|a,b>|`` over unit ``a`` in C^d1 and ``b`` in C^d2. There is
no closed form in general; :func:`z_distance` runs a seesaw whose half-steps
are exact numerical-range problems on the partially contracted matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import numrange
from .geometry import segment_nearest
from .linalg import (
    DimensionError,
    as_square,
    as_state,
    as_unitary,
    check_split,
    default_rng,
    haar_unitary,
)

SEESAW_TOL = 1e-12
SEESAW_MAX_ITER = 500
DEFAULT_RESTARTS = 20
Z_ZERO_TOL = 1e-6


class ArcConditionError(ValueError):
    pass


@dataclass(frozen=True)
class PnrResult:
    distance: float
    achiever: tuple[np.ndarray, np.ndarray]
    value: complex
    restarts_used: int
    per_restart_history: list[float]
    converged: bool
    split: tuple[int, int] = (0, 0)
    # objective after every half-step, one list per restart
    trajectories: list[list[float]] = field(default_factory=list, repr=False)

    @property
    def product_state(self) -> np.ndarray:
        return np.kron(*self.achiever)


@dataclass(frozen=True)
class ShadowSampleSet:
    samples: np.ndarray
    n: int
    seed: int | None
    split: tuple[int, int]


def _as_bipartite(X, split) -> tuple[np.ndarray, int, int]:
    X = as_square(X, "X")
    d1, d2 = check_split(X.shape[0], split)
    return X, d1, d2


def product_value(X: np.ndarray, a: np.ndarray, b: np.ndarray) -> complex:
    psi = np.kron(a, b)
    return complex(np.vdot(psi, X @ psi))


def compress_left(X, a, split) -> np.ndarray:
    """``(<a| (x) I) X (|a> (x) I)``, a d2 x d2 matrix."""
    X, d1, d2 = _as_bipartite(X, split)
    a = as_state(a, "a")
    if a.size != d1:
        raise DimensionError(f"a has dimension {a.size}, expected {d1}")
    return np.einsum("i,ijkl,k->jl", a.conj(), X.reshape(d1, d2, d1, d2), a)


def compress_right(X, b, split) -> np.ndarray:
    """``(I (x) <b|) X (I (x) |b>)``, a d1 x d1 matrix."""
    X, d1, d2 = _as_bipartite(X, split)
    b = as_state(b, "b")
    if b.size != d2:
        raise DimensionError(f"b has dimension {b.size}, expected {d2}")
    return np.einsum("j,ijkl,l->ik", b.conj(), X.reshape(d1, d2, d1, d2), b)


def _seesaw(X4, d1, d2, rng, max_iter, tol):
    a = _random_unit(d1, rng)
    b = _random_unit(d2, rng)
    X = X4.reshape(d1 * d2, d1 * d2)
    obj = abs(product_value(X, a, b))
    trajectory = [obj]
    converged = False
    for _ in range(max_iter):
        start = obj
        for side in (0, 1):
            if side == 0:
                M = np.einsum("i,ijkl,k->jl", a.conj(), X4, a)
                cand = numrange.dist_origin(M).achiever
                new_a, new_b = a, cand
            else:
                M = np.einsum("j,ijkl,l->ik", b.conj(), X4, b)
                cand = numrange.dist_origin(M).achiever
                new_a, new_b = cand, b
            val = abs(product_value(X, new_a, new_b))
            # keep the objective monotone against solver round-off
            if val <= obj:
                a, b, obj = new_a, new_b, val
            trajectory.append(obj)
        if obj <= 1e-14 or start - obj < tol:
            converged = True
            break
    return a, b, obj, trajectory, converged


def _random_unit(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def z_distance(
    X,
    split,
    restarts: int = DEFAULT_RESTARTS,
    seed=None,
    max_iter: int = SEESAW_MAX_ITER,
    tol: float = SEESAW_TOL,
) -> PnrResult:
    """Distance from 0 to the product numerical range, by seesaw with restarts.

    Each restart alternates between exactly minimising over ``b`` with ``a``
    fixed and over ``a`` with ``b`` fixed. Restarts stop early once one of them
    reaches an exact zero.
    """
    X, d1, d2 = _as_bipartite(X, split)
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    X4 = X.reshape(d1, d2, d1, d2)
    rng = default_rng(seed)
    best = None
    finals, trajectories = [], []
    for child in rng.spawn(restarts):
        a, b, obj, traj, conv = _seesaw(X4, d1, d2, child, max_iter, tol)
        finals.append(obj)
        trajectories.append(traj)
        if best is None or obj < best[2]:
            best = (a, b, obj, conv)
        if best[2] <= 1e-14:
            break
    a, b, obj, conv = best
    value = product_value(X, a, b)
    return PnrResult(
        distance=abs(value),
        achiever=(a, b),
        value=value,
        restarts_used=len(finals),
        per_restart_history=finals,
        converged=conv,
        split=(d1, d2),
        trajectories=trajectories,
    )


def _product_grid(d: int, steps: int) -> np.ndarray:
    theta = np.linspace(0.0, np.pi / 2, steps)
    phi = 2 * np.pi * np.arange(steps) / steps
    if d == 1:
        return np.ones((1, 1), dtype=np.complex128)
    if d == 2:
        T, P = np.meshgrid(theta, phi, indexing="ij")
        T, P = T.ravel(), P.ravel()
        return np.stack([np.cos(T) + 0j, np.exp(1j * P) * np.sin(T)], axis=1)
    if d == 3:
        T1, T2, P1, P2 = (g.ravel() for g in np.meshgrid(theta, theta, phi, phi, indexing="ij"))
        return np.stack(
            [
                np.cos(T1) + 0j,
                np.exp(1j * P1) * np.sin(T1) * np.cos(T2),
                np.exp(1j * P2) * np.sin(T1) * np.sin(T2),
            ],
            axis=1,
        )
    raise DimensionError("grid parametrisation only for dimensions up to 3")


def grid_oracle(X, split, steps: int | None = None) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Exhaustive grid minimum of ``|<a,b|X|a,b>|`` for 2:2 and 2:3 splits.

    ``steps`` points per angle; defaults to 50 for 2:2 and 12 for 2:3 to keep
    the grid near 10^7 evaluations.
    """
    X, d1, d2 = _as_bipartite(X, split)
    if d1 != 2 or d2 > 3:
        raise DimensionError(f"grid oracle supports 2:2 and 2:3 only, got {d1}:{d2}")
    if steps is None:
        steps = 50 if d2 <= 2 else 12
    A = _product_grid(d1, steps)
    B = _product_grid(d2, steps)
    X4 = X.reshape(d1, d2, d1, d2)
    M = np.einsum("ai,ijkl,ak->ajl", A.conj(), X4, A)
    best_val, best_ab = np.inf, (0, 0)
    chunk = max(1, 4_000_000 // B.shape[0])
    for start in range(0, A.shape[0], chunk):
        vals = np.abs(np.einsum("bj,ajl,bl->ab", B.conj(), M[start : start + chunk], B))
        k = np.unravel_index(int(np.argmin(vals)), vals.shape)
        if vals[k] < best_val:
            best_val, best_ab = float(vals[k]), (start + k[0], k[1])
    return best_val, (A[best_ab[0]], B[best_ab[1]])


def z_product_case(U1, U2) -> float:
    """``z(U1 (x) U2) = v(U1) v(U2)``."""
    return numrange.v_unitary(U1).distance * numrange.v_unitary(U2).distance


def _arc_length(phases: np.ndarray) -> float:
    """Length of the shortest closed arc containing all the given phases."""
    p = np.sort(np.mod(phases, 2 * np.pi))
    gaps = np.diff(np.concatenate([p, [p[0] + 2 * np.pi]]))
    return 2 * np.pi - float(np.max(gaps))


def _segment_family_min(A0, A1, B0, B1) -> float:
    """min over q, p in [0,1] of |p A(q) + (1-p) B(q)|, A(q) = q A0 + (1-q) A1."""

    def g(q):
        return segment_nearest(0j, q * A0 + (1 - q) * A1, q * B0 + (1 - q) * B1)[0]

    qs = np.linspace(0.0, 1.0, 101)
    vals = np.array([g(q) for q in qs])
    k = int(np.argmin(vals))
    lo, hi = qs[max(k - 1, 0)], qs[min(k + 1, len(qs) - 1)]
    while hi - lo > 1e-10:
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if g(m1) <= g(m2):
            hi = m2
        else:
            lo = m1
    return min(float(vals[k]), g((lo + hi) / 2))


def z_diagonal_quadruples(D, split) -> float:
    """z of a diagonal unitary whose spectrum lies in a closed arc of length pi.

    Under that condition only 2x2 blocks of the eigenvalue grid
    ``D[i, j] = D_{(i,j),(i,j)}`` need to be searched.
    """
    D, d1, d2 = _as_bipartite(D, split)
    as_unitary(D, "D")
    if np.max(np.abs(D - np.diag(np.diag(D)))) > 1e-10:
        raise ValueError("D must be diagonal")
    diag = np.diag(D)
    if _arc_length(np.angle(diag)) > np.pi + 1e-12:
        raise ArcConditionError("eigenvalues are not contained in a closed arc of length pi")
    grid = diag.reshape(d1, d2)
    rows = list(itertools.combinations(range(d1), 2)) or [(0, 0)]
    cols = list(itertools.combinations(range(d2), 2)) or [(0, 0)]
    best = np.inf
    for i1, i2 in rows:
        for j1, j2 in cols:
            val = _segment_family_min(grid[i1, j1], grid[i1, j2], grid[i2, j1], grid[i2, j2])
            best = min(best, val)
    return float(best)


def trace_upper_bound(X, split) -> float:
    """``|tr X| / (d1 d2)``: the spectral barycenter lies in the product range."""
    X, d1, d2 = _as_bipartite(X, split)
    return float(abs(np.trace(X)) / (d1 * d2))


def shadow_sample(X, split, n: int, seed=None) -> ShadowSampleSet:
    """Monte Carlo values ``<a,b|X|a,b>`` for independent Haar random ``a``, ``b``."""
    X, d1, d2 = _as_bipartite(X, split)
    rng = default_rng(seed)
    A = rng.standard_normal((n, d1)) + 1j * rng.standard_normal((n, d1))
    B = rng.standard_normal((n, d2)) + 1j * rng.standard_normal((n, d2))
    A /= np.linalg.norm(A, axis=1, keepdims=True) if n else 1
    B /= np.linalg.norm(B, axis=1, keepdims=True) if n else 1
    X4 = X.reshape(d1, d2, d1, d2)
    samples = np.einsum("ni,nj,ijkl,nk,nl->n", A.conj(), B.conj(), X4, A, B, optimize=True)
    return ShadowSampleSet(samples, n, seed if isinstance(seed, (int, np.integer)) else None, (d1, d2))


def theorem_bound(d1: int, d2: int) -> float:
    """Asymptotic lower bound ``1 - exp(-(log 2 / 2) max(d1^2, d2^2))`` on P(z = 0)."""
    return 1.0 - np.exp(-np.log(2) / 2 * max(d1, d2) ** 2)


def zero_fraction_study(
    d1: int,
    d2: int,
    trials: int,
    seed=None,
    restarts: int = DEFAULT_RESTARTS,
    zero_tol: float = Z_ZERO_TOL,
) -> tuple[float, list[float]]:
    """Fraction of Haar random unitaries of size d1*d2 with z = 0 (up to ``zero_tol``)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = default_rng(seed)
    distances = []
    for child in rng.spawn(trials):
        U = haar_unitary(d1 * d2, child)
        distances.append(z_distance(U, (d1, d2), restarts=restarts, seed=child).distance)
    fraction = float(np.mean(np.array(distances) <= zero_tol))
    return fraction, distances


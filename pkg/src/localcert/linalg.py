"""Dense complex linear algebra, validated quantum objects and example matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Bipartite
matrices of size ``d1*d2`` use the ``np.kron`` ordering: the amplitude
``a[i1] * b[i2]`` of ``|a> (x) |b>`` sits at flat index ``i1*d2 + i2``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-12


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


def as_matrix(X, name: str = "matrix") -> np.ndarray:
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} has non-finite entries")
    return X


def as_square(X, name: str = "matrix") -> np.ndarray:
    X = as_matrix(X, name)
    if X.shape[0] != X.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {X.shape}")
    return X


def check_split(dim: int, split) -> tuple[int, int]:
    d1, d2 = (int(s) for s in split)
    if d1 < 1 or d2 < 1 or d1 * d2 != dim:
        raise DimensionError(f"split {d1}:{d2} does not factor dimension {dim}")
    return d1, d2


def unitarity_defect(U: np.ndarray) -> float:
    """max |(U^dag U - I)_ij|"""
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def as_unitary(U, name: str = "U", tol: float = UNITARY_TOL) -> np.ndarray:
    U = as_square(U, name)
    defect = unitarity_defect(U)
    if defect > tol:
        raise NotUnitaryError(f"{name} is not unitary (defect {defect:.3g} > {tol:g})")
    return U


def as_state(psi, name: str = "state", tol: float = NORM_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    if psi.size < 1 or not np.all(np.isfinite(psi)):
        raise ValueError(f"{name} must be a finite non-empty vector")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"{name} is not normalised (norm {norm!r})")
    return psi


def normalize(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def multiply(A, B) -> np.ndarray:
    A, B = as_matrix(A, "A"), as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A, "A"), as_matrix(B, "B"))


def dagger(X: np.ndarray) -> np.ndarray:
    return X.conj().T


def eig_hermitian(H) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of ``H``."""
    H = as_square(H, "H")
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_TOL:
        raise NotHermitianError("H is not Hermitian")
    return np.linalg.eigh((H + H.conj().T) / 2)


def eig_unitary(U) -> tuple[np.ndarray, np.ndarray]:
    """Principal eigenphases in (-pi, pi] and orthonormal eigenvectors of ``U``.

    Uses the complex Schur form, which is diagonal for a normal matrix, so the
    Schur vectors are an orthonormal eigenbasis even for degenerate spectra.
    """
    U = as_unitary(U)
    T, Z = scipy.linalg.schur(U, output="complex")
    phases = np.angle(np.diag(T))
    # np.angle maps -1 to +pi or -pi depending on the sign of a zero imaginary part
    phases[phases <= -np.pi + 1e-15] = np.pi
    return phases, Z


def unitary_power(U, alpha: float) -> np.ndarray:
    """``U**alpha`` on the principal branch, for ``alpha`` in [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    phases, Z = eig_unitary(U)
    return (Z * np.exp(1j * alpha * phases)) @ Z.conj().T


def default_rng(seed=None) -> np.random.Generator:
    """Accepts an int, a SeedSequence or an existing Generator (returned as is)."""
    return np.random.default_rng(seed)


def haar_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar random unitary: QR of a Ginibre matrix with R-diagonal phase fix."""
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = default_rng(seed)
    G = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_state(dim: int, seed=None) -> np.ndarray:
    """Haar random pure state from a normalised complex Gaussian vector."""
    rng = default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def max_entangled(d: int, normalized: bool = False) -> np.ndarray:
    """``sum_i |i,i>``, optionally divided by sqrt(d)."""
    v = np.eye(d, dtype=np.complex128).ravel()
    return v / np.sqrt(d) if normalized else v


def reflection_example(d: int) -> np.ndarray:
    """``I - (2/d)|I_d><I_d|`` on C^d (x) C^d with the unnormalised ``|I_d>``.

    Hermitian and unitary with eigenvalues {-1, 1, ..., 1}; its numerical range
    is [-1, 1] while every product state gives at least ``(d-2)/d`` in modulus.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    w = max_entangled(d)
    return np.eye(d * d, dtype=np.complex128) - (2.0 / d) * np.outer(w, w.conj())


def t_alpha_family(U, V, alpha: float) -> np.ndarray:
    """``(U (x) V)^(1-alpha) (I - 2|psi><psi|)^alpha`` with ``|psi>`` maximally entangled.

    Interpolates between the product unitary ``U (x) V`` (alpha=0) and the
    reflection about the normalised maximally entangled state (alpha=1).
    """
    U, V = as_unitary(U, "U"), as_unitary(V, "V")
    if U.shape != V.shape:
        raise DimensionError(f"U and V must have the same size, got {U.shape} and {V.shape}")
    d = U.shape[0]
    psi = max_entangled(d, normalized=True)
    R = np.eye(d * d, dtype=np.complex128) - 2.0 * np.outer(psi, psi.conj())
    return unitary_power(np.kron(U, V), 1.0 - alpha) @ unitary_power(R, alpha)

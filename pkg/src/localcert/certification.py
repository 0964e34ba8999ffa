"""Certification of unitary channels: H0 = Psi_U against H1 = Psi_V.

For a pure input ``psi`` the two hypotheses produce ``h0 = U psi`` and
``h1 = V psi``. With ``x = <h1|h0> = <psi|V^dag U|psi>`` the best two-outcome
test at significance ``delta`` has type II error ``pii_from_distance(|x|, delta)``,
so the optimal input minimises ``|x|``: over product states for local (LOCC)
strategies and over all states for global ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numrange, pnr
from .linalg import (
    DimensionError,
    as_unitary,
    check_split,
    default_rng,
    haar_unitary,
)

CLAMP_TOL = 1e-12


class ProtocolSearchError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (best residual {residual:.3g})")
        self.residual = residual


def pii_from_distance(dist: float, delta: float) -> float:
    """Minimal type II error for overlap modulus ``dist`` at significance ``delta``."""
    dist, delta = _clamp_unit(dist, "dist"), _clamp_unit(delta, "delta")
    if dist <= math.sqrt(delta):
        return 0.0
    return (dist * math.sqrt(1 - delta) - math.sqrt(1 - dist**2) * math.sqrt(delta)) ** 2


def _clamp_unit(x: float, name: str) -> float:
    x = float(x)
    if not -CLAMP_TOL <= x <= 1 + CLAMP_TOL:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
    # snap to the ends: near 1 the error formula has unbounded slope in dist
    if x <= CLAMP_TOL:
        return 0.0
    if x >= 1 - CLAMP_TOL:
        return 1.0
    return x


@dataclass(frozen=True)
class CertificationProblem:
    U: np.ndarray
    V: np.ndarray
    delta: float
    split: tuple[int, int]

    def __post_init__(self):
        U, V = as_unitary(self.U, "U"), as_unitary(self.V, "V")
        if U.shape != V.shape:
            raise DimensionError(f"U and V differ in size: {U.shape} vs {V.shape}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "split", check_split(U.shape[0], self.split))

    @property
    def relative(self) -> np.ndarray:
        """``V^dag U``; both error probabilities depend on the pair only through it."""
        return self.V.conj().T @ self.U


@dataclass(frozen=True)
class CertificationPlan:
    mode: str  # "local" or "global"
    distance: float  # z for local plans, v for global ones
    delta: float
    p2_predicted: float
    input_state: np.ndarray  # full input vector on C^d1 (x) C^d2
    product_factors: tuple[np.ndarray, np.ndarray] | None
    h0: np.ndarray
    h1: np.ndarray
    omega: np.ndarray
    omega_perp: np.ndarray | None
    branch: str  # "orthogonal" (distance <= sqrt(delta)) or "tilted"
    converged: bool
    split: tuple[int, int]

    @property
    def rejection_state(self) -> np.ndarray:
        """The state the final measurement must reject with certainty."""
        return self.h1 if self.omega_perp is None else self.omega_perp


def _unit_orthogonal_to(v: np.ndarray) -> np.ndarray:
    n = v.size
    Q, _ = np.linalg.qr(np.column_stack([v, np.eye(n, dtype=np.complex128)]))
    return Q[:, 1]


def build_omega(h0: np.ndarray, h1: np.ndarray, delta: float, distance: float | None = None):
    """Acceptance vector ``omega`` of the optimal pure-state test, its partner and the branch.

    The branch follows ``distance`` (default ``|<h1|h0>|``) after the same end
    snapping as ``pii_from_distance``, so a reported zero always gives the
    orthogonal branch.
    """
    x = np.vdot(h1, h0)
    z = _clamp_unit(min(abs(x) if distance is None else distance, 1.0), "distance")
    if z <= math.sqrt(delta):
        w = h0 - x * h1
        norm = np.linalg.norm(w)
        # h0 parallel to h1 only happens at delta = 1
        omega = w / norm if norm > 1e-12 else _unit_orthogonal_to(h1)
        return omega, None, "orthogonal"
    c = np.conj(x)  # <h0|h1>
    s = c / abs(c)
    perp = h1 - c * h0
    norm = np.linalg.norm(perp)
    h0_perp = perp / norm if norm > 1e-12 else _unit_orthogonal_to(h0)
    omega = math.sqrt(1 - delta) * s * h0 - math.sqrt(delta) * h0_perp
    omega_perp = math.sqrt(delta) * h0 + math.sqrt(1 - delta) * np.conj(s) * h0_perp
    return omega, omega_perp, "tilted"


def _plan(problem, mode, distance, psi, factors, converged) -> CertificationPlan:
    h0, h1 = problem.U @ psi, problem.V @ psi
    omega, omega_perp, branch = build_omega(h0, h1, problem.delta, distance)
    return CertificationPlan(
        mode=mode,
        distance=float(distance),
        delta=problem.delta,
        p2_predicted=pii_from_distance(min(distance, 1.0), problem.delta),
        input_state=psi,
        product_factors=factors,
        h0=h0,
        h1=h1,
        omega=omega,
        omega_perp=omega_perp,
        branch=branch,
        converged=converged,
        split=problem.split,
    )


def certify_local(problem: CertificationProblem, restarts: int = pnr.DEFAULT_RESTARTS, seed=None) -> CertificationPlan:
    """Optimal LOCC strategy: product input minimising |<a,b|V^dag U|a,b>|."""
    res = pnr.z_distance(problem.relative, problem.split, restarts=restarts, seed=seed)
    a, b = res.achiever
    return _plan(problem, "local", res.distance, np.kron(a, b), (a, b), res.converged)


def certify_global(problem: CertificationProblem, seed=None) -> CertificationPlan:
    """Optimal unrestricted strategy: any input minimising |<psi|V^dag U|psi>|."""
    res = numrange.dist_origin(problem.relative)
    return _plan(problem, "global", res.distance, res.achiever, None, res.converged)


@dataclass(frozen=True)
class OneWayProtocol:
    """Alice measures in ``alice_basis`` (columns) and announces ``i``; Bob then
    measures ``{|nu_i><nu_i|, I - |nu_i><nu_i|}`` and outcome 0 (the ``nu_i``
    direction) means reject. ``bob_vectors[i] is None`` means Bob always accepts.
    """

    alice_basis: np.ndarray
    bob_vectors: list[np.ndarray | None]
    residual: float
    split: tuple[int, int]

    @staticmethod
    def post_process(bob_outcome: int) -> int:
        """Bob's outcome to decision: 0 accepts H0, 1 rejects it."""
        return 1 if bob_outcome == 0 else 0

    def bob_effects(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """(accept, reject) effects for Alice outcome ``i``."""
        d2 = self.split[1]
        nu = self.bob_vectors[i]
        reject = np.zeros((d2, d2), dtype=np.complex128) if nu is None else np.outer(nu, nu.conj())
        return np.eye(d2) - reject, reject

    def accept_effect(self) -> np.ndarray:
        """Global effect Omega_0 = sum_i |a_i><a_i| (x) (I - |nu_i><nu_i|)."""
        out = 0
        for i in range(self.alice_basis.shape[1]):
            a = self.alice_basis[:, i]
            out = out + np.kron(np.outer(a, a.conj()), self.bob_effects(i)[0])
        return out


def _zero_diagonal_basis(A: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) in which the traceless ``A`` has zero diagonal.

    Peels off one unit vector at a time with <u|A|u> = 0 inside the orthogonal
    complement of the previous ones; the trace of each compression stays zero,
    so 0 remains in its numerical range.
    """
    n = A.shape[0]
    P = Q
    cols = []
    while P.shape[1] > 1:
        B = P.conj().T @ A @ P
        u = numrange.zero_achiever(B)
        cols.append(P @ u)
        m = P.shape[1]
        R, _ = np.linalg.qr(np.column_stack([u, np.eye(m, dtype=np.complex128)]))
        P = P @ R[:, 1:m]
    cols.append(P[:, 0])
    basis = np.column_stack(cols)
    assert basis.shape == (n, n)
    return basis


def one_way_protocol(omega, omega_prime, split, seed=None, retries: int = 10) -> OneWayProtocol:
    """One-way LOCC measurement accepting ``omega`` and rejecting ``omega_prime`` perfectly.

    Alice's basis is chosen so that Bob's conditional states
    ``eta_i = (<a_i| (x) I) omega`` and ``nu_i = (<a_i| (x) I) omega_prime`` are
    orthogonal for every ``i``. With ``Omega, Omega'`` the d1 x d2 coefficient
    matrices, ``<eta_i|nu_i> = <u_i|conj(Omega) Omega'^T|u_i>`` for
    ``u_i = conj(a_i)``, whose trace is ``<omega|omega'> = 0``; a zero-diagonal
    basis of that matrix is exactly what is needed.
    """
    omega = np.asarray(omega, dtype=np.complex128)
    omega_prime = np.asarray(omega_prime, dtype=np.complex128)
    d1, d2 = check_split(omega.size, split)
    if abs(np.vdot(omega, omega_prime)) > 1e-8:
        raise ValueError("omega and omega_prime must be orthogonal")
    W, Wp = omega.reshape(d1, d2), omega_prime.reshape(d1, d2)
    A = W.conj() @ Wp.T
    rng = default_rng(seed)
    best_res = np.inf
    for attempt in range(retries):
        Q = np.eye(d1, dtype=np.complex128) if attempt == 0 else haar_unitary(d1, rng)
        try:
            Ubasis = _zero_diagonal_basis(A, Q)
        except RuntimeError:
            continue
        residual = float(np.sum(np.abs(np.einsum("ik,ij,jk->k", Ubasis.conj(), A, Ubasis)) ** 2))
        best_res = min(best_res, residual)
        if residual > 1e-9:
            continue
        bob = []
        for k in range(d1):
            nu = Wp.T @ Ubasis[:, k]
            n = np.linalg.norm(nu)
            bob.append(nu / n if n > 1e-12 else None)
        protocol = OneWayProtocol(Ubasis.conj(), bob, residual, (d1, d2))
        Om = protocol.accept_effect()
        acc = np.vdot(omega, Om @ omega).real
        rej = np.vdot(omega_prime, Om @ omega_prime).real
        if acc >= 1 - 1e-8 and rej <= 1e-8:
            return protocol
    raise ProtocolSearchError("no biorthogonal Alice basis found", best_res)


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    p = successes / n
    denom = 1 + z**2 / n
    centre = (p + z**2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z**2 / (4 * n**2)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == n else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class ProtocolTranscript:
    shots: int
    alice_basis: np.ndarray
    bob_vectors: list[np.ndarray | None]
    counts: dict[str, dict[str, int]]  # true channel -> decision -> count
    exact_p1: float
    exact_p2: float
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def p1_hat(self) -> float:
        return self.counts["U"]["reject"] / self.shots

    @property
    def p2_hat(self) -> float:
        return self.counts["V"]["accept"] / self.shots

    def wilson(self) -> dict[str, tuple[float, float]]:
        return {
            "p1": wilson_interval(self.counts["U"]["reject"], self.shots),
            "p2": wilson_interval(self.counts["V"]["accept"], self.shots),
        }


def _acceptance_by_outcome(state: np.ndarray, protocol: OneWayProtocol):
    d1, d2 = protocol.split
    eta = state.reshape(d1, d2).T @ protocol.alice_basis.conj()  # column i: Bob's conditional vector
    p_alice = np.sum(np.abs(eta) ** 2, axis=0)
    p_reject = np.zeros(d1)
    for i, nu in enumerate(protocol.bob_vectors):
        if nu is not None and p_alice[i] > 0:
            p_reject[i] = min(1.0, abs(np.vdot(nu, eta[:, i])) ** 2 / p_alice[i])
    return p_alice / p_alice.sum(), p_reject


def simulate_protocol(
    problem: CertificationProblem,
    plan: CertificationPlan,
    protocol: OneWayProtocol,
    shots: int,
    seed=None,
) -> ProtocolTranscript:
    """Monte Carlo run of the one-way protocol under both hypotheses.

    Per shot: the true channel acts on the plan's input, Alice measures with
    Born probabilities, Bob measures conditioned on her outcome. Shots are
    drawn in bulk: a multinomial over Alice outcomes, then a binomial per
    outcome for Bob.
    """
    if protocol.split != problem.split or plan.split != problem.split:
        raise DimensionError("protocol, plan and problem splits differ")
    rng = default_rng(seed)
    counts, exact = {}, {}
    for name, W in (("U", problem.U), ("V", problem.V)):
        p_alice, p_reject = _acceptance_by_outcome(W @ plan.input_state, protocol)
        n_i = rng.multinomial(shots, p_alice)
        rejects = int(sum(rng.binomial(int(n), float(q)) for n, q in zip(n_i, p_reject)))
        counts[name] = {"accept": shots - rejects, "reject": rejects}
        exact[name] = float(np.dot(p_alice, p_reject))
    return ProtocolTranscript(
        shots=shots,
        alice_basis=protocol.alice_basis,
        bob_vectors=protocol.bob_vectors,
        counts=counts,
        exact_p1=exact["U"],
        exact_p2=1.0 - exact["V"],
        seed=seed if isinstance(seed, (int, np.integer)) else None,
    )


@dataclass(frozen=True)
class MeasurementBound:
    bound: float
    e_phases: np.ndarray
    f_phases: np.ndarray
    evaluations: int
    starts: int


def measurement_lower_bound(
    U,
    V,
    delta: float,
    split,
    starts: int = 3,
    max_evals: int = 400,
    restarts: int = 4,
    seed=None,
) -> MeasurementBound:
    """Lower bound on the LOCC type II error for von Neumann measurements P_U vs P_V.

    Maximises the channel error ``p2(UE, VF)`` over diagonal unitaries E, F by
    pattern search on the 2 d1 d2 phases: each coordinate is moved by +-step,
    improvements are kept, and the step halves when a sweep stalls. The first
    start is E = F = I; the rest are uniform random phases. The inner z is a
    seesaw with a fixed seed, so the objective is deterministic.
    """
    U, V = as_unitary(U, "U"), as_unitary(V, "V")
    d1, d2 = check_split(U.shape[0], split)
    n = d1 * d2
    rng = default_rng(seed)
    inner_seed = int(rng.integers(2**63))
    evals = 0

    def objective(x):
        nonlocal evals
        evals += 1
        E, F = np.exp(1j * x[:n]), np.exp(1j * x[n:])
        rel = (V * F).conj().T @ (U * E)
        if delta >= 1.0:
            return 0.0
        z = pnr.z_distance(rel, (d1, d2), restarts=restarts, seed=inner_seed).distance
        return pii_from_distance(min(z, 1.0), delta)

    best_x, best_val = np.zeros(2 * n), -np.inf
    per_start = max(1, max_evals // max(starts, 1))
    for s in range(starts):
        x = np.zeros(2 * n) if s == 0 else rng.uniform(0, 2 * np.pi, 2 * n)
        val = objective(x)
        budget = evals + per_start
        step = np.pi / 2
        while step > 1e-4 and evals < budget and val < (1 - delta) - 1e-12:
            improved = False
            for k in range(2 * n):
                for sign in (1.0, -1.0):
                    trial = x.copy()
                    trial[k] += sign * step
                    tv = objective(trial)
                    if tv > val + 1e-12:
                        x, val, improved = trial, tv, True
                        break
                if evals >= budget:
                    break
            if not improved:
                step /= 2
        if val > best_val:
            best_x, best_val = x, val
        if best_val >= (1 - delta) - 1e-12:
            break
    return MeasurementBound(
        bound=float(best_val),
        e_phases=np.mod(best_x[:n], 2 * np.pi),
        f_phases=np.mod(best_x[n:], 2 * np.pi),
        evaluations=evals,
        starts=starts,
    )

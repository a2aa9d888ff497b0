"""Variational machinery for the maximal product overlap.

Two independent routes are provided.  The first is a multi-start alternating
(power-iteration style) maximization of ``|<q1 ... qn|psi>|`` over product
states, which serves as the brute-force oracle for every closed form in the
package.  The second works on a two-qubit reduced density matrix in Bloch
form and solves the stationarity system for the two unit Bloch vectors, either
by alternating closed-form updates (maximization) or by a damped Newton search
that enumerates all stationary branches.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import ConvergenceError, InputError
from .states import (
    BlochVector,
    DensityMatrix,
    ProductState,
    PureState,
    Qubit,
    bloch_vector,
    correlation_matrix,
    partial_trace,
)

_LETTERS = "abcdefghijklmnopqrstuvwxyz"

STATIONARITY_TOL = 1e-9


@dataclass(frozen=True)
class OracleConfig:
    """Settings for the multi-start product-overlap maximization."""

    n_starts: int = 64
    max_iters: int = 10000
    conv_tol: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1 or self.max_iters < 1 or self.conv_tol <= 0:
            raise InputError("oracle settings must be positive")
        if self.conv_tol >= 1e-6:
            raise InputError("conv_tol must be below 1e-6")


@dataclass(frozen=True)
class StationaryPoint:
    """One stationary point of the product overlap."""

    lam: float
    product: ProductState
    iterations: int
    converged: bool
    residual: float = float("nan")
    restarts: int = 0

    @property
    def lam_sq(self) -> float:
        return self.lam**2


def _haar_qubits(rng: np.ndarray, count: int, n: int) -> np.ndarray:
    q = rng.normal(size=(count, n, 2)) + 1j * rng.normal(size=(count, n, 2))
    return q / np.linalg.norm(q, axis=2, keepdims=True)


def _single_excitation_starts(n: int) -> np.ndarray:
    q = np.zeros((n, n, 2), dtype=complex)
    q[:, :, 0] = 1.0
    for k in range(n):
        q[k, k] = (0.0, 1.0)
    return q


def _contract_except(t: np.ndarray, qc: np.ndarray, k: int, n: int) -> np.ndarray:
    """Batch contraction ``<q1 ... (skip k) ... qn|psi>`` over the start axis."""
    js = [j for j in range(n) if j != k]
    spec = (
        _LETTERS[:n]
        + ","
        + ",".join("s" + _LETTERS[j] for j in js)
        + "->s"
        + _LETTERS[k]
    )
    return np.einsum(spec, t, *(qc[:, j, :] for j in js), optimize=True)


def _residual_batch(t: np.ndarray, q: np.ndarray, lam: np.ndarray, n: int) -> np.ndarray:
    """Max stationarity residual ``||<...skip k...|psi> - lam q_k||`` over k, per start."""
    qc = np.conj(q)
    residual = np.zeros(q.shape[0])
    for k in range(n):
        w = _contract_except(t, qc, k, n)
        residual = np.maximum(
            residual, np.linalg.norm(w - lam[:, None] * q[:, k, :], axis=1)
        )
    return residual


def _hopm_batch(
    psi: PureState, q0: np.ndarray, config: OracleConfig, rng
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Run alternating overlap maximization on a batch of product-state starts.

    A start finishes when the sweep-to-sweep overlap change is below
    ``conv_tol`` and the stationarity residual is below the residual gate;
    both are required because the overlap plateaus early on flat ridges while
    the factors are still moving.  The overlap is non-decreasing from sweep to
    sweep; a violation beyond rounding noise is a hard error.
    """
    n = psi.n_qubits
    t = psi.tensor()
    q = q0.astype(complex).copy()
    s = q.shape[0]
    lam = np.zeros(s)
    iters = np.full(s, config.max_iters, dtype=int)
    restarts = np.zeros(s, dtype=int)
    residual = np.full(s, np.inf)
    converged = np.zeros(s, dtype=bool)
    active = np.ones(s, dtype=bool)
    for sweep in range(1, config.max_iters + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        qa = q[idx]
        qc = np.conj(qa)
        for k in range(n):
            w = _contract_except(t, qc, k, n)
            norms = np.linalg.norm(w, axis=1)
            dead = norms < 1e-14
            if dead.any():
                # The conditional state vanished; restart those factors randomly.
                w[dead] = _haar_qubits(rng, int(dead.sum()), 1)[:, 0, :]
                norms[dead] = 1.0
                restarts[idx[dead]] += 1
            qa[:, k, :] = w / norms[:, None]
            qc[:, k, :] = np.conj(qa[:, k, :])
        new_lam = np.minimum(norms, 1.0)
        if (new_lam < lam[idx] - 1e-12).any():
            raise ConvergenceError("overlap decreased between sweeps")
        plateaued = np.abs(new_lam - lam[idx]) < config.conv_tol
        q[idx] = qa
        lam[idx] = np.maximum(new_lam, lam[idx])
        if plateaued.any():
            sub = idx[plateaued]
            res = _residual_batch(t, q[sub], lam[sub], n)
            residual[sub] = res
            done = res < STATIONARITY_TOL
            finished = sub[done]
            iters[finished] = sweep
            converged[finished] = True
            active[finished] = False
    still = np.flatnonzero(active)
    if still.size:
        residual[still] = _residual_batch(t, q[still], lam[still], n)
    return lam, q, iters, residual, restarts, converged


def _point_from_batch(lam, q, iters, residual, restarts, converged, idx) -> StationaryPoint:
    factors = tuple(Qubit.from_vector(q[idx, k, :]) for k in range(q.shape[1]))
    return StationaryPoint(
        lam=float(lam[idx]),
        product=ProductState(factors),
        iterations=int(iters[idx]),
        converged=bool(converged[idx]),
        residual=float(residual[idx]),
        restarts=int(restarts[idx]),
    )


def stationary_iterate(
    psi: PureState, start: ProductState, config: OracleConfig | None = None
) -> StationaryPoint:
    """Drive one product-state start to a stationary point of the overlap."""
    config = config or OracleConfig()
    if start.n_qubits != psi.n_qubits:
        raise InputError("start has the wrong number of factors")
    rng = np.random.default_rng(config.seed)
    q0 = np.array([[f.vector() for f in start.factors]])
    return _point_from_batch(*_hopm_batch(psi, q0, config, rng), 0)


def oracle_scan(psi: PureState, config: OracleConfig | None = None) -> list[StationaryPoint]:
    """All per-start stationary points: random starts plus the n one-excitation starts."""
    config = config or OracleConfig()
    n = psi.n_qubits
    rng = np.random.default_rng(config.seed)
    q0 = np.concatenate([_haar_qubits(rng, config.n_starts, n), _single_excitation_starts(n)])
    results = _hopm_batch(psi, q0, config, rng)
    return [_point_from_batch(*results, i) for i in range(q0.shape[0])]


def oracle_lambda_max(psi: PureState, config: OracleConfig | None = None) -> StationaryPoint:
    """Best product overlap over all starts.

    Ties within 1e-9 of the best overlap are broken deterministically by the
    lexicographically largest tuple of factor Bloch z-components, so the result
    does not depend on scheduling or start order.
    """
    points = oracle_scan(psi, config)
    best = max(p.lam for p in points)
    contenders = [p for p in points if p.lam >= best - 1e-9]

    def zkey(p: StationaryPoint):
        return tuple(f.bloch().z for f in p.product.factors)

    return max(contenders, key=lambda p: (zkey(p), p.lam))


# --- two-qubit reduced-state route ---------------------------------------


def _bloch_problem(
    rho_ab: DensityMatrix | None,
    r1: BlochVector | np.ndarray | None,
    r2: BlochVector | np.ndarray | None,
    g: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if rho_ab is not None:
        ra = bloch_vector(partial_trace(rho_ab, 2, {1})).array()
        rb = bloch_vector(partial_trace(rho_ab, 2, {0})).array()
        gm = correlation_matrix(rho_ab)
        return ra, rb, gm
    if r1 is None or r2 is None or g is None:
        raise InputError("provide either rho_ab or all of r1, r2, g")
    ra = r1.array() if isinstance(r1, BlochVector) else np.asarray(r1, dtype=float)
    rb = r2.array() if isinstance(r2, BlochVector) else np.asarray(r2, dtype=float)
    return ra, rb, np.asarray(g, dtype=float)


def pmax_from_reduced(
    rho_ab: DensityMatrix | None = None,
    r1: BlochVector | np.ndarray | None = None,
    r2: BlochVector | np.ndarray | None = None,
    g: np.ndarray | None = None,
    n_starts: int = 24,
    seed: int = 0,
) -> float:
    """Maximal ``(1 + s1.r1 + s2.r2 + s1.g.s2)/4`` over unit Bloch vectors.

    For a two-qubit reduced state of a three-qubit pure state this equals the
    squared maximal product overlap of the pure state.  Each alternating update
    replaces one vector by the normalized gradient, which is the exact
    single-vector maximizer, so the objective never decreases.
    """
    ra, rb, gm = _bloch_problem(rho_ab, r1, r2, g)
    rng = np.random.default_rng(seed)
    starts = [rng.normal(size=3) for _ in range(n_starts)]
    starts += [np.array(v, dtype=float) for v in
               ([0, 0, 1], [0, 0, -1], [1, 0, 0], [0, 1, 0])]
    best = -np.inf
    for s2 in starts:
        nrm = np.linalg.norm(s2)
        s2 = s2 / nrm if nrm > 1e-14 else np.array([0.0, 0.0, 1.0])
        prev = -np.inf
        for _ in range(2000):
            w = ra + gm @ s2
            n1 = np.linalg.norm(w)
            s1 = w / n1 if n1 > 1e-14 else np.array([0.0, 0.0, 1.0])
            w = rb + gm.T @ s1
            n2 = np.linalg.norm(w)
            s2 = w / n2 if n2 > 1e-14 else np.array([0.0, 0.0, 1.0])
            val = 0.25 * (1.0 + s1 @ ra + s2 @ rb + s1 @ gm @ s2)
            if val - prev < 1e-15:
                break
            prev = val
        best = max(best, val)
    return float(min(best, 1.0))


@dataclass(frozen=True)
class LagrangeSolution:
    """One stationary branch of the two-vector Bloch maximization."""

    s1: BlochVector
    s2: BlochVector
    lambda1: float
    lambda2: float
    value: float
    residual: float
    degenerate: bool = False


def solve_lagrange_general(
    rho_ab: DensityMatrix | None = None,
    r1: BlochVector | np.ndarray | None = None,
    r2: BlochVector | np.ndarray | None = None,
    g: np.ndarray | None = None,
    n_starts: int = 160,
    seed: int = 0,
) -> list[LagrangeSolution]:
    """Enumerate real stationary branches of the reduced-state maximization.

    Solves ``r1 + g s2 = lambda1 s1``, ``r2 + g^T s1 = lambda2 s2`` together
    with ``|s1| = |s2| = 1`` by a multi-start damped Newton iteration on the
    full eight-variable system.  Solutions on which the matrix
    ``lambda1 lambda2 I - g g^T`` is singular belong to a one-parameter family
    (a free direction exists); they are reported once with ``degenerate=True``
    rather than expanded.

    The returned list is sorted by decreasing objective value, so the first
    entry is the global maximum branch.
    """
    ra, rb, gm = _bloch_problem(rho_ab, r1, r2, g)
    rng = np.random.default_rng(seed)
    found: list[LagrangeSolution] = []
    keys: list[tuple] = []

    axis = [np.array(v, dtype=float) for v in
            ([0, 0, 1], [0, 0, -1], [1, 0, 0], [0, 1, 0])]
    starts = [(a, b) for a in axis for b in axis]
    for _ in range(n_starts):
        a = rng.normal(size=3)
        b = rng.normal(size=3)
        starts.append((a / np.linalg.norm(a), b / np.linalg.norm(b)))

    eye = np.eye(3)
    for s1, s2 in starts:
        x = np.concatenate([s1, s2, [s1 @ (ra + gm @ s2), s2 @ (rb + gm.T @ s1)]])
        ok = False
        for _ in range(200):
            v1, v2, l1, l2 = x[:3], x[3:6], x[6], x[7]
            fval = np.concatenate(
                [ra + gm @ v2 - l1 * v1, rb + gm.T @ v1 - l2 * v2,
                 [v1 @ v1 - 1.0, v2 @ v2 - 1.0]]
            )
            if np.linalg.norm(fval) < 1e-13:
                ok = True
                break
            jac = np.zeros((8, 8))
            jac[:3, :3] = -l1 * eye
            jac[:3, 3:6] = gm
            jac[:3, 6] = -v1
            jac[3:6, :3] = gm.T
            jac[3:6, 3:6] = -l2 * eye
            jac[3:6, 7] = -v2
            jac[6, :3] = 2 * v1
            jac[7, 3:6] = 2 * v2
            step, *_ = np.linalg.lstsq(jac, -fval, rcond=None)
            if np.linalg.norm(step) > 10.0:
                break
            x = x + step
        if not ok:
            continue
        v1, v2, l1, l2 = x[:3], x[3:6], x[6], x[7]
        val = 0.25 * (1.0 + v1 @ ra + v2 @ rb + v1 @ gm @ v2)
        res = float(
            np.linalg.norm(
                np.concatenate([ra + gm @ v2 - l1 * v1, rb + gm.T @ v1 - l2 * v2])
            )
        )
        key = (round(l1, 7), round(l2, 7), round(val, 9),
               round(abs(v1[2]), 6), round(abs(v2[2]), 6))
        if any(
            abs(key[0] - k[0]) < 1e-6
            and abs(key[1] - k[1]) < 1e-6
            and abs(key[2] - k[2]) < 1e-7
            for k in keys
        ):
            continue
        keys.append(key)
        det = float(np.linalg.det(l1 * l2 * eye - gm @ gm.T))
        found.append(
            LagrangeSolution(
                s1=BlochVector.from_array(v1 / np.linalg.norm(v1)),
                s2=BlochVector.from_array(v2 / np.linalg.norm(v2)),
                lambda1=float(l1),
                lambda2=float(l2),
                value=float(val),
                residual=res,
                degenerate=abs(det) < 1e-8,
            )
        )
    if not found:
        raise ConvergenceError("no stationary branch converged")
    return sorted(found, key=lambda sol: -sol.value)


def lagrange_equation_residual(
    sol: LagrangeSolution,
    rho_ab: DensityMatrix | None = None,
    r1=None,
    r2=None,
    g=None,
) -> float:
    """Residual of the stationarity equations at a candidate solution."""
    ra, rb, gm = _bloch_problem(rho_ab, r1, r2, g)
    v1, v2 = sol.s1.array(), sol.s2.array()
    return float(
        np.linalg.norm(
            np.concatenate(
                [ra + gm @ v2 - sol.lambda1 * v1, rb + gm.T @ v1 - sol.lambda2 * v2]
            )
        )
    )

"""Pure multiqubit states, product states, density matrices and Bloch data.

Amplitude index convention: index ``i`` in ``[0, 2**n)`` written in binary as
``b1 b2 ... bn`` (``b1`` most significant) addresses the basis ket
``|b1 b2 ... bn>`` with qubit 1 leftmost.  States are stored normalized with
the global phase fixed so that the first nonzero amplitude is real positive;
all state comparisons are up to a global phase.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .tolerances import DERIVED_TOL, REP_TOL

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def _as_readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Qubit:
    """A normalized single-qubit state ``alpha|0> + beta|1>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > 1e-6:
            raise InputError(f"qubit not normalized: |alpha|^2+|beta|^2 = {norm}")
        if abs(norm - 1.0) > REP_TOL:
            scale = 1.0 / np.sqrt(norm)
            object.__setattr__(self, "alpha", self.alpha * scale)
            object.__setattr__(self, "beta", self.beta * scale)

    @classmethod
    def from_vector(cls, v: Sequence[complex]) -> "Qubit":
        v = np.asarray(v, dtype=complex)
        n = np.linalg.norm(v)
        if n < REP_TOL:
            raise InputError("zero vector cannot define a qubit state")
        return cls(complex(v[0] / n), complex(v[1] / n))

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def orthogonal(self) -> "Qubit":
        """The (phase-canonical) state orthogonal to this one."""
        return Qubit(-np.conj(self.beta), np.conj(self.alpha))

    def bloch(self) -> "BlochVector":
        v = self.vector()
        return BlochVector(*(float(np.real(np.conj(v) @ (p @ v))) for p in PAULIS))


@dataclass(frozen=True)
class ProductState:
    """A fully separable n-qubit state given by one factor per qubit."""

    factors: tuple[Qubit, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InputError("product state needs at least one factor")

    @property
    def n_qubits(self) -> int:
        return len(self.factors)

    def amplitudes(self) -> np.ndarray:
        amp = self.factors[0].vector()
        for f in self.factors[1:]:
            amp = np.kron(amp, f.vector())
        return amp

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[complex]]) -> "ProductState":
        return cls(tuple(Qubit.from_vector(v) for v in vectors))


def basis_qubit(bit: int) -> Qubit:
    return Qubit(1.0 + 0.0j, 0.0j) if bit == 0 else Qubit(0.0j, 1.0 + 0.0j)


@dataclass(frozen=True)
class PureState:
    """A normalized pure state of ``n_qubits`` qubits as a dense amplitude vector."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if self.n_qubits < 1:
            raise InputError("need at least one qubit")
        if amp.shape != (2**self.n_qubits,):
            raise InputError(
                f"amplitude vector has length {amp.shape}, expected {2**self.n_qubits}"
            )
        object.__setattr__(self, "amplitudes", _as_readonly(amp))
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > REP_TOL:
            raise InputError(f"state not normalized: |psi| = {norm}")

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "PureState":
        """Build a state from raw amplitudes, normalizing and fixing the global phase."""
        amp = np.asarray(amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size == 0 or amp.size & (amp.size - 1):
            raise InputError("amplitude count must be a power of two")
        norm = np.linalg.norm(amp)
        if norm < REP_TOL:
            raise InputError("zero state vector")
        amp = amp / norm
        nz = np.flatnonzero(np.abs(amp) > REP_TOL)
        phase = amp[nz[0]] / abs(amp[nz[0]])
        amp = amp / phase
        return cls(int(np.log2(amp.size)), amp)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix.from_pure(self)


def states_close(a: PureState, b: PureState, tol: float = 1e-9) -> bool:
    """Whether two states agree up to a global phase."""
    if a.n_qubits != b.n_qubits:
        return False
    inner = np.vdot(a.amplitudes, b.amplitudes)
    return abs(abs(inner) - 1.0) <= tol


@dataclass(frozen=True)
class BlochVector:
    """Pauli expectation vector of a single-qubit state."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm() > 1.0 + REP_TOL:
            raise InputError(f"Bloch vector outside the unit ball: |r| = {self.norm()}")

    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def norm(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))

    @classmethod
    def from_array(cls, v: Sequence[float]) -> "BlochVector":
        return cls(float(v[0]), float(v[1]), float(v[2]))


def qubit_from_bloch(b: BlochVector) -> Qubit:
    """The pure single-qubit state with the given unit Bloch vector."""
    if abs(b.norm() - 1.0) > 1e-9:
        raise InputError("only unit Bloch vectors describe pure states")
    theta = np.arccos(np.clip(b.z, -1.0, 1.0))
    phi = np.arctan2(b.y, b.x)
    return Qubit(complex(np.cos(theta / 2)), complex(np.exp(1j * phi) * np.sin(theta / 2)))


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, unit-trace, positive semidefinite matrix."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise InputError(f"entries shape {m.shape} does not match dim {self.dim}")
        if np.abs(m - m.conj().T).max() > REP_TOL:
            raise InputError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > REP_TOL or abs(np.trace(m).imag) > REP_TOL:
            raise InputError("density matrix trace is not 1")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise InputError("density matrix is not positive semidefinite")
        object.__setattr__(self, "entries", _as_readonly(m))

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        amp = psi.amplitudes
        return cls(amp.size, np.outer(amp, amp.conj()))


def partial_trace(
    rho: DensityMatrix, n_qubits: int, traced_indices: Iterable[int]
) -> DensityMatrix:
    """Trace out the qubits in ``traced_indices`` (0-based, qubit 0 leftmost)."""
    traced = sorted(set(int(i) for i in traced_indices))
    if rho.dim != 2**n_qubits:
        raise InputError(f"density matrix dim {rho.dim} does not match {n_qubits} qubits")
    if any(i < 0 or i >= n_qubits for i in traced):
        raise InputError("traced qubit index out of range")
    if len(traced) >= n_qubits:
        raise InputError("cannot trace out every qubit")
    dims = [2] * n_qubits
    work = rho.entries.reshape(dims + dims)
    for idx in reversed(traced):
        work = np.trace(work, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    d = int(np.prod(dims))
    return DensityMatrix(d, work.reshape(d, d))


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    """Pauli expectation vector of a single-qubit density matrix."""
    if rho.dim != 2:
        raise InputError("bloch_vector expects a single-qubit density matrix")
    return BlochVector(*(float(np.trace(rho.entries @ p).real) for p in PAULIS))


def correlation_matrix(rho_ab: DensityMatrix) -> np.ndarray:
    """Two-qubit Pauli correlation matrix ``g[i, j] = Tr(rho sigma_i x sigma_j)``."""
    if rho_ab.dim != 4:
        raise InputError("correlation_matrix expects a two-qubit density matrix")
    m = rho_ab.entries
    return np.array(
        [
            [float(np.trace(m @ np.kron(pi, pj)).real) for pj in PAULIS]
            for pi in PAULIS
        ]
    )


@dataclass(frozen=True)
class BlochDecomposition3:
    """Full Pauli decomposition of a three-qubit pure state's density matrix."""

    v1: BlochVector
    v2: BlochVector
    v3: BlochVector
    h1: np.ndarray = field(repr=False)
    h2: np.ndarray = field(repr=False)
    h3: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("h1", "h2", "h3", "g"):
            object.__setattr__(self, name, _as_readonly(np.asarray(getattr(self, name))))

    def density(self) -> np.ndarray:
        """Rebuild the 8x8 density matrix from the decomposition."""
        eye = np.eye(2, dtype=complex)
        rho = np.zeros((8, 8), dtype=complex)
        rho += np.kron(np.kron(eye, eye), eye)
        for a in range(3):
            rho += self.v1.array()[a] * np.kron(np.kron(PAULIS[a], eye), eye)
            rho += self.v2.array()[a] * np.kron(np.kron(eye, PAULIS[a]), eye)
            rho += self.v3.array()[a] * np.kron(np.kron(eye, eye), PAULIS[a])
            for b in range(3):
                rho += self.h1[a, b] * np.kron(np.kron(eye, PAULIS[a]), PAULIS[b])
                rho += self.h2[a, b] * np.kron(np.kron(PAULIS[a], eye), PAULIS[b])
                rho += self.h3[a, b] * np.kron(np.kron(PAULIS[a], PAULIS[b]), eye)
                for c in range(3):
                    rho += self.g[a, b, c] * np.kron(
                        np.kron(PAULIS[a], PAULIS[b]), PAULIS[c]
                    )
        return rho / 8.0


def bloch_decomposition3(psi: PureState) -> BlochDecomposition3:
    """Bloch vectors, pair correlation matrices and the triple correlation tensor."""
    if psi.n_qubits != 3:
        raise InputError("bloch_decomposition3 expects a three-qubit state")
    rho = psi.density_matrix()
    v1 = bloch_vector(partial_trace(rho, 3, {1, 2}))
    v2 = bloch_vector(partial_trace(rho, 3, {0, 2}))
    v3 = bloch_vector(partial_trace(rho, 3, {0, 1}))
    h1 = correlation_matrix(partial_trace(rho, 3, {0}))
    h2 = correlation_matrix(partial_trace(rho, 3, {1}))
    h3 = correlation_matrix(partial_trace(rho, 3, {2}))
    m = rho.entries
    g = np.array(
        [
            [
                [
                    float(np.trace(m @ np.kron(np.kron(pa, pb), pc)).real)
                    for pc in PAULIS
                ]
                for pb in PAULIS
            ]
            for pa in PAULIS
        ]
    )
    dec = BlochDecomposition3(v1, v2, v3, h1, h2, h3, g)
    if np.abs(dec.density() - m).max() > DERIVED_TOL:
        raise InputError("Bloch decomposition failed to reproduce the density matrix")
    return dec


def rotation_from_unitary(u: np.ndarray) -> np.ndarray:
    """The SO(3)/O(3) action of a single-qubit unitary on Pauli operators.

    Returns the real matrix O with ``u sigma_a u^dag = O[a, b] sigma_b``.
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or np.abs(u @ u.conj().T - np.eye(2)).max() > REP_TOL:
        raise InputError("input is not a 2x2 unitary")
    o = np.empty((3, 3))
    for a in range(3):
        conj = u @ PAULIS[a] @ u.conj().T
        for b in range(3):
            o[a, b] = 0.5 * np.trace(PAULIS[b] @ conj).real
    return o


def apply_local_unitaries(psi: PureState, us: Sequence[np.ndarray]) -> PureState:
    """Apply one single-qubit unitary per qubit: ``(U1 x ... x Un)|psi>``."""
    if len(us) != psi.n_qubits:
        raise InputError(f"expected {psi.n_qubits} unitaries, got {len(us)}")
    t = psi.tensor()
    for k, u in enumerate(us):
        u = np.asarray(u, dtype=complex)
        if u.shape != (2, 2) or np.abs(u @ u.conj().T - np.eye(2)).max() > REP_TOL:
            raise InputError(f"operator for qubit {k} is not a 2x2 unitary")
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [k])), 0, k)
    return PureState.from_amplitudes(t.reshape(-1))


def permute_qubits(psi: PureState, perm: Sequence[int]) -> PureState:
    """Relabel qubits: qubit ``i`` of the result is qubit ``perm[i]`` of the input."""
    if sorted(perm) != list(range(psi.n_qubits)):
        raise InputError("perm must be a permutation of the qubit indices")
    t = psi.tensor().transpose(perm)
    return PureState.from_amplitudes(t.reshape(-1))


def product_overlap(psi: PureState, p: ProductState) -> float:
    """Absolute overlap ``|<psi|q1 ... qn>|`` of a state with one product state."""
    if p.n_qubits != psi.n_qubits:
        raise InputError("qubit counts differ between state and product state")
    val = abs(np.vdot(psi.amplitudes, p.amplitudes()))
    return float(min(val, 1.0))


def from_acin_params(
    l0: float, l1: float, l2: float, l3: float, l4: float, phi: float
) -> PureState:
    """Three-qubit state in the five-term standard form with one phase.

    Builds ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>`` from
    non-negative coefficients whose squares sum to one.
    """
    lams = np.array([l0, l1, l2, l3, l4], dtype=float)
    if (lams < -REP_TOL).any():
        raise InputError("standard-form coefficients must be non-negative")
    if abs((lams**2).sum() - 1.0) > 1e-10:
        raise InputError(f"coefficients not normalized: sum of squares = {(lams**2).sum()}")
    amp = np.zeros(8, dtype=complex)
    amp[0b000] = l0
    amp[0b100] = l1 * np.exp(1j * phi)
    amp[0b101] = l2
    amp[0b110] = l3
    amp[0b111] = l4
    return PureState.from_amplitudes(amp)


def from_gsd_coefficients(
    l0: float, l1: float, l2: float, l3: float, l4: complex
) -> PureState:
    """Three-qubit state from Schmidt-decomposition coefficients in the basis u=|0>, v=|1>.

    Builds ``l0|000> + l1|011> + l2|101> + l3|110> + l4|111>`` (the second
    coefficient sits on the doubly-excited ket of qubits 2 and 3, unlike the
    singly-excited standard form of :func:`from_acin_params`).
    """
    reals = np.array([l0, l1, l2, l3], dtype=float)
    if (reals < -REP_TOL).any():
        raise InputError("the four real Schmidt coefficients must be non-negative")
    total = float((reals**2).sum() + abs(l4) ** 2)
    if abs(total - 1.0) > 1e-10:
        raise InputError(f"coefficients not normalized: sum of squares = {total}")
    amp = np.zeros(8, dtype=complex)
    amp[0b000] = l0
    amp[0b011] = l1
    amp[0b101] = l2
    amp[0b110] = l3
    amp[0b111] = l4
    return PureState.from_amplitudes(amp)


def w_state(n: int) -> PureState:
    """The equal-coefficient n-qubit W state."""
    if n < 2:
        raise InputError("a W state needs at least two qubits")
    amp = np.zeros(2**n, dtype=complex)
    for k in range(n):
        amp[1 << (n - 1 - k)] = 1.0
    return PureState.from_amplitudes(amp)


def ghz_state(n: int = 3) -> PureState:
    """The n-qubit GHZ state ``(|0...0> + |1...1>)/sqrt(2)``."""
    if n < 2:
        raise InputError("a GHZ state needs at least two qubits")
    amp = np.zeros(2**n, dtype=complex)
    amp[0] = amp[-1] = 1.0
    return PureState.from_amplitudes(amp)


def load_state_json(source) -> tuple[PureState, dict]:
    """Read a state from a JSON file path, file object, or parsed dict.

    The document either carries explicit amplitudes
    ``{"n": n, "amplitudes": [[re, im], ...]}`` or standard-form parameters
    ``{"acin": {"lambda": [l0..l4], "phi": x}}``.  Amplitudes are normalized on
    input; the applied normalization factor is reported in the info dict.
    """
    if isinstance(source, dict):
        doc = source
    elif hasattr(source, "read"):
        doc = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if not isinstance(doc, dict):
        raise InputError("state document must be a JSON object")
    if "acin" in doc:
        spec = doc["acin"]
        try:
            lams = [float(x) for x in spec["lambda"]]
            phi = float(spec.get("phi", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed standard-form block: {exc}") from exc
        if len(lams) != 5:
            raise InputError("standard-form block needs exactly five coefficients")
        sq = sum(x * x for x in lams)
        if sq < REP_TOL:
            raise InputError("zero standard-form coefficient vector")
        scale = np.sqrt(sq)
        psi = from_acin_params(*(x / scale for x in lams), phi)
        return psi, {"form": "acin", "normalization": float(scale)}
    try:
        n = int(doc["n"])
        pairs = doc["amplitudes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed state document: {exc}") from exc
    if len(pairs) != 2**n:
        raise InputError(f"expected {2**n} amplitudes for n={n}, got {len(pairs)}")
    try:
        amp = np.array([complex(float(re), float(im)) for re, im in pairs])
    except (TypeError, ValueError) as exc:
        raise InputError(f"amplitudes must be [re, im] pairs: {exc}") from exc
    norm = float(np.linalg.norm(amp))
    if norm < REP_TOL:
        raise InputError("zero state vector")
    return PureState.from_amplitudes(amp), {"form": "amplitudes", "normalization": norm}


def dump_state_json(psi: PureState) -> dict:
    """JSON-serializable document for a state, matching :func:`load_state_json`."""
    return {
        "n": psi.n_qubits,
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }

"""Shared test helpers: independent reference maximizer and state samplers."""

import numpy as np
import pytest

from gemkit import PureState, from_acin_params

SEED = 20260810


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def reference_lambda_max(psi: PureState, starts: int = 40, seed: int = 7) -> float:
    """Plain single-threaded alternating maximization, written independently.

    Used as the cross-check oracle for the package's own implementations; the
    loop structure, start handling and stopping rule are deliberately separate
    code.
    """
    rng = np.random.default_rng(seed)
    n = psi.n_qubits
    t = psi.amplitudes.reshape((2,) * n)
    best = -1.0
    start_list = []
    for _ in range(starts):
        fs = []
        for _ in range(n):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            fs.append(v / np.linalg.norm(v))
        start_list.append(fs)
    for k in range(n):
        fs = [np.array([1.0, 0.0], complex) for _ in range(n)]
        fs[k] = np.array([0.0, 1.0], complex)
        start_list.append(fs)
    for fs in start_list:
        q = [f.copy() for f in fs]
        prev = -1.0
        for _ in range(20000):
            for k in range(n):
                w = t
                for j in range(n - 1, -1, -1):
                    if j == k:
                        continue
                    w = np.tensordot(np.conj(q[j]), w, axes=([0], [j]))
                nw = np.linalg.norm(w)
                if nw < 1e-14:
                    v = rng.normal(size=2) + 1j * rng.normal(size=2)
                    q[k] = v / np.linalg.norm(v)
                    continue
                q[k] = w / nw
            if abs(nw - prev) < 1e-15:
                break
            prev = nw
        best = max(best, nw)
    return float(min(best, 1.0))


def random_state(rng, n: int) -> PureState:
    amp = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return PureState.from_amplitudes(amp)


def random_unitary(rng) -> np.ndarray:
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_acin(rng, zeros=(), phi=None):
    """Random normalized standard-form parameters with chosen entries forced to zero."""
    lams = np.abs(rng.normal(size=5)) + 0.15
    for idx in zeros:
        lams[idx] = 0.0
    lams = lams / np.linalg.norm(lams)
    if phi is None:
        phi = float(rng.uniform(0.0, np.pi))
    return (*[float(x) for x in lams], phi)


def random_simplex(rng, n: int) -> np.ndarray:
    """Random non-negative normalized coefficient vector."""
    c = np.abs(rng.normal(size=n))
    return c / np.linalg.norm(c)


def acin_state(rng_or_params, *args):
    if args:
        return from_acin_params(rng_or_params, *args)
    return from_acin_params(*rng_or_params)

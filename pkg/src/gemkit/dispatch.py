"""Family detection and method dispatch for the overlap computation.

``auto`` dispatch detects solvable families from the amplitude sparsity
pattern (local phases on the pattern kets are removed by z-rotations first)
and falls back to the invariant classification for three qubits, then to the
variational oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, MethodUnavailableError
from .invariants import (
    classify_from_invariants,
    invariants_from_state,
    pmax_by_type,
    two_qubit_pmax,
)
from .states import ProductState, PureState, Qubit, permute_qubits
from .three_qubit import (
    FourTerm,
    SymState,
    lambda_sq_fourterm,
    lambda_sq_symmetric,
    nearest_product_fourterm,
    nearest_product_symmetric,
)
from .variational import OracleConfig, oracle_lambda_max
from .wduality import WStateN, critical_values, lambda_max_w

_PATTERN_TOL = 1e-10


@dataclass(frozen=True)
class EntanglementReport:
    """Result of one overlap computation."""

    lambda_max: float
    lambda_sq: float
    geometric_measure: float
    region: str
    nearest: ProductState | None
    method: str
    gap: float | None = None

    def to_dict(self) -> dict:
        doc = {
            "lambda_max": self.lambda_max,
            "lambda_sq": self.lambda_sq,
            "geometric_measure": self.geometric_measure,
            "region": self.region,
            "method": self.method,
        }
        if self.nearest is not None:
            doc["nearest_product"] = [
                [[f.alpha.real, f.alpha.imag], [f.beta.real, f.beta.imag]]
                for f in self.nearest.factors
            ]
        if self.gap is not None:
            doc["gap"] = self.gap
        return doc


def _report(lam_sq: float, region: str, nearest, method: str, gap=None) -> EntanglementReport:
    lam_sq = float(min(max(lam_sq, 0.0), 1.0))
    lam = float(np.sqrt(lam_sq))
    return EntanglementReport(
        lambda_max=lam,
        lambda_sq=lam_sq,
        geometric_measure=float(-np.log(lam_sq)) if lam_sq > 0 else float("inf"),
        region=region,
        nearest=nearest,
        method=method,
        gap=gap,
    )


def _zrot(phase: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * phase)]).astype(complex)


def _dephase_factor(q: Qubit, phase: float) -> Qubit:
    """Undo a z-rotation on a factor: |1> component picks up e^{-i phase}."""
    return Qubit(q.alpha, q.beta * np.exp(-1j * phase))


def _w_coefficients(psi: PureState) -> np.ndarray | None:
    """Moduli of the one-excitation amplitudes if the state is a W pattern."""
    n = psi.n_qubits
    amp = psi.amplitudes
    hot = [1 << (n - 1 - k) for k in range(n)]
    mask = np.ones(amp.size, dtype=bool)
    mask[hot] = False
    if np.abs(amp[mask]).max(initial=0.0) > _PATTERN_TOL:
        return None
    return np.abs(amp[hot])


def _w_phases(psi: PureState) -> np.ndarray:
    n = psi.n_qubits
    amp = psi.amplitudes
    return np.array(
        [float(np.angle(amp[1 << (n - 1 - k)])) if abs(amp[1 << (n - 1 - k)]) > _PATTERN_TOL else 0.0 for k in range(n)]
    )


def _support_within(psi: PureState, allowed: set[int]) -> bool:
    amp = psi.amplitudes
    mask = np.ones(amp.size, dtype=bool)
    mask[list(allowed)] = False
    return bool(np.abs(amp[mask]).max(initial=0.0) <= _PATTERN_TOL)


def _sym_placement(psi: PureState) -> tuple[int, int, int] | None:
    """Qubit permutation mapping the state onto the swap-symmetric pattern, or None.

    The canonical pattern occupies ``{000, 111, 001, 110}``; the returned
    permutation p satisfies: permuting qubits by p puts the support there and
    the four amplitude phases are jointly removable by local z-rotations.
    """
    placements = {
        (0, 1, 2): {0b000, 0b111, 0b001, 0b110},
        (0, 2, 1): {0b000, 0b111, 0b010, 0b101},
        (1, 2, 0): {0b000, 0b111, 0b100, 0b011},
    }
    for perm, allowed in placements.items():
        if not _support_within(psi, allowed):
            continue
        moved = permute_qubits(psi, perm)
        amp = moved.amplitudes
        entries = [amp[0b000], amp[0b111], amp[0b001], amp[0b110]]
        if all(abs(x) > _PATTERN_TOL for x in entries):
            phases = [float(np.angle(x)) for x in entries]
            mismatch = (phases[1] + phases[0] - phases[2] - phases[3]) % (2 * np.pi)
            mismatch = min(mismatch, 2 * np.pi - mismatch)
            if mismatch > 1e-9:
                continue
        return perm
    return None


def _compute_analytic(psi: PureState, config: OracleConfig) -> EntanglementReport | None:
    n = psi.n_qubits
    if n == 1:
        return _report(1.0, "product", ProductState((Qubit(psi.amplitudes[0], psi.amplitudes[1]),)), "analytic(single-qubit)")
    if n == 2:
        lam_sq = two_qubit_pmax(psi)
        a = psi.amplitudes.reshape(2, 2)
        u, s, vh = np.linalg.svd(a)
        nearest = ProductState((Qubit.from_vector(u[:, 0]), Qubit.from_vector(np.conj(vh[0, :]))))
        region = "product" if lam_sq > 1.0 - 1e-12 else "two-qubit"
        return _report(lam_sq, region, nearest, "analytic(two-qubit)")
    coeffs = _w_coefficients(psi)
    if coeffs is not None and n >= 3:
        w = WStateN.from_coefficients(coeffs)
        lam, nearest_real, region = lambda_max_w(w)
        phases = _w_phases(psi)
        factors = tuple(
            _dephase_factor(f, -phases[k]) for k, f in enumerate(nearest_real.factors)
        )
        method = "analytic(wtype)" if n == 3 else "analytic(w-duality)"
        return _report(lam * lam, region.label.value, ProductState(factors), method)
    if n != 3:
        return None
    if _support_within(psi, {0b100, 0b010, 0b001, 0b111}):
        amp = psi.amplitudes
        mods = [abs(amp[i]) for i in (0b100, 0b010, 0b001, 0b111)]
        s = FourTerm(*mods)
        lam_sq, label = lambda_sq_fourterm(s)
        phases = [
            float(np.angle(amp[i])) if abs(amp[i]) > _PATTERN_TOL else 0.0
            for i in (0b100, 0b010, 0b001, 0b111)
        ]
        gph = 0.5 * (phases[3] - phases[0] - phases[1] - phases[2])
        z = [-(phases[k] + gph) for k in range(3)]
        nearest_real = nearest_product_fourterm(s)
        factors = tuple(
            _dephase_factor(f, z[k]) for k, f in enumerate(nearest_real.factors)
        )
        return _report(lam_sq, label.value, ProductState(factors), "analytic(four-term)")
    perm = _sym_placement(psi)
    if perm is not None:
        moved = permute_qubits(psi, perm)
        amp = moved.amplitudes
        mods = [abs(amp[i]) for i in (0b000, 0b111, 0b001, 0b110)]
        s = SymState(*mods)
        lam_sq = lambda_sq_symmetric(s)
        phases = [
            float(np.angle(amp[i])) if abs(amp[i]) > _PATTERN_TOL else 0.0
            for i in (0b000, 0b111, 0b001, 0b110)
        ]
        gph = -phases[0]
        z3 = -(phases[2] + gph)
        z12 = -(phases[3] + gph)
        nearest_moved = nearest_product_symmetric(s)
        f1, f2, f3 = nearest_moved.factors
        f1 = _dephase_factor(f1, z12)  # first two factors are z-eigenstates; phase harmless
        f3 = _dephase_factor(f3, z3)
        factors_moved = (f1, f2, f3)
        factors = [None] * 3
        for new_idx, old_idx in enumerate(perm):
            factors[old_idx] = factors_moved[new_idx]
        k1_sq = s.a**2 + s.c**2
        region = "symmetric-k1" if k1_sq >= 0.5 else "symmetric-k2"
        return _report(lam_sq, region, ProductState(tuple(factors)), "analytic(symmetric)")
    ji = invariants_from_state(psi)
    t = classify_from_invariants(ji)
    lam_sq = pmax_by_type(t, ji)
    if lam_sq is None:
        return None
    polish = oracle_lambda_max(psi, _small_config(config))
    return _report(
        lam_sq,
        t.value,
        polish.product,
        f"analytic(invariants:{t.value}); nearest from stationary iteration",
    )


def _small_config(config: OracleConfig) -> OracleConfig:
    return OracleConfig(
        n_starts=min(config.n_starts, 16),
        max_iters=config.max_iters,
        conv_tol=config.conv_tol,
        seed=config.seed,
    )


def compute_report(
    psi: PureState, method: str = "auto", config: OracleConfig | None = None
) -> EntanglementReport:
    """Compute the maximal product overlap by the requested method.

    ``auto`` prefers a closed form and silently falls back to the oracle;
    ``analytic`` raises when no closed form applies; ``both`` runs the two
    routes and reports their gap.
    """
    config = config or OracleConfig()
    if method not in ("auto", "analytic", "oracle", "both"):
        raise InputError(f"unknown method '{method}'")
    analytic = None
    if method != "oracle":
        analytic = _compute_analytic(psi, config)
        if analytic is None and method in ("analytic", "both"):
            raise MethodUnavailableError(
                "no closed form applies to this state (generic type); use the oracle"
            )
    if method in ("auto", "analytic") and analytic is not None:
        return analytic
    best = oracle_lambda_max(psi, config)
    oracle_report = _report(
        best.lam_sq,
        "highly-entangled" if best.lam_sq < 0.5 else "slightly-entangled",
        best.product,
        f"oracle({config.n_starts} starts)",
    )
    if method in ("oracle", "auto"):
        return oracle_report
    gap = abs(analytic.lambda_sq - oracle_report.lambda_sq)
    return EntanglementReport(
        lambda_max=analytic.lambda_max,
        lambda_sq=analytic.lambda_sq,
        geometric_measure=analytic.geometric_measure,
        region=analytic.region,
        nearest=analytic.nearest,
        method=f"{analytic.method}+{oracle_report.method}",
        gap=float(gap),
    )


def classify_report(psi: PureState) -> dict:
    """Region/classification data for the CLI: family, critical values, labels."""
    n = psi.n_qubits
    coeffs = _w_coefficients(psi) if n >= 3 else None
    if coeffs is not None:
        w = WStateN.from_coefficients(coeffs)
        region = critical_values(w)
        doc = {
            "family": "w-state",
            "n": n,
            "r1": region.r1,
            "r2": region.r2,
            "region": region.label.value,
        }
        from .wduality import solve_diameter

        if region.label.value in ("symmetric-high", "asymmetric-high", "boundary-first"):
            sol = solve_diameter(w)
            doc["r"] = sol.r
            doc["branch"] = sol.branch.value
            doc["thetas"] = [float(t) for t in sol.thetas]
        return doc
    if n == 3:
        if _support_within(psi, {0b100, 0b010, 0b001, 0b111}):
            amp = psi.amplitudes
            s = FourTerm(*[abs(amp[i]) for i in (0b100, 0b010, 0b001, 0b111)])
            from .three_qubit import fourterm_quantities

            lam_sq, label = lambda_sq_fourterm(s)
            q = fourterm_quantities(s)
            return {
                "family": "four-term",
                "region": label.value,
                "lambda_sq": lam_sq,
                "r1": q.r1,
                "r2": q.r2,
                "r3": q.r3,
                "omega": q.omega,
                "mu": q.mu,
                "shared_r0": bool(abs(q.r1 * q.r2 * q.r3) < 1e-12),
            }
        ji = invariants_from_state(psi)
        t = classify_from_invariants(ji)
        return {
            "family": "generic-3qubit",
            "type": t.value,
            "invariants": {f"j{i+1}": float(v) for i, v in enumerate(ji.array())},
        }
    raise MethodUnavailableError("classification is available for W states and three qubits")

"""Generalized Schmidt decompositions of three-qubit states.

A stationary product state ``|u1 u2 u3>`` of the overlap induces a canonical
five-term expansion of the state over the product basis built from the
``u_k`` and their orthogonal complements ``v_k``.  The expansion with the
globally maximal stationary point is the Schmidt decomposition proper; the
second-variation matrix and a cubic inequality between the coefficients give
necessary conditions for a candidate expansion to be that one, and the
variational oracle provides the final confirmation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .states import ProductState, PureState, Qubit, states_close
from .three_qubit import WType3
from .variational import OracleConfig, oracle_lambda_max

STATIONARY_GATE = 1e-9


@dataclass(frozen=True)
class SchmidtForm:
    """Five coefficients and the three local orthonormal bases of a canonical form.

    Coefficients satisfy ``l0 >= |l4|`` and ``-pi/2 <= arg(l4) <= pi/2``;
    ``l1..l3`` are non-negative by choice of the ``v_k`` phases.  ``maximal``
    marks the form whose leading coefficient is the maximal product overlap
    (only set by constructors that can certify it).
    """

    l0: float
    l1: float
    l2: float
    l3: float
    l4: complex
    bases: tuple[tuple[Qubit, Qubit], tuple[Qubit, Qubit], tuple[Qubit, Qubit]]
    maximal: bool = False

    def __post_init__(self):
        reals = np.array([self.l0, self.l1, self.l2, self.l3])
        if (reals < -1e-12).any():
            raise InputError("the four real Schmidt coefficients must be non-negative")
        total = float((reals**2).sum() + abs(self.l4) ** 2)
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"Schmidt coefficients not normalized (sum {total})")
        if abs(self.l4) > self.l0 + 1e-9:
            raise InputError("leading coefficient must dominate |l4|")
        if abs(self.l4) > 1e-12 and not -np.pi / 2 - 1e-9 <= np.angle(self.l4) <= np.pi / 2 + 1e-9:
            raise InputError("arg(l4) outside [-pi/2, pi/2]")

    def coefficients(self) -> tuple[float, float, float, float, complex]:
        return (self.l0, self.l1, self.l2, self.l3, self.l4)

    def reconstruct(self) -> PureState:
        """Rebuild the source state from the expansion."""
        (u1, v1), (u2, v2), (u3, v3) = self.bases
        amp = (
            self.l0 * np.kron(np.kron(u1.vector(), u2.vector()), u3.vector())
            + self.l1 * np.kron(np.kron(u1.vector(), v2.vector()), v3.vector())
            + self.l2 * np.kron(np.kron(v1.vector(), u2.vector()), v3.vector())
            + self.l3 * np.kron(np.kron(v1.vector(), v2.vector()), u3.vector())
            + self.l4 * np.kron(np.kron(v1.vector(), v2.vector()), v3.vector())
        )
        return PureState.from_amplitudes(amp)


def _contract_two(t: np.ndarray, vecs: dict[int, np.ndarray]) -> np.ndarray:
    """Contract the conjugates of the given factors, leaving the remaining qubit."""
    out = t
    for axis in sorted(vecs, reverse=True):
        out = np.tensordot(np.conj(vecs[axis]), out, axes=([0], [axis]))
    return out


def gsd_from_stationary(psi: PureState, stationary: ProductState) -> SchmidtForm:
    """Build the canonical five-term form at a stationary product state.

    The factor phases are first adjusted so every single-factor contraction
    equals the (real positive) overlap times the factor; the complement phases
    are then fixed to make the three mixed coefficients non-negative, and the
    collective complement sign puts ``arg(l4)`` into ``[-pi/2, pi/2]``.
    """
    if psi.n_qubits != 3 or stationary.n_qubits != 3:
        raise InputError("the canonical form is defined for three qubits")
    t = psi.tensor()
    u = [f.vector() for f in stationary.factors]
    overlap = complex(np.einsum("abc,a,b,c->", t, *[np.conj(x) for x in u]))
    lam0 = abs(overlap)
    if lam0 < 1e-12:
        raise InputError("stationary point has vanishing overlap")
    # Spread the phase correction evenly; afterwards <u..u|psi> is real positive.
    u = [x * np.exp(-1j * np.angle(overlap) / 3) for x in u]
    residual = 0.0
    for k in range(3):
        w = _contract_two(t, {j: u[j] for j in range(3) if j != k})
        residual = max(residual, float(np.linalg.norm(w - lam0 * u[k])))
    if residual > STATIONARY_GATE:
        raise InputError(
            f"input is not stationary (residual {residual:.3e} above {STATIONARY_GATE})"
        )
    v = [Qubit.from_vector(x).orthogonal().vector() for x in u]
    # Raw mixed coefficients with unadjusted complement phases.
    raw = [
        complex(np.einsum("abc,a,b,c->", t, np.conj(u[0]), np.conj(v[1]), np.conj(v[2]))),
        complex(np.einsum("abc,a,b,c->", t, np.conj(v[0]), np.conj(u[1]), np.conj(v[2]))),
        complex(np.einsum("abc,a,b,c->", t, np.conj(v[0]), np.conj(v[1]), np.conj(u[2]))),
    ]
    args = [np.angle(x) if abs(x) > 1e-12 else 0.0 for x in raw]
    # arg(l1) = b2 + b3, arg(l2) = b1 + b3, arg(l3) = b1 + b2.
    b1 = 0.5 * (args[1] + args[2] - args[0])
    b2 = 0.5 * (args[0] + args[2] - args[1])
    b3 = 0.5 * (args[0] + args[1] - args[2])
    v = [v[0] * np.exp(1j * b1), v[1] * np.exp(1j * b2), v[2] * np.exp(1j * b3)]
    l4 = complex(np.einsum("abc,a,b,c->", t, np.conj(v[0]), np.conj(v[1]), np.conj(v[2])))
    if abs(l4) > 1e-12 and not -np.pi / 2 - 1e-12 <= np.angle(l4) <= np.pi / 2 + 1e-12:
        v = [-x for x in v]
        l4 = -l4
    lams = [
        complex(np.einsum("abc,a,b,c->", t, np.conj(u[0]), np.conj(v[1]), np.conj(v[2]))),
        complex(np.einsum("abc,a,b,c->", t, np.conj(v[0]), np.conj(u[1]), np.conj(v[2]))),
        complex(np.einsum("abc,a,b,c->", t, np.conj(v[0]), np.conj(v[1]), np.conj(u[2]))),
    ]
    form = SchmidtForm(
        l0=float(lam0),
        l1=float(max(lams[0].real, 0.0)),
        l2=float(max(lams[1].real, 0.0)),
        l3=float(max(lams[2].real, 0.0)),
        l4=l4,
        bases=tuple(
            (Qubit.from_vector(u[k]), Qubit.from_vector(v[k])) for k in range(3)
        ),
    )
    if not states_close(form.reconstruct(), psi, tol=1e-9):
        raise InputError("canonical form failed to reconstruct the input state")
    return form


def wtype_canonical_forms(s: WType3) -> list[SchmidtForm]:
    """All canonical forms of a W-type state.

    Three forms always exist, one per basis stationary point; a fourth exists
    exactly when the coefficients form a (non-degenerate) triangle.  The form
    whose leading coefficient equals the maximal overlap is flagged
    ``maximal``: the basis form of the dominant coefficient when one squared
    Bloch quantity is negative, the triangle form otherwise.
    """
    psi = s.state()
    a, b, c = s.a, s.b, s.c
    r_a = b * b + c * c - a * a
    r_b = a * a + c * c - b * b
    r_c = a * a + b * b - c * c
    area16 = (2 * a * b) ** 2 - r_c**2
    zero, one = Qubit(1.0 + 0j, 0j), Qubit(0j, 1.0 + 0j)
    starts = [
        ProductState((one, zero, zero)),
        ProductState((zero, one, zero)),
        ProductState((zero, zero, one)),
    ]
    forms = [gsd_from_stationary(psi, st) for st in starts]
    has_special = min(r_a, r_b, r_c) >= 0.0 and area16 > 1e-14
    if has_special:
        s4 = 4.0 * np.sqrt(area16 / 16.0)
        u1 = np.array([a * np.sqrt(2 * max(r_a, 0.0)), np.sqrt(max(r_b * r_c, 0.0))]) / s4
        u2 = np.array([b * np.sqrt(2 * max(r_b, 0.0)), np.sqrt(max(r_a * r_c, 0.0))]) / s4
        u3 = np.array([c * np.sqrt(2 * max(r_c, 0.0)), np.sqrt(max(r_a * r_b, 0.0))]) / s4
        special = ProductState.from_vectors([u1, u2, u3])
        forms.append(gsd_from_stationary(psi, special))
    negatives = [r_a < 0, r_b < 0, r_c < 0]
    if any(negatives):
        max_idx = negatives.index(True)
    else:
        max_idx = 3 if has_special else int(np.argmax([a, b, c]))
    forms[max_idx] = SchmidtForm(
        l0=forms[max_idx].l0,
        l1=forms[max_idx].l1,
        l2=forms[max_idx].l2,
        l3=forms[max_idx].l3,
        l4=forms[max_idx].l4,
        bases=forms[max_idx].bases,
        maximal=True,
    )
    return forms


@dataclass(frozen=True)
class SecondVariationMatrix:
    """Symmetric matrix governing the second variation of the overlap at a form."""

    a: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.a, dtype=float)
        if m.shape != (3, 3) or np.abs(m - m.T).max() > 0:
            raise InputError("second-variation matrix must be 3x3 symmetric")
        m = np.ascontiguousarray(m)
        m.flags.writeable = False
        object.__setattr__(self, "a", m)

    def trace_condition(self) -> float:
        return float(np.trace(self.a))

    def minor_condition(self) -> float:
        return float(np.trace(self.a) ** 2 - np.trace(self.a @ self.a))

    def det_condition(self) -> float:
        return float(np.linalg.det(self.a))

    def is_positive(self, tol: float = 1e-12) -> bool:
        return (
            self.trace_condition() >= -tol
            and self.minor_condition() >= -tol
            and self.det_condition() >= -tol
        )


def second_variation_matrix(f: SchmidtForm) -> SecondVariationMatrix:
    """The matrix whose positivity is necessary for a true overlap maximum."""
    m = np.array(
        [
            [f.l0, -f.l3, -f.l2],
            [-f.l3, f.l0, -f.l1],
            [-f.l2, -f.l1, f.l0],
        ]
    )
    return SecondVariationMatrix(m)


def schmidt_inequality(f: SchmidtForm) -> tuple[bool, float]:
    """Cubic constraint bounding the three mixed coefficients by the leading one.

    Returns ``(holds, slack)`` with
    ``slack = l0^2 - (l1^2 + l2^2 + l3^2 + 2 l1 l2 l3 / l0)``; the inequality
    is saturated (slack 0) exactly at the equal-coefficient W state among the
    states where all three mixed coefficients are maximal.
    """
    if f.l0 <= 0:
        raise InputError("the leading coefficient must be positive")
    slack = f.l0**2 - (
        f.l1**2 + f.l2**2 + f.l3**2 + 2.0 * f.l1 * f.l2 * f.l3 / f.l0
    )
    return bool(slack >= -1e-12), float(slack)


def simple_case_bound(f: SchmidtForm) -> tuple[bool, float]:
    """Leading-coefficient bound in the two-coefficient special case.

    Applies when ``l2 = l3 = 0`` with real non-negative ``l4``: a competing
    stationary value ``sqrt(l1^2 + |l4|^2)`` exists, so the form is canonical
    only when ``l0^2 >= l1^2 + |l4|^2``.  Returns ``(holds, competitor)``.
    """
    if f.l2 > 1e-10 or f.l3 > 1e-10:
        raise InputError("the simple-case bound needs l2 = l3 = 0")
    if abs(f.l4.imag) > 1e-10:
        raise InputError("the simple-case bound needs a real l4")
    competitor = float(np.sqrt(f.l1**2 + abs(f.l4) ** 2))
    return bool(f.l0**2 + 1e-12 >= f.l1**2 + abs(f.l4) ** 2), competitor


class GsdLabel(enum.Enum):
    CERTIFIED_MAXIMUM = "certified-maximum"
    NECESSARY_CONDITIONS_FAILED = "necessary-conditions-failed"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GsdVerdict:
    """Outcome of validating a candidate canonical form against the oracle."""

    label: GsdLabel
    details: tuple[str, ...]
    oracle_gap: float | None = None

    @property
    def is_valid(self) -> bool:
        return self.label == GsdLabel.CERTIFIED_MAXIMUM


def validate_gsd(
    psi: PureState, f: SchmidtForm, config: OracleConfig | None = None
) -> GsdVerdict:
    """Check necessary conditions and confirm the leading coefficient variationally.

    The positivity conditions (trace, sum of principal minors, determinant of
    the second-variation matrix), the ``l0 >= |l4|`` constraint and the cubic
    coefficient inequality are necessary but not sufficient, so a form passing
    all of them is only certified once the oracle confirms ``l0`` equals the
    maximal overlap within 1e-6; otherwise the verdict is inconclusive with the
    measured gap reported.
    """
    if not states_close(f.reconstruct(), psi, tol=1e-9):
        raise InputError("form does not reconstruct the given state")
    failures: list[str] = []
    mat = second_variation_matrix(f)
    if mat.trace_condition() < -1e-12:
        failures.append("trace of the second-variation matrix is negative")
    if mat.minor_condition() < -1e-12:
        failures.append("principal-minor sum of the second-variation matrix is negative")
    if mat.det_condition() < -1e-12:
        failures.append("determinant of the second-variation matrix is negative")
    if abs(f.l4) > f.l0 + 1e-12:
        failures.append("|l4| exceeds the leading coefficient")
    holds, slack = schmidt_inequality(f)
    if not holds:
        failures.append(f"coefficient inequality violated (slack {slack:.3e})")
    if failures:
        return GsdVerdict(GsdLabel.NECESSARY_CONDITIONS_FAILED, tuple(failures))
    best = oracle_lambda_max(psi, config)
    gap = float(abs(f.l0 - best.lam))
    if gap < 1e-6:
        return GsdVerdict(GsdLabel.CERTIFIED_MAXIMUM, (), oracle_gap=gap)
    return GsdVerdict(
        GsdLabel.INCONCLUSIVE,
        (
            "necessary conditions hold but the leading coefficient is not the "
            f"maximal overlap (oracle {best.lam:.6f} vs l0 {f.l0:.6f})",
        ),
        oracle_gap=gap,
    )

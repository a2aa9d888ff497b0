"""Polynomial local-unitary invariants of three-qubit states and closed forms built on them.

Five real polynomial invariants J1..J5 classify three-qubit pure states up to
local unitaries (together with one discrete datum).  For several vanishing
patterns of the standard-form coefficients the squared maximal product overlap
has a closed form in the invariants alone; those are implemented here, as is
the four-term family rewritten in invariant form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, InputError
from .states import PureState, bloch_decomposition3, partial_trace
from .tolerances import VANISH_TOL


@dataclass(frozen=True)
class LuInvariants:
    """The five polynomial local-unitary invariants of a three-qubit pure state."""

    j1: float
    j2: float
    j3: float
    j4: float
    j5: float
    fit_residual: float | None = None

    def array(self) -> np.ndarray:
        return np.array([self.j1, self.j2, self.j3, self.j4, self.j5])


def invariants_from_acin(
    l0: float, l1: float, l2: float, l3: float, l4: float, phi: float
) -> LuInvariants:
    """Invariants evaluated directly on standard-form coefficients."""
    j1 = l1**2 * l4**2 + l2**2 * l3**2 - 2 * l1 * l2 * l3 * l4 * np.cos(phi)
    j2 = l0**2 * l2**2
    j3 = l0**2 * l3**2
    j4 = l0**2 * l4**2
    j5 = l0**2 * (j1 + l2**2 * l3**2 - l1**2 * l4**2)
    return LuInvariants(float(j1), float(j2), float(j3), float(j4), float(j5))


def _cayley_hyperdet(psi: PureState) -> complex:
    """Cayley's 2x2x2 hyperdeterminant of the amplitude tensor."""
    a = psi.amplitudes
    a000, a001, a010, a011, a100, a101, a110, a111 = a
    d1 = (
        a000**2 * a111**2
        + a001**2 * a110**2
        + a010**2 * a101**2
        + a100**2 * a011**2
    )
    d2 = (
        a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001
    )
    d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100
    return complex(d1 - 2 * d2 + 4 * d3)


def invariants_from_state(psi: PureState) -> LuInvariants:
    """Invariants of an arbitrary three-qubit pure state from its Bloch data.

    The linear relations between the invariants and the quadratic Bloch moments
    (vector norms, pair-correlation norms, triple-correlation norm and the
    mixed contraction) determine only four independent combinations, so the
    modulus of the amplitude hyperdeterminant is used to pin j4 (it equals
    ``l0^2 l4^2`` in the standard form).  The remaining relations then serve as
    an overdetermined consistency system whose residual is reported; a residual
    beyond 1e-6 signals a non-pure or numerically broken input.
    """
    if psi.n_qubits != 3:
        raise InputError("invariants are defined for three-qubit states")
    dec = bloch_decomposition3(psi)
    v1, v2, v3 = dec.v1.array(), dec.v2.array(), dec.v3.array()
    s234 = (1.0 - v1 @ v1) / 4.0  # j2 + j3 + j4
    s134 = (1.0 - v2 @ v2) / 4.0  # j1 + j3 + j4
    s124 = (1.0 - v3 @ v3) / 4.0  # j1 + j2 + j4
    j4 = abs(_cayley_hyperdet(psi))
    j1 = 0.5 * (s134 + s124 - s234 - j4)
    j2 = s124 - j1 - j4
    j3 = s134 - j1 - j4
    j5 = (j1 + j2 + j3 + j4) + (v1 @ dec.h3 @ v2 - 1.0) / 4.0
    checks = np.array(
        [
            (dec.h1 * dec.h1).sum() - (1.0 + 4 * (2 * j1 - j2 - j3)),
            (dec.h2 * dec.h2).sum() - (1.0 - 4 * (j1 - 2 * j2 + j3)),
            (dec.h3 * dec.h3).sum() - (1.0 - 4 * (j1 + j2 - 2 * j3)),
            (dec.g * dec.g).sum() - (1.0 + 4 * (2 * j1 + 2 * j2 + 2 * j3 + 3 * j4)),
        ]
    )
    residual = float(np.abs(checks).max())
    if residual > 1e-6:
        raise InputError(
            f"Bloch moments inconsistent with a pure state (residual {residual})"
        )
    return LuInvariants(float(j1), float(j2), float(j3), float(j4), float(j5), residual)


@dataclass(frozen=True)
class Lambda0Candidates:
    """Positive roots for the squared leading standard-form coefficient."""

    roots: tuple[float, ...]
    degenerate: bool = False


def lambda0_candidates(ji: LuInvariants) -> Lambda0Candidates:
    """Solve the quadratic (in ``l0^2``) that inverts the invariants.

    ``(j1+j4) x^2 - (j5+j4) x + (j2 j3 + j2 j4 + j3 j4 + j4^2) = 0`` has at
    most two positive roots; each root extends to a full standard-form
    parameter set with the same invariants.  A vanishing leading coefficient
    reduces to the linear case, and the identically-zero equation is flagged
    as degenerate (every ``l0`` is consistent; e.g. product states).
    """
    a = ji.j1 + ji.j4
    b = -(ji.j5 + ji.j4)
    c = ji.j2 * ji.j3 + ji.j2 * ji.j4 + ji.j3 * ji.j4 + ji.j4**2
    if abs(a) < VANISH_TOL**2:
        if abs(b) < VANISH_TOL**2:
            return Lambda0Candidates(roots=(), degenerate=True)
        x = -c / b
        return Lambda0Candidates(roots=(x,) if x > 0 else ())
    disc = b * b - 4 * a * c
    if disc < -VANISH_TOL:
        return Lambda0Candidates(roots=())
    if disc <= 1e-13 * max(b * b, 1e-30):
        # Double root up to rounding.
        xs = [-b / (2 * a)]
    else:
        xs = sorted([(-b - np.sqrt(disc)) / (2 * a), (-b + np.sqrt(disc)) / (2 * a)])
    return Lambda0Candidates(roots=tuple(x for x in xs if x > VANISH_TOL))


def acin_params_from_invariants(
    ji: LuInvariants, l0_sq: float
) -> tuple[float, float, float, float, float, float]:
    """Reconstruct standard-form parameters ``(l0..l4, phi)`` from invariants and a root."""
    if l0_sq <= 0:
        raise InputError("l0^2 must be positive")
    l0 = np.sqrt(l0_sq)
    l2 = np.sqrt(max(ji.j2, 0.0) / l0_sq)
    l3 = np.sqrt(max(ji.j3, 0.0) / l0_sq)
    l4 = np.sqrt(max(ji.j4, 0.0) / l0_sq)
    l1_sq = 1.0 - l0_sq - l2**2 - l3**2 - l4**2
    if l1_sq < -1e-9:
        raise InputError("root is inconsistent with normalization")
    l1 = np.sqrt(max(l1_sq, 0.0))
    denom = 2 * l1 * l2 * l3 * l4
    if abs(denom) < 1e-15:
        phi = 0.0
    else:
        cos_phi = (l1**2 * l4**2 + l2**2 * l3**2 - ji.j1) / denom
        phi = float(np.arccos(np.clip(cos_phi, -1.0, 1.0)))
    return float(l0), float(l1), float(l2), float(l3), float(l4), phi


class StateType(enum.Enum):
    """Vanishing-pattern classification of standard-form three-qubit states."""

    TYPE1 = "type1"
    TYPE2A_J1 = "type2a-j1"
    TYPE2A_J2 = "type2a-j2"
    TYPE2A_J3 = "type2a-j3"
    TYPE2B = "type2b"
    TYPE3A = "type3a"
    TYPE3B_12 = "type3b-12"
    TYPE3B_13 = "type3b-13"
    TYPE3B_23 = "type3b-23"
    TYPE4A = "type4a"
    TYPE4B_L2 = "type4b-l2"
    TYPE4B_L3 = "type4b-l3"
    TYPE4C = "type4c"
    TYPE5 = "type5"
    NEW_TYPE = "new-type"


def classify_type(
    l0: float, l1: float, l2: float, l3: float, l4: float, phi: float
) -> StateType:
    """Classify standard-form parameters, most specific pattern first.

    Type 5 is also used for the leftover fully generic case (all coefficients
    nonzero with a generic phase), for which no closed form exists either way.
    """
    lams = np.array([l0, l1, l2, l3, l4], dtype=float)
    if abs((lams**2).sum() - 1.0) > 1e-10:
        raise InputError("coefficients not normalized")
    z = lams < VANISH_TOL
    ji = invariants_from_acin(l0, l1, l2, l3, l4, phi)
    jz = np.abs(ji.array()) < VANISH_TOL
    if z[0]:
        return StateType.TYPE1 if jz[0] else StateType.TYPE2A_J1
    if z[2] and z[3] and z[4]:
        return StateType.TYPE1
    if z[3] and z[4]:
        return StateType.TYPE2A_J2
    if z[2] and z[4]:
        return StateType.TYPE2A_J3
    if z[1] and z[2] and z[3]:
        return StateType.TYPE2B
    if z[1] and z[4]:
        return StateType.TYPE3A
    if z[1] and z[2]:
        return StateType.TYPE3B_12
    if z[1] and z[3]:
        return StateType.TYPE3B_13
    if z[2] and z[3]:
        return StateType.TYPE3B_23
    if z[4]:
        return StateType.TYPE4A
    if z[2]:
        return StateType.TYPE4B_L2
    if z[3]:
        return StateType.TYPE4B_L3
    if z[1]:
        return StateType.TYPE4C
    if (abs(phi) < 1e-9 or abs(phi - np.pi) < 1e-9) and l4 > VANISH_TOL:
        residual = _fourterm_constraint_residual(lams)
        if residual < 1e-9:
            return StateType.NEW_TYPE
    return StateType.TYPE5


def classify_from_invariants(ji: LuInvariants) -> StateType:
    """Best-effort classification from the invariants alone.

    Distinguishes every pattern whose closed form exists (types 1-3); beyond
    those only the type-3a/4a split is decidable (type 3a additionally
    satisfies ``j1 j2 + j1 j3 + j2 j3 = sqrt(j1 j2 j3)``), and the remaining
    states are lumped into type 5.
    """
    j = ji.array()
    z = np.abs(j) < VANISH_TOL
    if z[:4].all():
        return StateType.TYPE1
    nonzero = [i for i in range(4) if not z[i]]
    if nonzero == [0]:
        return StateType.TYPE2A_J1
    if nonzero == [1]:
        return StateType.TYPE2A_J2
    if nonzero == [2]:
        return StateType.TYPE2A_J3
    if nonzero == [3]:
        return StateType.TYPE2B
    if z[3]:
        lhs = ji.j1 * ji.j2 + ji.j1 * ji.j3 + ji.j2 * ji.j3
        rhs = np.sqrt(max(ji.j1 * ji.j2 * ji.j3, 0.0))
        if abs(lhs - rhs) < VANISH_TOL:
            return StateType.TYPE3A
        return StateType.TYPE4A
    if nonzero == [2, 3]:
        return StateType.TYPE3B_12
    if nonzero == [1, 3]:
        return StateType.TYPE3B_13
    if nonzero == [0, 3]:
        return StateType.TYPE3B_23
    return StateType.TYPE5


def _sqrt_clip(x: float) -> float:
    return float(np.sqrt(max(x, 0.0)))


def pmax_by_type(t: StateType, ji: LuInvariants) -> float | None:
    """Closed-form squared maximal overlap per type, or None when unavailable.

    Types 4 and 5 (and the four-term new type, which has its own entry point)
    have no closed form in the invariants alone; callers fall back to the
    variational oracle for them.
    """
    if t == StateType.TYPE1:
        return 1.0
    if t == StateType.TYPE2A_J1:
        return 0.5 * (1.0 + _sqrt_clip(1.0 - 4 * ji.j1))
    if t == StateType.TYPE2A_J2:
        return 0.5 * (1.0 + _sqrt_clip(1.0 - 4 * ji.j2))
    if t == StateType.TYPE2A_J3:
        return 0.5 * (1.0 + _sqrt_clip(1.0 - 4 * ji.j3))
    if t == StateType.TYPE2B:
        return 0.5 * (1.0 + _sqrt_clip(1.0 - 4 * ji.j4))
    if t == StateType.TYPE3A:
        high = 0.25 * (
            1.0
            + _sqrt_clip(1.0 - 4 * (ji.j1 + ji.j2))
            + _sqrt_clip(1.0 - 4 * (ji.j1 + ji.j3))
            + _sqrt_clip(1.0 - 4 * (ji.j2 + ji.j3))
        )
        if high >= 0.5:
            # One squared coefficient dominates the other two.
            return high
        denom = 4 * (ji.j1 + ji.j2 + ji.j3) - 1.0
        if abs(denom) < 1e-12:
            return high
        return 4.0 * _sqrt_clip(ji.j1 * ji.j2 * ji.j3) / denom
    if t == StateType.TYPE3B_12:
        return 0.5 * (1.0 + _sqrt_clip(1.0 - 4 * (ji.j3 + ji.j4)))
    if t == StateType.TYPE3B_13:
        return 0.5 * (1.0 + _sqrt_clip(1.0 - 4 * (ji.j2 + ji.j4)))
    if t == StateType.TYPE3B_23:
        return 0.5 * (1.0 + _sqrt_clip(1.0 - 4 * (ji.j1 + ji.j4)))
    return None


def two_qubit_pmax(psi: PureState) -> float:
    """Squared maximal product overlap of a two-qubit pure state.

    The square of the larger Schmidt coefficient, i.e. the top eigenvalue of
    the one-qubit reduced state; algebraically ``(1 + sqrt(1 - 4 J))/2`` with
    the invariant ``J = det(rho_A)``, but evaluated through the eigenvalue,
    which stays accurate when J approaches its maximum 1/4.
    """
    if psi.n_qubits != 2:
        raise InputError("two_qubit_pmax expects a two-qubit state")
    rho_a = partial_trace(psi.density_matrix(), 2, {1})
    return float(np.linalg.eigvalsh(rho_a.entries).max())


# --- four-term ("new type") states ----------------------------------------


@dataclass(frozen=True)
class NewTypeStandardForm:
    """Standard-form image of a four-term state plus its consistency residual."""

    lams: tuple[float, float, float, float, float]
    phi: float
    constraint_residual: float


def _fourterm_constraint_residual(lams: np.ndarray, ratio: float | None = None) -> float:
    """Residual of the extra coefficient relation all four-term images satisfy.

    The relation reads
    ``l0^2 (l2^2 + l3^2 + l4^2) = 1/4 - (l1/l4)^2 (l2^2 + l4^2)(l3^2 + l4^2)``.
    The squared ratio ``(l1/l4)^2`` stays finite when both coefficients vanish
    but is then not determined by the coefficients alone; callers that know the
    underlying four-term parameters pass it in cancelled form.
    """
    l0, l1, l2, l3, l4 = lams
    if ratio is None:
        if l4 < 1e-15:
            return float("inf")
        ratio = (l1 / l4) ** 2
    lhs = l0**2 * (l2**2 + l3**2 + l4**2)
    rhs = 0.25 - ratio * (l2**2 + l4**2) * (l3**2 + l4**2)
    return float(abs(lhs - rhs))


def newtype_standard_form(a: float, b: float, c: float, q: float) -> NewTypeStandardForm:
    """Map four-term coefficients ``a|100>+b|010>+c|001>+q|111>`` to a standard form.

    All five resulting coefficients are generically nonzero with a phase of 0
    or pi, so the family sits outside the vanishing-pattern types.  The phase
    is 0 when ``(a^2+q^2-b^2-c^2)(ab-cq)(ac-bq) >= 0`` and pi otherwise; the
    choice is verified against the state's own invariants.
    """
    coeffs = np.array([a, b, c, q], dtype=float)
    if (coeffs < -1e-12).any() or abs((coeffs**2).sum() - 1.0) > 1e-10:
        raise InputError("four-term coefficients must be non-negative and normalized")
    pivot = a * q + b * c
    if pivot < 1e-12:
        raise InputError(
            "degenerate transformation (aq + bc = 0); use the four-term formulas directly"
        )
    l0 = np.sqrt((a * c + b * q) * (a * b + c * q) / pivot)
    l1 = (
        np.sqrt(a * b * c * q)
        / np.sqrt((a * b + c * q) * (a * c + b * q) * pivot)
        * abs(a**2 + q**2 - b**2 - c**2)
    )
    l2 = abs(a * c - b * q) / l0
    l3 = abs(a * b - c * q) / l0
    l4 = 2 * np.sqrt(a * b * c * q) / l0
    lams = np.array([l0, l1, l2, l3, l4])
    if abs((lams**2).sum() - 1.0) > 1e-9:
        raise InputError("standard-form normalization failed")
    j1_true = (a * q - b * c) ** 2
    phi = None
    for cand in (0.0, np.pi):
        if abs(invariants_from_acin(*lams, cand).j1 - j1_true) < 1e-9:
            phi = cand
            break
    if phi is None:
        raise BranchError("neither phase reproduces the state's invariants")
    # (l1/l4)^2 in cancelled form, finite also when a b c q = 0.
    ratio = l0**2 * (a**2 + q**2 - b**2 - c**2) ** 2 / (
        4.0 * (a * b + c * q) * (a * c + b * q) * pivot
    )
    residual = _fourterm_constraint_residual(lams, ratio)
    return NewTypeStandardForm(tuple(float(x) for x in lams), float(phi), residual)


def newtype_invariants(a: float, b: float, c: float, q: float) -> LuInvariants:
    """Invariants of a four-term state directly from its coefficients.

    ``j1 = (aq - bc)^2`` holds in both phase regions; ``j5`` carries the sign
    of ``+-2 sqrt(j1 j2 j3)``, fixed by evaluating the defining combination on
    the standard form.
    """
    form = newtype_standard_form(a, b, c, q)
    ji = invariants_from_acin(*form.lams, form.phi)
    j2 = (a * c - b * q) ** 2
    j3 = (a * b - c * q) ** 2
    j4 = 4 * a * b * c * q
    return LuInvariants(float((a * q - b * c) ** 2), float(j2), float(j3), float(j4), ji.j5)


def pmax_newtype_invariant_form(ji: LuInvariants, branch) -> float:
    """Squared maximal overlap of a four-term state written in its invariants.

    The circumdiameter branch reads
    ``4 sqrt((j1+j4)(j2+j4)(j3+j4)) / (4(j1+j2+j3+2 j4) - 1)`` and the
    largest-coefficient branch
    ``(1 + sqrt(1-4(j2+j3+j4)) + sqrt(1-4(j1+j3+j4)) + sqrt(1-4(j1+j2+j4)))/4``.
    """
    from .three_qubit import RegionLabel3

    if branch in (
        RegionLabel3.CONVEX_QUADRANGLE,
        RegionLabel3.SHARED_SURFACE_R0,
        RegionLabel3.SHARED_SURFACE_HIGH_LOW,
    ):
        denom = 4 * (ji.j1 + ji.j2 + ji.j3 + 2 * ji.j4) - 1.0
        if abs(denom) < 1e-12:
            raise BranchError("circumdiameter form degenerate for these invariants")
        return 4.0 * _sqrt_clip((ji.j1 + ji.j4) * (ji.j2 + ji.j4) * (ji.j3 + ji.j4)) / denom
    if branch == RegionLabel3.LARGEST_COEFFICIENT:
        return 0.25 * (
            1.0
            + _sqrt_clip(1.0 - 4 * (ji.j2 + ji.j3 + ji.j4))
            + _sqrt_clip(1.0 - 4 * (ji.j1 + ji.j3 + ji.j4))
            + _sqrt_clip(1.0 - 4 * (ji.j1 + ji.j2 + ji.j4))
        )
    raise BranchError(f"no invariant form for branch {branch}")

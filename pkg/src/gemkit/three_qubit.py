"""Closed-form maximal product overlap for solvable three-qubit families.

Covers states with a single excitation per term (W-type), states symmetric
under swapping the first two qubits, superpositions of the W state with its
bit-flipped partner, and the four-term family that adds a triply-excited ket
to a W-type state.  Each family's squared overlap has a geometric reading:
either the squared diameter of a circumscribing circle (triangle or cyclic
quadrilateral built from the coefficients) or the squared largest coefficient,
with explicit inequalities separating the two regimes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, InputError
from .states import BlochVector, ProductState, PureState, Qubit, qubit_from_bloch
from .variational import LagrangeSolution

_DEGENERATE_DENOM = 1e-14
STATIONARITY_RES_TOL = 1e-9


class RegionLabel3(enum.Enum):
    """Which analytic expression owns a three-qubit family point."""

    CONVEX_QUADRANGLE = "convex-quadrangle"
    CROSSED_QUADRANGLE = "crossed-quadrangle"
    LARGEST_COEFFICIENT = "largest-coefficient"
    SHARED_SURFACE_R0 = "shared-surface-r0"
    SHARED_SURFACE_HIGH_LOW = "shared-surface-high-low"


def _check_normalized(values: np.ndarray, what: str) -> None:
    if (values < -1e-12).any():
        raise InputError(f"{what} coefficients must be non-negative")
    if abs((values**2).sum() - 1.0) > 1e-10:
        raise InputError(f"{what} coefficients not normalized")


@dataclass(frozen=True)
class WType3:
    """Coefficients of ``a|100> + b|010> + c|001>``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        _check_normalized(np.array([self.a, self.b, self.c]), "W-type")

    def state(self) -> PureState:
        amp = np.zeros(8, dtype=complex)
        amp[0b100], amp[0b010], amp[0b001] = self.a, self.b, self.c
        return PureState.from_amplitudes(amp)


@dataclass(frozen=True)
class FourTerm:
    """Coefficients of ``a|100> + b|010> + c|001> + d|111>``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        _check_normalized(np.array([self.a, self.b, self.c, self.d]), "four-term")

    def state(self) -> PureState:
        amp = np.zeros(8, dtype=complex)
        amp[0b100], amp[0b010], amp[0b001], amp[0b111] = self.a, self.b, self.c, self.d
        return PureState.from_amplitudes(amp)


@dataclass(frozen=True)
class SymState:
    """Coefficients of ``a|000> + b|111> + c|001> + d|110>`` (swap-symmetric in qubits 1, 2)."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        _check_normalized(np.array([self.a, self.b, self.c, self.d]), "symmetric-family")

    def state(self) -> PureState:
        amp = np.zeros(8, dtype=complex)
        amp[0b000], amp[0b111], amp[0b001], amp[0b110] = self.a, self.b, self.c, self.d
        return PureState.from_amplitudes(amp)


def _triangle_area_sq_16(a: float, b: float, c: float) -> float:
    """16 * squared Heron area of the triangle with sides a, b, c."""
    return (2 * a * b) ** 2 - (a * a + b * b - c * c) ** 2


def lambda_sq_wtype(s: WType3) -> tuple[float, RegionLabel3]:
    """Squared maximal overlap of a W-type state.

    When every squared coefficient is at most 1/2 the coefficients form a
    triangle and the value is the squared circumdiameter ``4R^2`` with
    ``R = abc / (4 * area)``; otherwise it is the squared largest coefficient.
    """
    a, b, c = s.a, s.b, s.c
    largest = max(a * a, b * b, c * c)
    area16 = _triangle_area_sq_16(a, b, c)
    if abs(largest - 0.5) <= 1e-12:
        # Right triangle: circumdiameter and largest coefficient coincide.
        return largest, RegionLabel3.SHARED_SURFACE_HIGH_LOW
    if largest > 0.5 or area16 < _DEGENERATE_DENOM:
        # Obtuse or degenerate triangle: the largest coefficient wins.
        return largest, RegionLabel3.LARGEST_COEFFICIENT
    value = 4.0 * (a * b * c) ** 2 / area16
    return value, RegionLabel3.CONVEX_QUADRANGLE


def lambda_sq_symmetric(s: SymState) -> float:
    """Squared maximal overlap of the swap-symmetric family.

    Equals ``(1 + |a^2 + c^2 - b^2 - d^2|)/2``, i.e. the larger of the two
    squared block weights when the state is written as
    ``k1|00 q1> + k2|11 q2>``.
    """
    r = s.a**2 + s.c**2 - s.b**2 - s.d**2
    return 0.5 * (1.0 + abs(r))


def ww_superposition_cubic(theta: float) -> tuple[float, float]:
    """Overlap of ``cos(theta) W + sin(theta) W~`` via its cubic stationarity equation.

    The symmetric nearest product state ``(cos(p)|0> + sin(p)|1>)^x3`` has
    ``t = tan(p)`` solving ``sin(th) t^3 + 2 cos(th) t^2 - 2 sin(th) t - cos(th) = 0``;
    among the real roots the one with the largest reconstructed overlap wins.
    Returns ``(t_root, lambda_sq)``.
    """
    if not 0.0 <= theta <= np.pi / 2 + 1e-12:
        raise InputError("theta must lie in [0, pi/2]")
    st, ct = np.sin(theta), np.cos(theta)
    coeffs = [st, 2 * ct, -2 * st, -ct]
    if abs(st) < 1e-14:
        roots = np.roots(coeffs[1:])
    else:
        roots = np.roots(coeffs)

    def overlap(t: float) -> float:
        cp = 1.0 / np.sqrt(1.0 + t * t)
        sp = t * cp
        return abs(np.sqrt(3.0) * cp * sp * (cp * ct + sp * st))

    best_t, best = None, -1.0
    for r in roots:
        if abs(r.imag) > 1e-9:
            continue
        val = overlap(float(r.real))
        if val > best:
            best, best_t = val, float(r.real)
    if best_t is None:
        raise BranchError("cubic produced no real stationary root")
    return best_t, float(best**2)


@dataclass(frozen=True)
class FourTermQuantities:
    """Derived geometry of a four-term state.

    ``rq_sq``/``rx_sq`` are the squared circumradii of the convex and crossed
    cyclic quadrilaterals with sides (a, b, c, d); either is None when the
    corresponding circumscribed figure does not exist.
    """

    r1: float
    r2: float
    r3: float
    omega: float
    mu: float
    sq_sq: float
    sx_sq: float
    rq_sq: float | None
    rx_sq: float | None


def fourterm_quantities(s: FourTerm) -> FourTermQuantities:
    a, b, c, d = s.a, s.b, s.c, s.d
    r1 = b * b + c * c - a * a - d * d
    r2 = a * a + c * c - b * b - d * d
    r3 = a * a + b * b - c * c - d * d
    omega = a * b + d * c
    mu = a * b - d * c
    p = 0.5 * (a + b + c + d)
    sq_sq = (p - a) * (p - b) * (p - c) * (p - d)
    sx_sq = p * (p - c - d) * (p - b - d) * (p - a - d)
    denom_q = 4 * omega * omega - r3 * r3  # equals 16 * sq_sq
    rq_sq = None
    if denom_q > _DEGENERATE_DENOM:
        rq_sq = (a * b + c * d) * (a * c + b * d) * (a * d + b * c) / denom_q
    rx_sq = None
    denom_x = 4 * mu * mu - r3 * r3  # equals 16 * sx_sq
    cross_num = (a * c - b * d) * (b * c - a * d) * (a * b - c * d)
    if denom_x > _DEGENERATE_DENOM and cross_num >= 0.0:
        rx_sq = cross_num / denom_x
    elif (
        abs(denom_x) <= _DEGENERATE_DENOM
        and abs(cross_num) <= _DEGENERATE_DENOM
        and abs(r1 * r2 * r3) <= _DEGENERATE_DENOM
        and rq_sq is not None
    ):
        # 0/0 on the shared surface, where both circumcircles coincide.
        rx_sq = rq_sq
    return FourTermQuantities(r1, r2, r3, omega, mu, sq_sq, sx_sq, rq_sq, rx_sq)


def _fourterm_region(s: FourTerm) -> tuple[RegionLabel3, FourTermQuantities]:
    q = fourterm_quantities(s)
    lsq = max(s.a, s.b, s.c, s.d) ** 2
    product = s.a * s.b * s.c * s.d
    boundary = lsq - 0.5 - product / lsq
    if abs(q.r1 * q.r2 * q.r3) < 1e-12 and boundary < -1e-12:
        return RegionLabel3.SHARED_SURFACE_R0, q
    if abs(boundary) <= 1e-12:
        return RegionLabel3.SHARED_SURFACE_HIGH_LOW, q
    if boundary < 0:
        return RegionLabel3.CONVEX_QUADRANGLE, q
    return RegionLabel3.LARGEST_COEFFICIENT, q


def lambda_sq_fourterm(s: FourTerm) -> tuple[float, RegionLabel3]:
    """Squared maximal overlap of a four-term state with its region label.

    The convex-quadrilateral circumdiameter formula applies while
    ``l^2 <= 1/2 + abcd/l^2`` for the largest coefficient ``l``; beyond that
    surface the value is ``l^2``.  On the ``r1 r2 r3 = 0`` surface the value is
    exactly 1/2.  The crossed-quadrilateral expression survives only on that
    surface for non-negative coefficients, where it agrees with the convex one.
    """
    label, q = _fourterm_region(s)
    lsq = max(s.a, s.b, s.c, s.d) ** 2
    if label in (RegionLabel3.LARGEST_COEFFICIENT, RegionLabel3.SHARED_SURFACE_HIGH_LOW):
        return lsq, label
    if q.rq_sq is None:
        # Degenerate quadrilateral inside the convex region can only happen on
        # the boundary; fall through to the largest coefficient by continuity.
        return lsq, RegionLabel3.LARGEST_COEFFICIENT
    return 4.0 * q.rq_sq, label


def fourterm_bloch_solution(
    s: FourTerm, branch: RegionLabel3 | None = None
) -> LagrangeSolution:
    """Stationary Bloch vectors of qubits 1 and 2 on the maximal branch.

    With ``branch`` given, raises unless it matches the region the state
    actually lies in.
    """
    label, q = _fourterm_region(s)
    if branch is not None and branch != label:
        raise BranchError(f"state lies in region {label.value}, not {branch.value}")
    a, b, c, d = s.a, s.b, s.c, s.d
    g = np.diag([2 * q.omega, 2 * q.mu, -q.r3])
    ra = np.array([0.0, 0.0, q.r1])
    rb = np.array([0.0, 0.0, q.r2])
    if label == RegionLabel3.LARGEST_COEFFICIENT or (
        label == RegionLabel3.SHARED_SURFACE_HIGH_LOW and q.rq_sq is None
    ):
        s1 = np.array([0.0, 0.0, float(np.sign(q.r1))])
        s2 = np.array([0.0, 0.0, float(np.sign(q.r2))])
        if s1[2] == 0.0:
            s1[2] = 1.0
        if s2[2] == 0.0:
            s2[2] = 1.0
        l1 = float(s1 @ (ra + g @ s2))
        l2 = float(s2 @ (rb + g.T @ s1))
    else:
        denom = 4 * q.omega**2 - q.r3**2
        l1 = 2 * q.omega * (b * c + a * d) / (a * c + b * d)
        l2 = 2 * q.omega * (a * c + b * d) / (b * c + a * d)
        uk = (l2 * q.r1 - q.r2 * q.r3) / denom
        vk = (l1 * q.r2 - q.r1 * q.r3) / denom
        ux = np.sqrt(max(0.0, 1.0 - uk * uk))
        vx = l1 * ux / (2 * q.omega)
        s1 = np.array([ux, 0.0, uk])
        s2 = np.array([vx, 0.0, vk])
    res = float(
        np.linalg.norm(np.concatenate([ra + g @ s2 - l1 * s1, rb + g.T @ s1 - l2 * s2]))
    )
    if res > STATIONARITY_RES_TOL:
        raise BranchError(f"stationarity residual {res} too large for branch {label.value}")
    val = 0.25 * (1.0 + s1 @ ra + s2 @ rb + s1 @ g @ s2)
    det = float(np.linalg.det(l1 * l2 * np.eye(3) - g @ g.T))
    return LagrangeSolution(
        s1=BlochVector.from_array(s1),
        s2=BlochVector.from_array(s2),
        lambda1=float(l1),
        lambda2=float(l2),
        value=float(val),
        residual=res,
        degenerate=abs(det) < 1e-8,
    )


def nearest_product_fourterm(s: FourTerm) -> ProductState:
    """A nearest product state of a four-term state (one of the stationary set)."""
    sol = fourterm_bloch_solution(s)
    q1 = qubit_from_bloch(sol.s1)
    q2 = qubit_from_bloch(sol.s2)
    t = s.state().tensor()
    w = np.einsum("a,b,abc->c", np.conj(q1.vector()), np.conj(q2.vector()), t)
    q3 = Qubit.from_vector(w)
    return ProductState((q1, q2, q3))


def nearest_product_symmetric(s: SymState) -> ProductState:
    """The nearest product state of a swap-symmetric family state."""
    r = s.a**2 + s.c**2 - s.b**2 - s.d**2
    bit = 0 if r >= 0 else 1
    q1 = q2 = Qubit(1.0 + 0j, 0j) if bit == 0 else Qubit(0j, 1.0 + 0j)
    t = s.state().tensor()
    w = np.einsum("a,b,abc->c", np.conj(q1.vector()), np.conj(q2.vector()), t)
    q3 = Qubit.from_vector(w)
    return ProductState((q1, q2, q3))


def fourterm_identity_residual(s: FourTerm) -> float:
    """Residual of the algebraic identity tying the circumradius to the z-data.

    For normalized coefficients,
    ``1 - r1 r2 r3/(4 w^2 - r3^2) = 8 (ab+cd)(ac+bd)(ad+bc)/(4 w^2 - r3^2)``.
    """
    a, b, c, d = s.a, s.b, s.c, s.d
    q = fourterm_quantities(s)
    denom = 4 * q.omega**2 - q.r3**2
    if abs(denom) < _DEGENERATE_DENOM:
        raise InputError("identity undefined for a degenerate quadrilateral")
    lhs = 1.0 - q.r1 * q.r2 * q.r3 / denom
    rhs = 8.0 * (a * b + c * d) * (a * c + b * d) * (a * d + b * c) / denom
    return float(abs(lhs - rhs))

"""Maximal product overlap of arbitrary n-qubit W states via duality.

A highly entangled W state corresponds one-to-one to its nearest product
state through a single positive quantity r, the entanglement diameter: the
ratios ``sin(2 theta_k)/c_k`` are all equal to ``1/r``, the direction cosines
``cos(theta_k)`` form a unit vector, and r is fixed by a one-dimensional root
problem.  Two critical values of the largest coefficient split the parameter
space into a symmetric highly entangled region, an asymmetric one, and the
slightly entangled region where the overlap is simply the largest coefficient.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, InputError
from .states import ProductState, PureState, Qubit

BISECT_REL_TOL = 1e-13
BISECT_MAX_ITERS = 200
SHARED_GUARD = 1e-10


class WRegionLabel(enum.Enum):
    SYMMETRIC_HIGH = "symmetric-high"
    ASYMMETRIC_HIGH = "asymmetric-high"
    SLIGHTLY_ENTANGLED = "slightly-entangled"
    BOUNDARY_FIRST = "boundary-first"
    BOUNDARY_SHARED = "boundary-shared"


class DiameterBranch(enum.Enum):
    SYMMETRIC_PLUS = "symmetric-plus"
    ASYMMETRIC_MINUS = "asymmetric-minus"
    NONE = "none"


@dataclass(frozen=True)
class WStateN:
    """An n-qubit W state, stored with coefficients sorted ascending.

    ``order[i]`` is the original qubit index of sorted coefficient ``i`` so
    reports can restore the input ordering.
    """

    c: np.ndarray
    order: tuple[int, ...]

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 1 or c.size < 3:
            raise InputError("a W state needs at least three coefficients")
        if (c < -1e-12).any():
            raise InputError("coefficients must be non-negative")
        if abs((c**2).sum() - 1.0) > 1e-10:
            raise InputError("coefficients not normalized")
        if (np.diff(c) < -1e-15).any():
            raise InputError("internal: coefficients must be sorted ascending")
        c = np.ascontiguousarray(c)
        c.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))

    @classmethod
    def from_coefficients(cls, coefficients) -> "WStateN":
        c = np.asarray(coefficients, dtype=float)
        perm = np.argsort(c, kind="stable")
        return cls(c[perm], tuple(int(i) for i in perm))

    @property
    def n(self) -> int:
        return int(self.c.size)

    def original_coefficients(self) -> np.ndarray:
        out = np.empty_like(self.c)
        out[list(self.order)] = self.c
        return out

    def state(self) -> PureState:
        """Dense amplitude vector in the original qubit ordering."""
        n = self.n
        orig = self.original_coefficients()
        amp = np.zeros(2**n, dtype=complex)
        for k in range(n):
            amp[1 << (n - 1 - k)] = orig[k]
        return PureState.from_amplitudes(amp)


@dataclass(frozen=True)
class WRegion:
    """Critical values of the largest coefficient and the region they select."""

    r1: float
    r2: float
    label: WRegionLabel


@dataclass(frozen=True)
class DiameterSolution:
    """Entanglement diameter and nearest-product angles (sorted-coefficient order)."""

    r: float
    branch: DiameterBranch
    thetas: np.ndarray

    def __post_init__(self):
        t = np.ascontiguousarray(np.asarray(self.thetas, dtype=float))
        t.flags.writeable = False
        object.__setattr__(self, "thetas", t)


def _radicals(r: float, c: np.ndarray) -> np.ndarray:
    return np.sqrt(np.maximum(0.0, 1.0 - (c / r) ** 2))


def _f_zero(r: float, c: np.ndarray) -> float:
    """Sum of radicals over all but the largest coefficient."""
    return float(_radicals(r, c[:-1]).sum())


def _f_branch(r: float, c: np.ndarray, sign_last: float) -> float:
    vals = _radicals(r, c)
    return float(vals[:-1].sum() + sign_last * vals[-1])


def _bisect(f, lo: float, hi: float, increasing: bool) -> float:
    """Bisection for f(r) = 0 given a bracketing interval and monotonicity sense."""
    for _ in range(BISECT_MAX_ITERS):
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0.0) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo <= BISECT_REL_TOL * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def critical_values(w: WStateN) -> WRegion:
    """First and second critical values and the region of the largest coefficient.

    ``r1`` is the unique root of the radical sum over the n-1 smaller
    coefficients equalling n-2 (bracketed from the largest of them, where the
    sum is below n-2, and grown geometrically until it exceeds n-2);
    ``r2^2`` is the sum of their squares.
    """
    c = w.c
    n = w.n
    target = float(n - 2)
    r2 = float(np.sqrt((c[:-1] ** 2).sum()))
    lo = max(float(c[:-2].max() if n > 2 else 0.0), float(c[-2]), 1e-300)
    hi = max(2.0 * lo, 1.0)
    while _f_zero(hi, c) < target:
        hi *= 2.0
    r1 = _bisect(lambda r: _f_zero(r, c) - target, lo, hi, increasing=True)
    cn = float(c[-1])
    if cn * cn >= 0.5 - SHARED_GUARD:
        label = (
            WRegionLabel.BOUNDARY_SHARED
            if abs(cn - r2) <= 1e-9
            else WRegionLabel.SLIGHTLY_ENTANGLED
        )
    elif abs(cn - r1) <= 1e-12:
        label = WRegionLabel.BOUNDARY_FIRST
    elif cn < r1:
        label = WRegionLabel.SYMMETRIC_HIGH
    else:
        label = WRegionLabel.ASYMMETRIC_HIGH
    return WRegion(r1=float(r1), r2=r2, label=label)


def _golden_min(f, lo: float, hi: float, iters: int = 200) -> float:
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - gr * (hi - lo)
    x2 = lo + gr * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - gr * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + gr * (hi - lo)
            f2 = f(x2)
        if hi - lo < BISECT_REL_TOL * max(abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def solve_diameter(w: WStateN) -> DiameterSolution:
    """Entanglement diameter and angles of a highly entangled W state.

    Symmetric branch: the all-plus radical sum is increasing in r, so its root
    is found by plain bisection on a grown bracket.  Asymmetric branch: the
    minus-sign sum starts above n-2 at ``r = c_n``, descends to a minimum below
    n-2, then climbs back towards n-2 from below, so the unique root sits on
    the descending flank; the minimum is located by golden-section first and
    the root bisected between ``c_n`` and it.
    """
    region = critical_values(w)
    if region.label in (WRegionLabel.SLIGHTLY_ENTANGLED, WRegionLabel.BOUNDARY_SHARED):
        raise BranchError(
            "no entanglement diameter: the largest coefficient is at or above the "
            "shared-state threshold (squared value >= 1/2)"
        )
    c = w.c
    n = w.n
    cn = float(c[-1])
    target = float(n - 2)
    if region.label == WRegionLabel.BOUNDARY_FIRST:
        r = region.r1
        branch = DiameterBranch.SYMMETRIC_PLUS
    elif region.label == WRegionLabel.SYMMETRIC_HIGH:
        lo, hi = cn, max(2.0 * cn, 1.0)
        while _f_branch(hi, c, +1.0) < target:
            hi *= 2.0
        r = _bisect(lambda x: _f_branch(x, c, +1.0) - target, lo, hi, increasing=True)
        branch = DiameterBranch.SYMMETRIC_PLUS
    else:
        fm = lambda x: _f_branch(x, c, -1.0)
        hi = max(2.0 * cn, 1.0)
        while fm(2.0 * hi) < fm(hi) and hi < 1e12:
            hi *= 2.0
        rmin = _golden_min(fm, cn, hi)
        if fm(rmin) > target:
            raise BranchError("asymmetric branch has no root; state is near the shared surface")
        r = _bisect(lambda x: fm(x) - target, cn, rmin, increasing=False)
        branch = DiameterBranch.ASYMMETRIC_MINUS
    rad = _radicals(r, c)
    cos2 = -rad
    if branch == DiameterBranch.ASYMMETRIC_MINUS:
        cos2[-1] = rad[-1]
    thetas = 0.5 * np.arccos(np.clip(cos2, -1.0, 1.0))
    return DiameterSolution(r=float(r), branch=branch, thetas=thetas)


def lambda_max_w(w: WStateN) -> tuple[float, ProductState, WRegion]:
    """Maximal product overlap, a nearest product state, and the region.

    Slightly entangled states take the largest coefficient, with the nearest
    product state the matching one-excitation basis ket (lowest original index
    on ties).  Highly entangled states take ``2 r prod_k sin(theta_k)`` with
    factors ``sin(theta_k)|0> + cos(theta_k)|1>``.
    """
    region = critical_values(w)
    n = w.n
    if region.label in (WRegionLabel.SLIGHTLY_ENTANGLED, WRegionLabel.BOUNDARY_SHARED):
        lam = float(w.c[-1])
        orig = w.original_coefficients()
        hot = int(np.flatnonzero(np.abs(orig - lam) <= 1e-12)[0])
        factors = [Qubit(1.0 + 0j, 0j)] * n
        factors[hot] = Qubit(0j, 1.0 + 0j)
        return lam, ProductState(tuple(factors)), region
    sol = solve_diameter(w)
    sines = np.sin(sol.thetas)
    lam = float(2.0 * sol.r * np.prod(sines))
    factors_sorted = [
        Qubit(complex(np.sin(t)), complex(np.cos(t))) for t in sol.thetas
    ]
    factors = [None] * n
    for sorted_idx, orig_idx in enumerate(w.order):
        factors[orig_idx] = factors_sorted[sorted_idx]
    return lam, ProductState(tuple(factors)), region


def reconstruct_coefficients(sol: DiameterSolution) -> np.ndarray:
    """Invert the duality map: coefficients are ``r sin(2 theta_k)``."""
    return sol.r * np.sin(2.0 * sol.thetas)


def two_block_closed_form(m: int, k: int, theta: float) -> float:
    """Closed-form squared diameter for a two-block W state.

    The state has m coefficients ``cos(theta)/sqrt(m)`` and k coefficients
    ``sin(theta)/sqrt(k)``; for m, k >= 2 its symmetric-branch radical equation
    is solvable by radicals and returns the squared diameter directly.
    """
    if m < 2 or k < 2:
        raise InputError("closed form needs both blocks of size >= 2; use solve_diameter")
    n = m + k
    d = 1.0 - (n - 1) / (m * k) * np.sin(2.0 * theta) ** 2
    if d < -1e-12:
        raise BranchError("no symmetric-branch solution for these block angles")
    num = (
        2.0 * n * m * k
        - 4.0 * (n - 1) * (m * np.cos(theta) ** 2 + k * np.sin(theta) ** 2)
        + 2.0 * m * k * (n - 2) * np.sqrt(max(d, 0.0))
    )
    den = 16.0 * (n - 1) * (m - 1) * (k - 1)
    return float(num / den)


def two_block_wstate(m: int, k: int, theta: float) -> WStateN:
    a = np.cos(theta) / np.sqrt(m)
    b = np.sin(theta) / np.sqrt(k)
    return WStateN.from_coefficients(np.concatenate([np.full(m, a), np.full(k, b)]))


@dataclass(frozen=True)
class InterpolationInput:
    """z-component of the Bloch vector of the qubit carrying the largest coefficient."""

    bz: float

    def __post_init__(self):
        if not -1.0 < self.bz < 1.0:
            raise InputError("bz must lie strictly inside (-1, 1)")


def largeN_lambda_sq(bz: float) -> float:
    """Many-qubit interpolating formula for the squared overlap of a W state.

    For ``bz = 1 - 2 c_max^2`` in ``(0, 1/3]`` the asymmetric-region value is
    ``((1+bz)/2) exp(-2 bz/(1+bz))``; for ``bz <= 0`` the state is slightly
    entangled and the value ``(1-bz)/2`` is exact.  Both meet at 1/2 for
    ``bz = 0``.
    """
    if not -1.0 < bz < 1.0:
        raise InputError("bz must lie strictly inside (-1, 1)")
    if bz > 1.0 / 3.0 + 1e-12:
        raise BranchError(
            "bz above 1/3 lies in the symmetric many-qubit regime where the overlap "
            "is approximately the constant 1/e; the interpolating formula does not apply"
        )
    if bz <= 0.0:
        return 0.5 * (1.0 - bz)
    return float(0.5 * (1.0 + bz) * np.exp(-2.0 * bz / (1.0 + bz)))


@dataclass(frozen=True)
class PyramidGeometry:
    """Right-triangle data of the circumscribing-sphere picture.

    Each coefficient ``c_k`` is a leg of a right triangle with hypotenuse r
    (the diameter) and adjacent side ``sqrt(r^2 - c_k^2)``.
    """

    hypotenuse: float
    legs: np.ndarray
    adjacents: np.ndarray


def pyramid_geometry(w: WStateN, sol: DiameterSolution) -> PyramidGeometry:
    if sol.branch == DiameterBranch.NONE:
        raise BranchError("slightly entangled states have no diameter geometry")
    legs = w.c.copy()
    adj = np.sqrt(np.maximum(0.0, sol.r**2 - legs**2))
    return PyramidGeometry(hypotenuse=float(sol.r), legs=legs, adjacents=adj)

"""Parameter sweeps producing deterministic CSV data for the analytic families."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .three_qubit import FourTerm, WType3, lambda_sq_fourterm, lambda_sq_wtype, ww_superposition_cubic
from .wduality import (
    WStateN,
    critical_values,
    lambda_max_w,
    largeN_lambda_sq,
    solve_diameter,
    two_block_closed_form,
    two_block_wstate,
)

FAMILIES = ("wtype3", "fourterm", "wN-two-block", "wN-interpolation", "ww-superposition")


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter grid over a named state family."""

    family: str
    param: str
    start: float
    stop: float
    count: int
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown sweep family '{self.family}'; choose from {FAMILIES}")
        if self.count < 2:
            raise InputError("grid count must be at least 2")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and not np.isfinite(x)):
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _threads() -> int:
    env = os.environ.get("GEMKIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise InputError(f"GEMKIT_THREADS must be an integer: {env!r}") from exc
    return min(8, os.cpu_count() or 1)


def _row_fourterm(spec: SweepSpec, d: float):
    if spec.param != "d":
        raise InputError("the four-term family sweeps parameter 'd'")
    ra = float(spec.fixed.get("a", 1.0))
    rb = float(spec.fixed.get("b", 1.0))
    rc = float(spec.fixed.get("c", 1.0))
    d = min(max(d, 0.0), 1.0)
    scale = np.sqrt((1.0 - d * d) / (ra * ra + rb * rb + rc * rc))
    s = FourTerm(ra * scale, rb * scale, rc * scale, d)
    lam_sq, label = lambda_sq_fourterm(s)
    return (d, lam_sq, None, label.value, "analytic")


def _row_wtype3(spec: SweepSpec, c: float):
    if spec.param != "c":
        raise InputError("the W-type family sweeps parameter 'c'")
    ra = float(spec.fixed.get("a", 1.0))
    rb = float(spec.fixed.get("b", 1.0))
    c = min(max(c, 0.0), 1.0)
    scale = np.sqrt((1.0 - c * c) / (ra * ra + rb * rb))
    s = WType3(ra * scale, rb * scale, c)
    lam_sq, label = lambda_sq_wtype(s)
    return (c, lam_sq, None, label.value, "analytic")


def _row_ww(spec: SweepSpec, theta: float):
    if spec.param != "theta":
        raise InputError("the W-superposition family sweeps parameter 'theta'")
    t_root, lam_sq = ww_superposition_cubic(theta)
    return (theta, lam_sq, None, "", "analytic", t_root)


def _row_two_block(spec: SweepSpec, theta: float):
    if spec.param != "theta":
        raise InputError("the two-block family sweeps parameter 'theta'")
    m = int(spec.fixed.get("m", 10))
    k = int(spec.fixed.get("k", 10))
    w = two_block_wstate(m, k, theta)
    region = critical_values(w)
    closed = two_block_closed_form(m, k, theta)
    sol = solve_diameter(w)
    lam, _, _ = lambda_max_w(w)
    return (
        theta,
        lam * lam,
        sol.r,
        region.label.value,
        "analytic",
        closed,
        sol.r**2,
        abs(closed - sol.r**2),
    )


def _interp_direction(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    d = np.abs(rng.normal(size=n - 1))
    return d / np.linalg.norm(d)


def _row_interpolation(spec: SweepSpec, bz: float):
    if spec.param != "bz":
        raise InputError("the interpolation family sweeps parameter 'bz'")
    n = int(spec.fixed.get("n", 10))
    seed = int(spec.fixed.get("seed", 0))
    direction = _interp_direction(n, seed)
    cmax_sq = 0.5 * (1.0 - bz)
    coeffs = np.concatenate([direction * np.sqrt(1.0 - cmax_sq), [np.sqrt(cmax_sq)]])
    w = WStateN.from_coefficients(coeffs)
    lam, _, region = lambda_max_w(w)
    exact = lam * lam
    approx = largeN_lambda_sq(bz)
    rel_gap = abs(approx - exact) / exact
    return (bz, approx, None, region.label.value, "interpolation", exact, rel_gap)


_HEADERS = {
    "fourterm": ("d", "lambda_sq", "r", "region", "method"),
    "wtype3": ("c", "lambda_sq", "r", "region", "method"),
    "ww-superposition": ("theta", "lambda_sq", "r", "region", "method", "t_root"),
    "wN-two-block": (
        "theta",
        "lambda_sq",
        "r",
        "region",
        "method",
        "r_sq_closed",
        "r_sq_solver",
        "r_sq_gap",
    ),
    "wN-interpolation": (
        "bz",
        "lambda_sq",
        "r",
        "region",
        "method",
        "lambda_sq_exact",
        "rel_gap",
    ),
}

_ROW_FNS = {
    "fourterm": _row_fourterm,
    "wtype3": _row_wtype3,
    "ww-superposition": _row_ww,
    "wN-two-block": _row_two_block,
    "wN-interpolation": _row_interpolation,
}


def run_sweep(spec: SweepSpec) -> tuple[tuple[str, ...], list[tuple]]:
    """Evaluate the sweep grid (concurrently, order-preserving) and return rows."""
    fn = _ROW_FNS[spec.family]
    grid = spec.grid()
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda x: fn(spec, float(x)), grid))
    return _HEADERS[spec.family], rows


def write_csv(path, header: tuple[str, ...], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")

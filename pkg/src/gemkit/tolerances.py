"""Numerical tolerance hierarchy used across the package.

Three tiers keep floating-point noise apart from genuine method error:
representation invariants are checked at REP_TOL, quantities derived by a
single closed-form evaluation at DERIVED_TOL, and agreement between two
different computational routes (analytic vs variational) at CROSS_TOL.
"""

REP_TOL = 1e-12
DERIVED_TOL = 1e-10
CROSS_TOL = 1e-6

# Classification: a coefficient or invariant below this is treated as zero.
VANISH_TOL = 1e-10

"""H^2-type norms of radial functions in the log-radius variable.

All norms are the 1D reductions listed in gridfn's module docstring; the
common prefactor 2 pi^2 is the area of the unit 3-sphere.  SCHROEDINGER is
||(-Lap + I) u||, computed pointwise as

    |v - e^{2s} (v'' - 2 v')|^2 e^{-4s}  =  (v e^{-2s} - (v'' - 2 v'))^2,

which stays in floating range even when Lap u is enormous near r = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .gridfn import (IntegrandOverflowError, LogRadialFunction,
                     integrate_samples)

TWO_PI2 = 2.0 * np.pi ** 2


class NormKind(Enum):
    L2 = "l2"
    GRAD = "grad"
    INVR_GRAD = "invr_grad"
    LAP = "lap"
    H2_SUM = "h2_sum"
    SCHROEDINGER = "schroedinger"


def norm(f: LogRadialFunction, kind: NormKind) -> float:
    """Norm of the radial function represented by f (nonnegative).

    H2_SUM is sqrt(L2^2 + GRAD^2 + LAP^2); the others integrate their 1D
    reduction with the spline-exact composite rule and take a square root.
    """
    if kind is NormKind.H2_SUM:
        return float(np.sqrt(norm(f, NormKind.L2) ** 2
                             + norm(f, NormKind.GRAD) ** 2
                             + norm(f, NormKind.LAP) ** 2))
    f.grid.require_norm_grade()
    s = f.grid.nodes
    v = f.values
    if kind is NormKind.L2:
        integrand = np.exp(-4.0 * s) * v * v
    elif kind is NormKind.GRAD:
        dv = f.derivative(1).values
        integrand = np.exp(-2.0 * s) * dv * dv
    elif kind is NormKind.INVR_GRAD:
        dv = f.derivative(1).values
        integrand = dv * dv
    elif kind is NormKind.LAP:
        dv = f.derivative(1).values
        d2v = f.derivative(2).values
        w = d2v - 2.0 * dv
        integrand = w * w
    elif kind is NormKind.SCHROEDINGER:
        dv = f.derivative(1).values
        d2v = f.derivative(2).values
        w = v * np.exp(-2.0 * s) - (d2v - 2.0 * dv)
        integrand = w * w
    else:
        raise ValueError(f"unknown norm kind {kind!r}")
    if not np.all(np.isfinite(integrand)):
        bad = int(np.argmax(~np.isfinite(integrand)))
        raise IntegrandOverflowError(
            f"{kind.value} integrand overflowed at s = {s[bad]:.6g}",
            s_offender=float(s[bad]))
    val = integrate_samples(s, integrand)
    return float(np.sqrt(max(TWO_PI2 * val, 0.0)))


def norms_squared(f: LogRadialFunction) -> dict[str, float]:
    """L2/GRAD/INVR_GRAD/LAP squared norms in one pass (shared derivatives)."""
    f.grid.require_norm_grade()
    s = f.grid.nodes
    v = f.values
    dv = f.derivative(1).values
    d2v = f.derivative(2).values
    lap = d2v - 2.0 * dv
    out = {
        "l2": integrate_samples(s, np.exp(-4.0 * s) * v * v),
        "grad": integrate_samples(s, np.exp(-2.0 * s) * dv * dv),
        "invr_grad": integrate_samples(s, dv * dv),
        "lap": integrate_samples(s, lap * lap),
    }
    return {k: max(TWO_PI2 * x, 0.0) for k, x in out.items()}


# --------------------------------------------------------------------------
# radial inequality report
# --------------------------------------------------------------------------

@dataclass
class InequalityReport:
    """Result of the two radial inequality checks (always returned).

    half_lap: lhs = ||(1/r) d_r u||, rhs = 0.5 ||Lap u||, flag lhs <= rhs (1+slack).
    pointwise: max over nodes with r >= r_floor of u(r)^2 pi^2 r^3 / (||u|| ||grad u||),
    flag <= 1 + slack.
    """

    invr_grad: float
    half_lap: float
    half_lap_pass: bool
    pointwise_max: float
    pointwise_pass: bool
    slack: float
    r_floor: float

    @property
    def all_pass(self) -> bool:
        return self.half_lap_pass and self.pointwise_pass


def discretization_slack(f: LogRadialFunction) -> float:
    # crude second-order spacing estimate relative to the span
    h = np.diff(f.grid.nodes)
    span = f.grid.s_max - f.grid.s_min
    return float(4.0 * (np.max(h) / max(span, 1.0)) ** 2)


def check_radial_inequalities(f: LogRadialFunction, r_floor: float = 0.1,
                              slack: float | None = None) -> InequalityReport:
    """Check ||(1/r) d_r u|| <= 0.5 ||Lap u|| and the pointwise decay bound.

    The pointwise bound u(r)^2 <= ||u|| ||grad u|| / (pi^2 r^3) degenerates
    as r -> 0, hence the r_floor.  A zero function passes trivially.
    """
    if slack is None:
        slack = 1e-6 + discretization_slack(f)
    sq = norms_squared(f)
    lhs = float(np.sqrt(sq["invr_grad"]))
    rhs = 0.5 * float(np.sqrt(sq["lap"]))
    half_lap_pass = lhs <= rhs * (1.0 + slack) + 1e-300

    l2 = float(np.sqrt(sq["l2"]))
    grad = float(np.sqrt(sq["grad"]))
    s = f.grid.nodes
    r = np.exp(-s)
    mask = r >= r_floor
    denom = l2 * grad
    if denom == 0.0 or not np.any(mask):
        ratio_max = 0.0
    else:
        num = f.values[mask] ** 2 * np.pi ** 2 * r[mask] ** 3
        ratio_max = float(np.max(num) / denom)
    pointwise_pass = ratio_max <= 1.0 + slack

    return InequalityReport(invr_grad=lhs, half_lap=rhs,
                            half_lap_pass=half_lap_pass,
                            pointwise_max=ratio_max,
                            pointwise_pass=pointwise_pass,
                            slack=float(slack), r_floor=float(r_floor))

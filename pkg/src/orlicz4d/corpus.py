"""Randomized smooth radial test functions for the inequality suites.

Each function is a clamped cubic spline in r through random knot values on
[0, 4] (u'(0) = 0 for radial regularity, u(4) = u'(4) = 0 so the support
stays in r <= 4), sampled onto a log-radius grid.  The analytic spline is
kept as the generator so oracle comparisons stay sharp.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .gridfn import LogGrid, LogRadialFunction, compose_segments

R_SUPPORT = 4.0
N_KNOTS = 9


def corpus_grid(n: int = 1400) -> LogGrid:
    # span covers r in (e^-10, 4.3]; r > 4 carries only zeros of u
    return compose_segments([(-np.log(R_SUPPORT) - 0.08, 2.0, 2 * n // 3),
                             (2.0, 10.0, n // 3)])


def random_smooth_radial(rng: np.random.Generator,
                         grid: LogGrid | None = None,
                         amplitude: float = 1.0) -> LogRadialFunction:
    if grid is None:
        grid = corpus_grid()
    knots = np.linspace(0.0, R_SUPPORT, N_KNOTS)
    y = rng.normal(0.0, amplitude, N_KNOTS)
    y[-1] = 0.0
    if np.allclose(y, 0.0):
        y[N_KNOTS // 2] = amplitude  # never return the zero function
    sp = CubicSpline(knots, y, bc_type="clamped")

    def u_of_r(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        m = r <= R_SUPPORT
        out[m] = sp(r[m])
        return out

    vals = u_of_r(np.exp(-grid.nodes))
    return LogRadialFunction(grid, vals, name="corpus",
                             closed_form="random-clamped-spline",
                             generator=lambda s: u_of_r(np.exp(-np.asarray(s, dtype=float))))


def corpus_functions(seed: int, count: int) -> list[LogRadialFunction]:
    rng = np.random.default_rng(seed)
    grid = corpus_grid()
    return [random_smooth_radial(rng, grid) for _ in range(count)]

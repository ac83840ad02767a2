"""Generators for the explicit concentrating objects and their closed forms.

The concentration family is, in radius,

    f_alpha(x) = sqrt(alpha/8 pi^2) + (1 - |x|^2 e^{2 alpha})/sqrt(32 pi^2 alpha)   |x| <= e^{-alpha}
               = -log|x| / sqrt(8 pi^2 alpha)                                       e^{-alpha} < |x| <= 1
               = eta_alpha(x)                                                        |x| > 1

with eta_alpha smooth, supported in 1 <= |x| <= 2, eta(1) = 0 and slope
eta'(1) = -1/sqrt(8 pi^2 alpha) so f_alpha is C^1 across |x| = 1.  The
exterior ramp uses the 4D-harmonic profile (1 - r^{-2})/2 (so Lap eta == 0
there) times an all-derivatives-flat cutoff acting only on r in [1.3, 2];
that keeps the Laplacian mass of the cutoff where concentration pairings
are insensitive to it.

Bubbles are profiles stretched by a scale:  pure  h(x) = sqrt(a/8pi^2) psi(-log|x|/a),
mollified  g(x) = sqrt(a/8pi^2) (psi * rho_a)(-log|x|/a)  with rho_a(s) = a rho(a s).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .gridfn import (LogGrid, LogRadialFunction, bubble_grid, compose_segments,
                     integrate_samples, _fd_derivative)

PI2 = np.pi ** 2
SQRT_8PI2 = np.sqrt(8.0 * PI2)
SQRT_32PI2 = np.sqrt(32.0 * PI2)
ORLICZ_LIMIT_CONST = 1.0 / SQRT_32PI2  # 1/sqrt(32 pi^2) = 0.0562697...

# start of the exterior cutoff in t = r - 1; the ramp is harmonic on [0, c]
ETA_CUT_START = 0.3

# Frozen oracle constants: ||eta_a||^2 = ETA_L2_COEF/a and likewise for the
# gradient and Laplacian pieces (alpha-independent by the 1/sqrt(alpha)
# scaling).  Values from high-accuracy quadrature of the closed forms; the
# test suite recomputes them.
ETA_L2_COEF = 0.018615441677047442
ETA_GRAD_COEF = 0.270103460905641
ETA_LAP_COEF = 11.463862005746876


# --------------------------------------------------------------------------
# all-derivatives-flat step and the eta ramp, with analytic derivatives
# --------------------------------------------------------------------------

def _bump_exp(v):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    m = v > 0
    out[m] = np.exp(-1.0 / v[m])
    return out


def _step_down(u):
    """C-infinity decreasing step: 1 at u<=0, 0 at u>=1, flat at both ends."""
    u = np.asarray(u, dtype=float)
    out = np.ones_like(u)
    out[u >= 1.0] = 0.0
    m = (u > 0.0) & (u < 1.0)
    bm = _bump_exp(1.0 - u[m])
    bp = _bump_exp(u[m])
    out[m] = bm / (bp + bm)
    return out


def _step_down_d1(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    m = (u > 0.0) & (u < 1.0)
    um = u[m]
    bm = _bump_exp(1.0 - um)
    bp = _bump_exp(um)
    d = bp + bm
    q = um ** -2 + (1.0 - um) ** -2
    out[m] = -bm * bp * q / d ** 2
    return out


def _step_down_d2(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    m = (u > 0.0) & (u < 1.0)
    um = u[m]
    bm = _bump_exp(1.0 - um)
    bp = _bump_exp(um)
    d = bp + bm
    dprime = bp / um ** 2 - bm / (1.0 - um) ** 2
    q = um ** -2 + (1.0 - um) ** -2
    p = um ** -2 - (1.0 - um) ** -2
    qprime = -2.0 * um ** -3 + 2.0 * (1.0 - um) ** -3
    out[m] = (-bm * bp * (p * q + qprime) / d ** 2
              + 2.0 * bm * bp * q * dprime / d ** 3)
    return out


def _eta_ramp(t, c: float = ETA_CUT_START):
    """w(t) = 0.5 (1 - (1+t)^{-2}) * step((t-c)/(1-c)); w(0)=0, w'(0)=1."""
    t = np.asarray(t, dtype=float)
    base = 0.5 * (1.0 - (1.0 + t) ** -2)
    return np.where((t > 0) & (t < 1), base * _step_down((t - c) / (1.0 - c)), 0.0)


def _eta_ramp_d1(t, c: float = ETA_CUT_START):
    t = np.asarray(t, dtype=float)
    u = (t - c) / (1.0 - c)
    base = 0.5 * (1.0 - (1.0 + t) ** -2)
    d = (1.0 + t) ** -3 * _step_down(u) + base * _step_down_d1(u) / (1.0 - c)
    return np.where((t > 0) & (t < 1), d, np.where(t == 0.0, 1.0, 0.0))


def _eta_ramp_d2(t, c: float = ETA_CUT_START):
    t = np.asarray(t, dtype=float)
    u = (t - c) / (1.0 - c)
    base = 0.5 * (1.0 - (1.0 + t) ** -2)
    d = (-3.0 * (1.0 + t) ** -4 * _step_down(u)
         + 2.0 * (1.0 + t) ** -3 * _step_down_d1(u) / (1.0 - c)
         + base * _step_down_d2(u) / (1.0 - c) ** 2)
    return np.where((t > 0) & (t < 1), d, np.where(t == 0.0, -3.0, 0.0))


def eta_callables(alpha: float):
    """(eta, eta', eta'', Lap eta) as callables of r on [1, infinity)."""
    if alpha < 2:
        raise ValueError("eta needs alpha >= 2")
    amp = -1.0 / np.sqrt(8.0 * PI2 * alpha)

    def eta(r):
        return amp * _eta_ramp(np.asarray(r, dtype=float) - 1.0)

    def deta(r):
        return amp * _eta_ramp_d1(np.asarray(r, dtype=float) - 1.0)

    def d2eta(r):
        return amp * _eta_ramp_d2(np.asarray(r, dtype=float) - 1.0)

    def lap_eta(r):
        r = np.asarray(r, dtype=float)
        return d2eta(r) + 3.0 * deta(r) / r

    return eta, deta, d2eta, lap_eta


def eta_norm_coefficients() -> dict[str, float]:
    """Recompute the eta coefficient oracles by adaptive quadrature."""
    pts = [ETA_CUT_START, 0.5, 0.9, 0.99]

    def integ(kind):
        if kind == "l2":
            fn = lambda t: _eta_ramp(t) ** 2 * (1 + t) ** 3
        elif kind == "grad":
            fn = lambda t: _eta_ramp_d1(t) ** 2 * (1 + t) ** 3
        else:
            fn = lambda t: (_eta_ramp_d2(t) + 3 * _eta_ramp_d1(t) / (1 + t)) ** 2 * (1 + t) ** 3
        return 0.25 * quad(fn, 0.0, 1.0, points=pts, limit=400)[0]

    return {"l2": integ("l2"), "grad": integ("grad"), "lap": integ("lap")}


def make_eta(alpha: float, n: int = 481) -> LogRadialFunction:
    """The exterior piece eta_alpha as a log-radius function on |x| > 1.

    Guarantees eta(1) = 0, eta'(1) = -1/sqrt(8 pi^2 alpha) (the C^1-matching
    sign) and support in 1 <= r <= 2; eta, eta', eta'' all scale as
    1/sqrt(alpha).
    """
    eta, _, _, _ = eta_callables(alpha)
    grid = LogGrid(np.linspace(-0.75, 0.0, n), policy="uniform")

    def gen(s):
        return eta(np.exp(-np.asarray(s, dtype=float)))

    return LogRadialFunction(grid, gen(grid.nodes), name=f"eta[{alpha:g}]",
                             closed_form="eta", generator=gen)


# --------------------------------------------------------------------------
# profiles
# --------------------------------------------------------------------------

@dataclass
class Profile:
    """One-variable profile psi with psi == 0 on (-inf, 0].

    Sampled on s >= 0 nodes; ``fn``/``dfn`` hold the analytic value and
    derivative when the profile has a closed form (evaluation then bypasses
    the spline).  Beyond the sampled span the profile extends by its last
    value: bubble tails are killed by the e^{-4 alpha s} weight anyway.
    ``stabilization`` carries the cross-index extraction diagnostic.
    """

    s: np.ndarray
    values: np.ndarray
    tag: str = "custom"
    fn: Callable | None = field(default=None, repr=False, compare=False)
    dfn: Callable | None = field(default=None, repr=False, compare=False)
    stabilization: float | None = None
    _spline: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.s.ndim != 1 or self.s.size < 2 or self.s.shape != self.values.shape:
            raise ValueError("profile needs matching 1D s/value arrays (>= 2 nodes)")
        if self.s[0] < 0:
            raise ValueError("profile samples live on s >= 0")
        if not np.all(np.diff(self.s) > 0):
            raise ValueError("profile nodes must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("profile values must be finite")

    @property
    def span(self) -> float:
        return float(self.s[-1])

    def eval(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape if y.ndim else (1,))
        yy = np.atleast_1d(y)
        pos = yy > 0
        if self.fn is not None:
            out[pos] = self.fn(yy[pos])
        else:
            if self._spline is None:
                from scipy.interpolate import CubicSpline
                object.__setattr__(self, "_spline",
                                   CubicSpline(self.s, self.values, bc_type="not-a-knot"))
            inside = pos & (yy <= self.span)
            out[inside] = self._spline(yy[inside])
            beyond = pos & (yy > self.span)
            out[beyond] = self.values[-1]
        return out if np.asarray(y).ndim else float(out[0])

    @property
    def deriv_l2(self) -> float:
        """||psi'||_{L^2} over the sampled span (analytic when dfn given)."""
        if self.dfn is not None:
            val, _ = quad(lambda t: self.dfn(np.array([t]))[0] ** 2,
                          0.0, self.span, limit=400)
            return float(np.sqrt(val))
        d = _fd_derivative(self.s, self.values, 1)
        return float(np.sqrt(max(integrate_samples(self.s, d * d), 0.0)))

    @property
    def l2_exp_norm(self) -> float:
        """||psi||_{L^2(e^{-4s} ds)} over the sampled span."""
        g = np.exp(-4.0 * self.s) * self.values ** 2
        return float(np.sqrt(max(integrate_samples(self.s, g), 0.0)))

    def holder_max_ratio(self, rng: np.random.Generator, n_pairs: int = 1000) -> float:
        """max over random pairs of |psi(a)-psi(b)| / (deriv_l2 sqrt|a-b|)."""
        dl2 = self.deriv_l2
        if dl2 == 0:
            return 0.0
        a = rng.uniform(0.0, self.span, n_pairs)
        b = rng.uniform(0.0, self.span, n_pairs)
        keep = np.abs(a - b) > 1e-12
        a, b = a[keep], b[keep]
        num = np.abs(self.eval(a) - self.eval(b))
        return float(np.max(num / (dl2 * np.sqrt(np.abs(a - b)))))


def _profile_grid(s_max: float, n: int) -> np.ndarray:
    # corner-friendly sampling: exact nodes at 1 and 2
    knots = [x for x in (0.0, 1.0, 2.0, s_max) if x <= s_max]
    segs = [(knots[i], knots[i + 1], max(int(n * (knots[i + 1] - knots[i]) / s_max), 16))
            for i in range(len(knots) - 1)]
    return compose_segments(segs).nodes


def profile_L(s_max: float = 10.0, n: int = 2049) -> Profile:
    """The canonical profile: L(t) = t on [0,1), 1 on [1, inf), 0 below 0."""
    def fn(y):
        return np.clip(np.asarray(y, dtype=float), 0.0, 1.0)

    def dfn(y):
        y = np.asarray(y, dtype=float)
        return ((y > 0) & (y < 1)).astype(float)

    s = _profile_grid(s_max, n)
    return Profile(s, fn(s), tag="L", fn=fn, dfn=dfn)


def profile_tent(s_max: float = 10.0, n: int = 2049) -> Profile:
    """Compactly supported tent: up on [0,1], down on [1,2], 0 beyond."""
    def fn(y):
        y = np.asarray(y, dtype=float)
        return np.clip(np.minimum(y, 2.0 - y), 0.0, 1.0)

    def dfn(y):
        y = np.asarray(y, dtype=float)
        return np.where((y > 0) & (y < 1), 1.0, np.where((y > 1) & (y < 2), -1.0, 0.0))

    s = _profile_grid(s_max, n)
    return Profile(s, fn(s), tag="tent", fn=fn, dfn=dfn)


def profile_cusp(s_max: float = 10.0, n: int = 2049) -> Profile:
    """psi(t) = min(t^{3/2}, 1): superlinear toe, plateau from t = 1.

    Same Orlicz limit as L (max psi/sqrt(t) = 1 at t = 1) but its bubble
    traces vanish fast at shallow depths, which keeps multi-scale sums close
    to their largest member at desk scale.
    """
    def fn(y):
        y = np.asarray(y, dtype=float)
        return np.minimum(np.clip(y, 0.0, None) ** 1.5, 1.0)

    def dfn(y):
        y = np.asarray(y, dtype=float)
        return np.where((y > 0) & (y < 1), 1.5 * np.sqrt(np.clip(y, 0.0, None)), 0.0)

    s = _profile_grid(s_max, n)
    return Profile(s, fn(s), tag="cusp", fn=fn, dfn=dfn)


def profile_orlicz_limit(psi: Profile) -> float:
    """(1/sqrt(32 pi^2)) max_{s>0} |psi(s)|/sqrt(s), golden-refined.

    This is the limiting Orlicz norm of the scale-alpha bubbles built on psi.
    """
    s = psi.s
    pos = s > 0
    ratios = np.abs(psi.eval(s[pos])) / np.sqrt(s[pos])
    k = int(np.argmax(ratios))
    idx = np.nonzero(pos)[0][k]
    lo = s[max(idx - 1, 0)] if s[max(idx - 1, 0)] > 0 else s[idx] / 2
    hi = s[min(idx + 1, s.size - 1)]
    neg = lambda t: -abs(psi.eval(t)) / np.sqrt(t)
    xm = _golden_min(neg, lo, hi)
    best = max(float(ratios[k]), -neg(xm))
    return ORLICZ_LIMIT_CONST * best


def _golden_min(fun, lo: float, hi: float, iters: int = 60) -> float:
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


# --------------------------------------------------------------------------
# mollifiers and bubbles
# --------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = leggauss(96)


@dataclass
class MollifierSpec:
    """A positive smooth bump with support inside [-1, 1], unit mass.

    ``support`` is the bump's actual carrier; quadrature nodes for the
    normalization and for convolutions are placed on it, so narrow or
    shifted bumps lose no accuracy.
    """

    raw: Callable
    name: str = "bump"
    support: tuple[float, float] = (-1.0, 1.0)
    _z: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = self.support
        if not -1.0 <= lo < hi <= 1.0:
            raise ValueError("mollifier support must sit inside [-1, 1]")

    @property
    def mass_constant(self) -> float:
        if self._z is None:
            lo, hi = self.support
            z, _ = quad(lambda t: float(np.asarray(self.raw(np.array([t])))[0]),
                        lo, hi, limit=400, epsabs=1e-14, epsrel=1e-13)
            object.__setattr__(self, "_z", float(z))
        return self._z

    def values(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.where((t > self.support[0]) & (t < self.support[1]),
                       self.raw(t), 0.0)
        return out / self.mass_constant

    def conv_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Gauss-Legendre nodes/weights mapped onto the support."""
        lo, hi = self.support
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        t = mid + half * _GL_NODES
        w = half * _GL_WEIGHTS * self.values(t)
        return t, w

    def mass_by_quad(self) -> float:
        return quad(lambda t: float(self.values(np.array([t]))[0]),
                    self.support[0], self.support[1], limit=400)[0]


def default_mollifier() -> MollifierSpec:
    def raw(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        m = np.abs(t) < 1
        out[m] = np.exp(-1.0 / (1.0 - t[m] ** 2))
        return out

    return MollifierSpec(raw, name="standard-bump")


def alternative_mollifier() -> MollifierSpec:
    """A shifted asymmetric bump (support in [-0.7, 0.5]) for the
    mollifier-independence checks."""
    def raw(t):
        t = np.asarray(t, dtype=float)
        u = (2.0 * t + 0.2) / 1.2
        out = np.zeros_like(t)
        m = np.abs(u) < 1
        out[m] = np.exp(-1.0 / (1.0 - u[m] ** 2))
        return out

    return MollifierSpec(raw, name="shifted-bump", support=(-0.7, 0.5))


def narrow_mollifier(width: float = 0.3) -> MollifierSpec:
    """Bump supported in [-width, width] (still inside [-1, 1]).

    Mollified bubbles spill onto |x| > 1 over a layer of width/alpha in the
    profile variable; a narrow bump shrinks that layer, which matters when a
    remainder's Orlicz mass is dominated by the spill-over (the e^{-4s}
    weight is largest there).
    """
    if not 0 < width <= 1:
        raise ValueError("width must lie in (0, 1]")

    def raw(t):
        t = np.asarray(t, dtype=float)
        u = t / width
        out = np.zeros_like(t)
        m = np.abs(u) < 1
        out[m] = np.exp(-1.0 / (1.0 - u[m] ** 2))
        return out

    return MollifierSpec(raw, name=f"narrow-bump-{width:g}",
                         support=(-width, width))


@dataclass
class SampledCurve:
    """Plain sampled function of one variable (mollified profiles live here:
    their support reaches below 0, so they are not Profile instances)."""

    s: np.ndarray
    values: np.ndarray

    def eval(self, y):
        return np.interp(np.asarray(y, dtype=float), self.s, self.values,
                         left=0.0, right=float(self.values[-1]))


def mollified_profile_values(psi: Profile, alpha: float, rho: MollifierSpec, y):
    """(psi * rho_alpha)(y) = int psi(y - t/alpha) rho(t) dt by Gauss-Legendre."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    t, w = rho.conv_nodes()
    vals = psi.eval(y[:, None] - (t / alpha)[None, :])
    return vals @ w


def mollify_profile(psi: Profile, alpha: float, rho: MollifierSpec | None = None,
                    s_max: float | None = None, n: int = 4097) -> SampledCurve:
    """Sample psi * rho_alpha on [-1/alpha, s_max]; support starts at -1/alpha."""
    if alpha < 1:
        raise ValueError("mollification scale alpha must be >= 1")
    rho = rho or default_mollifier()
    s_max = s_max if s_max is not None else psi.span
    y = np.linspace(-1.0 / alpha, s_max, n)
    return SampledCurve(y, mollified_profile_values(psi, alpha, rho, y))


@dataclass
class BubbleSpec:
    """Scale + profile + mollifier defining one concentrating bubble."""

    alpha: float
    profile: Profile
    mollifier: MollifierSpec = field(default_factory=default_mollifier)
    mollified: bool = True

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("bubble scale alpha must be >= 1")


def bubble_values(s_points, spec: BubbleSpec) -> np.ndarray:
    """v(s) = sqrt(alpha/8 pi^2) Psi(s/alpha) with Psi = psi * rho_alpha or psi."""
    s = np.atleast_1d(np.asarray(s_points, dtype=float))
    y = s / spec.alpha
    if spec.mollified:
        prof = mollified_profile_values(spec.profile, spec.alpha, spec.mollifier, y)
    else:
        prof = spec.profile.eval(y)
    return np.sqrt(spec.alpha / (8.0 * PI2)) * np.asarray(prof, dtype=float)


def make_bubble(spec: BubbleSpec, grid: LogGrid | None = None) -> LogRadialFunction:
    if grid is None:
        grid = bubble_grid(spec.alpha)
    gen = lambda s: bubble_values(s, spec)
    kind = "g" if spec.mollified else "h"
    return LogRadialFunction(grid, gen(grid.nodes),
                             name=f"{kind}[{spec.profile.tag},{spec.alpha:g}]",
                             closed_form=f"bubble-{kind}", generator=gen)


# --------------------------------------------------------------------------
# the concentration family f_alpha
# --------------------------------------------------------------------------

def falpha_values(s, alpha: float) -> np.ndarray:
    """Closed form of v(s) = f_alpha(e^{-s}) on all three pieces."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.zeros_like(s)
    inner = s >= alpha
    out[inner] = (np.sqrt(alpha / (8.0 * PI2))
                  + (1.0 - np.exp(-2.0 * (s[inner] - alpha))) / np.sqrt(32.0 * PI2 * alpha))
    mid = (s >= 0) & (s < alpha)
    out[mid] = s[mid] / np.sqrt(8.0 * PI2 * alpha)
    outer = s < 0
    out[outer] = -_eta_ramp(np.exp(-s[outer]) - 1.0) / np.sqrt(8.0 * PI2 * alpha)
    return out


def falpha_interface_gaps(alpha: float) -> dict[str, float]:
    """Jumps of v and v' at the two interfaces (relative where sensible)."""
    amp = 1.0 / np.sqrt(8.0 * PI2 * alpha)
    # r = 1 (s = 0): outer value/slope from eta, inner from the annulus ramp
    v_outer = -_eta_ramp(np.array([0.0]))[0] * amp
    # dv/ds = -r eta'(r) at r=1
    dv_outer = _eta_ramp_d1(np.array([0.0]))[0] * amp
    gap_v0 = abs(v_outer - 0.0)
    gap_dv0 = abs(dv_outer - amp) / amp
    # s = alpha: annulus vs inner piece
    v_ann = alpha * amp
    v_inn = np.sqrt(alpha / (8.0 * PI2))
    dv_ann = amp
    dv_inn = 2.0 / np.sqrt(32.0 * PI2 * alpha)
    gap_va = abs(v_ann - v_inn) / v_inn
    gap_dva = abs(dv_ann - dv_inn) / dv_ann
    return {"v_at_r1": gap_v0, "dv_at_r1": gap_dv0,
            "v_at_ealpha": gap_va, "dv_at_ealpha": gap_dva}


def _geometric_offsets(h0: float, h_cap: float, span: float,
                       ratio: float = 1.12) -> np.ndarray:
    """Offsets 0 < d_1 < ... = span with spacing growing h0 -> h_cap.

    Gentle spacing growth keeps the nonuniform 3-point stencils second
    order; the list is rescaled so the last offset lands exactly on span.
    """
    out = []
    x, h = 0.0, h0
    while x < span:
        x += h
        out.append(x)
        h = min(h * ratio, h_cap)
    d = np.asarray(out)
    return d * (span / d[-1])


def falpha_grid(alpha: float, h_kink: float = 5e-4, refine: float = 1.0) -> LogGrid:
    """Graded grid with geometric clusters at the curvature kinks s = 0, alpha.

    Spacing starts at h_kink beside each kink and expands smoothly; abrupt
    spacing jumps would cost the finite-difference Laplacian its second
    order right where |v''| jumps.  ``refine`` scales all spacings down for
    oracle-grade comparisons.
    """
    a = float(alpha)
    left = np.linspace(-0.75, 0.0, int(1400 * refine))
    up0 = _geometric_offsets(h_kink / refine, a / (250.0 * refine), a / 2.0)
    dn_a = a - _geometric_offsets(h_kink / refine, a / (250.0 * refine), a / 2.0)[::-1]
    tail = a + _geometric_offsets(h_kink / refine, 0.03 / refine, 14.0)
    nodes = np.unique(np.concatenate([left, up0, dn_a[:-1], [a], tail]))
    return LogGrid(nodes, policy="graded")


def make_falpha(alpha: float, grid: LogGrid | None = None) -> LogRadialFunction:
    """Assemble f_alpha on a graded grid with the kinks on exact nodes.

    The interface matching is checked (jumps of v and v' below 1e-10
    relative) before the function is returned.
    """
    if alpha < 2:
        raise ValueError("f_alpha needs alpha >= 2")
    gaps = falpha_interface_gaps(alpha)
    if max(gaps.values()) > 1e-10:
        raise RuntimeError(f"f_alpha interface mismatch: {gaps}")
    if grid is None:
        grid = falpha_grid(alpha)
    gen = lambda s: falpha_values(s, alpha)
    return LogRadialFunction(grid, gen(grid.nodes), name=f"falpha[{alpha:g}]",
                             closed_form="falpha", generator=gen)


# --------------------------------------------------------------------------
# closed-form oracles
# --------------------------------------------------------------------------

@dataclass
class AppendixRecord:
    """Every closed-form term of the ||f_alpha|| decompositions.

    inner = ball |x| <= e^{-alpha}, annulus = e^{-alpha} < |x| <= 1,
    outer = |x| > 1 (the eta piece, via the frozen coefficient oracles).
    ``l2_inner_bound`` is the displayed upper bound; ``l2_inner`` the exact
    evaluation of the same integral.
    """

    alpha: float
    l2_inner: float
    l2_inner_bound: float
    l2_annulus: float
    l2_outer: float
    grad_inner: float
    grad_annulus: float
    grad_outer: float
    lap_inner: float
    lap_annulus: float
    lap_outer: float

    @property
    def l2_total(self) -> float:
        return self.l2_inner + self.l2_annulus + self.l2_outer

    @property
    def grad_total(self) -> float:
        return self.grad_inner + self.grad_annulus + self.grad_outer

    @property
    def lap_total(self) -> float:
        return self.lap_inner + self.lap_annulus + self.lap_outer


def appendix_closed_forms(alpha: float) -> AppendixRecord:
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    a = float(alpha)
    e2a = np.exp(-2.0 * a)
    e4a = np.exp(-4.0 * a)
    A = np.sqrt(a / (8.0 * PI2))
    B = 1.0 / np.sqrt(32.0 * PI2 * a)
    C = A + B
    l2_inner = 2.0 * PI2 * e4a * (C * C / 4.0 - C * B / 3.0 + B * B / 8.0)
    l2_inner_bound = (a / (8 * PI2) + 1.0 / (32 * PI2 * a) + 1.0 / (8 * PI2)) * PI2 * e4a / 2.0
    l2_annulus = (1.0 / (4.0 * a)) * (-a * a * e4a / 4.0 - a * e4a / 8.0
                                      + (1.0 - e4a) / 32.0)
    return AppendixRecord(
        alpha=a,
        l2_inner=float(l2_inner),
        l2_inner_bound=float(l2_inner_bound),
        l2_annulus=float(l2_annulus),
        l2_outer=ETA_L2_COEF / a,
        grad_inner=float(e2a / (24.0 * a)),
        grad_annulus=float((1.0 - e2a) / (8.0 * a)),
        grad_outer=ETA_GRAD_COEF / a,
        lap_inner=1.0 / a,
        lap_annulus=1.0,
        lap_outer=ETA_LAP_COEF / a,
    )


def lemma_add1_integrals(alpha: float) -> tuple[float, float]:
    """int_{e^-a}^1 r^4 e^{(4/a) log^2 r} dr and the r^3 variant.

    In t = -log r the integrands are e^{-5t + 4t^2/a} and e^{-4t + 4t^2/a}
    on [0, alpha]; the r^3 exponent returns to 0 at t = alpha, so that
    integral collects mass at both endpoints (limit 1/2, not 1/4).
    """
    if alpha < 2:
        raise ValueError("alpha must be >= 2")
    a = float(alpha)
    pts = [a / 4, a / 2, 3 * a / 4]
    i4 = quad(lambda t: np.exp(-5.0 * t + 4.0 * t * t / a), 0, a,
              points=pts, limit=400)[0]
    i3 = quad(lambda t: np.exp(-4.0 * t + 4.0 * t * t / a), 0, a,
              points=pts, limit=400)[0]
    return float(i4), float(i3)

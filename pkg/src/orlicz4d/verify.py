"""Bundled verification suites: every quantitative claim that can be checked
numerically at desk scale, as machine-readable pass/fail rows.

Each row carries the measured value, its target, the tolerance at which it
is judged, and the provenance of the target (closed-form oracle, quadrature
oracle, asymptotic limit, or property).  A suite passes iff all rows do.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import bubbles as bb
from . import concentration as conc
from .corpus import corpus_functions
from .decompose import BubbleSpec, decompose, detect_scale, synthesize_family
from .gridfn import LogRadialFunction
from .norms import check_radial_inequalities, norms_squared
from .orlicz import OrliczConfig, orlicz_norm

PI2 = np.pi ** 2
SQRT_6PI2 = np.sqrt(6.0 * PI2)      # 7.6952989...
TARGET_LIMIT = bb.ORLICZ_LIMIT_CONST  # 1/sqrt(32 pi^2) = 0.0562697...


@dataclass
class CheckRow:
    name: str
    value: float
    target: float
    tolerance: float
    provenance: str
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] {self.name}: value={self.value:.8g} "
                f"target={self.target:.8g} tol={self.tolerance:.3g} ({self.provenance})")


@dataclass
class SuiteReport:
    suite: str
    seed: int
    rows: list[CheckRow] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def add(self, name: str, value: float, target: float, tolerance: float,
            provenance: str, passed: bool | None = None) -> None:
        if passed is None:
            passed = abs(value - target) <= tolerance
        self.rows.append(CheckRow(name, float(value), float(target),
                                  float(tolerance), provenance, bool(passed)))

    def to_dict(self) -> dict:
        # elapsed time stays out of artifacts: identical runs, identical bytes
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [vars(r) for r in self.rows],
        }


# --------------------------------------------------------------------------
# suite: randomized radial inequalities
# --------------------------------------------------------------------------

def suite_inequalities(seed: int = 7, count: int = 200) -> SuiteReport:
    """count seeded smooth radial functions against both radial inequalities."""
    t0 = time.time()
    rep = SuiteReport("inequalities", seed)
    for k, f in enumerate(corpus_functions(seed, count)):
        r = check_radial_inequalities(f, r_floor=0.1, slack=1e-6)
        rep.add(f"half-laplacian bound #{k}", r.invr_grad, r.half_lap,
                1e-6 * max(r.half_lap, 1e-300), "quadrature oracle",
                passed=r.half_lap_pass)
        rep.add(f"pointwise decay bound #{k}", r.pointwise_max, 1.0, 1e-6,
                "closed-form constant", passed=r.pointwise_pass)
    rep.elapsed_s = time.time() - t0
    return rep


# --------------------------------------------------------------------------
# suite: the concentration family f_alpha
# --------------------------------------------------------------------------

def suite_falpha(seed: int = 7) -> SuiteReport:
    t0 = time.time()
    rep = SuiteReport("falpha", seed)
    cfg = OrliczConfig(lambda_tol=1e-4)

    errs = []
    for a in (25, 50, 100):
        lam = orlicz_norm(bb.make_falpha(a), cfg)
        errs.append(abs(lam - TARGET_LIMIT))
        bracket = 1.0 / np.sqrt(32 * PI2 + (8 * PI2 / a)
                                * np.log(2 * cfg.kappa / PI2 + np.exp(-4 * a)))
        rep.add(f"orlicz norm alpha={a}", lam, TARGET_LIMIT,
                0.002 if a == 100 else 0.01, "asymptotic limit",
                passed=(abs(lam - TARGET_LIMIT) <= 0.002 if a == 100 else True))
        rep.add(f"orlicz bracket alpha={a}", lam ** 2, bracket ** 2, 0.0,
                "closed-form bracket", passed=lam ** 2 >= bracket ** 2 * (1 - 1e-12))
    rep.add("orlicz error decreasing in alpha", errs[-1], errs[0], 0.0,
            "asymptotic limit", passed=errs[0] > errs[1] > errs[2])

    for a in (5, 10, 25, 50):
        sq = norms_squared(bb.make_falpha(a))
        rec = bb.appendix_closed_forms(a)
        for kind, got, want in (("l2", sq["l2"], rec.l2_total),
                                ("grad", sq["grad"], rec.grad_total),
                                ("lap", sq["lap"], rec.lap_total)):
            rep.add(f"{kind} norm^2 vs closed forms alpha={a}", got, want,
                    1e-4 * want, "closed-form oracle")
        lo = 1 + 1 / a
        hi = 1 + 1 / a + bb.ETA_LAP_COEF / a * 1.01
        rep.add(f"lap norm^2 band alpha={a}", sq["lap"], 0.5 * (lo + hi),
                0.5 * (hi - lo), "closed-form band",
                passed=lo <= sq["lap"] <= hi)
        gaps = bb.falpha_interface_gaps(a)
        rep.add(f"interface continuity alpha={a}", max(gaps.values()), 0.0,
                1e-10, "construction")
    rep.elapsed_s = time.time() - t0
    return rep


# --------------------------------------------------------------------------
# suite: concentration pairings and the log-weight integrals
# --------------------------------------------------------------------------

def suite_concentration(seed: int = 7) -> SuiteReport:
    t0 = time.time()
    rep = SuiteReport("concentration", seed)
    lap_errs, exp_errs, inner_errs, ann_errs = [], [], [], []
    for a in (20, 40, 80):
        r = conc.pair_concentration(a, conc.gaussian_test)
        phi0 = r.phi_at_zero
        lap_errs.append(abs(r.pairing_lap - phi0) / phi0)
        exp_errs.append(abs(r.pairing_exp - conc.EXP_TOTAL_LIMIT * phi0)
                        / (conc.EXP_TOTAL_LIMIT * phi0))
        inner_errs.append(abs(r.split["exp"]["inner"] - conc.EXP_INNER_LIMIT * phi0)
                          / (conc.EXP_INNER_LIMIT * phi0))
        ann_errs.append(abs(r.split["exp"]["annulus"] - conc.EXP_ANNULUS_LIMIT * phi0)
                        / (conc.EXP_ANNULUS_LIMIT * phi0))
        split_gap = max(abs(r.pairing_lap - sum(r.split["lap"].values())),
                        abs(r.pairing_exp - sum(r.split["exp"].values())))
        rep.add(f"split sums to total alpha={a}", split_gap, 0.0,
                1e-10 * max(abs(r.pairing_exp), 1.0), "identity")
    r80 = conc.pair_concentration(80, conc.gaussian_test)
    rep.add("lap pairing alpha=80", r80.pairing_lap, 1.0, 0.03, "asymptotic limit")
    rep.add("exp pairing alpha=80", r80.pairing_exp, conc.EXP_TOTAL_LIMIT,
            0.10 * conc.EXP_TOTAL_LIMIT, "asymptotic limit")
    rep.add("exp inner split alpha=80", r80.split["exp"]["inner"],
            conc.EXP_INNER_LIMIT, 0.10 * conc.EXP_INNER_LIMIT, "asymptotic limit")
    rep.add("exp annulus split alpha=80", r80.split["exp"]["annulus"],
            conc.EXP_ANNULUS_LIMIT, 0.10 * conc.EXP_ANNULUS_LIMIT, "asymptotic limit")
    for name, es in (("lap", lap_errs), ("exp", exp_errs),
                     ("inner", inner_errs), ("annulus", ann_errs)):
        rep.add(f"{name} error decreasing over alpha ladder", es[-1], es[0], 0.0,
                "asymptotic limit", passed=es[0] > es[1] > es[2])

    prev4 = prev3 = None
    for a in (25, 50, 100, 200):
        i4, i3 = bb.lemma_add1_integrals(a)
        if a == 100:
            rep.add("log-weight r^4 integral alpha=100", i4, 0.2, 0.02,
                    "asymptotic limit")
            rep.add("log-weight r^3 integral alpha=100", i3, 0.5, 0.02,
                    "asymptotic limit")
        if prev4 is not None:
            rep.add(f"r^4 error decreasing at alpha={a}", abs(i4 - 0.2), prev4,
                    0.0, "asymptotic limit", passed=abs(i4 - 0.2) < prev4)
            rep.add(f"r^3 error decreasing at alpha={a}", abs(i3 - 0.5), prev3,
                    0.0, "asymptotic limit", passed=abs(i3 - 0.5) < prev3)
        prev4, prev3 = abs(i4 - 0.2), abs(i3 - 0.5)
    rep.elapsed_s = time.time() - t0
    return rep


# --------------------------------------------------------------------------
# suite: bubbles
# --------------------------------------------------------------------------

def suite_bubbles(seed: int = 7) -> SuiteReport:
    t0 = time.time()
    rep = SuiteReport("bubbles", seed)
    cfg = OrliczConfig(lambda_tol=1e-4)
    rho = bb.default_mollifier()
    L = bb.profile_L()

    errs = []
    lam_g = lam_h = None
    for a in (50, 100, 200):
        g = bb.make_bubble(BubbleSpec(alpha=a, profile=L, mollifier=rho))
        h = bb.make_bubble(BubbleSpec(alpha=a, profile=L, mollifier=rho,
                                      mollified=False))
        lam_g, lam_h = orlicz_norm(g, cfg), orlicz_norm(h, cfg)
        errs.append(abs(lam_g - TARGET_LIMIT) / TARGET_LIMIT)
        if a == 200:
            rep.add("bubble orlicz limit alpha=200", lam_g, TARGET_LIMIT,
                    0.02 * TARGET_LIMIT, "asymptotic limit")
            rep.add("pure vs mollified orlicz gap alpha=200",
                    abs(lam_g - lam_h), 0.0, 0.01 * lam_g, "asymptotic limit")
    rep.add("bubble orlicz error decreasing", errs[-1], errs[0], 0.0,
            "asymptotic limit", passed=errs[0] > errs[1] > errs[2])
    g_alt = bb.make_bubble(BubbleSpec(alpha=200.0, profile=L,
                                      mollifier=bb.alternative_mollifier()))
    rep.add("mollifier independence alpha=200",
            abs(orlicz_norm(g_alt, cfg) - lam_g), 0.0, 0.01 * lam_g,
            "asymptotic limit")

    # profile and mollifier structural invariants
    rng = np.random.default_rng(seed)
    for prof in (L, bb.profile_tent(), bb.profile_cusp()):
        rep.add(f"profile[{prof.tag}] vanishes at 0", abs(float(prof.eval(0.0))),
                0.0, 1e-12, "construction")
        ratio = prof.holder_max_ratio(rng, 1000)
        rep.add(f"profile[{prof.tag}] Hoelder certificate", ratio, 1.0, 1e-6,
                "property", passed=ratio <= 1 + 1e-6)
    for spec in (rho, bb.alternative_mollifier(), bb.narrow_mollifier()):
        rep.add(f"mollifier[{spec.name}] unit mass", spec.mass_by_quad(), 1.0,
                1e-12, "quadrature oracle")

    # sum of two orthogonally-scaled bubbles stays near the larger one
    tent, cusp = bb.profile_tent(), bb.profile_cusp()
    n = 32
    fam = synthesize_family([n // 4, n // 2, n],
                            lambda m: [BubbleSpec(alpha=float(m), profile=tent,
                                                  mollifier=rho),
                                       BubbleSpec(alpha=float(m * m), profile=cusp,
                                                  mollifier=rho)])
    lam_sum = orlicz_norm(fam.members[-1], cfg)
    l1 = orlicz_norm(bb.make_bubble(BubbleSpec(alpha=float(n), profile=tent,
                                               mollifier=rho)), cfg)
    l2 = orlicz_norm(bb.make_bubble(BubbleSpec(alpha=float(n * n), profile=cusp,
                                               mollifier=rho)), cfg)
    mx = max(l1, l2)
    rep.add("two-bubble sum orlicz vs max part (n=32)", lam_sum, mx, 0.05 * mx,
            "asymptotic limit")
    rep.elapsed_s = time.time() - t0
    return rep


# --------------------------------------------------------------------------
# suite: decomposition
# --------------------------------------------------------------------------

def two_bubble_family(indices=(8, 16, 32, 64)):
    """The synthesized two-orthogonal-bubble family: plateau profile at scale
    n, cusp profile at scale n^2 (pure bubbles; see make_bubble for why)."""
    rho = bb.default_mollifier()
    L = bb.profile_L()
    cusp = bb.profile_cusp()
    return synthesize_family(list(indices), lambda n: [
        BubbleSpec(alpha=float(n), profile=L, mollifier=rho, mollified=False),
        BubbleSpec(alpha=float(n * n), profile=cusp, mollifier=rho, mollified=False),
    ])


def _local_cell(member: LogRadialFunction, s: float) -> float:
    nodes = member.grid.nodes
    k = int(np.clip(np.searchsorted(nodes, s), 1, nodes.size - 1))
    return float(nodes[k] - nodes[k - 1])


def suite_decomposition(seed: int = 7) -> SuiteReport:
    t0 = time.time()
    rep = SuiteReport("decomposition", seed)
    cfg = OrliczConfig(lambda_tol=2e-4)

    fam = two_bubble_family()
    res = decompose(fam, cfg)
    A0 = res.A_history[0] if res.A_history else 0.0
    rep.add("component count", len(res.components), 2, 0.0, "construction",
            passed=len(res.components) == 2)
    if len(res.components) == 2:
        lasts = sorted(sc.last() for sc, _ in res.components)
        for got, want in zip(lasts, (64.0, 4096.0)):
            cell = _local_cell(fam.members[-1], want)
            rep.add(f"last-index scale near {want:g}", got, want, cell,
                    "closed-form argmax")
        rep.add("scale orthogonality metric", res.orthogonality_matrix[0, 1],
                np.log(8), 0.0, "construction",
                passed=res.orthogonality_matrix[0, 1] >= np.log(8))
        for j, (sc, psi) in enumerate(res.components):
            bound = 0.9 * SQRT_6PI2 * res.A_history[j]
            rep.add(f"extracted derivative mass, component {j}", psi.deriv_l2,
                    bound, 0.0, "extraction bound",
                    passed=psi.deriv_l2 >= bound)
        for j, resid in enumerate(res.ledger):
            rep.add(f"energy ledger residual, iteration {j}", resid, 0.0, 0.05,
                    "energy identity")
        rep.add("final orlicz mass", res.A_history[-1], 0.0, 0.1 * A0,
                "stopping rule")
        tol = 1.0 + 2.0 * cfg.lambda_tol
        noninc = all(b <= a * tol for a, b in zip(res.A_history, res.A_history[1:]))
        rep.add("A history nonincreasing", float(noninc), 1.0, 0.0,
                "algorithm invariant", passed=noninc)

    # scale-detection invariance under joint rescaling
    rng = np.random.default_rng(seed)
    rho = bb.default_mollifier()
    L = bb.profile_L()
    mismatches = 0
    for _ in range(20):
        a = float(rng.uniform(10.0, 60.0))
        g = bb.make_bubble(BubbleSpec(alpha=a, profile=L, mollifier=rho))
        A_ref = float(0.05 + 0.02 * rng.random())
        base = detect_scale(g, A_ref)
        for c in (0.1, 3.0, 10.0):
            if detect_scale(g.scaled(c), c * A_ref) != base:
                mismatches += 1
    rep.add("detection invariance under scaling (20 members x 3 factors)",
            mismatches, 0, 0.0, "exact invariance", passed=mismatches == 0)
    rep.elapsed_s = time.time() - t0
    return rep


SUITES = {
    "inequalities": suite_inequalities,
    "falpha": suite_falpha,
    "concentration": suite_concentration,
    "bubbles": suite_bubbles,
    "decomposition": suite_decomposition,
}


def run_suite(name: str, seed: int = 7) -> list[SuiteReport]:
    if name == "all":
        return [fn(seed) for fn in SUITES.values()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; pick from "
                         f"{sorted(SUITES)} or 'all'")
    return [SUITES[name](seed)]

"""The log-radius toolbox on ordinary radial functions.

Radial functions on R^4 are stored as v(s) = u(e^{-s}): norms become
weighted 1D integrals, differentiation is finite differences on the s-grid,
and two structural inequalities can be checked on anything smooth:

    ||(1/r) d_r u||  <=  ||lap u|| / 2
    u(r)^2           <=  ||u|| ||grad u|| / (pi^2 r^3)

Run:  python demos/radial_toolbox.py
"""

import numpy as np

from orlicz4d import (NormKind, check_radial_inequalities, corpus_functions,
                      from_radius_samples, norm, sample_radial, uniform_grid)

print("=" * 72)
print("1. A Gaussian, sampled in radius, against its closed-form norms")
print("=" * 72)
grid = uniform_grid(-1.6, 12.0, 2200)
f = sample_radial(lambda r: np.exp(-r * r / 2.0), grid)
targets = {
    NormKind.L2: np.pi,
    NormKind.GRAD: np.pi * np.sqrt(2.0),
    NormKind.LAP: np.pi * np.sqrt(6.0),
    NormKind.SCHROEDINGER: np.pi * np.sqrt(11.0),
    NormKind.H2_SUM: 3.0 * np.pi,
}
for kind, want in targets.items():
    got = norm(f, kind)
    print(f"  {kind.name:>12}: {got:.8f}   closed form {want:.8f}   "
          f"rel err {abs(got-want)/want:.1e}")

print()
print("=" * 72)
print("2. Importing scattered radius samples")
print("=" * 72)
r = np.geomspace(0.02, 4.0, 400)
g = from_radius_samples(r, np.exp(-r))
print(f"  {g.grid.size} nodes spanning s in [{g.grid.s_min:.2f}, {g.grid.s_max:.2f}]"
      f"  (so r in [{np.exp(-g.grid.s_max):.3f}, {np.exp(-g.grid.s_min):.2f}])")
probe = 1.234
print(f"  u(r={probe}) interpolated: {float(g.eval(-np.log(probe))):.6f}   "
      f"exact: {np.exp(-probe):.6f}")

print()
print("=" * 72)
print("3. Radial inequalities on a randomized corpus")
print("=" * 72)
worst_half, worst_point = 0.0, 0.0
for f in corpus_functions(seed=7, count=50):
    rep = check_radial_inequalities(f, r_floor=0.1, slack=1e-6)
    assert rep.all_pass
    worst_half = max(worst_half, rep.invr_grad / rep.half_lap)
    worst_point = max(worst_point, rep.pointwise_max)
print(f"  50/50 pass;  sharpest half-laplacian ratio seen: {worst_half:.3f}"
      f"  (bound 1)")
print(f"  sharpest pointwise-decay ratio seen: {worst_point:.3f}  (bound 1)")

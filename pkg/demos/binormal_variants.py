"""
Which form of the curvature equation does a binormal flow obey?

Two candidate right-hand sides for dk1/dt are implemented ("statement" and
"proof").  On a helix, where every curvature is constant along the curve,
they coincide.  On an open space curve whose curvature varies they do not,
and only one of them is a consistent discretisation target: its residual
shrinks under refinement while the other stalls at an O(1) value.

Explicit RK4 on this third-order flow needs dt of order h^2, so each run is
only two steps long.  That is enough for central time differences at the
middle snapshot.

Run:  python3 demos/binormal_variants.py
"""
import numpy as np

import frenetflow as ff

TRIM = 0.25  # drop a quarter of the samples at each end of the open curve


def run(m):
    curve = ff.reparameterize_arclength(ff.sine(m, 0.5, 1.0, 2 * np.pi, 0.25, dim=3), m)
    h = curve.params[1] - curve.params[0]
    dt = 0.1 * h * h
    flow = ff.FlowField.of(3, {3: ff.Curvature(1)}, tangential="constrained")
    return ff.evolve(curve, flow, 2 * dt, dt)


print("   m    statement        proof")
previous = None
for m in (64, 128, 256):
    rep = ff.curvature_pde_residual(run(m), "both", trim=TRIM, equations=["k1"])
    row = [rep.get("k1", v).max for v in ("statement", "proof")]
    ratio = "" if previous is None else "   ratios " + "  ".join(f"{a / b:6.2f}" for a, b in zip(previous, row))
    print(f"{m:4d}  {row[0]:11.3e}  {row[1]:11.3e}{ratio}")
    previous = row

helix = ff.evolve(ff.helix(256, 2.0, 1.0), ff.FlowField.of(3, {3: ff.Curvature(1)}, "constrained"), 0.05, 1e-3)
rep = ff.curvature_pde_residual(helix, "both", equations=["k1"])
print("\nhelix: statement {:.2e}  proof {:.2e}".format(rep.get("k1", "statement").max, rep.get("k1", "proof").max))

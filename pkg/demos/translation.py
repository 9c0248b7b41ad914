"""
An inextensible flow that only translates.

Push the unit circle along its normal with speed f2 = cos s and let the
tangential speed f1 be whatever keeps arclength fixed.  Integrating
df1/ds = f2 k1 from f1(0) = 0 gives f1 = sin s, and the velocity
f1 V1 + f2 V2 is the constant vector (-1, 0): the circle slides left
without deforming.

Run:  python3 demos/translation.py [output-directory]
"""
import sys
from pathlib import Path

import numpy as np

import frenetflow as ff

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output") / "translation"
out.mkdir(parents=True, exist_ok=True)

flow = ff.FlowField.of(2, {2: ff.Cosine()}, tangential="constrained")
traj = ff.evolve(ff.circle(256), flow, T=1.0, dt=1e-3)

first, last = traj[0], traj[-1]
print("max |f1 - sin s|      ", np.abs(first.f[0] - np.sin(first.s)).max())
print("max |x(1) - x(0) + e1|", np.abs(last.curve.samples - first.curve.samples - [-1, 0]).max())
print()

# Nothing rotates, so the frame rate matrix vanishes and every identity holds
# to roundoff.
report = ff.VerificationReport("circle translation")
report.extend(ff.lemma_speed_residual(traj))
report.extend(ff.psi_antisymmetry(traj))
report.extend(ff.frame_evolution_residual(traj))
report.extend(ff.drift_report(traj))
print(report.summary())

ff.export_svg_projection(traj, stride=250, path=out / "translation.svg")
ff.export_csv(report, out / "report.csv")
print(f"\nwrote {out}/translation.svg and report.csv")

"""
A curve in R^4 with three constant curvatures.

(cos s, sin s, cos 2s, sin 2s) / sqrt 2 lies on the flat torus.  Its Frenet
frame has four vectors and its curvatures k1, k2, k3 are constant; the last
one changes sign under a reflection of R^4, which is how orientation enters.

Run:  python3 demos/flat_torus.py
"""
import numpy as np

import frenetflow as ff

fd = ff.frenet_frame(ff.flat_torus(512, a=1.0, b=2.0))
for i in (1, 2, 3):
    k = fd.k(i)
    print(f"k{i}: mean {k.mean():.10f}  spread {np.ptp(k):.2e}")
print("frenet residual      ", ff.frenet_residual(fd))
print("orthonormality defect", ff.orthonormality_defect(fd))

Q = np.diag([1.0, 1.0, 1.0, -1.0])
mirrored = ff.frenet_frame(ff.flat_torus(512).transformed(Q))
print("\nreflected k3 / k3    ", (mirrored.k(3) / fd.k(3)).mean())

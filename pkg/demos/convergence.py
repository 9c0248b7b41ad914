"""
Observed orders of the discretisation.

Open curves use order-4 finite differences, so the Frenet-system residual
drops like h^4.  Time derivatives in the checks are central differences, so
the speed-lemma residual on curve-shortening flow (f2 = k1 on a coarse
circle, where spatial error is spectral) drops like dt^2.

Run:  python3 demos/convergence.py
"""
import frenetflow as ff

ms = [64, 128, 256, 512]
res = [ff.frenet_residual(ff.frenet_frame(ff.sine(m, 0.5, 1.0, amplitude2=0.25, dim=3))) for m in ms]
for m, r in zip(ms, res):
    print(f"m = {m:4d}  frenet residual {r:.3e}")
print("order", ff.estimate_order([1 / m for m in ms], res))

dts = [4e-3, 2e-3, 1e-3]
flow = ff.FlowField.of(2, {2: ff.Curvature(1)})
lemma = [ff.lemma_speed_residual(ff.evolve(ff.circle(16), flow, 0.2, dt)).get("dv/dt").max for dt in dts]
print()
for dt, r in zip(dts, lemma):
    print(f"dt = {dt:.0e}  lemma residual {r:.3e}")
print("order", ff.estimate_order(dts, lemma))

"""
Independent right-hand side of the binormal-flow curvature equation.

For a space curve moving by ``a_t = k1 V3`` (the binormal flow), curvature
kappa and torsion tau obey ``kappa_t = -2 kappa_s tau - kappa tau_s``.  This
module evaluates that right-hand side from sampled positions alone: a
degree-7 interpolating B-spline through the samples, and the cross-product
formulas for kappa and tau.  Derivatives along the curve use the spline
parameter and the chain rule, so the samples need not be equally spaced in
arclength.  frenetflow is not imported.

Run as a script to print the oracle on an analytic test curve next to a
closed-form evaluation.
"""
import numpy as np
from scipy.interpolate import make_interp_spline

DEGREE = 7


def kappa_tau(params, points, at=None):
    """Curvature, torsion and their arclength derivatives at ``at`` (default: the samples)."""
    spl = make_interp_spline(params, points, k=DEGREE)
    at = params if at is None else at
    d1, d2, d3, d4 = (spl.derivative(j)(at) for j in (1, 2, 3, 4))
    c12 = np.cross(d1, d2)
    c13 = np.cross(d1, d3)
    speed = np.linalg.norm(d1, axis=1)
    n12 = np.linalg.norm(c12, axis=1)
    triple = np.einsum("pc,pc->p", c12, d3)
    kappa = n12 / speed**3
    tau = triple / n12**2
    # u-derivatives of the ingredients
    speed_u = np.einsum("pc,pc->p", d1, d2) / speed
    n12_u = np.einsum("pc,pc->p", c12, c13) / n12
    triple_u = np.einsum("pc,pc->p", c12, d4) + np.einsum("pc,pc->p", c13, d3)
    kappa_u = n12_u / speed**3 - 3 * n12 * speed_u / speed**4
    tau_u = triple_u / n12**2 - 2 * triple * n12_u / n12**3
    return kappa, tau, kappa_u / speed, tau_u / speed


def binormal_rhs(params, points, at=None):
    """``-2 kappa_s tau - kappa tau_s`` from sampled positions."""
    kappa, tau, kappa_s, tau_s = kappa_tau(params, points, at)
    return -2 * kappa_s * tau - kappa * tau_s


def _closed_form(u, amplitude=0.5, amplitude2=0.25):
    """Same quantity for (u, A sin u, B cos u) by sympy, as a cross-check."""
    import sympy as sp

    s = sp.Symbol("u", real=True)
    r = sp.Matrix([s, amplitude * sp.sin(s), amplitude2 * sp.cos(s)])
    d1, d2, d3 = r.diff(s), r.diff(s, 2), r.diff(s, 3)
    c = d1.cross(d2)
    speed = sp.sqrt(d1.dot(d1))
    kappa = sp.sqrt(c.dot(c)) / speed**3
    tau = c.dot(d3) / c.dot(c)
    rhs = -2 * kappa.diff(s) / speed * tau - kappa * tau.diff(s) / speed
    return sp.lambdify(s, rhs, "numpy")(u)


if __name__ == "__main__":
    for m in (64, 128, 256):
        u = np.linspace(0, 2 * np.pi, m)
        pts = np.column_stack([u, 0.5 * np.sin(u), 0.25 * np.cos(u)])
        inner = slice(m // 4, m - m // 4)
        err = np.abs(binormal_rhs(u, pts) - _closed_form(u))[inner].max()
        print(f"m={m:4d}  max |oracle - closed form| on the middle half = {err:.3e}")

"""
Symbolic Frenet apparatus with sympy.

The frame comes from classical Gram-Schmidt on the exact derivatives, the
curvatures from ``k_i = <V_i', V_{i+1}> / |a'|`` by exact differentiation of
that frame.  Nothing here touches frenetflow.
"""
import functools

import numpy as np
import sympy as sp

u = sp.Symbol("u", real=True)


def helix(a=2, b=1):
    return sp.Matrix([a * sp.cos(u), a * sp.sin(u), b * u])


def flat_torus(a=1, b=2):
    return sp.Matrix([sp.cos(a * u), sp.sin(a * u), sp.cos(b * u), sp.sin(b * u)]) / sp.sqrt(2)


def circle(r=1):
    return sp.Matrix([r * sp.cos(u), r * sp.sin(u)])


def _frame(curve):
    n = curve.shape[0]
    derivs = [curve.diff(u, k) for k in range(1, n + 1)]
    frame = []
    for d in derivs:
        w = d - sum((d.dot(e) * e for e in frame), sp.zeros(n, 1))
        w = sp.simplify(w)
        frame.append(sp.simplify(w / sp.sqrt(sp.simplify(w.dot(w)))))
    return frame


@functools.lru_cache(maxsize=None)
def curvatures(name, *params):
    """Exact curvature expressions k_1..k_{n-1} of a named curve."""
    curve = {"helix": helix, "flat_torus": flat_torus, "circle": circle}[name](*params)
    frame = _frame(curve)
    v = sp.sqrt(sp.simplify(curve.diff(u).dot(curve.diff(u))))
    return tuple(sp.simplify(frame[i].diff(u).dot(frame[i + 1]) / v) for i in range(len(frame) - 1))


def curvature_values(name, *params, at=None):
    """Curvatures evaluated at parameter values ``at``; shape (n-1, len(at))."""
    at = np.zeros(1) if at is None else np.asarray(at, float)
    return np.array([np.broadcast_to(sp.lambdify(u, k, "numpy")(at), at.shape) for k in curvatures(name, *params)], float)


if __name__ == "__main__":
    for case in [("circle", 2), ("helix", 2, 1), ("flat_torus", 1, 2)]:
        print(case, curvatures(*case))

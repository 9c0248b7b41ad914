"""Scenario builders shared by the test modules."""
import numpy as np

from frenetflow import geometry as g
from frenetflow.flow import Constant, Cosine, Curvature, FlowField, Sine, evolve


def circle_translation(m=256, T=1.0, dt=1e-3, scheme="rk4"):
    """Unit circle, f2 = cos s, constrained f1: rigid translation by (-t, 0)."""
    return evolve(g.circle(m), FlowField.of(2, {2: Cosine()}, "constrained"), T, dt, scheme)


def shrinking_circle(m=256, T=0.2, dt=1e-3):
    """Unit circle, f2 = 1, f1 = 0: radius 1 - t, not inextensible."""
    return evolve(g.circle(m), FlowField.of(2, {2: Constant(1.0)}), T, dt)


def curve_shortening(m=16, T=0.2, dt=1e-3):
    """Unit circle, f2 = k1, f1 = 0: radius sqrt(1 - 2t)."""
    return evolve(g.circle(m), FlowField.of(2, {2: Curvature(1)}), T, dt)


def helix_binormal(m=256, T=0.5, dt=1e-3, a=2.0, b=1.0):
    """Closed two-turn helix, f3 = k1, constrained f1: rigid screw motion."""
    return evolve(g.helix(m, a, b), FlowField.of(3, {3: Curvature(1)}, "constrained"), T, dt)


def deforming_open(m, dt, T=1.0):
    """Open sine-perturbed segment, f2 = sin s, constrained f1 (inextensible, nonrigid)."""
    return evolve(g.sine(m, 0.3, 1.0), FlowField.of(2, {2: Sine()}, "constrained"), T, dt)


DEFORMING_LEVELS = [(32, 8e-3), (64, 4e-3), (128, 2e-3), (256, 1e-3)]
# frames rotate at unit rate here, so the O(dt^2) psi defect of central
# time differences needs a finer step than the drift ladder uses
DEFORMING_REFERENCE = (256, 5e-4)


def open_binormal(m, steps=2):
    """Open space curve with varying k1 under f3 = k1; dt = 0.1 h^2 keeps RK4 stable."""
    curve = g.reparameterize_arclength(g.sine(m, 0.5, 1.0, 2 * np.pi, 0.25, dim=3), m)
    h = curve.params[1] - curve.params[0]
    dt = 0.1 * h * h
    return evolve(curve, FlowField.of(3, {3: Curvature(1)}, "constrained"), steps * dt, dt)


OPEN_BINORMAL_TRIM = 0.25

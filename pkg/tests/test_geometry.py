import math

import numpy as np
import pytest

from frenetflow import geometry as g
from frenetflow.errors import (
    DegenerateSpeed,
    DimensionMismatch,
    InsufficientSamples,
    NonIncreasingGrid,
    OrderTooHigh,
    OutOfRange,
)
from oracles.length import ellipse_speed, length, sine_speed


def test_circle_construction():
    c = g.circle(256)
    assert c.dim == 2 and c.m == 256 and c.closed
    assert c.params[0] == 0.0 and np.allclose(np.diff(c.params), 2 * np.pi / 256)
    assert c.period == pytest.approx(2 * np.pi)


def test_segment_length():
    c = g.segment(4, (0, 0, 0), (1, 0, 0))
    assert c.dim == 3
    assert g.total_length(c) == pytest.approx(1.0, abs=1e-14)


def test_construction_errors():
    with pytest.raises(InsufficientSamples):
        g.circle(4)
    with pytest.raises(InsufficientSamples):
        g.segment(3)
    with pytest.raises(NonIncreasingGrid):
        g.DiscreteCurve(np.zeros((5, 2)), [0, 1, 1, 2, 3])
    with pytest.raises(NonIncreasingGrid):
        g.DiscreteCurve(np.random.default_rng(0).normal(size=(8, 2)), [0, 1, 2, 3, 4, 5, 6, 7.5], "closed")
    with pytest.raises(DimensionMismatch):
        g.DiscreteCurve(np.zeros((5, 2)), np.arange(4.0))
    with pytest.raises(DimensionMismatch):
        g.DiscreteCurve(np.zeros((5, 1)), np.arange(5.0))
    with pytest.raises(ValueError):
        g.build_curve("trefoil", 64)


def test_samples_are_read_only():
    c = g.circle(16)
    with pytest.raises(ValueError):
        c.samples[0, 0] = 3.0


def test_derivative_circle_and_segment():
    c = g.circle(256)
    d1 = g.derivative(c, 1)
    assert np.allclose(d1[0], [0, 1], atol=1e-12)
    u = c.params
    assert np.abs(d1 - np.column_stack([-np.sin(u), np.cos(u)])).max() < 1e-9
    s = g.segment(16)
    assert np.abs(g.derivative(s, 2)).max() < 1e-10


def test_derivative_helix_third_order():
    c = g.helix(256, 1.0, 1.0)
    u = c.params
    exact = np.column_stack([np.sin(u), -np.cos(u), 0 * u])
    d3 = g.derivative(c, 3)
    j = np.argmin(np.abs(u - np.pi / 2))
    assert np.abs(d3[j] - exact[j]).max() < 1e-9
    assert np.abs(d3 - exact).max() < 1e-9


def test_derivative_order_too_high():
    with pytest.raises(OrderTooHigh):
        g.derivative(g.circle(16), 3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fd_design_order(k):
    errs = []
    for m in (64, 128, 256):
        c = g.sine(m, 0.3, 1.0, dim=3, amplitude2=0.2)
        u = c.params
        exact = {
            1: np.column_stack([np.ones_like(u), 0.3 * np.cos(u), -0.2 * np.sin(u)]),
            2: np.column_stack([0 * u, -0.3 * np.sin(u), -0.2 * np.cos(u)]),
            3: np.column_stack([0 * u, -0.3 * np.cos(u), 0.2 * np.sin(u)]),
        }[k]
        errs.append(np.abs(g.derivative(c, k) - exact).max())
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert orders.min() >= 3.5, errs


def test_spectral_accuracy_circle():
    c = g.circle(256)
    u = c.params
    assert np.abs(g.derivative(c, 2) + np.column_stack([np.cos(u), np.sin(u)])).max() < 1e-9


def test_fornberg_weights_reproduce_polynomials():
    x = np.array([-2.0, -0.5, 0.0, 1.0, 3.0])
    for k in range(3):
        w = g.fornberg_weights(0.0, x, k)
        for p in range(5):
            exact = math.factorial(p) if p == k else 0.0
            assert np.dot(w, x**p) == pytest.approx(exact, abs=1e-12)


def test_speed():
    assert np.allclose(g.speed(g.circle(64, r=2.0)), 2.0)
    assert g.speed(g.ellipse(64, 2.0, 1.0))[0] == pytest.approx(1.0)
    c = g.reparameterize_arclength(g.sine(256, 0.3), 256)
    assert np.abs(g.speed(c) - 1).max() < 1e-6


def test_speed_degenerate():
    c = g.DiscreteCurve(np.zeros((16, 2)), np.linspace(0, 1, 16))
    with pytest.raises(DegenerateSpeed):
        g.speed(c)


def test_arclength_values():
    c = g.circle(64)
    assert g.arclength(c, 2 * np.pi) == pytest.approx(2 * np.pi, abs=1e-8)
    assert g.arclength(c, 0.0) == 0.0
    e = g.ellipse(128, 2.0, 1.0)
    assert g.total_length(e) == pytest.approx(length(ellipse_speed(2.0, 1.0), 0, 2 * np.pi), abs=1e-10)
    s = g.sine(64)
    assert g.arclength(s, s.params[0]) == 0.0
    with pytest.raises(OutOfRange):
        g.arclength(s, -0.1)


def test_arclength_open_quadrature_order():
    exact = length(sine_speed(0.3, 1.0), 0, 2 * np.pi)
    errs = [abs(g.total_length(g.sine(m, 0.3)) - exact) for m in (64, 128, 256)]
    assert errs[-1] < 1e-8
    assert np.log2(errs[0] / errs[1]) > 3.5 and np.log2(errs[1] / errs[2]) > 3.5


def test_arclength_additive():
    c = g.sine(128, 0.4)
    u1, u2 = 1.3, 4.1
    piece = length(sine_speed(0.4, 1.0), u1, u2)
    assert g.arclength(c, u2) - g.arclength(c, u1) == pytest.approx(piece, abs=1e-7)


def test_reparameterize_nonuniform_circle():
    theta = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    u = theta + 0.3 * np.sin(theta)  # nonuniform angle on a uniform grid
    c = g.DiscreteCurve(np.column_stack([np.cos(u), np.sin(u)]), theta, "closed")
    r = g.reparameterize_arclength(c, 256)
    assert np.abs(g.speed(r) - 1).max() < 1e-6
    assert np.abs(np.linalg.norm(r.samples, axis=1) - 1).max() < 1e-9


def test_reparameterize_preserves_ellipse_length():
    e = g.reparameterize_arclength(g.ellipse(256, 2.0, 1.0), 256)
    assert g.total_length(e) == pytest.approx(length(ellipse_speed(2.0, 1.0), 0, 2 * np.pi), abs=1e-6)


def test_reparameterize_identity_and_idempotence():
    c = g.circle(256)
    r = g.reparameterize_arclength(c)
    assert np.abs(r.samples - c.samples).max() < 1e-10
    for curve in (g.ellipse(256), g.sine(256, 0.3)):
        once = g.reparameterize_arclength(curve)
        twice = g.reparameterize_arclength(once)
        scale = np.abs(once.samples).max()
        assert np.abs(twice.samples - once.samples).max() < 1e-8 * scale


def test_reparameterize_shifted_helix():
    c = g.helix(128, 2.0, 1.0)
    r = g.reparameterize_arclength(c)
    assert np.allclose(r.shift, c.shift)
    assert np.abs(g.speed(r) - 1).max() < 1e-10


def test_d_ds():
    c = g.reparameterize_arclength(g.sine(128, 0.3))
    f = np.sin(c.params)
    assert np.allclose(g.d_ds(f, c), g.differentiate(f, c, 1), atol=1e-8)
    c2 = g.circle(64, r=2.0)
    assert np.allclose(g.d_ds(np.sin(c2.params), c2), np.cos(c2.params) / 2, atol=1e-12)
    e = g.ellipse(128, 2.0, 1.0)
    u = e.params
    v = np.hypot(2 * np.sin(u), np.cos(u))
    assert np.abs(g.d_ds(np.sin(u), e) - np.cos(u) / v).max() < 1e-10


def test_d_ds_of_parameter_on_circle():
    # u itself is not periodic, so use an open arc of the circle of radius 2
    u = np.linspace(0, 2, 64)
    c = g.DiscreteCurve(2 * np.column_stack([np.cos(u), np.sin(u)]), u)
    assert np.allclose(g.d_ds(u, c), 0.5, atol=1e-10)


def test_unit_tangent():
    for c in (g.ellipse(128), g.sine(128, 0.3)):
        t = g.d_ds(c.samples if not c.closed else c.periodic_part(), c)
        assert np.abs(np.linalg.norm(t, axis=1) - 1).max() < 1e-6


def test_cumulative_integral_closed_and_open():
    c = g.circle(64)
    F = g.cumulative_integral(np.cos(c.params), c)
    assert np.abs(F - np.sin(c.params)).max() < 1e-13
    s = g.sine(64)
    F = g.cumulative_integral(np.cos(s.params), s)
    assert np.abs(F - np.sin(s.params)).max() < 1e-5


def test_transformed_and_shift():
    c = g.helix(64, 1.0, 1.0)
    R = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1.0]])
    t = c.transformed(R, offset=[1, 2, 3], scale=2.0)
    assert np.allclose(t.samples, 2 * c.samples @ R.T + [1, 2, 3])
    assert np.allclose(t.shift, 2 * R @ c.shift)
    with pytest.raises(ValueError):
        g.DiscreteCurve(np.zeros((5, 2)) + np.arange(5)[:, None], np.arange(5.0), "open", shift=[1.0, 0.0])


def test_build_curve_topology_override():
    c = g.build_curve("helix", 64, "open", a=2.0, b=1.0, turns=1)
    assert not c.closed and c.m == 64
    assert g.build_curve("circle", 32, r=2.0).closed
    pts = g.build_curve(np.column_stack([np.arange(6.0), np.zeros(6)]))
    assert np.allclose(pts.params, np.arange(6.0))

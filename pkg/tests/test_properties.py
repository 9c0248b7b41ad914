"""Property-based checks of invariances with hypothesis.

Rigid motions and scalings perturb the samples by roundoff of order
eps * |x|, which k-th derivative stencils amplify roughly by m^k; the
resolutions below keep that amplification under the asserted bounds.
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from frenetflow import flow as fl
from frenetflow import geometry as g
from frenetflow.frenet import frenet_frame, orthonormality_defect

angles = st.floats(-np.pi, np.pi, allow_nan=False)
offsets = st.floats(-10, 10, allow_nan=False)
scales = st.floats(0.1, 10, allow_nan=False)
amplitudes = st.floats(0.1, 1.0, allow_nan=False)


def _rotation3(a, b, c):
    return Rotation.from_euler("zyx", [a, b, c]).as_matrix()


def _relative_gap(k1, k0):
    return np.abs(k1 - k0).max() / np.abs(k0).max()


@settings(max_examples=30, deadline=None)
@given(angles, angles, angles, offsets, offsets, offsets, st.floats(0.5, 3.0))
def test_rigid_motion_invariance_helix(a, b, c, x, y, z, radius):
    curve = g.helix(128, radius, 1.0)
    k0 = frenet_frame(curve).curvatures
    k1 = frenet_frame(curve.transformed(_rotation3(a, b, c), offset=[x, y, z])).curvatures
    assert _relative_gap(k1, k0) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(angles, angles, angles, offsets, offsets, offsets, amplitudes)
def test_rigid_motion_invariance_open(a, b, c, x, y, z, amp):
    # one-sided third-derivative stencils amplify roundoff more than the spectral ones
    curve = g.sine(128, amp, 1.0, amplitude2=amp / 2, dim=3)
    k0 = frenet_frame(curve).curvatures
    k1 = frenet_frame(curve.transformed(_rotation3(a, b, c), offset=[x, y, z])).curvatures
    assert _relative_gap(k1, k0) <= 1e-8


@settings(max_examples=30, deadline=None)
@given(scales, amplitudes)
def test_scaling_covariance(lam, amp):
    for curve in (g.helix(256, 1.0 + amp, 0.5), g.sine(128, amp, 1.0, amplitude2=amp / 2, dim=3), g.flat_torus(128)):
        k0 = frenet_frame(curve).curvatures
        k1 = frenet_frame(curve.transformed(scale=lam)).curvatures
        assert _relative_gap(k1 * lam, k0) <= 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_reflection_flips_last_curvature(seed):
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    if np.linalg.det(Q) > 0:
        Q[:, 0] *= -1
    k0 = frenet_frame(g.flat_torus(64)).curvatures
    k1 = frenet_frame(g.flat_torus(64).transformed(Q)).curvatures
    assert np.allclose(k1[:2], k0[:2], rtol=1e-9) and np.allclose(k1[2], -k0[2], rtol=1e-9)


@settings(max_examples=8, deadline=None)
@given(angles, angles, angles, offsets, offsets, offsets)
def test_flow_rotation_equivariance(a, b, c, x, y, z):
    R = _rotation3(a, b, c)
    flow = fl.FlowField.of(3, {3: fl.Curvature(1)}, "constrained")
    curve = g.helix(64, 2.0, 1.0)
    plain = fl.evolve(curve, flow, 0.02, 2e-3)[-1].curve.samples
    moved = fl.evolve(curve.transformed(R, offset=[x, y, z]), flow, 0.02, 2e-3)[-1].curve.samples
    assert np.abs(moved - (plain @ R.T + [x, y, z])).max() <= 1e-8 * np.abs(plain).max()


@settings(max_examples=25, deadline=None)
@given(amplitudes, st.integers(2, 5))
def test_frames_orthonormal_and_oriented(amp, dim):
    if dim == 2:
        curve = g.ellipse(96, 1 + amp, 1.0)
    elif dim == 3:
        curve = g.sine(96, amp, 1.0, amplitude2=amp / 2, dim=3)
    else:
        curve = g.flat_torus(96, 1, dim - 2)
    fd = frenet_frame(curve)
    assert orthonormality_defect(fd) < 1e-12
    assert np.allclose(np.linalg.det(fd.frames), 1.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(0.0, 2 * np.pi), st.floats(0.0, 2 * np.pi), st.floats(0.0, 2 * np.pi))
def test_arclength_additive(r, u1, u2, u3):
    c = g.ellipse(64, r, 1.0)
    lo, mid, hi = sorted((u1, u2, u3))
    S = lambda u: g.arclength(c, u)  # noqa: E731
    assert S(hi) - S(lo) == pytest.approx((S(mid) - S(lo)) + (S(hi) - S(mid)), abs=1e-12)
    assert S(lo + 2 * np.pi) - S(lo) == pytest.approx(g.total_length(c), rel=1e-12)

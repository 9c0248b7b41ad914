"""
Moving Frenet frame and curvature functions of a discrete curve in R^n.

The frame is obtained per sample by modified Gram-Schmidt (with one
reorthogonalization pass) on the derivatives a', a'', ..., a^(n-1); the last
vector completes a positively oriented orthonormal basis through the
generalized cross product.  Curvatures ``k_i = <dV_i/ds, V_{i+1}>`` are
evaluated through the Gram-Schmidt diagonal: with d_j the j-th derivative,
``<d_j, V_j> = v^j k_1 ... k_{j-1}``, so ``k_i = <d_{i+1}, V_{i+1}> / (v <d_i, V_i>)``.
This needs a^(n) but no second differentiation of the frame.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geometry
from .errors import DegenerateCurve, DimensionTooSmall

GS_EPS = 1e-8
MAX_DIM = 8


@dataclass(frozen=True, eq=False)
class FrenetData:
    """Frame, curvatures and speed of a curve.

    ``frames[p, i]`` is the Frenet vector V_{i+1} at sample ``p``;
    ``curvatures[i]`` is the field k_{i+1}.
    """

    frames: np.ndarray  # (m, n, n)
    curvatures: np.ndarray  # (n-1, m)
    speed: np.ndarray  # (m,)
    curve: geometry.DiscreteCurve

    @property
    def dim(self):
        return self.frames.shape[1]

    def V(self, i):
        """Frenet vector field V_i (1-based), zero outside 1..n."""
        if 1 <= i <= self.dim:
            return self.frames[:, i - 1, :]
        return np.zeros((self.frames.shape[0], self.dim))

    def k(self, i):
        """Curvature field k_i (1-based), zero outside 1..n-1."""
        if 1 <= i <= self.dim - 1:
            return self.curvatures[i - 1]
        return np.zeros(self.frames.shape[0])


@dataclass(frozen=True)
class NondegeneracyReport:
    ok: bool
    first_failing_index: Optional[int] = None
    location: Optional[float] = None
    min_ratio: float = np.inf


def _orthonormalize(derivs, eps=GS_EPS, params=None, scale=None):
    """Modified Gram-Schmidt with reorthogonalization over stacked vectors.

    ``derivs`` has shape (m, q, n).  Returns the orthonormal vectors and the
    relative residual norms ``|w_j| / max(|d_j|, scale_j)`` per sample and
    index.  ``scale`` (shape (m, q)) is a floor for the denominator so that a
    derivative that is pure roundoff counts as dependent.
    """
    m, q, n = derivs.shape
    basis = np.zeros_like(derivs)
    ratios = np.zeros((m, q))
    for j in range(q):
        d = derivs[:, j, :]
        w = d.copy()
        for _ in range(2):
            for i in range(j):
                w -= np.einsum("pc,pc->p", w, basis[:, i, :])[:, None] * basis[:, i, :]
        norm_d = np.linalg.norm(d, axis=1)
        if scale is not None:
            norm_d = np.maximum(norm_d, scale[:, j])
        norm_w = np.linalg.norm(w, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratios[:, j] = np.where(norm_d > 0, norm_w / norm_d, 0.0)
        if eps is not None:
            bad = np.flatnonzero(ratios[:, j] < eps)
            if bad.size:
                raise DegenerateCurve(j + 1, params[bad[0]])
        with np.errstate(invalid="ignore", divide="ignore"):
            basis[:, j, :] = w / norm_w[:, None]
    return basis, ratios


def _derivative_scale(curve, v, q):
    """Natural size ``v^j / L^(j-1)`` of the j-th derivative, j = 1..q."""
    L = geometry.total_length(curve, v)
    return np.stack([v**j / L ** (j - 1) for j in range(1, q + 1)], axis=1)


def generalized_cross(vectors):
    """Unit vector completing ``n-1`` orthonormal vectors to a basis with det = +1.

    ``vectors`` has shape (m, n-1, n); the component ``i`` of the result is the
    cofactor of entry (n, i) of the matrix with rows V_1..V_{n-1}, x.
    """
    m, q, n = vectors.shape
    out = np.empty((m, n))
    cols = np.arange(n)
    for i in range(n):
        minor = vectors[:, :, cols != i]
        out[:, i] = (-1) ** (n - 1 + i) * (np.linalg.det(minor) if q > 0 else 1.0)
    return out / np.linalg.norm(out, axis=1)[:, None]


def frenet_frame(curve, eps=GS_EPS, max_dim=MAX_DIM):
    """Compute the Frenet frame, curvatures and speed of ``curve``.

    Raises
    ------
    DegenerateCurve
        If a' ... a^(n-1) are numerically dependent at some sample.
    DegenerateSpeed
        If the speed vanishes.
    """
    n = curve.dim
    if n > max_dim:
        raise DimensionTooSmall(f"dimension {n} exceeds the configured cap {max_dim}")
    v = geometry.speed(curve)
    derivs = np.stack([geometry.derivative(curve, k) for k in range(1, n + 1)], axis=1)
    scale = _derivative_scale(curve, v, n - 1)
    basis, _ = _orthonormalize(derivs[:, :-1], eps, curve.params, scale)
    last = generalized_cross(basis)
    frames = np.concatenate([basis, last[:, None, :]], axis=1)
    # d_j = sum_i R_ij V_i with R_jj = v^j k_1 ... k_{j-1}
    diag = np.einsum("pjc,pjc->jp", derivs, frames)
    k = diag[1:] / (diag[:-1] * v)
    return FrenetData(frames, k, v, curve)


def curvatures_from_frames(frames, curve, v):
    """Curvatures by numerically differentiating the frame, k_i = <V_i'/v, V_{i+1}>."""
    n = frames.shape[1]
    dV = geometry.differentiate(frames[:, :-1, :].reshape(curve.m, -1), curve, 1)
    dV = dV.reshape(curve.m, n - 1, n) / v[:, None, None]
    return np.einsum("pic,pic->ip", dV, frames[:, 1:, :])


def curvatures(fd):
    """List of the n-1 curvature fields k_1..k_{n-1}."""
    return [fd.curvatures[i] for i in range(fd.dim - 1)]


def check_nondegenerate(curve, tol=GS_EPS):
    """Check that a', ..., a^(n) are independent at every sample.

    The last derivative decides whether k_{n-1} vanishes; the frame itself
    only needs the first n-1.  Never raises on degeneracy, reports instead.
    """
    n = curve.dim
    derivs = np.stack([geometry.derivative(curve, k) for k in range(1, n + 1)], axis=1)
    v = geometry.speed(curve)
    _, ratios = _orthonormalize(derivs, None, scale=_derivative_scale(curve, v, n))
    bad = ratios < tol
    min_ratio = float(ratios.min())
    if not bad.any():
        return NondegeneracyReport(True, min_ratio=min_ratio)
    index = int(np.argmax(bad.any(axis=0)))
    sample = int(np.argmax(bad[:, index]))
    return NondegeneracyReport(False, index + 1, float(curve.params[sample]), min_ratio)


def boundary_band(curve):
    """Number of end samples whose nested derivative of the frame touches a one-sided stencil.

    Zero for closed curves.  The frame uses a' .. a^(n-1); differentiating it
    once more reaches that many samples further in.
    """
    if curve.closed:
        return 0
    return max(geometry.stencil_radius(k) for k in range(1, curve.dim)) + geometry.stencil_radius(1)


def frenet_residual(fd, include_boundary=False):
    """Max-norm defect of the Frenet equations V_i' = -k_{i-1} V_{i-1} + k_i V_{i+1}.

    dV_i/ds is obtained by differentiating the computed frame.  On open
    curves the error of the one-sided end stencils changes abruptly where the
    centered stencils take over, and differentiating that step costs one
    order; by default the :func:`boundary_band` samples at each end are
    therefore left out of the norm.
    """
    curve = fd.curve
    n = fd.dim
    dV = geometry.differentiate(fd.frames.reshape(curve.m, -1), curve, 1)
    dV = dV.reshape(curve.m, n, n) / fd.speed[:, None, None]
    defect = np.zeros(curve.m)
    for i in range(1, n + 1):
        rhs = -fd.k(i - 1)[:, None] * fd.V(i - 1) + fd.k(i)[:, None] * fd.V(i + 1)
        defect = np.maximum(defect, np.linalg.norm(dV[:, i - 1, :] - rhs, axis=1))
    band = 0 if include_boundary else boundary_band(curve)
    if 2 * band >= curve.m:
        raise ValueError(f"{curve.m} samples leave nothing inside the {band}-sample end bands")
    return float(defect[band : curve.m - band].max())


def orthonormality_defect(fd):
    G = np.einsum("pic,pjc->pij", fd.frames, fd.frames)
    return float(np.abs(G - np.eye(fd.dim)).max())

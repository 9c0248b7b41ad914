"""
Curve flows ``da/dt = sum_i f_i V_i`` in the Frenet basis, the tangential
speed that makes them inextensible, and explicit time integration.
"""
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import geometry
from .errors import EvolutionError, NoPeriodicSolution, NumericalFailure
from .frenet import frenet_frame

PERIODICITY_EPS = 1e-6
SCHEMES = ("euler", "rk4")


# ------------------------------------------------------------ components
#
# A component maps (arclength s, FrenetData, time t) to a scalar field.


@dataclass(frozen=True)
class Zero:
    def __call__(self, s, fd, t=0.0):
        return np.zeros_like(s)


@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, s, fd, t=0.0):
        return np.full_like(s, float(self.value))


@dataclass(frozen=True)
class Sine:
    omega: float = 1.0
    phase: float = 0.0
    amplitude: float = 1.0

    def __call__(self, s, fd, t=0.0):
        return self.amplitude * np.sin(self.omega * s + self.phase)


@dataclass(frozen=True)
class Cosine:
    omega: float = 1.0
    phase: float = 0.0
    amplitude: float = 1.0

    def __call__(self, s, fd, t=0.0):
        return self.amplitude * np.cos(self.omega * s + self.phase)


@dataclass(frozen=True)
class Polynomial:
    """``c0 + c1 s + c2 s^2 + ...``"""

    coeffs: tuple

    def __call__(self, s, fd, t=0.0):
        return np.polynomial.polynomial.polyval(s, self.coeffs)


@dataclass(frozen=True)
class Curvature:
    """The curvature field k_j, scaled by ``factor``."""

    index: int
    factor: float = 1.0

    def __call__(self, s, fd, t=0.0):
        return self.factor * fd.k(self.index)


@dataclass(frozen=True)
class CurvatureDerivative:
    """dk_j/ds, scaled by ``factor``."""

    index: int
    factor: float = 1.0

    def __call__(self, s, fd, t=0.0):
        return self.factor * geometry.d_ds(fd.k(self.index), fd.curve, fd.speed)


@dataclass(frozen=True)
class Tabulated:
    """Cubic-spline interpolation of tabulated values against arclength."""

    s: tuple
    values: tuple

    def __call__(self, s, fd, t=0.0):
        return CubicSpline(np.asarray(self.s, float), np.asarray(self.values, float))(s)


@dataclass(frozen=True)
class FlowField:
    """Scalar speeds f_1..f_n and the policy for the tangential speed f_1.

    With ``tangential='constrained'`` the first component must be ``None``;
    f_1 is then integrated from ``df_1/ds = f_2 k_1`` starting at ``anchor``
    on the first sample.
    """

    components: Sequence
    tangential: str = "explicit"
    anchor: float = 0.0
    periodicity_eps: float = PERIODICITY_EPS

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) < 2:
            raise ValueError("a flow needs at least two components")
        if self.tangential not in ("explicit", "constrained"):
            raise ValueError(f"tangential policy must be 'explicit' or 'constrained', got {self.tangential!r}")
        if self.tangential == "constrained" and comps[0] is not None:
            raise ValueError("constrained flows determine f1; leave component 1 unspecified")
        if self.tangential == "explicit" and comps[0] is None:
            comps = (Zero(),) + comps[1:]
        comps = tuple(Zero() if (c is None and i > 0) else c for i, c in enumerate(comps))
        object.__setattr__(self, "components", comps)

    @property
    def dim(self):
        return len(self.components)

    @classmethod
    def of(cls, dim, speeds=None, tangential="explicit", anchor=0.0, **kw):
        """Build from a ``{index: component}`` mapping with 1-based indices."""
        speeds = dict(speeds or {})
        comps = [speeds.get(i, None if (i == 1 and tangential == "constrained") else Zero()) for i in range(1, dim + 1)]
        return cls(tuple(comps), tangential, anchor, **kw)


def zero_flow(dim):
    return FlowField.of(dim)


# -------------------------------------------------------------- kinematics


def solve_tangential(curve, fd, flow, anchor=None, s=None, t=0.0):
    """Tangential speed f_1 with ``df_1/ds = f_2 k_1`` and ``f_1(s_0) = anchor``."""
    anchor = flow.anchor if anchor is None else anchor
    if s is None:
        s = geometry.arclength_grid(curve, fd.speed)
    integrand = flow.components[1](s, fd, t) * fd.k(1)
    f1 = anchor + geometry.cumulative_integral(integrand * fd.speed, curve)
    if curve.closed:
        weight = curve.period / curve.m
        defect = float(np.sum(integrand * fd.speed) * weight)
        scale = float(np.sum(np.abs(integrand) * fd.speed) * weight)
        if abs(defect) > flow.periodicity_eps * scale:
            raise NoPeriodicSolution(defect, scale)
    return f1


def realize(curve, fd, flow, t=0.0):
    """All scalar speeds on ``curve``: returns (f, s) with f of shape (n, m)."""
    if flow.dim != curve.dim:
        raise ValueError(f"flow has {flow.dim} components but curve lives in R^{curve.dim}")
    s = geometry.arclength_grid(curve, fd.speed)
    f = np.empty((flow.dim, curve.m))
    for i, comp in enumerate(flow.components[1:], start=1):
        f[i] = comp(s, fd, t)
    if flow.tangential == "constrained":
        f[0] = solve_tangential(curve, fd, flow, s=s, t=t)
    else:
        f[0] = flow.components[0](s, fd, t)
    return f, s


def velocity(curve, fd, flow, t=0.0, f=None):
    """The velocity field ``sum_i f_i V_i``, shape (m, n)."""
    if f is None:
        f, _ = realize(curve, fd, flow, t)
    return np.einsum("ip,pic->pc", f, fd.frames)


def _rate(curve, flow, t):
    fd = frenet_frame(curve)
    return velocity(curve, fd, flow, t)


def step(curve, flow, dt, scheme="rk4", t=0.0, rate=None):
    """Advance ``curve`` by one time step; frames and f_1 are recomputed at every stage.

    ``rate`` may carry the already known velocity at ``curve``.
    """
    x = curve.samples
    k1 = _rate(curve, flow, t) if rate is None else rate
    if scheme == "euler":
        return curve.with_samples(x + dt * k1)
    if scheme == "rk4":
        k2 = _rate(curve.with_samples(x + 0.5 * dt * k1), flow, t + 0.5 * dt)
        k3 = _rate(curve.with_samples(x + 0.5 * dt * k2), flow, t + 0.5 * dt)
        k4 = _rate(curve.with_samples(x + dt * k3), flow, t + dt)
        return curve.with_samples(x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4))
    raise ValueError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")


# -------------------------------------------------------------- trajectory


@dataclass(frozen=True, eq=False)
class Snapshot:
    t: float
    curve: geometry.DiscreteCurve
    frenet: object
    f: np.ndarray  # (n, m) realized speeds
    s: np.ndarray  # (m,) arclength from the first sample


@dataclass(eq=False)
class Trajectory:
    dt: float
    scheme: str
    flow: FlowField
    resample_every: int = 0
    snapshots: list = field(default_factory=list)

    def __len__(self):
        return len(self.snapshots)

    def __getitem__(self, i):
        return self.snapshots[i]

    @property
    def times(self):
        return np.array([snap.t for snap in self.snapshots])

    @property
    def dim(self):
        return self.snapshots[0].curve.dim

    def stack(self, attr):
        """Stack a per-snapshot array attribute along a new leading axis."""
        return np.stack([getattr(snap, attr) for snap in self.snapshots])

    def positions(self):
        return np.stack([snap.curve.samples for snap in self.snapshots])

    def frames(self):
        return np.stack([snap.frenet.frames for snap in self.snapshots])

    def curvatures(self):
        return np.stack([snap.frenet.curvatures for snap in self.snapshots])

    def speeds(self):
        return np.stack([snap.frenet.speed for snap in self.snapshots])


def _snapshot(curve, flow, t):
    fd = frenet_frame(curve)
    f, s = realize(curve, fd, flow, t)
    return Snapshot(t, curve, fd, f, s)


def evolve(curve, flow, T, dt, scheme="rk4", resample_every=0):
    """Integrate the flow from t = 0 to ``T`` and record every step.

    ``resample_every = q > 0`` reparameterizes the curve by arclength after
    every q-th step.  A failing step raises :class:`EvolutionError` carrying
    the partial trajectory.
    """
    if not (T > 0 and dt > 0):
        raise ValueError("T and dt must be positive")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    if resample_every < 0:
        raise ValueError("resample_every must be >= 0")
    steps = int(round(T / dt))
    if steps < 1 or abs(steps * dt - T) > 1e-9 * T:
        raise ValueError(f"T = {T} is not an integer multiple of dt = {dt}")
    traj = Trajectory(dt, scheme, flow, resample_every)
    try:
        traj.snapshots.append(_snapshot(curve, flow, 0.0))
        for j in range(1, steps + 1):
            t_prev = (j - 1) * dt
            last = traj.snapshots[-1]
            rate = velocity(curve, last.frenet, flow, t_prev, f=last.f)
            curve = step(curve, flow, dt, scheme, t_prev, rate)
            if resample_every and j % resample_every == 0:
                curve = geometry.reparameterize_arclength(curve, curve.m)
            traj.snapshots.append(_snapshot(curve, flow, j * dt))
    except NumericalFailure as exc:
        raise EvolutionError(traj, exc) from exc
    return traj


def arclength_drift(traj):
    """Total arclength of every snapshot minus that of the first."""
    lengths = np.array([geometry.total_length(snap.curve, snap.frenet.speed) for snap in traj.snapshots])
    return lengths - lengths[0]

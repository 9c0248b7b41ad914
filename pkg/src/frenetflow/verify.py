"""
Residual checks of the inextensible-flow identities on simulated trajectories.

Every check compares the two sides of an identity on recorded snapshots:
time derivatives are central differences across neighbouring snapshots at a
fixed curve parameter (first and last snapshots are therefore excluded),
space derivatives come from :mod:`frenetflow.geometry`.  Symbols with an index
outside their range (k_0, k_n, f_{n+1}, V_0, Psi with index > n, ...) are zero.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geometry
from .errors import DimensionTooSmall, ResamplingBreaksComparison
from .frenet import frenet_residual

VARIANTS = ("statement", "proof")
FLOOR = 1e-11

DEFAULT_TOLERANCES = {
    "lemma_speed": 1e-4,
    "frame_evolution": 1e-4,
    "curvature_pde": 1e-4,
    "psi_antisymmetry": 1e-6,
    "arclength_drift": 1e-5,
    "frenet": 1e-5,
}


@dataclass
class Residual:
    identity: str
    variant: str
    max: float
    l2: float
    tolerance: Optional[float] = None

    @property
    def passed(self):
        return self.tolerance is None or self.max <= self.tolerance


@dataclass
class VerificationReport:
    """Named residual norms plus the grid, step and tolerances they were computed with."""

    title: str
    residuals: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    orders: dict = field(default_factory=dict)
    table: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.residuals)

    def get(self, identity, variant="-"):
        for r in self.residuals:
            if r.identity == identity and r.variant == variant:
                return r
        raise KeyError((identity, variant))

    def identities(self):
        return sorted({r.identity for r in self.residuals})

    def rows(self):
        """One (identity, variant, norm, value, tolerance, passed) row per norm."""
        out = []
        for r in self.residuals:
            for norm in ("max", "l2"):
                tol = r.tolerance if norm == "max" else None
                out.append((r.identity, r.variant, norm, getattr(r, norm), tol, r.passed if norm == "max" else None))
        return out

    def extend(self, other):
        self.residuals.extend(other.residuals)
        self.params.update(other.params)
        self.tolerances.update(other.tolerances)
        self.orders.update(other.orders)
        return self

    def summary(self):
        lines = [f"{self.title}"]
        for r in self.residuals:
            tol = "" if r.tolerance is None else f"  tol {r.tolerance:.1e}  {'PASS' if r.passed else 'FAIL'}"
            lines.append(f"  {r.identity:<28} {r.variant:<10} max {r.max:.3e}  l2 {r.l2:.3e}{tol}")
        for name, order in self.orders.items():
            lines.append(f"  order[{name}] = {order}")
        return "\n".join(lines)


# ------------------------------------------------------------- helpers


def _check_trajectory(traj):
    if traj.resample_every:
        raise ResamplingBreaksComparison(
            "trajectory was reparameterized during the run; fixed-parameter time differences are meaningless"
        )
    if len(traj) < 3:
        raise ValueError("central time differences need at least 3 snapshots")


def _interior(traj, snapshots=None):
    if snapshots is None:
        return range(1, len(traj) - 1)
    for j in snapshots:
        if not 1 <= j <= len(traj) - 2:
            raise ValueError(f"snapshot {j} has no central time difference")
    return snapshots


def _mask(curve, trim):
    """Samples kept in the norms: open curves drop a fraction ``trim`` at each end."""
    keep = np.ones(curve.m, dtype=bool)
    if not curve.closed and trim > 0:
        cut = int(np.floor(trim * curve.m))
        keep[:cut] = False
        keep[curve.m - cut:] = False
    return keep


def _norms(values):
    a = np.concatenate([np.ravel(x) for x in values]) if values else np.zeros(1)
    return float(np.max(np.abs(a))), float(np.sqrt(np.mean(a**2)))


def _params(traj, trim):
    c = traj[0].curve
    return {
        "m": c.m,
        "dim": c.dim,
        "topology": c.topology,
        "dt": traj.dt,
        "steps": len(traj) - 1,
        "scheme": traj.scheme,
        "trim": trim,
    }


def _ddt(traj, j, getter):
    return (getter(traj[j + 1]) - getter(traj[j - 1])) / (2 * traj.dt)


class _Fields:
    """1-based, zero-padded access to the fields of one snapshot."""

    def __init__(self, snap):
        self.snap = snap
        self.fd = snap.frenet
        self.curve = snap.curve
        self.n = snap.curve.dim
        self.v = snap.frenet.speed
        self._fs = {}

    def k(self, i):
        return self.fd.k(i)

    def f(self, i):
        if 1 <= i <= self.n:
            return self.snap.f[i - 1]
        return np.zeros(self.curve.m)

    def V(self, i):
        return self.fd.V(i)

    def ds(self, values):
        return geometry.d_ds(values, self.curve, self.v)

    def f_s(self, i):
        if i not in self._fs:
            self._fs[i] = self.ds(self.f(i)) if 1 <= i <= self.n else np.zeros(self.curve.m)
        return self._fs[i]

    def a(self, i):
        """Coefficient f_{i-1} k_{i-1} + df_i/ds - f_{i+1} k_i of V_i in dV_1/dt."""
        return self.f(i - 1) * self.k(i - 1) + self.f_s(i) - self.f(i + 1) * self.k(i)


# ------------------------------------------------------------- checks


def lemma_speed_residual(traj, trim=0.0, tol=DEFAULT_TOLERANCES["lemma_speed"], snapshots=None):
    """Residual of dv/dt = df_1/du - f_2 v k_1 at fixed u."""
    _check_trajectory(traj)
    res = []
    for j in _interior(traj, snapshots):
        F = _Fields(traj[j])
        vt = _ddt(traj, j, lambda s: s.frenet.speed)
        rhs = geometry.differentiate(F.f(1), F.curve, 1) - F.f(2) * F.v * F.k(1)
        res.append((vt - rhs)[_mask(F.curve, trim)])
    mx, l2 = _norms(res)
    return VerificationReport(
        "lemma: speed evolution",
        [Residual("dv/dt", "-", mx, l2, tol)],
        _params(traj, trim),
        {"lemma_speed": tol},
    )


@dataclass(frozen=True, eq=False)
class PsiMatrix:
    """``values[p, k-1, j-1] = <dV_j/dt, V_k>`` at every sample of one snapshot."""

    values: np.ndarray
    t: float
    index: int

    @property
    def antisymmetry(self):
        return float(np.abs(self.values + np.swapaxes(self.values, 1, 2)).max())

    @property
    def diagonal(self):
        return float(np.abs(np.diagonal(self.values, axis1=1, axis2=2)).max())

    def entry(self, k, j):
        n = self.values.shape[1]
        if 1 <= k <= n and 1 <= j <= n:
            return self.values[:, k - 1, j - 1]
        return np.zeros(self.values.shape[0])


def _frame_rate(traj, j):
    return _ddt(traj, j, lambda s: s.frenet.frames)


def psi_matrix(traj, snapshot_index):
    _check_trajectory(traj)
    j = snapshot_index
    _interior(traj, [j])
    dV = _frame_rate(traj, j)
    psi = np.einsum("pjc,pkc->pkj", dV, traj[j].frenet.frames)
    return PsiMatrix(psi, traj[j].t, j)


def psi_antisymmetry(traj, tol=DEFAULT_TOLERANCES["psi_antisymmetry"], snapshots=None):
    """Largest |Psi + Psi^T| and |diag Psi| over interior snapshots."""
    _check_trajectory(traj)
    anti, diag = [], []
    for j in _interior(traj, snapshots):
        P = psi_matrix(traj, j)
        anti.append(P.antisymmetry)
        diag.append(P.diagonal)
    return VerificationReport(
        "psi antisymmetry",
        [
            Residual("psi+psi^T", "-", max(anti), float(np.sqrt(np.mean(np.square(anti)))), tol),
            Residual("diag psi", "-", max(diag), float(np.sqrt(np.mean(np.square(diag)))), tol),
        ],
        _params(traj, 0.0),
        {"psi_antisymmetry": tol},
    )


def frame_evolution_residual(traj, trim=0.0, tol=DEFAULT_TOLERANCES["frame_evolution"], snapshots=None):
    """Residuals of the time derivatives of the Frenet vectors.

    ``dV1/dt``: full vector identity; ``<dVj/dt,V1>`` (1 < j < n) and
    ``<dVn/dt,V1>``: first components; ``psi reconstruction``:
    ``dV_j/dt - sum_k Psi_kj V_k`` for all j.
    """
    _check_trajectory(traj)
    n = traj.dim
    acc = {}

    def add(name, values):
        acc.setdefault(name, []).append(values)

    for j in _interior(traj, snapshots):
        F = _Fields(traj[j])
        keep = _mask(F.curve, trim)
        dV = _frame_rate(traj, j)
        rhs = sum(F.a(i)[:, None] * F.V(i) for i in range(2, n + 1))
        add("dV1/dt", np.linalg.norm(dV[:, 0, :] - rhs, axis=1)[keep])
        for jj in range(2, n):
            add(f"<dV{jj}/dt,V1>", (np.einsum("pc,pc->p", dV[:, jj - 1, :], F.V(1)) + F.a(jj))[keep])
        add(f"<dV{n}/dt,V1>", (np.einsum("pc,pc->p", dV[:, n - 1, :], F.V(1)) + F.a(n))[keep])
        psi = np.einsum("pjc,pkc->pkj", dV, F.fd.frames)
        recon = np.einsum("pkj,pkc->pjc", psi, F.fd.frames)
        add("psi reconstruction", np.linalg.norm(dV - recon, axis=2).max(axis=1)[keep])
    residuals = []
    for name, vals in acc.items():
        mx, l2 = _norms(vals)
        residuals.append(Residual(name, "-", mx, l2, tol))
    return VerificationReport("frame evolution", residuals, _params(traj, trim), {"frame_evolution": tol})


def _k1_rhs(F, variant):
    """Right-hand side of the k_1 evolution equation in the given variant."""
    coupled = F.f_s(2) if variant == "statement" else F.f_s(3)
    k1s, k2s = F.ds(F.k(1)), F.ds(F.k(2))
    return (
        F.f(2) * F.k(1) ** 2
        + F.f(1) * k1s
        + F.ds(F.f_s(2))
        - 2 * coupled * F.k(2)
        - F.f(3) * k2s
        - F.f(2) * F.k(2) ** 2
        - F.f(4) * F.k(3) * F.k(2)
    )


def pde_equations(n):
    """Names of the curvature equations available in dimension ``n``."""
    names = ["k1"]
    for i in range(2, n):
        names += [f"k{i - 1}|V{i}", f"k{i}|V{i}"]
    names.append(f"k{n - 1}|V{n}")
    return names


def _pde_rhs(name, F, P, variant):
    """Return (curvature index, rhs) of a named curvature equation."""
    if name == "k1":
        return 1, _k1_rhs(F, variant)
    left, right = name.split("|V")
    kidx, i = int(left[1:]), int(right)
    n = F.n
    if i == n:
        return n - 1, -F.ds(P.entry(n - 1, n)) - P.entry(n - 2, n) * F.k(n - 2)
    if kidx == i - 1:
        return i - 1, -F.ds(P.entry(i - 1, i)) - P.entry(i - 2, i) * F.k(i - 2)
    if variant == "statement":
        return i, F.ds(P.entry(i - 1, i)) - P.entry(i + 2, i) * F.k(i + 2)
    return i, F.ds(P.entry(i + 1, i)) - P.entry(i + 2, i) * F.k(i + 1)


def curvature_pde_residual(
    traj, variant="both", trim=0.0, tol=DEFAULT_TOLERANCES["curvature_pde"], snapshots=None, equations=None
):
    """Residuals of the curvature evolution system.

    ``variant`` is ``'statement'``, ``'proof'`` or ``'both'`` (reported side
    by side).  The two variants differ in the derivative inside the
    ``-2 (...) k_2`` term of the k_1 equation (df_2/ds vs df_3/ds) and in the
    index pattern of the k_i equation.
    """
    _check_trajectory(traj)
    variants = VARIANTS if variant == "both" else (variant,)
    for var in variants:
        if var not in VARIANTS:
            raise ValueError(f"variant must be 'statement', 'proof' or 'both', got {variant!r}")
    n = traj.dim
    available = pde_equations(n)
    if equations is None:
        equations = available
    missing = [e for e in equations if e not in available]
    if missing:
        raise DimensionTooSmall(f"equations {missing} do not exist in dimension {n}")
    acc = {}
    for j in _interior(traj, snapshots):
        F = _Fields(traj[j])
        P = psi_matrix(traj, j)
        keep = _mask(F.curve, trim)
        kt = _ddt(traj, j, lambda s: s.frenet.curvatures)
        for var in variants:
            for name in equations:
                kidx, rhs = _pde_rhs(name, F, P, var)
                acc.setdefault((name, var), []).append((kt[kidx - 1] - rhs)[keep])
    residuals = []
    for (name, var), vals in acc.items():
        mx, l2 = _norms(vals)
        residuals.append(Residual(name, var, mx, l2, tol))
    return VerificationReport("curvature evolution", residuals, _params(traj, trim), {"curvature_pde": tol})


def curvature_pde_terms(traj, snapshot, variant, equation="k1"):
    """Pointwise (dk/dt, right-hand side) of one curvature equation at one snapshot.

    dk/dt is the central time difference; no samples are dropped.
    """
    _check_trajectory(traj)
    if variant not in VARIANTS:
        raise ValueError(f"variant must be 'statement' or 'proof', got {variant!r}")
    if equation not in pde_equations(traj.dim):
        raise DimensionTooSmall(f"equation {equation!r} does not exist in dimension {traj.dim}")
    j = snapshot
    _interior(traj, [j])
    F = _Fields(traj[j])
    kidx, rhs = _pde_rhs(equation, F, psi_matrix(traj, j), variant)
    kt = _ddt(traj, j, lambda s: s.frenet.curvatures)[kidx - 1]
    return kt, rhs


def drift_report(traj, tol=DEFAULT_TOLERANCES["arclength_drift"]):
    """Relative total-arclength drift over the trajectory."""
    from .flow import arclength_drift

    L0 = geometry.total_length(traj[0].curve, traj[0].frenet.speed)
    rel = np.abs(arclength_drift(traj)) / L0
    return VerificationReport(
        "arclength drift",
        [Residual("relative drift", "-", float(rel.max()), float(np.sqrt(np.mean(rel**2))), tol)],
        _params(traj, 0.0),
        {"arclength_drift": tol},
    )


def frenet_report(traj, tol=DEFAULT_TOLERANCES["frenet"]):
    vals = [frenet_residual(s.frenet) for s in traj.snapshots]
    return VerificationReport(
        "frenet equations",
        [Residual("frenet", "-", max(vals), float(np.sqrt(np.mean(np.square(vals)))), tol)],
        _params(traj, 0.0),
        {"frenet": tol},
    )


# ------------------------------------------------------------- refinement


def estimate_order(steps, values, floor=FLOOR):
    """Least-squares slope of log(value) against log(step).

    Returns the string ``'n/a (floor)'`` when every value sits below ``floor``.
    """
    steps = np.asarray(steps, dtype=float)
    values = np.asarray(values, dtype=float)
    if np.all(values <= floor):
        return "n/a (floor)"
    if np.any(values <= 0):
        return "n/a (zero)"
    slope, _ = np.polyfit(np.log(steps), np.log(values), 1)
    return float(slope)


def convergence_study(run, resolutions, dts, checks, parameter=None, floor=FLOOR, workers=1):
    """Run a scenario at several resolutions and estimate orders of every check.

    Parameters
    ----------
    run : callable
        ``run(m, dt)`` returning a trajectory (or any object the checks accept).
    resolutions, dts : sequence
        Paired refinement levels; a length-1 sequence is broadcast.
    checks : dict
        ``name -> callable(result) -> float``.
    parameter : {'h', 'dt'}, optional
        Which step the orders refer to; by default ``'h'`` (= 1/m) when the
        resolutions vary and ``'dt'`` otherwise.
    """
    resolutions = list(resolutions)
    dts = list(dts)
    levels = max(len(resolutions), len(dts))
    if len(resolutions) == 1:
        resolutions *= levels
    if len(dts) == 1:
        dts *= levels
    if len(resolutions) != len(dts):
        raise ValueError("resolutions and dts must pair up")
    if levels < 3:
        raise ValueError("a convergence study needs at least 3 levels")
    if parameter is None:
        parameter = "h" if len(set(resolutions)) > 1 else "dt"
    steps = [1.0 / m for m in resolutions] if parameter == "h" else dts

    def one(level):
        m, dt = level
        result = run(m, dt)
        return {name: float(check(result)) for name, check in checks.items()}

    levels_ = list(zip(resolutions, dts))
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, levels_))
    else:
        values = [one(level) for level in levels_]
    report = VerificationReport("convergence study", params={"resolutions": resolutions, "dts": dts, "parameter": parameter})
    for (m, dt), vals in zip(levels_, values):
        report.table.append({"m": m, "dt": dt, **vals})
    for name in checks:
        series = [vals[name] for vals in values]
        report.orders[name] = estimate_order(steps, series, floor)
        report.residuals.append(Residual(name, "-", series[-1], series[-1]))
    return report


def ratios(report, name):
    """Successive residual ratios (coarse / fine) of one check in a study."""
    series = [row[name] for row in report.table]
    return [a / b if b > 0 else np.inf for a, b in zip(series[:-1], series[1:])]

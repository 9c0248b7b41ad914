"""
Command-line entry point.

Subcommands ``frenet``, ``simulate``, ``verify`` and ``convergence`` read a
scenario file and write CSV/SVG outputs plus ``manifest.json`` into
``--out``.  Exit status: 0 when every tolerance gate passes, 1 on numerical
failures or failed gates, 2 on invalid scenarios or arguments.
"""
import argparse
import os
import sys

from . import export, verify
from .errors import CurveError, DimensionTooSmall, EvolutionError, NumericalFailure, OrderTooHigh, ScenarioError
from .flow import evolve
from .frenet import check_nondegenerate, frenet_frame, frenet_residual, orthonormality_defect
from .scenario import load_scenario

ORTHONORMALITY_TOL = 1e-8


def thread_count():
    """Worker cap from ``FRENETFLOW_THREADS``; defaults to the CPU count."""
    raw = os.environ.get("FRENETFLOW_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ScenarioError(f"FRENETFLOW_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ScenarioError("FRENETFLOW_THREADS must be at least 1")
    return value


def _run(cfg, m=None, dt=None):
    t = cfg.time
    curve = cfg.build_curve(m)
    return evolve(curve, cfg.build_flow(curve.dim), t["T"], t["dt"] if dt is None else dt, t["scheme"], t["resample_every"])


def _variants(variant):
    return verify.VARIANTS if variant == "both" else (variant,)


def run_checks(traj, cfg, variant):
    """Verification report of the checks listed in the scenario."""
    v, tol = cfg.verify, cfg.tol
    trim, snaps = v["trim"], v["snapshots"]
    report = verify.VerificationReport("verification", params={"variant": variant})
    for name in v["checks"]:
        if name == "lemma":
            report.extend(verify.lemma_speed_residual(traj, trim, tol["lemma_speed"], snaps))
        elif name == "frame":
            report.extend(verify.frame_evolution_residual(traj, trim, tol["frame_evolution"], snaps))
        elif name == "psi":
            report.extend(verify.psi_antisymmetry(traj, tol["psi_antisymmetry"], snaps))
        elif name == "pde":
            report.extend(verify.curvature_pde_residual(traj, variant, trim, tol["curvature_pde"], snaps))
        elif name == "drift" and traj.flow.tangential == "constrained":
            report.extend(verify.drift_report(traj, tol["arclength_drift"]))
        elif name == "frenet":
            report.extend(verify.frenet_report(traj, tol["frenet"]))
    return report


def _study_checks(cfg, variant):
    """Scalar per-level quantities for a convergence study."""
    v = cfg.verify
    trim = v["trim"]
    checks = {}
    for name in v["checks"]:
        if name == "lemma":
            checks["lemma"] = lambda tr: max(r.max for r in verify.lemma_speed_residual(tr, trim).residuals)
        elif name == "frame":
            checks["frame"] = lambda tr: max(r.max for r in verify.frame_evolution_residual(tr, trim).residuals)
        elif name == "psi":
            checks["psi"] = lambda tr: max(r.max for r in verify.psi_antisymmetry(tr).residuals)
        elif name == "pde":
            for var in _variants(variant):
                checks[f"pde:{var}"] = lambda tr, var=var: max(
                    r.max for r in verify.curvature_pde_residual(tr, var, trim).residuals
                )
        elif name == "drift" and cfg.flow["tangential"] == "constrained":
            checks["drift"] = lambda tr: verify.drift_report(tr).residuals[0].max
        elif name == "frenet":
            checks["frenet"] = lambda tr: verify.frenet_report(tr).residuals[0].max
    return checks


def _manifest(out, command, cfg, outputs, results, variant=None):
    manifest = export.build_manifest(command, cfg.as_dict(), dict(cfg.tol), outputs, results, variant)
    export.write_manifest(manifest, os.path.join(out, "manifest.json"))


def _write_trajectory(out, cfg, traj, outputs):
    o = cfg.output
    if o["csv"]:
        export.export_csv(traj, os.path.join(out, "trajectory.csv"))
        outputs.append("trajectory.csv")
    if o["svg"]:
        export.export_svg_projection(traj, o["axes"], o["stride"], os.path.join(out, "trajectory.svg"))
        outputs.append("trajectory.svg")


def cmd_frenet(cfg, out, args):
    curve = cfg.build_curve()
    report = verify.VerificationReport("frenet frame", params={"m": curve.m, "topology": curve.topology})
    nd = check_nondegenerate(curve)
    fd = frenet_frame(curve)
    res = frenet_residual(fd)
    ortho = orthonormality_defect(fd)
    report.residuals += [
        verify.Residual("frenet", "-", res, res, cfg.tol["frenet"]),
        verify.Residual("orthonormality", "-", ortho, ortho, ORTHONORMALITY_TOL),
        verify.Residual("nondegeneracy ratio", "-", nd.min_ratio, nd.min_ratio),
    ]
    outputs = ["report.csv"]
    export.export_csv(report, os.path.join(out, "report.csv"))
    if cfg.output["csv"]:
        export.export_csv(fd, os.path.join(out, "frenet.csv"))
        outputs.append("frenet.csv")
    k = fd.curvatures
    results = {
        "passed": report.passed,
        "curvature_min": k.min(axis=1).tolist(),
        "curvature_max": k.max(axis=1).tolist(),
    }
    _manifest(out, "frenet", cfg, outputs, results)
    print(report.summary())
    return report.passed


def cmd_simulate(cfg, out, args):
    traj = _run(cfg)
    outputs = []
    _write_trajectory(out, cfg, traj, outputs)
    passed = True
    results = {"snapshots": len(traj)}
    if cfg.flow["tangential"] == "constrained" and "drift" in cfg.verify["checks"]:
        drift = verify.drift_report(traj, cfg.tol["arclength_drift"])
        passed = drift.passed
        results["relative_drift"] = drift.residuals[0].max
        print(drift.summary())
    results["passed"] = passed
    _manifest(out, "simulate", cfg, outputs, results)
    return passed


def cmd_verify(cfg, out, args):
    variant = args.variant or cfg.verify["variant"]
    traj = _run(cfg)
    report = run_checks(traj, cfg, variant)
    outputs = ["report.csv"]
    export.export_csv(report, os.path.join(out, "report.csv"))
    _write_trajectory(out, cfg, traj, outputs)
    _manifest(out, "verify", cfg, outputs, {"passed": report.passed}, variant)
    print(report.summary())
    return report.passed


def cmd_convergence(cfg, out, args):
    variant = args.variant or cfg.verify["variant"]
    cv = cfg.convergence
    dts = cv["dts"] or [cfg.time["dt"]]
    levels = max(len(cv["resolutions"]), len(dts))
    workers = min(thread_count(), levels)
    report = verify.convergence_study(
        lambda m, dt: _run(cfg, m, dt), cv["resolutions"], dts, _study_checks(cfg, variant), cv["parameter"], workers=workers
    )
    passed = True
    if cv["min_order"] is not None:
        for name, order in report.orders.items():
            if not isinstance(order, str) and not order >= cv["min_order"]:
                passed = False
    export.export_csv(report, os.path.join(out, "convergence.csv"))
    results = {"passed": passed, "orders": {k: v for k, v in report.orders.items()}}
    _manifest(out, "convergence", cfg, ["convergence.csv"], results, variant)
    print(report.summary())
    return passed


COMMANDS = {
    "frenet": (cmd_frenet, "frame and curvature report for the scenario curve"),
    "simulate": (cmd_simulate, "evolve the curve and export the trajectory"),
    "verify": (cmd_verify, "evolve the curve and report identity residuals"),
    "convergence": (cmd_convergence, "residuals and observed orders over a refinement sequence"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="frenetflow", description="Frenet-frame curve flows and their residual checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, help="scenario file (section.key = value lines)")
        p.add_argument("--out", default=".", help="output directory (created if missing)")
        p.add_argument("--seedless", action="store_true", help="accepted for compatibility; nothing here is random")
        if name in ("verify", "convergence"):
            p.add_argument("--variant", choices=verify.VARIANTS + ("both",), help="curvature equation variant(s)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = load_scenario(args.scenario)
        os.makedirs(args.out, exist_ok=True)
        passed = COMMANDS[args.command][0](cfg, args.out, args)
    except ScenarioError as exc:
        print(f"frenetflow: invalid scenario: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"frenetflow: {exc}", file=sys.stderr)
        return 2
    except (CurveError, OrderTooHigh, DimensionTooSmall) as exc:
        print(f"frenetflow: invalid input: {exc}", file=sys.stderr)
        return 2
    except EvolutionError as exc:
        print(f"frenetflow: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"frenetflow: numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())

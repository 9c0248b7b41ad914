"""
Scenario files: a line-oriented ``section.key = value`` format.

Example::

    # unit circle translated by a constrained flow
    curve.preset = circle
    curve.m = 256
    flow.f2 = cos
    flow.tangential = constrained
    time.T = 1
    time.dt = 1e-3

Blank lines and ``#`` comments are ignored.  Every key must be known;
unknown keys are errors.  Defaults live in :data:`DEFAULTS` and are echoed
in run manifests.
"""
import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import flow as flowmod
from . import geometry
from .errors import ScenarioSyntaxError, UnknownKey, ValidationError
from .verify import DEFAULT_TOLERANCES, VARIANTS

MAX_COMPONENTS = 8

PRESET_PARAMS = {
    "circle": {"r": float, "dim": int},
    "ellipse": {"a": float, "b": float, "dim": int},
    "helix": {"a": float, "b": float, "turns": int, "dim": int},
    "flat_torus": {"a": float, "b": float, "dim": int},
    "segment": {"start": "vector", "end": "vector"},
    "sine": {"amplitude": float, "omega": float, "length": float, "amplitude2": float, "dim": int},
    "points": {"file": str},
}
CURVE_KEYS = {"preset", "m", "topology", "arclength"} | {k for p in PRESET_PARAMS.values() for k in p}
CHECKS = ("lemma", "frame", "pde", "psi", "drift", "frenet")

DEFAULTS = {
    "curve": {"m": 256, "arclength": False},
    "flow": {"tangential": "explicit", "anchor": 0.0},
    "time": {"T": 1.0, "dt": 1e-3, "scheme": "rk4", "resample_every": 0},
    "verify": {"variant": "both", "trim": 0.0, "checks": list(CHECKS), "snapshots": None},
    "tol": dict(DEFAULT_TOLERANCES),
    "convergence": {"resolutions": [64, 128, 256], "dts": None, "parameter": None, "min_order": None},
    "output": {"csv": True, "svg": True, "axes": [1, 2], "stride": 100},
}

_LINE = re.compile(r"^\s*([A-Za-z_][\w]*(?:\.[A-Za-z_][\w]*)+)\s*=\s*(.*?)\s*$")
_CALL = re.compile(r"^([A-Za-z_]\w*)\s*(?:\((.*)\))?$")


@dataclass
class ScenarioConfig:
    curve: dict = field(default_factory=dict)
    flow: dict = field(default_factory=dict)
    time: dict = field(default_factory=dict)
    verify: dict = field(default_factory=dict)
    tol: dict = field(default_factory=dict)
    convergence: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    dim: int = 0

    def build_curve(self, m=None):
        c = dict(self.curve)
        preset = c.pop("preset")
        m_default = c.pop("m")
        m = m_default if m is None else m
        topology = c.pop("topology", None)
        arclength = c.pop("arclength", False)
        if preset == "points":
            data = np.loadtxt(c.pop("file"), delimiter=",", ndmin=2)
            curve = geometry.from_points(data, topology=topology or "open")
        else:
            curve = geometry.build_curve(preset, m, topology, **c)
        if arclength:
            curve = geometry.reparameterize_arclength(curve, curve.m)
        return curve

    def build_flow(self, dim):
        speeds = {}
        for key, expr in self.flow.items():
            if key.startswith("f"):
                speeds[int(key[1:])] = parse_component(expr, f"flow.{key}")
        return flowmod.FlowField.of(dim, speeds, self.flow["tangential"], self.flow["anchor"])

    def as_dict(self):
        """Plain, sorted representation used in manifests."""
        out = {
            name: {k: getattr(self, name)[k] for k in sorted(getattr(self, name))}
            for name in ("curve", "flow", "time", "verify", "tol", "convergence", "output")
        }
        out["dim"] = self.dim
        return out


# ------------------------------------------------------------- values


def _number(text, field_name):
    try:
        return float(text)
    except ValueError:
        raise ValidationError(field_name, f"expected a number, got {text!r}") from None


def _integer(text, field_name):
    value = _number(text, field_name)
    if not float(value).is_integer():
        raise ValidationError(field_name, f"expected an integer, got {text!r}")
    return int(value)


def _boolean(text, field_name):
    low = text.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValidationError(field_name, f"expected true/false, got {text!r}")


def _list(text):
    return [item.strip() for item in text.split(",") if item.strip()]


def _args(text, field_name):
    """Split ``a, b, name=c`` into positional floats and keyword floats."""
    pos, kw = [], {}
    for item in _list(text or ""):
        if "=" in item:
            k, v = item.split("=", 1)
            kw[k.strip()] = _number(v.strip(), field_name)
        else:
            pos.append(_number(item, field_name))
    return pos, kw


def parse_component(expr, field_name="flow.f"):
    """Turn a component string into a flow component.

    Accepted forms: ``zero``, a number, ``const(c)``, ``sin``/``cos`` with
    optional ``(omega, phase, amplitude)``, ``poly(c0, c1, ...)``, ``k1``,
    ``dk1``, ``k(j, factor)``, ``dk(j, factor)``, ``table(s0, v0, s1, v1, ...)``.
    """
    expr = expr.strip()
    try:
        return flowmod.Constant(float(expr))
    except ValueError:
        pass
    short = re.fullmatch(r"(d?)k(\d+)", expr)
    if short:
        cls = flowmod.CurvatureDerivative if short.group(1) else flowmod.Curvature
        return cls(int(short.group(2)))
    match = _CALL.match(expr)
    if not match:
        raise ValidationError(field_name, f"cannot parse flow component {expr!r}")
    name, argtext = match.group(1), match.group(2)
    pos, kw = _args(argtext, field_name)
    try:
        if name == "zero" and not pos and not kw:
            return flowmod.Zero()
        if name == "const":
            return flowmod.Constant(*pos, **kw)
        if name == "sin":
            return flowmod.Sine(*pos, **kw)
        if name == "cos":
            return flowmod.Cosine(*pos, **kw)
        if name == "poly" and pos and not kw:
            return flowmod.Polynomial(tuple(pos))
        if name in ("k", "dk"):
            index = int(pos[0]) if pos else int(kw.pop("index"))
            factor = pos[1] if len(pos) > 1 else kw.pop("factor", 1.0)
            cls = flowmod.CurvatureDerivative if name == "dk" else flowmod.Curvature
            return cls(index, factor)
        if name == "table" and len(pos) >= 4 and len(pos) % 2 == 0 and not kw:
            return flowmod.Tabulated(tuple(pos[0::2]), tuple(pos[1::2]))
    except (TypeError, KeyError, IndexError) as exc:
        raise ValidationError(field_name, f"bad arguments in {expr!r}: {exc}") from None
    raise ValidationError(field_name, f"unknown flow component {expr!r}")


# ------------------------------------------------------------- parsing


def _convert(section, key, text, line):
    fname = f"{section}.{key}"
    if section == "curve":
        if key not in CURVE_KEYS:
            raise UnknownKey(line, fname)
        if key in ("preset", "topology", "file"):
            return text
        if key == "m":
            return _integer(text, fname)
        if key == "arclength":
            return _boolean(text, fname)
        if key in ("start", "end"):
            return [_number(x, fname) for x in _list(text)]
        if key in ("dim", "turns"):
            return _integer(text, fname)
        return _number(text, fname)
    if section == "flow":
        if re.fullmatch(r"f[1-9]\d*", key):
            if int(key[1:]) > MAX_COMPONENTS:
                raise UnknownKey(line, fname)
            return text
        if key == "tangential":
            return text
        if key == "anchor":
            return _number(text, fname)
        raise UnknownKey(line, fname)
    if section == "time":
        if key in ("T", "dt"):
            return _number(text, fname)
        if key == "scheme":
            return text
        if key == "resample_every":
            return _integer(text, fname)
        raise UnknownKey(line, fname)
    if section == "verify":
        if key == "variant":
            return text
        if key == "trim":
            return _number(text, fname)
        if key == "checks":
            return _list(text)
        if key == "snapshots":
            return [_integer(x, fname) for x in _list(text)]
        raise UnknownKey(line, fname)
    if section == "tol":
        if key in DEFAULT_TOLERANCES:
            return _number(text, fname)
        raise UnknownKey(line, fname)
    if section == "convergence":
        if key == "resolutions":
            return [_integer(x, fname) for x in _list(text)]
        if key == "dts":
            return [_number(x, fname) for x in _list(text)]
        if key == "parameter":
            return text
        if key == "min_order":
            return _number(text, fname)
        raise UnknownKey(line, fname)
    if section == "output":
        if key in ("csv", "svg"):
            return _boolean(text, fname)
        if key == "axes":
            return [_integer(x, fname) for x in _list(text)]
        if key == "stride":
            return _integer(text, fname)
        raise UnknownKey(line, fname)
    raise UnknownKey(line, fname)


def parse_scenario(text):
    """Parse and validate scenario text; returns a :class:`ScenarioConfig`."""
    values = {name: {} for name in DEFAULTS}
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise ScenarioSyntaxError(lineno, f"expected 'section.key = value', got {raw.strip()!r}")
        dotted, value = match.groups()
        if value == "":
            raise ScenarioSyntaxError(lineno, f"missing value for {dotted}")
        parts = dotted.split(".")
        if parts[0] == "verify" and len(parts) == 3 and parts[1] == "tol":
            parts = ["tol", parts[2]]
        if len(parts) != 2 or parts[0] not in values:
            raise UnknownKey(lineno, dotted)
        section, key = parts
        if dotted in seen:
            raise ScenarioSyntaxError(lineno, f"duplicate key {dotted} (first set on line {seen[dotted]})")
        seen[dotted] = lineno
        values[section][key] = _convert(section, key, value, lineno)
    cfg = ScenarioConfig(**{name: {**DEFAULTS[name], **values[name]} for name in DEFAULTS})
    _validate(cfg)
    return cfg


def load_scenario(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _validate(cfg):
    c = cfg.curve
    if "preset" not in c:
        raise ValidationError("curve.preset", "missing")
    preset = c["preset"]
    if preset not in PRESET_PARAMS:
        raise ValidationError("curve.preset", f"unknown preset {preset!r}; choose from {sorted(PRESET_PARAMS)}")
    for key in c:
        if key not in ("preset", "m", "topology", "arclength") and key not in PRESET_PARAMS[preset]:
            raise ValidationError(f"curve.{key}", f"not a parameter of preset {preset!r}")
    if preset == "points" and "file" not in c:
        raise ValidationError("curve.file", "missing (required by preset 'points')")
    if c.get("topology") not in (None, "open", "closed"):
        raise ValidationError("curve.topology", "must be 'open' or 'closed'")
    if c["m"] < 4:
        raise ValidationError("curve.m", "must be at least 4")
    for key in ("r", "a", "b", "omega", "length", "turns"):
        if key in c and not c[key] > 0:
            raise ValidationError(f"curve.{key}", "must be positive")
    try:
        curve = cfg.build_curve()
    except (ValueError, OSError) as exc:
        raise ValidationError("curve", str(exc)) from None
    dim = cfg.dim = curve.dim

    f = cfg.flow
    if f["tangential"] not in ("explicit", "constrained"):
        raise ValidationError("flow.tangential", "must be 'explicit' or 'constrained'")
    for key in [k for k in f if k.startswith("f")]:
        if int(key[1:]) > dim:
            raise ValidationError(f"flow.{key}", f"index exceeds the curve dimension {dim}")
        if key == "f1" and f["tangential"] == "constrained":
            raise ValidationError("flow.f1", "must be omitted when flow.tangential = constrained")
        parse_component(f[key], f"flow.{key}")

    t = cfg.time
    for key in ("T", "dt"):
        if not t[key] > 0:
            raise ValidationError(f"time.{key}", "must be positive")
    steps = round(t["T"] / t["dt"])
    if steps < 1 or abs(steps * t["dt"] - t["T"]) > 1e-9 * t["T"]:
        raise ValidationError("time.T", "must be an integer multiple of time.dt")
    if t["scheme"] not in flowmod.SCHEMES:
        raise ValidationError("time.scheme", f"must be one of {flowmod.SCHEMES}")
    if t["resample_every"] < 0:
        raise ValidationError("time.resample_every", "must be >= 0")

    v = cfg.verify
    if v["variant"] not in VARIANTS + ("both",):
        raise ValidationError("verify.variant", "must be statement, proof or both")
    if not 0 <= v["trim"] < 0.5:
        raise ValidationError("verify.trim", "must lie in [0, 0.5)")
    for name in v["checks"]:
        if name not in CHECKS:
            raise ValidationError("verify.checks", f"unknown check {name!r}; choose from {CHECKS}")
    for key, value in cfg.tol.items():
        if not (value > 0 and math.isfinite(value)):
            raise ValidationError(f"tol.{key}", "must be positive")

    cv = cfg.convergence
    if len(cv["resolutions"]) < 1 or any(m < 4 for m in cv["resolutions"]):
        raise ValidationError("convergence.resolutions", "need sample counts of at least 4")
    if cv["dts"] is not None and any(not x > 0 for x in cv["dts"]):
        raise ValidationError("convergence.dts", "must be positive")
    if cv["parameter"] not in (None, "h", "dt"):
        raise ValidationError("convergence.parameter", "must be 'h' or 'dt'")

    o = cfg.output
    if len(o["axes"]) != 2 or any(not 1 <= a <= dim for a in o["axes"]):
        raise ValidationError("output.axes", f"need two axes in 1..{dim}")
    if o["stride"] < 1:
        raise ValidationError("output.stride", "must be at least 1")

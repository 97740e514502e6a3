"""Command-line front end.

    hamlift derive    --m 1 --k 0 --kind complete --H "z_1*zb_1"
    hamlift lift      --object field --m 1 --k 2 --kind complete --field "t=1,z_1=zb_1"
    hamlift integrate --m 1 --k 0 --H "z_1*zb_1" --init "z_1=1,zb_1=1" --dt 1e-3 --t-end 10 --out run.csv
    hamlift check     --m 1 --k 1 --out report.json

Exit codes: 0 success, 1 domain error (parse or validation), 2 numeric
failure. Errors are reported on stderr as one JSON object and no partial
output files are left behind.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass

from .checks import run_checks
from .errors import DomainError, HamliftError, ParseError, UnknownVariable
from .flow import IntegratorConfig, energy_drift, integrate
from .hamilton import emit_equations, solve_hamiltonian_field
from .lifts import LiftKind, as_kind, lift_function, lift_one_form, lift_vector_field
from .manifold import CoordSystem, OneForm, VectorField, field_text, form_text
from .parse import parse_bindings, parse_expression
from .symcore import eval_numeric

__all__ = ["parse_expression", "RunSpec", "run", "main", "build_parser"]

DEFAULTS = {
    "m": 1,
    "k": 0,
    "kind": "complete",
    "method": "rk4",
    "dt": 1e-3,
    "t_start": 0.0,
    "t_end": 1.0,
    "object": "function",
    "instances": 10,
    "seed": 0,
}
DEFAULT_FORMAT = {"derive": "json", "lift": "text", "integrate": "csv", "check": "json"}
FORMATS = {"derive": ("json", "csv"), "lift": ("text", "json"), "integrate": ("csv", "json"),
           "check": ("json",)}


@dataclass
class RunSpec:
    command: str
    m: int = 1
    k: int = 0
    kind: str = "complete"
    H: str | None = None
    init: str | None = None
    field: str | None = None
    form: str | None = None
    object: str = "function"
    lift_H: bool = False
    method: str = "rk4"
    dt: float = 1e-3
    t_start: float = 0.0
    t_end: float = 1.0
    instances: int = 10
    seed: int = 0
    out: str | None = None
    summary: str | None = None
    format: str | None = None

    def __post_init__(self):
        if self.command not in DEFAULT_FORMAT:
            raise DomainError(f"unknown command {self.command!r}")
        if self.m < 1 or self.k < 0:
            raise DomainError("need m >= 1 and k >= 0")
        as_kind(self.kind)
        self.format = self.format or DEFAULT_FORMAT[self.command]
        if self.format not in FORMATS[self.command]:
            raise DomainError(f"{self.command} does not support --format {self.format}")

    @property
    def chart(self) -> CoordSystem:
        return CoordSystem(self.m, self.k)


# --------------------------------------------------------------------------
# commands; each returns the primary text and optional extra {path: text}


def _require(value, flag):
    if value is None:
        raise DomainError(f"{flag} is required")
    return value


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _hamiltonian(spec: RunSpec, chart: CoordSystem):
    """--H on the chart, or on the base chart and lifted when --lift-H is set."""
    text = _require(spec.H, "--H")
    if spec.lift_H:
        return lift_function(parse_expression(text, chart.base()), spec.kind, chart)
    return parse_expression(text, chart)


def _derive(spec: RunSpec):
    chart = spec.chart
    H = _hamiltonian(spec, chart)
    eqs = emit_equations(solve_hamiltonian_field(H, chart, spec.kind))
    if spec.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["coord", "rhs"])
        for c, e in eqs.equations:
            w.writerow([str(c), str(e)])
        return buf.getvalue(), {}
    return _dump(eqs.as_dict()), {}


def _lift(spec: RunSpec):
    target = spec.chart
    base = target.base()
    kind = LiftKind(as_kind(spec.kind), target.k) if target.k else as_kind(spec.kind)
    if spec.object == "function":
        f = parse_expression(_require(spec.H, "--H"), base)
        lifted = lift_function(f, kind, target)
        text, comps = str(lifted), None
    elif spec.object == "field":
        Z = VectorField(base, parse_bindings(_require(spec.field, "--field"), base))
        lifted = lift_vector_field(Z, kind, target)
        text, comps = field_text(lifted), lifted.items()
    elif spec.object == "form":
        omega = OneForm(base, parse_bindings(_require(spec.form, "--form"), base))
        lifted = lift_one_form(omega, kind, target)
        text, comps = form_text(lifted), lifted.items()
    else:
        raise DomainError(f"unknown lift object {spec.object!r} (function, field or form)")
    if spec.format == "json":
        doc = {"chart": {"m": target.m, "k": target.k}, "kind": as_kind(spec.kind).value,
               "object": spec.object, "text": text}
        if comps is not None:
            doc["components"] = {str(c): str(v) for c, v in comps}
        return _dump(doc), {}
    return text + "\n", {}


def _initial_state(spec: RunSpec, chart: CoordSystem):
    bindings = parse_bindings(_require(spec.init, "--init"), chart)
    missing = [str(c) for c in chart.fiber() if c not in bindings]
    if missing:
        raise DomainError(f"--init must bind every fiber coordinate; missing {', '.join(missing)}")
    out = {}
    for c, e in bindings.items():
        if c.is_time:
            raise DomainError("t is set by --t-start, not --init")
        if not e.is_constant:
            raise DomainError(f"initial value of {c} is not a constant: {e}")
        out[c] = eval_numeric(e, {})
    return out


def _integrate(spec: RunSpec):
    chart = spec.chart
    H = _hamiltonian(spec, chart)
    system = solve_hamiltonian_field(H, chart, spec.kind)
    cfg = IntegratorConfig(method=spec.method, dt=spec.dt, t_start=spec.t_start, t_end=spec.t_end)
    traj = integrate(system, _initial_state(spec, chart), cfg)
    final = traj.states[-1]
    summary = {
        "chart": {"m": chart.m, "k": chart.k},
        "kind": as_kind(spec.kind).value,
        "H": str(H),
        "method": cfg.method,
        "dt": cfg.dt,
        "t_start": cfg.t_start,
        "t_end": cfg.t_end,
        "steps": len(traj) - 1,
        "energy_drift": energy_drift(traj),
        "final_state": {str(c): [final[c].real, final[c].imag] for c in chart.fiber()},
        "unconstrained": [str(c) for c in system.unconstrained],
    }
    if spec.format == "json":
        rows = [{"t": t, **{str(c): [s[c].real, s[c].imag] for c in chart.fiber()},
                 "H": [h.real, h.imag]} for t, s, h in zip(traj.times, traj.states, traj.energies)]
        return _dump({"summary": summary, "trajectory": rows}), {}
    extra = {}
    summary_path = spec.summary or (spec.out + ".summary.json" if spec.out else None)
    if summary_path:
        extra[summary_path] = _dump(summary)
    else:
        extra[None] = _dump(summary)
    return traj.to_csv(), extra


def _check(spec: RunSpec):
    return _dump(run_checks(spec.m, spec.k, spec.instances, spec.seed)), {}


COMMANDS = {"derive": _derive, "lift": _lift, "integrate": _integrate, "check": _check}


# --------------------------------------------------------------------------
# output handling


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hamlift-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _commit(files: dict, stdout, stderr):
    """Write every output or none of them."""
    written = []
    try:
        for path, text in files.items():
            if path in ("-", "stdout"):
                continue
            if path is not None:
                _atomic_write(path, text)
                written.append(path)
    except OSError:
        for path in written:
            os.unlink(path)
        raise
    if "stdout" in files:
        stdout.write(files["stdout"])
    if None in files:
        stderr.write(files[None])


def run(spec: RunSpec, stdout=None, stderr=None) -> int:
    """Execute ``spec``; returns the process exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        primary, extra = COMMANDS[spec.command](spec)
        files = {spec.out if spec.out else "stdout": primary, **extra}
        _commit(files, stdout, stderr)
        return 0
    except HamliftError as exc:
        stderr.write(json.dumps(diagnostic(exc)) + "\n")
        return exc.exit_code
    except OSError as exc:
        stderr.write(json.dumps({"error": "OutputError", "message": str(exc), "exit_code": 1}) + "\n")
        return 1


def diagnostic(exc: HamliftError) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
    if isinstance(exc, ParseError):
        out["position"] = exc.position
        out["expected"] = sorted(exc.expected)
    if isinstance(exc, UnknownVariable):
        out["name"] = exc.name
        out["position"] = exc.position
    return out


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hamlift", description="Lifted complex Hamiltonian systems on jet extensions.")
    sub = p.add_subparsers(dest="command", required=True)

    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file of default option values (flags override)")
    common.add_argument("--m", type=int, help="fiber complex dimension (default 1)")
    common.add_argument("--k", type=int, help="extension order (default 0)")
    common.add_argument("--kind", choices=("vertical", "complete"), help="lift kind (default complete)")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", help="output format; see the command help")

    ham = _Parser(add_help=False)
    ham.add_argument("--H", help="Hamiltonian expression")
    ham.add_argument("--lift-H", dest="lift_H", action="store_true", default=None,
                     help="read --H on the base chart and lift it by --kind first")

    d = sub.add_parser("derive", parents=[common, ham], help="emit Hamiltonian equations as JSON (or csv)")
    d.set_defaults(command="derive")

    lf = sub.add_parser("lift", parents=[common], help="lift a function, field or form (text or json)")
    lf.add_argument("--object", choices=("function", "field", "form"))
    lf.add_argument("--H", help="base function (for --object function)")
    lf.add_argument("--field", help='base field components, e.g. "t=1,z_1=zb_1"')
    lf.add_argument("--form", help='base form components, e.g. "t=1,z_1=zb_1"')

    it = sub.add_parser("integrate", parents=[common, ham], help="integrate the equations (csv or json)")
    it.add_argument("--init", help='initial values, e.g. "z0_1=1+0i,zb0_1=1-0i"')
    it.add_argument("--dt", type=float)
    it.add_argument("--t-start", dest="t_start", type=float)
    it.add_argument("--t-end", dest="t_end", type=float)
    it.add_argument("--method", choices=("rk4", "euler"))
    it.add_argument("--summary", help="summary JSON path (default <out>.summary.json, else stderr)")

    ch = sub.add_parser("check", parents=[common], help="run the verification suites (json)")
    ch.add_argument("--instances", type=int, help="random instances per suite (default 10)")
    ch.add_argument("--seed", type=int, help="corpus seed (default 0)")
    return p


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise DomainError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def spec_from_args(argv) -> RunSpec:
    ns = vars(build_parser().parse_args(argv))
    config = _load_config(ns.pop("config", None))
    command = ns.pop("command")
    known = set(RunSpec.__dataclass_fields__) - {"command"}
    unknown = set(config) - known
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
    values = {**DEFAULTS, **config, **{k: v for k, v in ns.items() if v is not None}}
    values = {k: v for k, v in values.items() if k in known}
    return RunSpec(command=command, **values)


def main(argv=None) -> int:
    try:
        spec = spec_from_args(argv)
    except HamliftError as exc:
        sys.stderr.write(json.dumps(diagnostic(exc)) + "\n")
        return exc.exit_code
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())

"""Fixed-step integration of the derived Hamiltonian equations.

States are integrated as complex numbers; z and zb are independent state
components (their conjugate relation is checked by the test suite, never
enforced here).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DomainError, EvaluationFailure, NonFiniteState, UnboundCoordinate
from .hamilton import HamiltonianSystem
from .manifold import CoordSystem
from .symcore import T, Coord, compile_exprs, isfinite


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"
    dt: float = 1e-3
    t_start: float = 0.0
    t_end: float = 1.0

    def __post_init__(self):
        if self.method not in ("rk4", "euler"):
            raise DomainError(f"unknown method {self.method!r} (rk4 or euler)")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError("dt must be a positive finite number")
        if not self.t_start < self.t_end:
            raise DomainError("need t_start < t_end")
        if self.dt > self.t_end - self.t_start:
            raise DomainError("dt exceeds the integration interval")

    @property
    def steps(self) -> int:
        return max(1, math.ceil((self.t_end - self.t_start) / self.dt - 1e-9))


@dataclass
class Trajectory:
    chart: CoordSystem
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    energies: list = field(default_factory=list)

    def __len__(self):
        return len(self.times)

    def column(self, c: Coord) -> list:
        return [s[c] for s in self.states]

    def to_csv(self) -> str:
        coords = self.chart.fiber()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["t"]
        for c in coords:
            header += [f"re({c})", f"im({c})"]
        w.writerow(header + ["re(H)", "im(H)"])
        for t, s, h in zip(self.times, self.states, self.energies):
            row = [repr(t)]
            for c in coords:
                row += [repr(s[c].real), repr(s[c].imag)]
            w.writerow(row + [repr(h.real), repr(h.imag)])
        return buf.getvalue()


def integrate(sys: HamiltonianSystem, initial: Mapping[Coord, complex], cfg: IntegratorConfig) -> Trajectory:
    chart = sys.chart
    coords = chart.enumerate()
    fiber = chart.fiber()
    missing = [c for c in fiber if c not in initial]
    if missing:
        raise DomainError(f"initial condition misses {', '.join(map(str, missing))}")
    try:
        rhs = compile_exprs([sys.field_rhs(c) for c in fiber], coords)
        energy = compile_exprs([sys.H], coords)
    except UnboundCoordinate as exc:
        raise EvaluationFailure(str(exc)) from exc

    def f(t, x):
        try:
            return rhs([t] + x)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise EvaluationFailure(f"right-hand side failed at t={t}: {exc}") from exc

    def H(t, x):
        try:
            return energy([t] + x)[0]
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise EvaluationFailure(f"energy failed at t={t}: {exc}") from exc

    x = [complex(initial[c]) for c in fiber]
    t = float(cfg.t_start)
    traj = Trajectory(chart)

    def record(step, t, x):
        for c, v in zip(fiber, x):
            if not isfinite(v):
                raise NonFiniteState(step, c)
        state = {T: complex(t)}
        state.update(zip(fiber, x))
        traj.times.append(t)
        traj.states.append(state)
        traj.energies.append(H(t, x))

    record(0, t, x)
    n = cfg.steps
    for step in range(1, n + 1):
        t_next = cfg.t_end if step == n else cfg.t_start + step * cfg.dt
        h = t_next - t
        if cfg.method == "euler":
            k1 = f(t, x)
            x = [xi + h * a for xi, a in zip(x, k1)]
        else:
            k1 = f(t, x)
            k2 = f(t + h / 2, [xi + h / 2 * a for xi, a in zip(x, k1)])
            k3 = f(t + h / 2, [xi + h / 2 * a for xi, a in zip(x, k2)])
            k4 = f(t + h, [xi + h * a for xi, a in zip(x, k3)])
            x = [xi + h / 6 * (a + 2 * b + 2 * c + d)
                 for xi, a, b, c, d in zip(x, k1, k2, k3, k4)]
        t = t_next
        record(step, t, x)
    return traj


def energy_drift(traj: Trajectory) -> float:
    if not traj.energies:
        raise DomainError("empty trajectory")
    h0 = traj.energies[0]
    scale = max(abs(h0), 1e-12)
    return max(abs(h - h0) for h in traj.energies) / scale

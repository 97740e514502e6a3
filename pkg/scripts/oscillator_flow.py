"""Convergence and conservation study on the complex oscillator H = z zb.

Integrates dz/dt = -i z with RK4 and Euler over a ladder of step sizes,
reports the max error against exp(-i t) z(0), the energy drift and the
observed order between consecutive step sizes.

    python3 scripts/oscillator_flow.py --t-end 10 --out-dir runs/
"""
import argparse
import cmath
import math
import os
import time

from hamlift.flow import IntegratorConfig, energy_drift, integrate
from hamlift.hamilton import solve_hamiltonian_field
from hamlift.lifts import Kind
from hamlift.manifold import CoordSystem
from hamlift.parse import parse_expression
from hamlift.symcore import z, zb


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-end", type=float, default=10.0)
    ap.add_argument("--dts", type=float, nargs="+", default=[0.1, 0.05, 0.025, 0.0125, 1e-3])
    ap.add_argument("--out-dir", help="write one trajectory CSV per run here")
    args = ap.parse_args()

    chart = CoordSystem(1, 0)
    sys = solve_hamiltonian_field(parse_expression("z_1*zb_1", chart), chart, Kind.COMPLETE)
    init = {z(0, 1): 1 + 0j, zb(0, 1): 1 - 0j}
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)

    print(f"{'method':6} {'dt':>8} {'steps':>6} {'max error':>10} {'drift':>10} {'order':>6} {'sec':>6}")
    for method in ("rk4", "euler"):
        previous = None
        for dt in args.dts:
            start = time.perf_counter()
            traj = integrate(sys, init, IntegratorConfig(method, dt, 0.0, args.t_end))
            elapsed = time.perf_counter() - start
            err = max(abs(s[z(0, 1)] - cmath.exp(-1j * t)) for t, s in zip(traj.times, traj.states))
            order = "" if previous is None else f"{math.log(previous[1] / err) / math.log(previous[0] / dt):.2f}"
            print(f"{method:6} {dt:8.4g} {len(traj) - 1:6d} {err:10.2e} {energy_drift(traj):10.2e} "
                  f"{order:>6} {elapsed:6.2f}")
            previous = (dt, err)
            if args.out_dir:
                with open(os.path.join(args.out_dir, f"oscillator_{method}_{dt:g}.csv"), "w") as fh:
                    fh.write(traj.to_csv())


if __name__ == "__main__":
    main()

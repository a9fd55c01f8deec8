"""Time the hot kernels with numba and with the plain-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each backend runs in its own subprocess because the switch is read at import
time. Compilation happens in a warm-up call that is not timed.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from doubleroot import kernels
from doubleroot._accel import USE_NUMBA
from doubleroot.presets import get_preset
from doubleroot.solver import SolveRequest, solve

repeat = int(sys.argv[1])
p = get_preset("example-3.5-mbar3")
spec, init = p.spec, p.initial
kinds, rates = spec.kernel_arrays()
x, v = init.positions, init.velocities
out = np.empty_like(x)
y0 = init.as_vector()
t_grid = np.linspace(0.0, 1.0, 201)
traj = np.empty((t_grid.size, y0.size), dtype=np.complex128)
coeffs = np.array([1.0, 0.3 - 1j, -2.0, 0.5j, 1.5, -0.7 + 0.2j], dtype=np.complex128)
found = np.empty(5, dtype=np.complex128)

def rhs():
    kernels.zero_accelerations(x, v, spec.mbar, kinds, rates, spec.omega, 1e-8, out)

def dopri():
    kernels.dopri_integrate(y0, t_grid, spec.N, spec.mbar, kinds, rates, spec.omega, 1e-8,
                            1e-10, 1e-12, 0.0, np.inf, 1e-14, 10**6, traj)

def aberth():
    kernels.aberth(coeffs, found, 500)

def solver():
    solve(SolveRequest(spec, init, t_grid))

cases = {"zero_accelerations": (rhs, 2000), "dopri_integrate [0,1]": (dopri, 3),
         "aberth degree 5": (aberth, 2000), "solve 201 samples": (solver, 1)}
result = {}
for name, (fn, inner) in cases.items():
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn()
        best = min(best, (time.perf_counter() - t0) / inner)
    result[name] = best
print(json.dumps({"numba": USE_NUMBA, "times": result}))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, DOUBLEROOT_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jit = run(False, args.repeat)
    py = run(True, args.repeat)
    print(f"{'kernel':24s} {'numba':>12s} {'numpy':>12s} {'speedup':>8s}")
    for name, t_jit in jit["times"].items():
        t_py = py["times"][name]
        print(f"{name:24s} {t_jit * 1e6:10.1f}us {t_py * 1e6:10.1f}us {t_py / t_jit:7.1f}x")


if __name__ == "__main__":
    main()

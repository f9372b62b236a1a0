"""Wall-time comparison of the compiled and numpy kernels.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from genburgers import kernels
from genburgers.model import ProblemSpec
from genburgers.oracle import FDConfig, solve_fd
from genburgers.validation import two_state_spec
from genburgers.viscous import ViscousConfig, evaluate_viscous_grid


def viscous_workload():
    spec = ProblemSpec.box([1.0, -0.5], [1.0, 0.4], 1.0)
    xs = np.linspace(-4, 6, 401)
    evaluate_viscous_grid(spec, ViscousConfig(0.01), xs, 2.0)


def viscous_large_t():
    spec = two_state_spec()
    xs = np.linspace(-2000, 2000, 401)
    evaluate_viscous_grid(spec, ViscousConfig(1.0), xs, 1e4)


def fd_workload():
    spec = ProblemSpec.box([1.0], [1.0], 1.0)
    solve_fd(spec, 0.1, FDConfig(-20.0, 20.0, 4001, 1.0))


WORKLOADS = {
    "viscous grid (401 pts, nu=0.01)": viscous_workload,
    "viscous grid (401 pts, t=1e4)": viscous_large_t,
    "fd oracle (nx=4001, t=1)": fd_workload,
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    before = kernels.BACKEND
    print(f"{'workload':36s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    try:
        for name, fn in WORKLOADS.items():
            row = {}
            for b in backends:
                kernels.set_backend(b)
                row[b] = best_of(fn, args.repeat)
            line = f"{name:36s}" + "".join(f"{row[b]:11.3f}s" for b in backends)
            if len(backends) > 1:
                line += f"{row['python'] / row['compiled']:11.1f}x"
            print(line)
    finally:
        kernels.set_backend(before)


if __name__ == "__main__":
    main()

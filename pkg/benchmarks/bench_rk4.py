"""Compare the compiled and pure-Python RK4 kernels on Eqs. (37)-(38).

Usage: python benchmarks/bench_rk4.py [--steps N]
"""
import argparse
import time

import numpy as np

from fwt.dynamics.fields import FieldConfig, SimState
from fwt.dynamics.integrate import KERNEL, integrate


def run(kernel, steps):
    cfg = FieldConfig(E0=(0.01, 0.0, 0.0), B0=(0.0, 0.0, 0.5), dB=((0.0, 0.0, 0.01), (0.0, 0.0, 0.0), (0.01, 0.0, 0.0)),
                      n_amp=1.0, n_width=5.0, xi_matter=(0.0, 0.0, 1.0), mu1=0.1, G=1e-3, C1=0.5, C2=0.5)
    s0 = SimState(pi=(0.3, 0.0, 0.1), xi=(1.0, 0.0, 0.0))
    t0 = time.perf_counter()
    tr = integrate(cfg, s0, steps * 0.01, 0.01, kernel=kernel)
    return time.perf_counter() - t0, tr.y[-1]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=100_000)
    args = ap.parse_args()
    print(f"default kernel: {KERNEL}")
    tp, yp = run("python", args.steps)
    print(f"python : {args.steps} steps in {tp:.3f} s ({args.steps / tp:,.0f} steps/s)")
    if KERNEL == "cython":
        tc, yc = run("cython", args.steps)
        print(f"cython : {args.steps} steps in {tc:.3f} s ({args.steps / tc:,.0f} steps/s)")
        print(f"speedup: {tp / tc:.1f}x, max state difference {np.max(np.abs(yp - yc)):.2e}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled polynomial kernels against the pure-Python fallback.

Times the three kernel entry points on the quartic built-in metric, checks
that both backends agree numerically, and (with --pipeline) times a full
geometry+curvature+FD workload under each backend in subprocesses.

Usage: python benchmarks/bench_kernels.py [--pipeline]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from mrootgeom import _kernels_py as fallback
from mrootgeom.metric import make_bg4

try:
    from mrootgeom import _speedups as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat=5):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_benchmarks():
    metric = make_bg4()
    exps, coeffs = metric._exps, metric._coeffs
    rng = np.random.default_rng(0)
    y = rng.uniform(-3.0, 3.0, size=4)
    ys = rng.uniform(-3.0, 3.0, size=(200_000, 4))

    cases = [
        ("poly_eval x20000", lambda mod: [mod.poly_eval(exps, coeffs, y) for _ in range(20_000)]),
        ("poly_eval_batch 200k", lambda mod: mod.poly_eval_batch(exps, coeffs, ys)),
        (
            "derivative order 2 x2000",
            lambda mod: [mod.poly_derivative_dense(exps, coeffs, y, 2) for _ in range(2000)],
        ),
        (
            "derivative order 4 x2000",
            lambda mod: [mod.poly_derivative_dense(exps, coeffs, y, 4) for _ in range(2000)],
        ),
    ]

    print(f"{'benchmark':<26} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, runner in cases:
        t_py = best_of(lambda: runner(fallback))
        if compiled is None:
            print(f"{name:<26} {t_py * 1e3:9.2f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_cy = best_of(lambda: runner(compiled))
        print(f"{name:<26} {t_py * 1e3:9.2f}ms {t_cy * 1e3:9.2f}ms {t_py / t_cy:7.1f}x")

    if compiled is not None:
        worst = 0.0
        for order in range(5):
            a = np.asarray(compiled.poly_derivative_dense(exps, coeffs, y, order))
            b = np.asarray(fallback.poly_derivative_dense(exps, coeffs, y, order))
            scale = 1.0 + np.abs(b).max()
            worst = max(worst, np.abs(a - b).max() / scale)
        batch_gap = np.abs(
            compiled.poly_eval_batch(exps, coeffs, ys[:1000])
            - fallback.poly_eval_batch(exps, coeffs, ys[:1000])
        ).max() / (1.0 + np.abs(ys[:1000]).max() ** 4)
        print(f"\nbackend agreement: max rel gap {max(worst, batch_gap):.2e}")
    else:
        print("\ncompiled extension not built; showing fallback timings only")


PIPELINE_SNIPPET = """
import time
from fractions import Fraction
import numpy as np
import mrootgeom as mg
from mrootgeom.verify import sample_regular_directions, BUILTIN_FORMS

metric = mg.make_bg4()
rng = np.random.default_rng(0)
points = sample_regular_directions(metric, 100, rng, BUILTIN_FORMS["bg4"])
handle = mg.PolyPower(metric, Fraction(1, 2))
t0 = time.perf_counter()
for y in points:
    pt = mg.geometry_point(metric, y)
    mg.curvature_bundle(pt)
for y in points[:20]:
    mg.fd_tensor(handle, y, 4)
print(f"{mg.KERNEL_BACKEND} {time.perf_counter() - t0:.3f}")
"""


def pipeline_benchmark():
    print("\nfull pipeline (100 curvature bundles + 20 order-4 FD tensors):")
    for backend in ("python", "compiled"):
        if backend == "compiled" and compiled is None:
            print("  compiled: extension not built")
            continue
        env = dict(os.environ, MROOTGEOM_KERNELS=backend)
        out = subprocess.run(
            [sys.executable, "-c", PIPELINE_SNIPPET], capture_output=True, text=True, env=env
        )
        if out.returncode != 0:
            print(f"  {backend}: failed\n{out.stderr}")
            continue
        name, seconds = out.stdout.split()
        print(f"  {name:<9} {float(seconds) * 1e3:8.1f}ms")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pipeline", action="store_true", help="also time the full pipeline")
    args = parser.parse_args()
    kernel_benchmarks()
    if args.pipeline:
        pipeline_benchmark()

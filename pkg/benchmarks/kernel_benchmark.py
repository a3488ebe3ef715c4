#!/usr/bin/env python3
"""Benchmark the compiled step kernels against the pure-numpy fallback.

Times the chemotactic divergence and the reaction terms on 1D and 2D grids
of increasing size, then one full simulation step per backend.

Usage: python benchmarks/kernel_benchmark.py [--repeats N]
"""

import argparse
import timeit

import numpy as np

from reactlab import ModelParams, SimConfig, initialize
from reactlab import _kernels_py as python_backend
from reactlab.pde import Stepper

try:
    from reactlab import _kernels as compiled_backend
except ImportError:
    compiled_backend = None


def best_of(fn, repeats):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeats, number)) / number


def bench_kernels(repeats):
    p = ModelParams()
    rng = np.random.default_rng(0)
    cases = []
    for n in (75, 300, 1200):
        u, v = rng.random(n) + 4.0, rng.random(n) + 4.0
        cases.append((f"chemo_div_1d n={n}", "chemo_div_1d", (u, v, 0.2, True)))
    for n in (75, 150, 300):
        u = rng.random((n, n)) + 4.0
        v = rng.random((n, n)) + 4.0
        cases.append((f"chemo_div_2d {n}x{n}", "chemo_div_2d", (u, v, 0.2, True)))
        cases.append(
            (f"reaction {n}x{n}", "reaction_terms", (u, v, p.k1, p.k2, p.q, p.c))
        )

    print(f"{'kernel':<24}{'python':>12}{'cython':>12}{'speedup':>10}")
    for label, name, args in cases:
        t_py = best_of(lambda: getattr(python_backend, name)(*args), repeats)
        if compiled_backend is None:
            print(f"{label:<24}{t_py * 1e6:>10.1f}us{'n/a':>12}{'':>10}")
            continue
        t_cy = best_of(lambda: getattr(compiled_backend, name)(*args), repeats)
        print(
            f"{label:<24}{t_py * 1e6:>10.1f}us{t_cy * 1e6:>10.1f}us"
            f"{t_py / t_cy:>9.2f}x"
        )


def bench_full_step(repeats):
    import reactlab.kernels as kernels

    p = ModelParams()
    cfg = SimConfig(dim=2, nx=150, dt=0.005, eta=0.01)
    results = {}
    backends = {"python": python_backend}
    if compiled_backend is not None:
        backends["cython"] = compiled_backend
    original = (kernels.chemo_div_1d, kernels.chemo_div_2d, kernels.reaction_terms)
    try:
        for name, mod in backends.items():
            kernels.chemo_div_1d = mod.chemo_div_1d
            kernels.chemo_div_2d = mod.chemo_div_2d
            kernels.reaction_terms = mod.reaction_terms
            stepper = Stepper(p, cfg)
            state = initialize(p, cfg)
            results[name] = best_of(lambda: stepper.step(state), repeats)
    finally:
        kernels.chemo_div_1d, kernels.chemo_div_2d, kernels.reaction_terms = original

    print()
    print(f"full 2D step, 150x150 grid ({', '.join(results)}):")
    for name, t in results.items():
        print(f"  {name:<8}{t * 1e6:>10.1f} us/step")
    if len(results) == 2:
        print(f"  speedup {results['python'] / results['cython']:.2f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    if compiled_backend is None:
        print("compiled extension not available; timing the fallback only\n")
    bench_kernels(args.repeats)
    bench_full_step(args.repeats)


if __name__ == "__main__":
    main()

"""Time the compiled and pure-Python special-function cores against each other.

    python3 benchmarks/bench_backends.py [--size N] [--repeat R]

Prints per-call timings (best of R), the speedup, and the largest relative
disagreement between the two cores on the same inputs.
"""

import argparse
import timeit

import numpy as np

import dfw
from dfw import kernels, specfun


def cases(size, rng):
    x_small = rng.uniform(0.01, 2.0, size)
    x_mid = rng.uniform(2.0, 30.0, size)
    x_big = rng.uniform(30.0, 500.0, size)
    x_all = np.concatenate([x_small, x_mid, x_big])
    X = rng.uniform(-1, 1, (size, 2))
    C = rng.uniform(-1, 1, (64, 2))
    hfj = kernels.KernelSpec.from_dict({"family": "HFJ", "n": 2.5, "scale": 3.0})
    wink = kernels.KernelSpec.from_dict({"family": "WinklerGen", "n": 2, "scale": 1.5})
    return {
        "J,Y  nu=0.3  x<2": lambda: specfun.jy_pair(0.3, x_small),
        "J,Y  nu=7.5  2<x<30": lambda: specfun.jy_pair(7.5, x_mid),
        "J,Y  nu=1    x>30": lambda: specfun.jy_pair(1.0, x_big),
        "I,K  nu=2.25 mixed": lambda: specfun.ik_pair(2.25, x_all),
        "ber,bei nu=0 mixed": lambda: specfun.kelvin_be_pair(0.0, x_all[x_all < 60]),
        "ker,kei nu=1 mixed": lambda: specfun.kelvin_ke_pair(1.0, x_all[x_all < 60]),
        "HFJ matrix": lambda: hfj.matrix(X, C),
        "WinklerGen matrix": lambda: wink.matrix(X, C),
    }


def _flat(v):
    parts = v if isinstance(v, tuple) else (v,)
    return np.concatenate([np.ravel(np.asarray(p, dtype=complex)) for p in parts])


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--size", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if "compiled" not in dfw.available_backends():
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation`")
    work = cases(args.size, np.random.default_rng(0))
    prev = dfw.current_backend()
    print(f"{'case':<22}{'compiled':>12}{'python':>12}{'speedup':>10}{'max rel diff':>15}")
    try:
        for name, fn in work.items():
            times, vals = {}, {}
            for be in ("compiled", "python"):
                dfw.set_backend(be)
                vals[be] = _flat(fn())
                times[be] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            a, b = vals["compiled"], vals["python"]
            diff = np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))
            print(f"{name:<22}{times['compiled'] * 1e3:>10.2f}ms{times['python'] * 1e3:>10.2f}ms"
                  f"{times['python'] / times['compiled']:>9.1f}x{diff:>15.2e}")
    finally:
        dfw.set_backend(prev)


if __name__ == "__main__":
    main()

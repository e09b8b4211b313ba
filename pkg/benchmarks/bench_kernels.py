"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints best-of-N wall time per call for each kernel on both backends and
the speed-up.  The compiled extension must be built (pip install -e .).
"""
import argparse
import timeit

import numpy as np

from su11squeeze import _kernels_py

try:
    from su11squeeze import _kernels
except ImportError:
    _kernels = None


def cases():
    rng = np.random.default_rng(0)
    x = rng.uniform(0.5, 400.0, 4096)
    field = rng.normal(size=(201, 201))
    return [
        ("log_gamma", lambda m: [m.log_gamma(v) for v in x[:512]], 512),
        ("log_gamma_array", lambda m: m.log_gamma_array(x), 4096),
        ("bessel_i_ratio", lambda m: [m.bessel_i_ratio(1.0, v) for v in x[:256]], 256),
        ("bessel_i", lambda m: [m.bessel_i(0.5, v) for v in x[:256]], 256),
        ("marching_segments", lambda m: m.marching_segments(field), 1),
    ]


def best(fn, module, repeat):
    timer = timeit.Timer(lambda: fn(module))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        raise SystemExit("compiled extension not built; run pip install --no-build-isolation -e .")
    print("%-18s %14s %14s %9s" % ("kernel", "cython us/call", "python us/call", "speed-up"))
    for name, fn, calls in cases():
        fast = best(fn, _kernels, args.repeat) / calls * 1e6
        slow = best(fn, _kernels_py, args.repeat) / calls * 1e6
        print("%-18s %14.3f %14.3f %8.1fx" % (name, fast, slow, slow / fast))


if __name__ == "__main__":
    main()

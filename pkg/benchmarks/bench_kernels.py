"""Compare the compiled kernels with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--points N] [--degree D] [--repeat R]
"""

import argparse
import json
import time

import numpy as np

from polyconvex._kernels import _pykernels as py

try:
    from polyconvex._kernels import _ckernels as cy
except ImportError:  # extension not built
    cy = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(points=6000, degree=6, m=16, rows=20000, repeat=5, seed=0):
    rng = np.random.default_rng(seed)
    pts = (rng.normal(size=(points, 2)) + 1j * rng.normal(size=(points, 2))) * 0.5
    k = (degree + 1) * (degree + 2) // 2
    coeffs = rng.normal(size=k) + 1j * rng.normal(size=k)
    psi = py.monomial_table(pts, degree)[:, 1:]
    si = rng.integers(0, points, rows)
    ai = rng.integers(0, m, rows)
    table = py.monomial_table(pts, degree)
    cases = {
        "monomial_table": lambda mod: mod.monomial_table(pts, degree),
        "eval_poly_max": lambda mod: mod.eval_poly_max(table, coeffs, m),
        "polygon_max": lambda mod: mod.polygon_max(table @ coeffs, m),
        "constraint_rows": lambda mod: mod.constraint_rows(psi, si, ai, m),
    }
    out = {"points": points, "degree": degree, "rows": rows, "results": {}}
    for name, fn in cases.items():
        entry = {"python_s": _time(lambda: fn(py), repeat)}
        if cy is not None:
            entry["cython_s"] = _time(lambda: fn(cy), repeat)
            entry["speedup"] = entry["python_s"] / entry["cython_s"]
        out["results"][name] = entry
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=6000)
    ap.add_argument("--degree", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    res = run(args.points, args.degree, repeat=args.repeat)
    for name, e in res["results"].items():
        line = f"{name:16s} python {e['python_s'] * 1e3:8.2f} ms"
        if "cython_s" in e:
            line += f"   cython {e['cython_s'] * 1e3:8.2f} ms   x{e['speedup']:.2f}"
        print(line)
    print(json.dumps(res, sort_keys=True))


if __name__ == "__main__":
    main()

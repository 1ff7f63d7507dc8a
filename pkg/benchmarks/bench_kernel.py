"""Compiled vs pure-Python elimination kernel.

    python benchmarks/bench_kernel.py [--repeat N] [--json]

Times ``gauss_jordan`` on random integer and Gaussian-integer matrices, then
two library workloads with ``nilgeo.linalg`` pointed at each backend in turn.
Both backends must produce identical output; the script exits 1 otherwise.
"""

import argparse
import copy
import json
import random
import sys
import timeit

from nilgeo import _kernel_py, catalog, linalg
from nilgeo.hermitian import hkt_metric_space, lefschetz_map
from nilgeo.linalg import ExactMatrix

try:
    from nilgeo import _kernel as _kernel_c
except ImportError:
    _kernel_c = None


def random_rows(n, m, rng, bound, complex_entries):
    re = [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)]
    im = [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)] if complex_entries else None
    return re, im


def kernel_case(kernel, re, im, m):
    return kernel.gauss_jordan(copy.deepcopy(re), copy.deepcopy(im), m)


def workload_hkt():
    return hkt_metric_space(catalog.get("aff-A3").hypercomplex).dimension


def workload_lefschetz():
    e = catalog.get("aff-A3")
    d = lefschetz_map(e.algebra, e.hypercomplex, ExactMatrix.identity(12), 2)
    return d.source_dim, d.target_dim, d.map_rank


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args(argv)
    if _kernel_c is None:
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1

    rng = random.Random(0)
    cases = []
    for n, complex_entries in [(20, False), (40, False), (60, False), (20, True), (30, True)]:
        re, im = random_rows(n, n + 5, rng, 9, complex_entries)
        label = f"gauss_jordan {n}x{n + 5} {'Z[i]' if complex_entries else 'Z'}"
        cases.append((label, lambda k, re=re, im=im, m=n + 5: kernel_case(k, re, im, m)))

    results = []
    ok = True
    for label, run in cases:
        out_py, out_c = run(_kernel_py), run(_kernel_c)
        ok &= out_py == out_c
        results.append((label, *(best(lambda k=k, run=run: run(k), args.repeat) for k in (_kernel_py, _kernel_c))))

    saved = linalg._kernel
    try:
        for label, fn in [("hkt_metric_space aff-A3", workload_hkt), ("lefschetz aff-A3 i=2", workload_lefschetz)]:
            times, outs = [], []
            for kernel in (_kernel_py, _kernel_c):
                linalg._kernel = kernel
                outs.append(fn())
                times.append(best(fn, args.repeat))
            ok &= outs[0] == outs[1]
            results.append((label, *times))
    finally:
        linalg._kernel = saved

    if args.json:
        print(json.dumps([{"case": c, "python_s": p, "cython_s": x, "speedup": p / x} for c, p, x in results],
                         indent=2))
    else:
        print(f"{'case':<32} {'python':>10} {'cython':>10} {'speedup':>8}")
        for c, p, x in results:
            print(f"{c:<32} {p:>9.4f}s {x:>9.4f}s {p / x:>7.2f}x")
        print("outputs identical" if ok else "OUTPUTS DIFFER")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the pruned table scan at (2,3) and (3,2) and a batch of fixed-point
counts, checks that both implementations return identical results, and
prints one line per kernel and scenario.
"""
import argparse
import random
import time

from acausal import kernels
from acausal.consistency import constraint_maps
from acausal.scenario import Scenario


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_scan(impl, sc, repeat):
    fmaps = [fm for fm, _ in constraint_maps(sc)]
    return best_of(lambda: impl.scan_tables(sc.D, fmaps, 0, sc.D), repeat)


def bench_fixed_points(impl, sc, repeat, count=20000):
    rng = random.Random(0)
    fmaps = [fm for fm, _ in constraint_maps(sc)]
    tables = [[rng.randrange(sc.D) for _ in range(sc.D)] for _ in range(count)]

    def run():
        return sum(impl.first_violation(t, fmaps) for t in tables)

    return best_of(run, repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = [kernels.python_kernels]
    if kernels.compiled_kernels is None:
        print("compiled kernels not available; timing the Python fallback only")
    else:
        impls.append(kernels.compiled_kernels)
    for sc in (Scenario(2, 3), Scenario(3, 2)):
        results = {}
        for impl in impls:
            t, found = bench_scan(impl, sc, args.repeat)
            results[impl.IMPLEMENTATION] = (t, sorted(found))
            print(f"scan          n={sc.n} d={sc.d}  {impl.IMPLEMENTATION:<7} {t * 1e3:9.1f} ms  "
                  f"{len(found)} tables")
        if len(results) == 2:
            (tp, rp), (tc, rc) = results["python"], results["cython"]
            assert rp == rc, "implementations disagree"
            print(f"              speedup {tp / tc:.1f}x")
        res = {}
        for impl in impls:
            t, total = bench_fixed_points(impl, sc, args.repeat)
            res[impl.IMPLEMENTATION] = (t, total)
            print(f"first_violation n={sc.n} d={sc.d} {impl.IMPLEMENTATION:<7} {t * 1e3:9.1f} ms  "
                  f"checksum {total}")
        if len(res) == 2:
            assert res["python"][1] == res["cython"][1], "implementations disagree"
            print(f"              speedup {res['python'][0] / res['cython'][0]:.1f}x")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Workloads mirror what the theorem suites spend their time on: upset
enumeration, the p-morphism sweep, and the strictness-vs-axiom scan.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

from esakia._kernel import pure
from esakia.oracle import all_labeled_posets

try:
    from esakia._kernel import _core as core
except ImportError:
    core = None


def posets_upto(n):
    out = []
    for k in range(n + 1):
        out.extend(all_labeled_posets(k))
    return out


def bench(label, fn, repeat):
    best = min(timeit(fn) for _ in range(repeat))
    print(f"  {label:<14} {best:8.3f} s")
    return best


def timeit(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def workload_upsets(impl, posets):
    def run():
        total = 0
        for P in posets:
            total += len(impl.upsets_of(P.up, P.down))
        return total
    return run


def workload_pmorphisms(impl, doms, cods):
    def run():
        total = 0
        for D in doms:
            for C in cods:
                assigns, _ = impl.p_morphisms(D.up, D.down, C.up)
                total += len(assigns)
        return total
    return run


def workload_scan(impl, doms, cods):
    def run():
        bad = 0
        for D in doms:
            for C in cods:
                _, _, _, dis = impl.strict_etale_scan(D.up, D.down, C.up, C.down)
                bad += len(dis)
        assert bad == 0
        return bad
    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    small = posets_upto(4)
    cods = posets_upto(3)
    impls = [("pure", pure)] + ([("compiled", core)] if core else [])
    if core is None:
        print("compiled kernel not built; showing pure timings only")

    print(f"upset enumeration over {len(small)} posets (|X| <= 4):")
    times = {}
    for name, impl in impls:
        times[name] = bench(name, workload_upsets(impl, small), args.repeat)
    _speedup(times)

    print(f"p-morphism sweep, {len(small)}x{len(cods)} poset pairs:")
    times = {}
    for name, impl in impls:
        times[name] = bench(name, workload_pmorphisms(impl, small, cods), args.repeat)
    _speedup(times)

    print(f"strictness-vs-axiom scan, {len(small)}x{len(cods)} poset pairs:")
    times = {}
    for name, impl in impls:
        times[name] = bench(name, workload_scan(impl, small, cods), args.repeat)
    _speedup(times)


def _speedup(times):
    if "compiled" in times and times["compiled"] > 0:
        print(f"  speedup        {times['pure'] / times['compiled']:8.1f} x")


if __name__ == "__main__":
    main()

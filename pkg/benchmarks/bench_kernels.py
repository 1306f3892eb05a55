"""Compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat 3]

Subset-construction inputs are captured from real projections made while
compiling a few formulas over the q numeration system; each workload runs on
both backends and the outputs are compared before timing is reported.
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from roteprover import _fallback, kernels, workbench
from roteprover.automata import core

try:
    from roteprover import _kernels
except ImportError:  # extension not built
    _kernels = None

FORMULAS = (
    "Ex,y x+y=z & 2*x<=3*y+1",
    "Ai,n (n>=1 & 2*i<=5*n) => Ej j<i+n & Q[j]=Q[i]",
    "Et,u (t>=i & 2*t<=2*i+3*n & u=t+n & Q[t]!=Q[u])",
)


def capture_workloads():
    """Inputs of every subset construction and refinement run while compiling."""
    subsets, refines = [], []
    sc, rf = kernels.subset_construction, kernels.refine

    def grab_sc(*args):
        subsets.append(args)
        return sc(*args)

    def grab_rf(table, labels):
        refines.append((table.copy(), labels.copy()))
        return rf(table, labels)

    kernels.subset_construction, kernels.refine = grab_sc, grab_rf
    try:
        c = workbench.compiler("dt_q")
        for f in FORMULAS:
            c.automaton(f)
    finally:
        kernels.subset_construction, kernels.refine = sc, rf
    subsets.sort(key=lambda a: -a[0].size)
    refines.sort(key=lambda a: -a[0].size)
    return subsets, refines[:3]


def timed(fn, *args, repeat=3):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def same_partition(a, b) -> bool:
    return len(set(zip(a.tolist(), b.tolist()))) == len(set(a.tolist())) == len(set(b.tolist()))


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--full", action="store_true", help="include the largest projection (about a minute in Python)")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; nothing to compare")
        return 1
    rows = []
    subsets, refines = capture_workloads()
    subsets = subsets[:3] if args.full else subsets[1:4]
    for inp in subsets:
        tc, (t1, l1) = timed(_kernels.subset_construction, *inp, repeat=args.repeat)
        tp, (t2, l2) = timed(_fallback.subset_construction, *inp, repeat=args.repeat)
        assert np.array_equal(t1, t2) and np.array_equal(l1, l2)
        rows.append((f"subsets {inp[0].size - 1}x{inp[2]} -> {t1.shape[0]}", tc, tp))
    for table, labels in refines:
        tc, a = timed(_kernels.refine, table, labels, repeat=args.repeat)
        tp, b = timed(_fallback.refine, table, labels, repeat=args.repeat)
        assert same_partition(a, b)
        rows.append((f"refine {table.shape[0]}x{table.shape[1]} -> {a.max() + 1}", tc, tp))
    five_halves = Fraction(5, 2)
    for label, strict, cap in (("search strict 5/2", True, 64), ("search non-strict 5/2 to 80", False, 80)):
        call = (five_halves.numerator, five_halves.denominator, strict, cap, False, strict, 0)
        tc, a = timed(_kernels.search, *call, repeat=args.repeat)
        tp, b = timed(_fallback.search, *call, repeat=args.repeat)
        assert list(a[0]) == list(b[0]) and sorted(a[1]) == sorted(b[1])
        rows.append((label, tc, tp))
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  compiled(s)  python(s)  speedup")
    for name, tc, tp in rows:
        print(f"{name:<{width}}  {tc:11.4f}  {tp:9.4f}  {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

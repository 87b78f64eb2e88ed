"""Time the compiled and pure-Python hom-counting kernels on the same searches.

    python3 benchmarks/bench_homcount.py [--repeat N] [--json]
"""
import argparse
import json
import random
import sys
import time

from handlecalc import bundles as B
from handlecalc.finite import cyclic_group, symmetric_group
from handlecalc.homcount import KERNELS, count_homs
from handlecalc.presentation import random_tietze_move, tietze_apply


def workloads():
    cacime = B.build_cacime().presentation
    rng = random.Random(1)
    variant = cacime
    for _ in range(6):
        variant = tietze_apply(variant, random_tietze_move(variant, rng, kinds=("T1", "T2")))
    return [
        ("cacime -> Z/3", cacime, cyclic_group(3)),
        ("cacime -> S3", cacime, symmetric_group(3)),
        ("cacime variant -> S3", variant, symmetric_group(3)),
        ("genus-2 surface -> S4", B.surface_presentation(2).presentation, symmetric_group(4)),
        ("E -> S3", B.build_E().presentation, symmetric_group(3)),
    ]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t)
    return min(times), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if "cython" not in KERNELS:
        print("compiled kernel not built; only the Python kernel is available", file=sys.stderr)
    rows = []
    for name, p, g in workloads():
        row = {"workload": name}
        for backend in KERNELS:
            secs, count = best_time(lambda: count_homs(p, g, cap=10 ** 9, backend=backend), args.repeat)
            row[backend] = secs
            row.setdefault("count", count)
            assert row["count"] == count, f"{name}: kernels disagree"
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'workload':<24}{'count':>10}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for r in rows:
        cy = f"{r['cython']:.4f}" if "cython" in r else "-"
        sp = f"{r['speedup']:.1f}x" if "speedup" in r else "-"
        print(f"{r['workload']:<24}{r['count']:>10}{r['python']:>12.4f}{cy:>12}{sp:>10}")


if __name__ == "__main__":
    main()

"""Time the compiled and pure-Python float simplex kernels on per-group LPs.

    python3 benchmarks/bench_kernels.py --repeat 5
"""
import argparse
import statistics
import time

from srr import kernels
from srr.lp import LpMode, maximize_last
from srr.storage import build_mds_core_system, enumerate_repair_groups

CASES = [
    ("N=(3,1,1) C=3", [3, 1, 1], 3, [1.5, 2.0]),
    ("N=(2,2,2) C=6", [2, 2, 2], 6, [1.0, 1.5]),
    ("N=(1,1,1,1) C=6", [1, 1, 1, 1], 6, [0.5, 0.5, 0.5]),
    ("N=(2,1,1,1) C=7", [2, 1, 1, 1], 7, [1.0, 0.5, 0.5]),
]


def time_call(fn, repeat):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not kernels.HAVE_COMPILED:
        print("compiled kernel not built; only the Python kernel is available")
    backends = ["python"] + (["compiled"] if kernels.HAVE_COMPILED else [])
    print(f"{'system':<20} {'groups':>7} " + " ".join(f"{b + ' ms':>12}" for b in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for name, Ns, C, lam in CASES:
        system = build_mds_core_system(Ns, C, 1.0)
        table = enumerate_repair_groups(system)
        times, values = [], []
        for backend in backends:
            mode = LpMode(False, backend=backend)
            t, value = time_call(lambda: maximize_last(system, table, lam, mode, "nodes")[0],
                                 args.repeat)
            times.append(t)
            values.append(value)
        if len(values) == 2 and abs(values[0] - values[1]) > 1e-9:
            raise SystemExit(f"{name}: kernels disagree ({values[0]} vs {values[1]})")
        line = f"{name:<20} {sum(table.gamma):>7} " + " ".join(f"{t * 1e3:>12.2f}" for t in times)
        if len(times) == 2:
            line += f"   {times[0] / times[1]:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()

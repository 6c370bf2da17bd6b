"""Compare the numba and numpy kernel backends on random networks.

    python3 benchmarks/bench_kernels.py --sizes 6 8 10 --repeat 3
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from mpcpn import kernels
from mpcpn.verify import random_network


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    backends = {"numpy": kernels.backend("numpy"), "numba": kernels.backend("numba")}
    rng = random.Random(args.seed)
    print(f"{'n':>3} {'kernel':<14} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in args.sizes:
        f = random_network(rng, n)
        tt = np.ascontiguousarray(f.table)
        tables = {name: k.exists_tables(tt) for name, k in backends.items()}
        # warm up the jit on this shape before timing
        e0, e1 = tables["numba"]
        backends["numba"].mp_reach(e0, e1, n, 0)
        backends["numba"].async_reach(f.image, n, 0, kernels.GA)
        ref = None
        for label, run in (
            ("exists_tables", lambda k, e: k.exists_tables(tt)),
            ("mp_reach", lambda k, e: k.mp_reach(e[0], e[1], n, 0)),
            ("ga_reach", lambda k, e: k.async_reach(f.image, n, 0, kernels.GA)),
        ):
            secs = {}
            for name, k in backends.items():
                out = run(k, tables[name])
                if name == "numpy":
                    ref = out
                else:
                    same = all(np.array_equal(a, b) for a, b in zip(ref, out)) if isinstance(out, tuple) else np.array_equal(out, ref)
                    assert same, f"backends disagree on {label} for n={n}"
                secs[name] = best_of(lambda: run(k, tables[name]), args.repeat)
            print(f"{n:>3} {label:<14} {secs['numpy']:>10.4f} {secs['numba']:>10.4f} {secs['numpy'] / secs['numba']:>7.1f}x")


if __name__ == "__main__":
    main()

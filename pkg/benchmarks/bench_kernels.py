"""Compare the compiled kernels against the pure-Python fallback.

Times the isotonic projection and the exact edit-distance search on
matched inputs and reports the median speedup.  Run from the repository
root after an editable install:

    python benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from gedlb import _kernels_py
from gedlb.graphs import Graph, adjacency, apply_edits, random_edits

try:
    from gedlb import _kernels
except ImportError:
    _kernels = None


def _median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def _random_graph(rng, n, p=0.5):
    edges = frozenset((i, j) for i in range(n) for j in range(i + 1, n)
                      if rng.random() < p)
    return Graph(n, edges)


def _isotonic_cases(rng, sizes):
    for n in sizes:
        yield f"isotonic n={n}", (rng.standard_normal(n),)


def _search_cases(rng, sizes):
    for n in sizes:
        g1 = _random_graph(rng, n)
        g2 = apply_edits(g1, random_edits(g1, 2, 0.5, (0, n)))
        yield f"ged_search n={n}", (adjacency(g1), adjacency(g2), False)


def _run(name, args, fast_fn, pure_fn, repeats):
    fast = fast_fn(*args)
    pure = pure_fn(*args)
    if not np.allclose(np.asarray(fast, dtype=float),
                       np.asarray(pure, dtype=float)):
        raise AssertionError(f"{name}: implementations disagree")
    t_fast = _median_time(lambda: fast_fn(*args), repeats)
    t_pure = _median_time(lambda: pure_fn(*args), repeats)
    print(f"{name:<20s} compiled {t_fast * 1e3:9.3f} ms   "
          f"pure {t_pure * 1e3:9.3f} ms   speedup {t_pure / t_fast:6.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the pure fallback is "
              "available (pip install -e . --no-build-isolation)")
        return
    rng = np.random.default_rng(args.seed)
    for name, case in _isotonic_cases(rng, (100, 1000, 10000)):
        _run(name, case, _kernels.isotonic_nonincreasing,
             _kernels_py.isotonic_nonincreasing, args.repeats)
    for name, case in _search_cases(rng, (7, 8, 9)):
        _run(name, case, _kernels.ged_search, _kernels_py.ged_search,
             args.repeats)


if __name__ == "__main__":
    main()

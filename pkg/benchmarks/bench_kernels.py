"""Compare the compiled and numpy enumeration backends.

Run with ``python benchmarks/bench_kernels.py``.  Each case is timed as the
best of ``--repeat`` runs, and the two backends are checked for agreement on
the bounds before any timing is reported.
"""

import argparse
import time

import numpy as np

from desyncstab import products
from desyncstab.families import family_class, stable_parameter, unstable_parameter
from desyncstab.products import MatrixClass, stability_bounds


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(depth):
    rng = np.random.default_rng(0)
    yield "t_4", family_class(stable_parameter(4)), depth, False
    yield "s_6", family_class(unstable_parameter(6)), depth, False
    yield "s_6 pruned", family_class(unstable_parameter(6)), depth, True
    yield "random M=3", MatrixClass(rng.normal(scale=0.5, size=(3, 2, 2))), max(1, depth * 2 // 3 - 1), False


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--depth", type=int, default=19)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    if products._kernel is None:
        raise SystemExit("compiled kernel not built; reinstall with Cython available")

    print(f"{'case':<14}{'depth':>6}{'products':>12}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for name, cls, depth, prune in cases(args.depth):
        runs = {}
        for backend in ("cython", "python"):
            runs[backend] = stability_bounds(cls, depth, prune=prune, backend=backend)
        a, b = runs["cython"], runs["python"]
        np.testing.assert_allclose(a.upper_per_depth, b.upper_per_depth, rtol=1e-12)
        if not prune:
            np.testing.assert_allclose(a.lower_per_depth, b.lower_per_depth, rtol=1e-9)
        t_c = best_time(lambda: stability_bounds(cls, depth, prune=prune, backend="cython"), args.repeat)
        t_p = best_time(lambda: stability_bounds(cls, depth, prune=prune, backend="python"), args.repeat)
        print(f"{name:<14}{depth:>6}{a.products:>12}{t_c:>12.4f}{t_p:>12.4f}{t_p / t_c:>9.1f}x")


if __name__ == "__main__":
    main()

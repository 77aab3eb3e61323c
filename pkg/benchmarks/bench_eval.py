"""Benchmark the numba kernel against the pure-numpy fallback.

Builds the basis of a moderately large multi-degree space and times batch
evaluation at increasing sample counts on both paths.

Run: python benchmarks/bench_eval.py
"""
import time

import numpy as np

from mdspline import SplineSpace, build_basis


def make_space(segments: int = 40) -> SplineSpace:
    rng = np.random.default_rng(7)
    breaks = np.arange(1, segments, dtype=float)
    degrees = rng.integers(2, 6, size=segments)
    ks = [
        int(rng.integers(0, (degrees[i + 1] - 1 if degrees[i] == degrees[i + 1] else min(degrees[i], degrees[i + 1])) + 1))
        for i in range(segments - 1)
    ]
    return SplineSpace((0.0, float(segments)), breaks, degrees, ks)


def bench(table, xs, jit: bool, repeats: int = 5) -> float:
    table.evaluate(xs[:16], jit=jit)  # warm up (JIT compile / cache load)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        table.evaluate(xs, jit=jit)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    space = make_space()
    _, basis = build_basis(space)
    table = basis._table()
    print(f"space: K={space.dimension}, intervals={space.num_intervals}, "
          f"max degree={space.max_degree}")
    print(f"{'samples':>10} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for n in (1_000, 10_000, 100_000, 1_000_000):
        xs = np.linspace(*space.domain, n)
        t_jit = bench(table, xs, jit=True)
        t_np = bench(table, xs, jit=False)
        print(f"{n:>10} {t_jit * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms {t_np / t_jit:>8.1f}x")
        out_a = table.evaluate(xs, jit=True)
        out_b = table.evaluate(xs, jit=False)
        assert np.array_equal(out_a, out_b), "kernel paths disagree"
    print("both paths produce identical results")


if __name__ == "__main__":
    main()

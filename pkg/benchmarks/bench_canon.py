#!/usr/bin/env python3
"""Benchmark the compiled canonical-labeling kernel against the pure twin.

The kernel sits in the inner loop of poset-class enumeration, pomset coding,
and isomorphism checks, so this is the number that decides whether the
exhaustive search finishes in seconds or minutes.

Run:  python benchmarks/bench_canon.py
"""

import random
import time

from esequiv import _canon_py

try:
    from esequiv import _canonc
except ImportError:
    _canonc = None


def close_transitive(n, down):
    changed = True
    while changed:
        changed = False
        for v in range(n):
            acc = down[v]
            m = down[v]
            while m:
                low = m & -m
                acc |= down[low.bit_length() - 1]
                m ^= low
            if acc != down[v]:
                down[v] = acc
                changed = True
    return down


def random_case(rng, n, labels, order_p, conflict_p):
    lranks = [rng.randrange(labels) for _ in range(n)]
    down = [0] * n
    for j in range(n):
        for i in range(j):
            if rng.random() < order_p:
                down[j] |= 1 << i
    close_transitive(n, down)
    cf = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if not ((down[j] >> i) & 1) and rng.random() < conflict_p:
                cf[i] |= 1 << j
                cf[j] |= 1 << i
    return n, lranks, down, cf


def bench(kernel, cases, repeats=1):
    start = time.perf_counter()
    for _ in range(repeats):
        for case in cases:
            kernel.canon_encode(*case)
    return time.perf_counter() - start


def suite():
    rng = random.Random(2024)
    yield "posets n=8, 1 label", [random_case(rng, 8, 1, 0.25, 0.0) for _ in range(2000)], 1
    yield "posets n=9, 1 label", [random_case(rng, 9, 1, 0.25, 0.0) for _ in range(2000)], 1
    yield "pes n=10, 3 labels", [random_case(rng, 10, 3, 0.3, 0.3) for _ in range(2000)], 1
    yield "antichain n=8 (worst case)", [(8, [0] * 8, [0] * 8, [0] * 8)], 200
    yield "parallel chains n=10", [
        (10, [0] * 10, close_transitive(10, [0, 1, 2, 0, 8, 24, 0, 64, 192, 448]), [0] * 10)
    ], 500


def main():
    kernels = [("python", _canon_py)]
    if _canonc is not None:
        kernels.append(("compiled", _canonc))
    else:
        print("compiled kernel not available; showing pure-Python times only")
    print(f"{'case':<32}" + "".join(f"{name:>12}" for name, _ in kernels) + f"{'speedup':>10}")
    for name, cases, repeats in suite():
        times = [bench(kernel, cases, repeats) for _, kernel in kernels]
        row = f"{name:<32}" + "".join(f"{t:>11.3f}s" for t in times)
        if len(times) == 2 and times[1] > 0:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)
    # sanity: identical output on a fresh sample
    if _canonc is not None:
        rng = random.Random(7)
        for _ in range(500):
            case = random_case(rng, rng.randint(0, 10), 2, 0.3, 0.2)
            assert _canon_py.canon_encode(*case) == _canonc.canon_encode(*case)
        print("parity check: 500 random cases byte-identical")


if __name__ == "__main__":
    main()

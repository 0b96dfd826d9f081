"""Timing comparison of the compiled and pure-Python permanent kernels.

Measures the raw permanent, the per-sector block lift, and one full entropy
objective+gradient evaluation under each backend.  Run from the repo root:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from locap import kernels
from locap.entropyopt import _EntropyObjective
from locap.fock import enumerate_basis, sector_split
from locap.multiphoton import lift_alice_unitary
from locap.numerics import haar_unitary


def timeit(fn, min_seconds=0.2):
    fn()  # warm up
    count, elapsed = 0, 0.0
    while elapsed < min_seconds:
        start = time.perf_counter()
        fn()
        elapsed += time.perf_counter() - start
        count += 1
    return elapsed / count


def bench_permanent(backend, sizes=(4, 8, 12)):
    rng = np.random.default_rng(0)
    rows = []
    for k in sizes:
        a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        rows.append((f"permanent {k}x{k}", timeit(lambda: backend.permanent(a))))
    return rows


def bench_lift(name):
    rng = np.random.default_rng(1)
    results = []
    for n, m, m_a in [(2, 4, 2), (3, 6, 3), (4, 8, 4)]:
        decomp = sector_split(enumerate_basis(n, m), m_a)
        u = haar_unitary(m_a, rng)
        label = f"lift (n={n}, m={m}, m_a={m_a})"
        results.append((label, timeit(lambda: lift_alice_unitary(u, decomp))))
    return results


def bench_objective(name):
    objective = _EntropyObjective(3, 6, 3, 40)
    theta = objective.random_theta(np.random.default_rng(2))
    label = "objective+gradient (3,6,3, X=40)"
    return [(label, timeit(lambda: objective.value_and_grad(theta)))]


def main():
    backends = kernels.available_backends()
    default = kernels.BACKEND
    print(f"available backends: {', '.join(backends)} (default: {default})\n")
    timings = {}
    for name, mod in backends.items():
        kernels.force_backend(name)
        rows = bench_permanent(mod) + bench_lift(name) + bench_objective(name)
        timings[name] = dict(rows)
    kernels.force_backend(default)

    labels = list(next(iter(timings.values())))
    names = list(timings)
    width = max(len(label) for label in labels)
    header = f"{'benchmark':<{width}}  " + "  ".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += "  speedup"
    print(header)
    for label in labels:
        cells = [timings[n][label] for n in names]
        line = f"{label:<{width}}  " + "  ".join(f"{c * 1e3:>10.3f}ms" for c in cells)
        if len(cells) == 2:
            line += f"  {cells[0] / cells[1]:>6.1f}x" if cells[1] < cells[0] \
                else f"  {cells[1] / cells[0]:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()

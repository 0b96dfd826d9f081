"""Pure-Python fallback kernels; same contracts as the Cython module.

Ryser's permanent with Gray-code column updates: O(2^k k) per call, exact.
Hard cap k <= 16 keeps the subset loop bounded.
"""

import numpy as np

MAX_PERMANENT_SIZE = 16
BACKEND_NAME = "python"


def permanent(a: np.ndarray) -> complex:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    k = a.shape[0]
    if k == 0:
        return 1.0 + 0.0j
    sums = np.zeros(k, dtype=np.complex128)
    total = 0.0 + 0.0j
    prev = 0
    sign = -1.0  # (-1)^|S|; subset parity flips on every Gray step
    for t in range(1, 1 << k):
        gray = t ^ (t >> 1)
        bit = gray ^ prev
        j = bit.bit_length() - 1
        if gray & bit:
            sums += a[:, j]
        else:
            sums -= a[:, j]
        total += sign * sums.prod()
        sign = -sign
        prev = gray
    return complex(total if k % 2 == 0 else -total)


def lift_blocks(u: np.ndarray, reps: np.ndarray, norms: np.ndarray) -> np.ndarray:
    """Multi-photon block of a mode unitary on one fixed-photon-number basis.

    ``reps[r]`` holds the mode index of every photon in occupation ``r``;
    entry (r, c) is the permanent of ``u`` with rows repeated per the output
    occupation and columns per the input occupation, divided by
    sqrt(prod(out!) * prod(in!)).
    """
    g, k = reps.shape
    out = np.empty((g, g), dtype=np.complex128)
    for r in range(g):
        rows = u[reps[r], :]
        for c in range(g):
            out[r, c] = permanent(rows[:, reps[c]]) / (norms[r] * norms[c])
    return out

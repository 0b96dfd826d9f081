"""Bosonic Fock basis for N photons in M modes, and its bipartite sectors.

Basis states are occupation tuples ``(n_1, ..., n_M)`` ordered descending
lexicographically, so for two photons in four modes the first state is
``(2, 0, 0, 0)`` and the last is ``(0, 0, 0, 2)``.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import DimensionCapExceeded, InvalidModeSplit

DEFAULT_DIMENSION_CAP = 10**6

# below this index, log2_dim_fock sums logs term by term; lgamma differences
# cancel catastrophically when one argument dwarfs the other
_LOG_SUM_CUTOFF = 4096
_LN2 = math.log(2.0)


def dim_fock(n: int, m: int) -> int:
    """Number of ways to place ``n`` photons in ``m`` modes.

    Exact arbitrary-precision integer ``(n+m-1)! / (n! (m-1)!)``; Python
    integers never overflow, so no error path is needed here.
    """
    _check_counts(n, m)
    return math.comb(n + m - 1, n)


def log2_dim_fock(n: int, m: int) -> float:
    """log2 of :func:`dim_fock`, evaluated in log space.

    Safe for arguments far beyond float factorial range; accurate to better
    than 1e-10 relative.
    """
    _check_counts(n, m)
    k = min(n, m - 1)
    if k == 0:
        return 0.0
    big = max(n, m - 1)
    if k <= _LOG_SUM_CUTOFF:
        return math.fsum(math.log2((big + j) / j) for j in range(1, k + 1))
    return (math.lgamma(n + m) - math.lgamma(n + 1) - math.lgamma(m)) / _LN2


def _check_counts(n, m):
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")


def _occupations(n, m):
    """Yield occupation tuples of ``n`` photons in ``m`` modes, descending lex."""
    if m == 1:
        yield (n,)
        return
    for head in range(n, -1, -1):
        for tail in _occupations(n - head, m - 1):
            yield (head,) + tail


@dataclass(frozen=True, eq=False)
class FockBasis:
    """Ordered Fock basis with O(1) state-to-index lookup."""

    n_photons: int
    n_modes: int
    states: tuple
    index_of: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self):
        return len(self.states)

    @cached_property
    def array(self) -> np.ndarray:
        """All occupations as a (dim, n_modes) int array."""
        return np.array(self.states, dtype=np.int64).reshape(self.dim, self.n_modes)

    def compatible(self, other) -> bool:
        return (self is other
                or (self.n_photons == other.n_photons
                    and self.n_modes == other.n_modes))


def enumerate_basis(n: int, m: int, cap: int = DEFAULT_DIMENSION_CAP) -> FockBasis:
    """Enumerate the (n, m) Fock basis in descending lexicographic order."""
    d = dim_fock(n, m)
    if d > cap:
        raise DimensionCapExceeded(
            f"basis for {n} photons in {m} modes has dimension {d} > cap {cap}")
    states = tuple(_occupations(n, m))
    return FockBasis(n, m, states, {s: i for i, s in enumerate(states)})


def _factorial_norm(occ) -> float:
    """sqrt of the product of occupation factorials."""
    out = 1
    for k in occ:
        out *= math.factorial(k)
    return math.sqrt(out)


@dataclass(frozen=True, eq=False)
class Sector:
    """Fixed photon split (n_alice, n_bob) between the two parties.

    ``index_grid[i, j]`` is the full-basis index of the product state with
    Alice occupation ``alice_basis.states[i]`` and Bob occupation
    ``bob_basis.states[j]``.  ``lift_reps``/``lift_norms`` are precomputed
    tables consumed by the permanent kernels: row ``i`` of ``lift_reps``
    repeats each Alice mode index as many times as it is occupied.
    """

    n_alice: int
    alice_basis: FockBasis
    bob_basis: FockBasis
    index_grid: np.ndarray
    lift_reps: np.ndarray
    lift_norms: np.ndarray

    @property
    def size(self) -> int:
        return self.index_grid.size


@dataclass(frozen=True, eq=False)
class SectorDecomposition:
    """Partition of a Fock basis by Alice's photon number.

    Alice owns the first ``m_alice`` modes; callers wanting a different
    assignment permute modes before construction.
    """

    basis: FockBasis
    m_alice: int
    m_bob: int
    sectors: tuple

    @property
    def sector_sizes(self):
        return [s.size for s in self.sectors]


def sector_split(basis: FockBasis, m_alice: int) -> SectorDecomposition:
    """Split ``basis`` into sectors of fixed Alice photon number 0..N."""
    m = basis.n_modes
    if not 1 <= m_alice <= m - 1:
        raise InvalidModeSplit(
            f"need 1 <= m_alice <= {m - 1} so both parties hold modes, got {m_alice}")
    m_bob = m - m_alice
    n = basis.n_photons
    sectors = []
    for n_a in range(n + 1):
        alice = enumerate_basis(n_a, m_alice)
        bob = enumerate_basis(n - n_a, m_bob)
        grid = np.empty((alice.dim, bob.dim), dtype=np.int64)
        for i, sa in enumerate(alice.states):
            for j, sb in enumerate(bob.states):
                grid[i, j] = basis.index_of[sa + sb]
        reps = np.empty((alice.dim, n_a), dtype=np.int64)
        norms = np.empty(alice.dim, dtype=np.float64)
        for i, sa in enumerate(alice.states):
            reps[i] = np.repeat(np.arange(m_alice), sa)
            norms[i] = _factorial_norm(sa)
        sectors.append(Sector(n_a, alice, bob, grid, reps, norms))
    return SectorDecomposition(basis, m_alice, m_bob, tuple(sectors))

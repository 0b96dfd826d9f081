"""Measure the reachable span dimension by rank of a random state ensemble.

Draw Haar-random unitaries on Alice's modes, apply each lifted unitary to a
shared initial state, and count the singular values of the stacked states.
A Haar-generic initial state has maximal Schmidt rank in every sector with
probability one, which is what makes the measured rank hit the analytic
bound; a user-supplied degenerate state can probe the sub-generic case.
"""

from dataclasses import dataclass

import numpy as np

from .capacity import span_bound
from .exceptions import InconclusiveGap
from .fock import FockBasis, enumerate_basis, sector_split
from .multiphoton import StateVector, apply, lift_alice_unitary
from .numerics import RANK_REL_TOL, haar_unitary, rank_and_gap

CONFIDENT_GAP = 1e3
RANDOM_GENERIC = "RANDOM_GENERIC"
USER_SUPPLIED = "USER_SUPPLIED"
SWEEP_DIM_CAP = 10**4


@dataclass
class SpanEstimate:
    rank: int
    num_samples: int
    singular_gap: float
    seed: int
    initial_state_mode: str

    @property
    def confident(self) -> bool:
        return self.singular_gap > CONFIDENT_GAP


@dataclass
class SpanSweepRow:
    n_photons: int
    n_modes: int
    m_alice: int
    rank: int
    bound: int
    match: bool
    singular_gap: float


def random_initial_state(basis: FockBasis, rng: np.random.Generator) -> StateVector:
    """Unit-norm state with complex-Gaussian amplitudes."""
    amps = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    return StateVector(basis, amps / np.linalg.norm(amps))


def estimate_span(n: int, m: int, m_a: int, num_samples: int | None = None,
                  seed: int = 42, psi1: StateVector | None = None,
                  rel_tol: float = RANK_REL_TOL, strict: bool = True) -> SpanEstimate:
    """Numerical rank of the ensemble reachable from one shared state.

    Args:
        num_samples: how many random encodings to draw; defaults to twice
            the analytic bound and must be at least bound + 8.
        psi1: optional initial state; random generic when omitted.
        strict: raise :class:`InconclusiveGap` when the singular-value gap
            falls below the confidence threshold instead of returning.
    """
    bound = span_bound(n, m, m_a)
    if num_samples is None:
        num_samples = max(2 * bound, bound + 8)
    elif num_samples < bound + 8:
        raise ValueError(
            f"num_samples must be >= bound + 8 = {bound + 8}, got {num_samples}")

    basis = enumerate_basis(n, m)
    decomp = sector_split(basis, m_a)
    seeds = np.random.SeedSequence(seed).spawn(num_samples + 1)
    if psi1 is None:
        psi1 = random_initial_state(basis, np.random.default_rng(seeds[0]))
        mode = RANDOM_GENERIC
    else:
        if not basis.compatible(psi1.basis):
            raise ValueError("psi1 does not live on the (n, m) Fock basis")
        mode = USER_SUPPLIED

    columns = np.empty((basis.dim, num_samples), dtype=np.complex128)
    for k in range(num_samples):
        u = haar_unitary(m_a, np.random.default_rng(seeds[k + 1]))
        columns[:, k] = apply(lift_alice_unitary(u, decomp), psi1).amplitudes

    s = np.linalg.svd(columns, compute_uv=False)
    rank, gap = rank_and_gap(s, rel_tol)
    estimate = SpanEstimate(rank=rank, num_samples=num_samples,
                            singular_gap=gap, seed=seed, initial_state_mode=mode)
    if strict and not estimate.confident:
        raise InconclusiveGap(
            f"singular gap {gap:.3g} below {CONFIDENT_GAP:g}; "
            "raise num_samples or inspect the initial state", estimate)
    return estimate


def span_sweep(n: int, m: int, seed: int = 42, rel_tol: float = RANK_REL_TOL,
               strict: bool = True):
    """Measured rank vs analytic bound for every Alice mode count 1..m-1."""
    from .fock import dim_fock
    if dim_fock(n, m) > SWEEP_DIM_CAP:
        raise ValueError(f"sweep capped at Hilbert dimension {SWEEP_DIM_CAP}")
    rows = []
    for m_a in range(1, m):
        bound = span_bound(n, m, m_a)
        est = estimate_span(n, m, m_a, seed=seed, rel_tol=rel_tol, strict=strict)
        rows.append(SpanSweepRow(
            n_photons=n, n_modes=m, m_alice=m_a, rank=est.rank, bound=bound,
            match=est.rank == bound, singular_gap=est.singular_gap))
    return rows

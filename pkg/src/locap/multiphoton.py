"""Lift mode unitaries to the multi-photon Fock space via matrix permanents.

A unitary U on Alice's modes acts on each fixed-photon-number sector as the
symmetric power of U; matrix elements are permanents of U with rows repeated
by the output occupation and columns by the input occupation, normalized by
sqrt of the occupation factorials.  Bob's occupations are untouched, so the
lifted operator is block diagonal over sectors with the Alice block
replicated across Bob patterns.
"""

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import BasisMismatch, SizeCapExceeded
from .fock import FockBasis, SectorDecomposition, enumerate_basis, _factorial_norm
from .numerics import assert_unitary

MULTINOMIAL_DIM_CAP = 500


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a Fock basis."""

    basis: FockBasis
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        if not self.basis.compatible(other.basis):
            raise BasisMismatch("states live on different Fock bases")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class FockOperator:
    """Photon-number-conserving lifted unitary, stored as per-sector blocks.

    ``blocks[n_a]`` is the dense Alice-local matrix for the sector with
    ``n_a`` photons on Alice's side; the Bob factor is the identity.
    """

    decomp: SectorDecomposition
    blocks: tuple


def permanent(a: np.ndarray) -> complex:
    """Exact permanent of a square complex matrix (Ryser, Gray-code order)."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    if a.shape[0] > kernels.MAX_PERMANENT_SIZE:
        raise SizeCapExceeded(
            f"matrix size {a.shape[0]} exceeds permanent cap {kernels.MAX_PERMANENT_SIZE}")
    return kernels.permanent(a)


def symmetric_power(u: np.ndarray, n: int) -> np.ndarray:
    """Matrix of the lifted action of ``u`` on n photons in all its modes.

    Rows/columns follow :func:`locap.fock.enumerate_basis` ordering for
    (n, m) where m is the dimension of ``u``.
    """
    u = np.ascontiguousarray(u, dtype=np.complex128)
    m = u.shape[0]
    if n > kernels.MAX_PERMANENT_SIZE:
        raise SizeCapExceeded(f"photon count {n} exceeds permanent cap")
    basis = enumerate_basis(n, m)
    reps = np.empty((basis.dim, n), dtype=np.int64)
    norms = np.empty(basis.dim, dtype=np.float64)
    for i, occ in enumerate(basis.states):
        reps[i] = np.repeat(np.arange(m), occ)
        norms[i] = _factorial_norm(occ)
    return kernels.lift_blocks(u, reps, norms)


def lift_alice_unitary(u: np.ndarray, decomp: SectorDecomposition) -> FockOperator:
    """Lift a unitary on Alice's modes to the full multi-photon space."""
    u = np.ascontiguousarray(u, dtype=np.complex128)
    if u.shape != (decomp.m_alice, decomp.m_alice):
        raise ValueError(
            f"unitary acts on {u.shape[0]} modes but Alice holds {decomp.m_alice}")
    assert_unitary(u, what="mode unitary")
    blocks = tuple(
        kernels.lift_blocks(u, sector.lift_reps, sector.lift_norms)
        for sector in decomp.sectors)
    return FockOperator(decomp, blocks)


def identity_operator(decomp: SectorDecomposition) -> FockOperator:
    blocks = tuple(np.eye(s.alice_basis.dim, dtype=np.complex128)
                   for s in decomp.sectors)
    return FockOperator(decomp, blocks)


def apply(op: FockOperator, psi: StateVector) -> StateVector:
    """Apply a lifted operator: block-wise matrix-vector product."""
    if not op.decomp.basis.compatible(psi.basis):
        raise BasisMismatch("operator and state use different Fock bases")
    out = np.empty_like(psi.amplitudes, dtype=np.complex128)
    for sector, block in zip(op.decomp.sectors, op.blocks):
        out[sector.index_grid] = block @ psi.amplitudes[sector.index_grid]
    return StateVector(psi.basis, out)


def apply_adjoint(op: FockOperator, psi: StateVector) -> StateVector:
    if not op.decomp.basis.compatible(psi.basis):
        raise BasisMismatch("operator and state use different Fock bases")
    out = np.empty_like(psi.amplitudes, dtype=np.complex128)
    for sector, block in zip(op.decomp.sectors, op.blocks):
        out[sector.index_grid] = block.conj().T @ psi.amplitudes[sector.index_grid]
    return StateVector(psi.basis, out)


def _symmetric_power_multinomial(u: np.ndarray, n: int) -> np.ndarray:
    """Same matrix as :func:`symmetric_power`, by expanding the polynomial
    in creation operators term by term (independent of the permanent path)."""
    m = u.shape[0]
    basis = enumerate_basis(n, m)
    out = np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    for col, occ_in in enumerate(basis.states):
        # photon entering mode i scatters with amplitudes from column i
        poly = {(0,) * m: 1.0 + 0.0j}
        for i, n_i in enumerate(occ_in):
            for _ in range(n_i):
                grown = defaultdict(complex)
                for mono, coeff in poly.items():
                    for j in range(m):
                        amp = u[j, i]
                        if amp != 0:
                            key = mono[:j] + (mono[j] + 1,) + mono[j + 1:]
                            grown[key] += coeff * amp
                poly = grown
        norm_in = _factorial_norm(occ_in)
        for mono, coeff in poly.items():
            out[basis.index_of[mono], col] = coeff * _factorial_norm(mono) / norm_in
    return out


def lift_oracle_multinomial(u: np.ndarray, decomp: SectorDecomposition) -> FockOperator:
    """Reference lift by direct multinomial expansion; small instances only."""
    if decomp.basis.dim > MULTINOMIAL_DIM_CAP:
        raise SizeCapExceeded(
            f"multinomial oracle capped at dimension {MULTINOMIAL_DIM_CAP}, "
            f"got {decomp.basis.dim}")
    u = np.ascontiguousarray(u, dtype=np.complex128)
    if u.shape != (decomp.m_alice, decomp.m_alice):
        raise ValueError(
            f"unitary acts on {u.shape[0]} modes but Alice holds {decomp.m_alice}")
    blocks = tuple(_symmetric_power_multinomial(u, s.n_alice) for s in decomp.sectors)
    return FockOperator(decomp, blocks)


def sector_schmidt_ranks(psi: StateVector, decomp: SectorDecomposition,
                         rel_tol: float = 1e-8):
    """Schmidt rank of each fixed-photon-split component of ``psi``.

    Components with negligible weight (< 1e-12 of the norm) report rank 0.
    """
    ranks = []
    scale = psi.norm()
    for sector in decomp.sectors:
        seg = psi.amplitudes[sector.index_grid]
        s = np.linalg.svd(seg, compute_uv=False)
        if s.size == 0 or s[0] <= 1e-12 * scale:
            ranks.append(0)
            continue
        ranks.append(int(np.count_nonzero(s > rel_tol * s[0])))
    return ranks

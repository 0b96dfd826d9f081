"""Encoding capacity of linear-optical quantum channels.

Core objects: Fock bases and their bipartite photon-number sectors, the
permanent-based lift of mode unitaries, analytic span/capacity formulas,
numerical span-rank estimation, entropy maximization over codebooks, and
the explicit eight-symbol protocol for two photons in four modes.
"""

__version__ = "0.1.0"

from .fock import FockBasis, SectorDecomposition, dim_fock, enumerate_basis, log2_dim_fock, sector_split
from .kernels import BACKEND as kernel_backend
from .multiphoton import (
    FockOperator,
    StateVector,
    apply,
    lift_alice_unitary,
    lift_oracle_multinomial,
    permanent,
    symmetric_power,
)
from .numerics import eigh, expm_antihermitian, haar_unitary, numerical_rank

__all__ = [
    "FockBasis",
    "FockOperator",
    "SectorDecomposition",
    "StateVector",
    "apply",
    "dim_fock",
    "eigh",
    "enumerate_basis",
    "expm_antihermitian",
    "haar_unitary",
    "kernel_backend",
    "lift_alice_unitary",
    "lift_oracle_multinomial",
    "log2_dim_fock",
    "numerical_rank",
    "permanent",
    "sector_split",
    "symmetric_power",
]

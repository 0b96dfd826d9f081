"""Dense linear-algebra and sampling primitives used across the package.

Thin wrappers over LAPACK via numpy/scipy, pinned to the conventions the
rest of the code relies on: ascending eigenvalues, explicit generators for
all randomness, relative singular-value thresholds for rank decisions.
"""

import math
from typing import NamedTuple

import numpy as np

RANK_REL_TOL = 1e-8
UNITARY_TOL = 1e-10


class HermitianSpectrum(NamedTuple):
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # orthonormal columns


def eigh(a: np.ndarray) -> HermitianSpectrum:
    """Eigendecomposition of a Hermitian matrix, symmetrized internally.

    Raises ``numpy.linalg.LinAlgError`` if the LAPACK iteration fails to
    converge.
    """
    a = np.asarray(a)
    sym = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(sym)
    return HermitianSpectrum(w, v)


def numerical_rank(columns: np.ndarray, rel_tol: float = RANK_REL_TOL) -> int:
    """Count singular values above ``rel_tol`` times the largest one."""
    s = np.linalg.svd(np.asarray(columns), compute_uv=False)
    if s.size == 0:
        raise ValueError("rank of an empty matrix is undefined")
    return int(np.count_nonzero(s > rel_tol * s[0]))


def rank_and_gap(singular_values: np.ndarray, rel_tol: float = RANK_REL_TOL):
    """Rank plus the diagnostic ratio sigma_rank / sigma_rank+1.

    The gap is ``inf`` when every singular value clears the threshold.
    """
    s = np.asarray(singular_values)
    rank = int(np.count_nonzero(s > rel_tol * s[0]))
    if rank == 0:
        return 0, 0.0
    if rank == s.size or s[rank] == 0.0:
        return rank, math.inf
    return rank, float(s[rank - 1] / s[rank])


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    delta = u.conj().T @ u - np.eye(u.shape[0])
    return float(np.abs(delta).max()) <= tol


def assert_unitary(u: np.ndarray, tol: float = UNITARY_TOL, what: str = "matrix"):
    if not is_unitary(u, tol):
        raise ValueError(f"{what} is not unitary within {tol:g}")


def expm_antihermitian(h: np.ndarray) -> np.ndarray:
    """exp(H) for anti-Hermitian H, via the eigendecomposition of -iH."""
    h = np.asarray(h, dtype=complex)
    if float(np.abs(h + h.conj().T).max()) > 1e-10:
        raise ValueError("generator is not anti-Hermitian within 1e-10")
    w, v = np.linalg.eigh(-1j * h)
    return (v * np.exp(1j * w)) @ v.conj().T


def haar_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed m x m unitary: QR of a complex Ginibre matrix with
    the R-diagonal phase correction."""
    if m < 1:
        raise ValueError("dimension must be >= 1")
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))

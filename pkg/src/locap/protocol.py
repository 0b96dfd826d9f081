"""Explicit eight-symbol dense-coding protocol: two photons in four modes,
Alice holding two.

The codebook family is an initial state with ten amplitude/phase pairs and
eight 2x2 operations: identity, minus identity, and six balanced rotations
whose phases step by pi/3.  Orthogonality of the eight encoded states is
equivalent to a small closed set of constraints on the parameters, checked
here both directly (residuals) and end to end through the generic
multi-photon lift.
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .entropyopt import Codebook, codebook_states, von_neumann_entropy
from .fock import enumerate_basis, sector_split
from .multiphoton import StateVector

N_PHOTONS = 2
N_MODES = 4
M_ALICE = 2
NUM_SYMBOLS = 8
CONSTRAINT_TOL = 1e-9

DEFAULT_FAMILY = "default"
RANDOM_FAMILY = "random"


@dataclass
class ProtocolParams:
    """Ten amplitudes c (nonnegative), ten phases d (radians), and the base
    rotation phase q3; the rotation phases are q3 + (pi/3)(x - 3)."""

    amplitudes: np.ndarray
    phases: np.ndarray
    q3: float

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        self.phases = np.asarray(self.phases, dtype=float)
        if self.amplitudes.shape != (10,) or self.phases.shape != (10,):
            raise ValueError("need exactly ten amplitudes and ten phases")
        if (self.amplitudes < 0).any():
            raise ValueError("amplitudes must be nonnegative")

    def q(self, x: int) -> float:
        if not 3 <= x <= NUM_SYMBOLS:
            raise ValueError(f"rotation phase defined for symbols 3..8, got {x}")
        return self.q3 + (math.pi / 3.0) * (x - 3)


@dataclass
class ConstraintReport:
    residuals: dict
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def satisfied(self) -> bool:
        return self.max_residual < self.tol


@dataclass
class ProtocolVerification:
    gram: np.ndarray
    max_off_diagonal: float
    entropy_bits: float
    span_rank: int
    mean_alice_photons: float
    constraints: ConstraintReport
    tol: float
    passed: bool


def default_params() -> ProtocolParams:
    """Closed-form family: zeroing c2, c5, c9, c10 kills both trigonometric
    constraints term by term, independent of q3."""
    c = np.zeros(10)
    c[0] = math.sqrt(3.0 / 8.0)
    c[[2, 3, 5, 6, 7]] = math.sqrt(1.0 / 8.0)
    d = np.zeros(10)
    d[2] = math.pi
    return ProtocolParams(c, d, 0.0)


def build_initial_state(params: ProtocolParams, basis) -> StateVector:
    """Amplitudes c_k e^{i d_k} over the canonical (2, 4) basis order."""
    if basis.n_photons != N_PHOTONS or basis.n_modes != N_MODES:
        raise ValueError("protocol state lives on the (2 photons, 4 modes) basis")
    if basis.states[0] != (2, 0, 0, 0):
        raise ValueError("basis is not in canonical descending-lexicographic order")
    amps = params.amplitudes * np.exp(1j * params.phases)
    return StateVector(basis, amps.astype(np.complex128))


def alice_unitary(x: int, params: ProtocolParams) -> np.ndarray:
    """Alice's operation for symbol x, as the single-photon operator matrix.

    For x >= 3 the entries specify the creation-operator mixing
    a_i^dag -> sum_j u_ij a_j^dag; the lift consumes the matrix acting on
    single-photon amplitudes, which is the transpose of that table.
    """
    if x == 1:
        return np.eye(2, dtype=np.complex128)
    if x == 2:
        return -np.eye(2, dtype=np.complex128)
    if not 3 <= x <= NUM_SYMBOLS:
        raise ValueError(f"symbol index must be 1..{NUM_SYMBOLS}, got {x}")
    qx = params.q(x)
    diag = 1j * ((-1) ** x) * math.sqrt(1.0 / 3.0)
    off = math.sqrt(2.0 / 3.0)
    mixing = np.array([
        [diag, -off * np.exp(-1j * qx)],
        [off * np.exp(1j * qx), -diag],
    ])
    return mixing.T.copy()


def check_constraints(params: ProtocolParams, tol: float = CONSTRAINT_TOL) -> ConstraintReport:
    """Residuals of the orthogonality constraint set (all zero when valid)."""
    c, d, q3 = params.amplitudes, params.phases, params.q3
    c1, c2, c3, c4, c5, c6, c7, c8, c9, c10 = c
    d1, d2, d3, d4, d5, d6, d7 = d[:7]

    phase_sum = d3 + d7 - d4 - d6
    nearest_odd = 2.0 * round((phase_sum / math.pi - 1.0) / 2.0) + 1.0

    a1 = d1 - d2 - q3
    a2 = d1 - d5 - 2.0 * q3
    a3 = d2 - d5 - q3
    residuals = {
        "alice_weight": abs(c1**2 + c2**2 + c5**2 - 3.0 / 8.0),
        "c3_minus_c7": abs(c3 - c7),
        "c4_minus_c6": abs(c4 - c6),
        "pair_weight": abs(c3**2 + c4**2 - 1.0 / 4.0),
        "bob_weight": abs(c8**2 + c9**2 + c10**2 - 1.0 / 8.0),
        "phase_parity": abs(phase_sum - nearest_odd * math.pi),
        "trig_cos": abs(c1 * c2 * math.cos(a1) - c1 * c5 * math.sin(a2)
                        - c2 * c5 * math.cos(a3)),
        "trig_sin": abs(c1 * c2 * math.sin(a1) - c1 * c5 * math.cos(a2)
                        - c2 * c5 * math.sin(a3)),
        "normalization": abs(float(np.dot(c, c)) - 1.0),
    }
    return ConstraintReport(residuals, tol)


def solve_params(seed: int | None = None, family: str = DEFAULT_FAMILY,
                 max_tries: int = 200) -> ProtocolParams:
    """A constraint-satisfying parameter set.

    ``default`` returns the closed-form family; ``random`` samples the
    constraint manifold: quadric constraints are met by construction and
    the two trigonometric constraints are solved for (d1, d2, d5, q3) by
    least squares, redrawing when the drawn amplitudes admit no solution.
    """
    if family == DEFAULT_FAMILY:
        return default_params()
    if family != RANDOM_FAMILY:
        raise ValueError(f"unknown family {family!r}")

    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        t = rng.uniform(0.0, math.pi / 2.0)
        c3 = 0.5 * math.cos(t)
        c4 = 0.5 * math.sin(t)
        v = np.abs(rng.standard_normal(3))
        c1, c2, c5 = math.sqrt(3.0 / 8.0) * v / np.linalg.norm(v)
        w = np.abs(rng.standard_normal(3))
        c8, c9, c10 = math.sqrt(1.0 / 8.0) * w / np.linalg.norm(w)
        d = rng.uniform(-math.pi, math.pi, 10)
        d[6] = math.pi + d[3] + d[5] - d[2]

        def trig(z):
            d1, d2, d5, q3 = z
            g = (c1 * c2 * math.cos(d1 - d2 - q3)
                 - c1 * c5 * math.sin(d1 - d5 - 2 * q3)
                 - c2 * c5 * math.cos(d2 - d5 - q3))
            h = (c1 * c2 * math.sin(d1 - d2 - q3)
                 - c1 * c5 * math.cos(d1 - d5 - 2 * q3)
                 - c2 * c5 * math.sin(d2 - d5 - q3))
            return [g, h]

        for _ in range(20):
            sol = least_squares(trig, rng.uniform(-math.pi, math.pi, 4),
                                xtol=3e-16, ftol=3e-16, gtol=3e-16)
            if np.abs(sol.fun).max() < 1e-12:
                d[0], d[1], d[4] = sol.x[:3]
                c = np.array([c1, c2, c3, c4, c5, c4, c3, c8, c9, c10])
                params = ProtocolParams(c, d, float(sol.x[3]))
                report = check_constraints(params)
                if report.satisfied:
                    return params
                break
    raise RuntimeError(f"no constraint-satisfying parameters found in {max_tries} draws")


def codebook(params: ProtocolParams) -> Codebook:
    """The protocol as an eight-symbol uniform codebook."""
    basis = enumerate_basis(N_PHOTONS, N_MODES)
    psi1 = build_initial_state(params, basis)
    unitaries = [alice_unitary(x, params) for x in range(1, NUM_SYMBOLS + 1)]
    return Codebook(psi1, unitaries)


def verify_protocol(params: ProtocolParams | None = None,
                    tol: float = 1e-10) -> ProtocolVerification:
    """Constraint residuals plus the end-to-end check through the generic
    lift: the eight encoded states must be pairwise orthogonal and their
    uniform mixture must carry exactly three bits."""
    if params is None:
        params = default_params()
    basis = enumerate_basis(N_PHOTONS, N_MODES)
    decomp = sector_split(basis, M_ALICE)
    book = codebook(params)
    states = codebook_states(book, decomp)
    gram = states.conj() @ states.T
    off = gram - np.diag(np.diag(gram))
    max_off = float(np.abs(off).max())

    rho = (states.T * book.probabilities) @ states.conj()
    entropy = von_neumann_entropy(rho)

    s = np.linalg.svd(states.T, compute_uv=False)
    span_rank = int(np.count_nonzero(s > 1e-8 * s[0]))

    alice_photons = basis.array[:, :M_ALICE].sum(axis=1)
    weights = (np.abs(states) ** 2 * book.probabilities[:, None]).sum(axis=0)
    mean_photons = float(weights @ alice_photons)

    constraints = check_constraints(params)
    passed = max_off < tol and abs(entropy - 3.0) < 1e-9
    return ProtocolVerification(
        gram=gram,
        max_off_diagonal=max_off,
        entropy_bits=entropy,
        span_rank=span_rank,
        mean_alice_photons=mean_photons,
        constraints=constraints,
        tol=tol,
        passed=passed,
    )


def save_params(path, params: ProtocolParams):
    payload = {
        "amplitudes": [float(x) for x in params.amplitudes],
        "phases": [float(x) for x in params.phases],
        "q3": float(params.q3),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_params(path) -> ProtocolParams:
    with open(path) as fh:
        payload = json.load(fh)
    return ProtocolParams(np.array(payload["amplitudes"]),
                          np.array(payload["phases"]),
                          float(payload["q3"]))

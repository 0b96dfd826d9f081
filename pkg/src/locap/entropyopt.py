"""Maximize the von Neumann entropy of a linear-optical codebook ensemble.

A codebook is a shared initial state plus one mode unitary per classical
symbol (the first fixed to the identity) and symbol probabilities.  The
objective is the entropy of the resulting mixture, optimized over the
initial state (unit sphere) and the free unitaries (anti-Hermitian
generator exponentials, m_a^2 real parameters each).

The gradient is analytic: with G = -(log2 rho + 1/ln2) on the support of
rho, a tangent direction K at U moves the lifted state by the one-body
generator sum_ij K_ij a_i^dag a_j, so each unitary's gradient reduces to an
m_a x m_a cross matrix <G psi_x| a_i^dag a_j |psi_x> contracted with the
differential of the matrix exponential.  A finite-difference mode exists as
a cross-check.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from .capacity import capacity_bits
from .exceptions import BasisMismatch
from .fock import FockBasis, SectorDecomposition, enumerate_basis, sector_split
from .multiphoton import (
    StateVector,
    apply,
    apply_adjoint,
    lift_alice_unitary,
)

_LN2 = math.log(2.0)
_EIG_FLOOR = 1e-12


# --------------------------------------------------------------------------
# codebooks and their ensemble quantities


@dataclass
class Codebook:
    """Shared state, per-symbol mode unitaries (first = identity), and
    symbol probabilities."""

    psi1: StateVector
    unitaries: list
    probabilities: np.ndarray = None

    def __post_init__(self):
        k = len(self.unitaries)
        if k < 1:
            raise ValueError("codebook needs at least one symbol")
        eye = np.eye(self.unitaries[0].shape[0])
        if np.abs(self.unitaries[0] - eye).max() > 1e-12:
            raise ValueError("the first codebook unitary must be the identity")
        if self.probabilities is None:
            self.probabilities = np.full(k, 1.0 / k)
        self.probabilities = np.asarray(self.probabilities, dtype=float)
        if self.probabilities.shape != (k,):
            raise ValueError("need one probability per symbol")
        if (self.probabilities < 0).any() or abs(self.probabilities.sum() - 1.0) > 1e-9:
            raise ValueError("probabilities must be nonnegative and sum to 1")

    @property
    def num_symbols(self) -> int:
        return len(self.unitaries)


def codebook_states(codebook: Codebook, decomp: SectorDecomposition) -> np.ndarray:
    """Stack the encoded states as rows of an (X, dim) array."""
    psi1 = codebook.psi1
    rows = [psi1.amplitudes]
    for u in codebook.unitaries[1:]:
        rows.append(apply(lift_alice_unitary(u, decomp), psi1).amplitudes)
    return np.array(rows)


def density_matrix(codebook: Codebook, basis: FockBasis,
                   decomp: SectorDecomposition) -> np.ndarray:
    """Probability-weighted mixture of the encoded pure states."""
    if not basis.compatible(codebook.psi1.basis):
        raise BasisMismatch("codebook state does not live on the given basis")
    states = codebook_states(codebook, decomp)
    return (states.T * codebook.probabilities) @ states.conj()


def gram_matrix(codebook: Codebook, basis: FockBasis,
                decomp: SectorDecomposition) -> np.ndarray:
    """Pairwise overlaps <psi_i|psi_j> of the encoded states."""
    if not basis.compatible(codebook.psi1.basis):
        raise BasisMismatch("codebook state does not live on the given basis")
    states = codebook_states(codebook, decomp)
    return states.conj() @ states.T


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr rho log2 rho in bits; eigenvalues clamped to [0, 1], 0 log 0 = 0."""
    rho = np.asarray(rho)
    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > 1e-8:
        raise ValueError(f"density matrix trace {trace} deviates from 1 beyond 1e-8")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    w = np.clip(w, 0.0, 1.0)
    w = w[w > _EIG_FLOOR]
    return float(-(w * np.log2(w)).sum())


def probability_gradient(codebook: Codebook, basis: FockBasis,
                         decomp: SectorDecomposition) -> np.ndarray:
    """dS/dp_x at the codebook's probabilities (unconstrained direction)."""
    states = codebook_states(codebook, decomp)
    rho = (states.T * codebook.probabilities) @ states.conj()
    coeff, vecs = _entropy_support(rho)
    g = (vecs * coeff) @ vecs.conj().T
    return np.einsum("xi,ij,xj->x", states.conj(), g, states).real


def _spectrum(rho):
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return np.clip(w, 0.0, 1.0), v


def _entropy_support(rho):
    """Eigen data for the entropy derivative: -(log2 w + 1/ln2) on support."""
    w, v = _spectrum(rho)
    keep = w > _EIG_FLOOR
    coeff = -(np.log2(w[keep]) + 1.0 / _LN2)
    return coeff, v[:, keep]


# --------------------------------------------------------------------------
# parametrization


def _hermitian_basis(m: int) -> np.ndarray:
    """(m^2, m, m) basis of Hermitian matrices matching the theta layout:
    diagonal units, then symmetric and antisymmetric pair matrices."""
    out = np.zeros((m * m, m, m), dtype=np.complex128)
    for k in range(m):
        out[k, k, k] = 1.0
    idx = m
    for k in range(m):
        for l in range(k + 1, m):
            out[idx, k, l] = 1.0
            out[idx, l, k] = 1.0
            idx += 1
    for k in range(m):
        for l in range(k + 1, m):
            out[idx, k, l] = 1.0j
            out[idx, l, k] = -1.0j
            idx += 1
    return out


def _hermitian_from_theta(theta: np.ndarray, m: int) -> np.ndarray:
    a = np.zeros((m, m), dtype=np.complex128)
    a[np.diag_indices(m)] = theta[:m]
    iu = np.triu_indices(m, 1)
    npair = iu[0].size
    re = theta[m:m + npair]
    im = theta[m + npair:]
    a[iu] = re + 1j * im
    a[(iu[1], iu[0])] = re - 1j * im
    return a


def _theta_from_hermitian(a: np.ndarray) -> np.ndarray:
    m = a.shape[0]
    iu = np.triu_indices(m, 1)
    return np.concatenate([np.diagonal(a).real, a[iu].real, a[iu].imag])


def _theta_from_unitary(u: np.ndarray) -> np.ndarray:
    """Generator parameters reproducing u = exp(i A); principal branch."""
    a = scipy.linalg.logm(u) / 1j
    return _theta_from_hermitian(0.5 * (a + a.conj().T))


def _one_body_tables(basis: FockBasis, m_a: int):
    """Sparse COO action of a_i^dag a_j on the full basis, for Alice modes."""
    tables = []
    for i in range(m_a):
        for j in range(m_a):
            src, dst, coeff = [], [], []
            for idx, occ in enumerate(basis.states):
                if occ[j] == 0:
                    continue
                src.append(idx)
                if i == j:
                    dst.append(idx)
                    coeff.append(float(occ[j]))
                else:
                    moved = list(occ)
                    moved[j] -= 1
                    moved[i] += 1
                    dst.append(basis.index_of[tuple(moved)])
                    coeff.append(math.sqrt(occ[j] * (occ[i] + 1)))
            tables.append((np.array(dst, dtype=np.intp),
                           np.array(src, dtype=np.intp),
                           np.array(coeff)))
    return tables


class _EntropyObjective:
    """Value and analytic gradient of -S over the packed parameter vector.

    Layout: [Re psi1 | Im psi1 | theta_2 ... theta_X | (logits)] where each
    theta block has m_a^2 entries and logits appear only when probabilities
    are optimized (softmax over symbols).
    """

    def __init__(self, n, m, m_a, num_symbols, optimize_probabilities=False):
        self.basis = enumerate_basis(n, m)
        self.decomp = sector_split(self.basis, m_a)
        self.dim = self.basis.dim
        self.m_a = m_a
        self.num_symbols = num_symbols
        self.n_u_params = m_a * m_a
        self.optimize_probabilities = optimize_probabilities
        self.n_params = (2 * self.dim + (num_symbols - 1) * self.n_u_params
                         + (num_symbols if optimize_probabilities else 0))
        self.herm_basis = _hermitian_basis(m_a)
        self.tables = _one_body_tables(self.basis, m_a)
        self.last_entropy = None

    # -- packing ----------------------------------------------------------

    def unpack(self, theta):
        d = self.dim
        v = theta[:d] + 1j * theta[d:2 * d]
        nu = self.n_u_params
        end = 2 * d + (self.num_symbols - 1) * nu
        blocks = theta[2 * d:end].reshape(self.num_symbols - 1, nu)
        logits = theta[end:] if self.optimize_probabilities else None
        return v, blocks, logits

    def random_theta(self, rng, scale=1.0):
        theta = rng.standard_normal(self.n_params) * scale
        if self.optimize_probabilities:
            theta[-self.num_symbols:] = 0.0  # start from uniform
        return theta

    def theta_from_codebook(self, codebook, rng):
        """Parameters reproducing a codebook; missing symbols drawn fresh."""
        d = self.dim
        theta = np.empty(self.n_params)
        amps = codebook.psi1.amplitudes
        theta[:d] = amps.real
        theta[d:2 * d] = amps.imag
        nu = self.n_u_params
        for x in range(1, self.num_symbols):
            lo = 2 * d + (x - 1) * nu
            if x < codebook.num_symbols:
                theta[lo:lo + nu] = _theta_from_unitary(codebook.unitaries[x])
            else:
                theta[lo:lo + nu] = rng.standard_normal(nu)
        if self.optimize_probabilities:
            p = np.full(self.num_symbols, 1.0 / self.num_symbols)
            if codebook.num_symbols == self.num_symbols:
                p = np.maximum(codebook.probabilities, 1e-12)
            theta[-self.num_symbols:] = np.log(p / p[-1])
        return theta

    def codebook_from(self, theta) -> Codebook:
        v, blocks, logits = self.unpack(theta)
        psi1 = StateVector(self.basis, v / np.linalg.norm(v))
        unitaries = [np.eye(self.m_a, dtype=np.complex128)]
        for row in blocks:
            a = _hermitian_from_theta(row, self.m_a)
            lam, vv = np.linalg.eigh(a)
            unitaries.append((vv * np.exp(1j * lam)) @ vv.conj().T)
        probs = _softmax(logits) if logits is not None else None
        return Codebook(psi1, unitaries, probs)

    # -- objective ---------------------------------------------------------

    def value(self, theta) -> float:
        return self.value_and_grad(theta)[0]

    def value_and_grad(self, theta):
        d, m_a = self.dim, self.m_a
        nsym = self.num_symbols
        v, blocks, logits = self.unpack(theta)
        nv = np.linalg.norm(v)
        psi1_vec = v / nv
        psi1 = StateVector(self.basis, psi1_vec)

        eigs, lifts = [], [None]  # lifts[0] stays the implicit identity
        states = np.empty((nsym, d), dtype=np.complex128)
        states[0] = psi1_vec
        for x in range(1, nsym):
            a = _hermitian_from_theta(blocks[x - 1], m_a)
            lam, vv = np.linalg.eigh(a)
            u = (vv * np.exp(1j * lam)) @ vv.conj().T
            eigs.append((lam, vv, u))
            op = lift_alice_unitary(u, self.decomp)
            lifts.append(op)
            states[x] = apply(op, psi1).amplitudes

        p = _softmax(logits) if logits is not None else np.full(nsym, 1.0 / nsym)
        rho = (states.T * p) @ states.conj()
        lam_rho, vecs_rho = _spectrum(rho)
        keep = lam_rho > _EIG_FLOOR
        lam_pos = lam_rho[keep]
        entropy = float(-(lam_pos * np.log2(lam_pos)).sum())
        self.last_entropy = entropy

        coeff = -(np.log2(lam_pos) + 1.0 / _LN2)
        vecs = vecs_rho[:, keep]
        g_mat = (vecs * coeff) @ vecs.conj().T
        w_states = states @ g_mat.T  # row x is G @ psi_x

        grad = np.zeros(self.n_params)

        # initial-state block: b = sum_x p_x L_x^dag G psi_x, radial part removed
        b = p[0] * w_states[0]
        for x in range(1, nsym):
            b = b + p[x] * apply_adjoint(
                lifts[x], StateVector(self.basis, w_states[x])).amplitudes
        c = b - np.vdot(psi1_vec, b).real * psi1_vec
        grad[:d] = 2.0 * c.real / nv
        grad[d:2 * d] = 2.0 * c.imag / nv

        # cross matrices T[x, i*m+j] = <G psi_x| a_i^dag a_j |psi_x>
        t_cross = np.empty((nsym, m_a * m_a), dtype=np.complex128)
        for k, (dst, src, cf) in enumerate(self.tables):
            t_cross[:, k] = ((w_states[:, dst].conj() * cf) * states[:, src]).sum(axis=1)

        nu = self.n_u_params
        for x in range(1, nsym):
            lam, vv, u = eigs[x - 1]
            delta = lam[:, None] - lam[None, :]
            phi = 1j * np.exp(0.5j * (lam[:, None] + lam[None, :])) \
                * np.sinc(delta / (2.0 * math.pi))
            e_tilde = np.einsum("ka,pkl,lb->pab", vv.conj(), self.herm_basis, vv)
            du = vv[None] @ (phi[None] * e_tilde) @ vv.conj().T[None]
            k_tan = du @ u.conj().T[None]
            s = np.einsum("pij,ij->p", k_tan, t_cross[x].reshape(m_a, m_a))
            lo = 2 * d + (x - 1) * nu
            grad[lo:lo + nu] = 2.0 * p[x] * s.real

        if logits is not None:
            ds_dp = np.einsum("xi,xi->x", states.conj(), w_states).real
            grad[-nsym:] = p * (ds_dp - float(p @ ds_dp))

        return -entropy, -grad


def _softmax(logits):
    z = logits - logits.max()
    e = np.exp(z)
    return e / e.sum()


# --------------------------------------------------------------------------
# driver


@dataclass
class OptimizerConfig:
    restarts: int = 20
    max_iter: int = 2000
    grad_tol: float = 1e-7
    f_tol: float = 1e-14
    method: str = "l-bfgs"        # "l-bfgs" | "momentum"
    gradient: str = "analytic"    # "analytic" | "fd"
    optimize_probabilities: bool = False
    threads: int = 1
    init_scale: float = 1.0


@dataclass
class OptResult:
    s_max_bits: float
    codebook: Codebook
    gram: np.ndarray
    restarts_used: int
    converged: bool
    trajectory: list
    seed: int


@dataclass
class SweepPoint:
    num_symbols: int
    s_max_bits: float
    log2_num_symbols: float
    capacity_bits: float
    converged: bool
    restarts_used: int


def _minimize_momentum(objective, theta0, config):
    """Gradient descent with momentum; simple fallback optimizer."""
    theta = theta0.copy()
    velocity = np.zeros_like(theta)
    best_f, best_theta = math.inf, theta0
    traj = []
    lr, beta = 0.05, 0.9
    for _ in range(config.max_iter):
        f, g = objective.value_and_grad(theta)
        traj.append(objective.last_entropy)
        if f < best_f:
            best_f, best_theta = f, theta.copy()
        if np.abs(g).max() <= config.grad_tol:
            break
        velocity = beta * velocity - lr * g
        theta = theta + velocity
    return best_f, best_theta, traj


def _run_restart(n, m, m_a, num_symbols, config, seed_seq, warm_theta=None):
    objective = _EntropyObjective(n, m, m_a, num_symbols,
                                  config.optimize_probabilities)
    rng = np.random.default_rng(seed_seq)
    if warm_theta is not None:
        theta0 = warm_theta
    else:
        theta0 = objective.random_theta(rng, config.init_scale)

    traj = []
    if config.method == "momentum":
        f_best, theta_best, traj = _minimize_momentum(objective, theta0, config)
    elif config.method == "l-bfgs":
        if config.gradient == "analytic":
            fun, jac = objective.value_and_grad, True
        else:
            fun, jac = objective.value, None

        def track(_xk):
            traj.append(objective.last_entropy)

        res = minimize(fun, theta0, jac=jac, method="L-BFGS-B",
                       callback=track,
                       options={"maxiter": config.max_iter,
                                "maxfun": 20 * config.max_iter,
                                "ftol": config.f_tol, "gtol": config.grad_tol / 10})
        f_best, theta_best = res.fun, res.x
    else:
        raise ValueError(f"unknown optimizer method {config.method!r}")

    _, g = objective.value_and_grad(theta_best)
    return {"f": float(f_best), "theta": theta_best,
            "grad_norm": float(np.abs(g).max()), "trajectory": traj}


def _restart_payload(args):
    return _run_restart(*args)


def maximize_entropy(n: int, m: int, m_a: int, num_symbols: int,
                     config: OptimizerConfig | None = None, seed: int = 42,
                     initial_codebook: Codebook | None = None) -> OptResult:
    """Best entropy over random restarts; see module docstring for the
    parametrization.  ``initial_codebook`` warm-starts the first restart
    (padded with fresh random unitaries if it has fewer symbols).

    Never raises on poor convergence: the best effort is returned with
    ``converged=False`` when no restart met the gradient tolerance.
    """
    if num_symbols < 2:
        raise ValueError("need at least two symbols to encode anything")
    config = config or OptimizerConfig()
    seed_seqs = np.random.SeedSequence(seed).spawn(config.restarts + 1)

    warm = None
    if initial_codebook is not None:
        objective = _EntropyObjective(n, m, m_a, num_symbols,
                                      config.optimize_probabilities)
        warm = objective.theta_from_codebook(
            initial_codebook, np.random.default_rng(seed_seqs[-1]))

    jobs = [(n, m, m_a, num_symbols, config, seed_seqs[r],
             warm if r == 0 else None)
            for r in range(config.restarts)]

    if config.threads > 1 and config.restarts > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            outcomes = list(pool.map(_restart_payload, jobs))
    else:
        outcomes = [_run_restart(*job) for job in jobs]

    best_idx = min(range(len(outcomes)), key=lambda r: (outcomes[r]["f"], r))
    best = outcomes[best_idx]

    objective = _EntropyObjective(n, m, m_a, num_symbols,
                                  config.optimize_probabilities)
    codebook = objective.codebook_from(best["theta"])
    gram = gram_matrix(codebook, objective.basis, objective.decomp)
    return OptResult(
        s_max_bits=-best["f"],
        codebook=codebook,
        gram=gram,
        restarts_used=config.restarts,
        converged=best["grad_norm"] <= config.grad_tol,
        trajectory=best["trajectory"],
        seed=seed,
    )


def symbol_sweep(n: int, m: int, m_a: int, x_values, config=None, seed: int = 42,
                 warm_start: bool = True):
    """Entropy maxima over a range of codebook sizes.

    Each size is warm-started from the previous best codebook plus one fresh
    random unitary (disable with ``warm_start=False`` for bias checks).
    Individual failures are recorded as non-converged points; the sweep
    continues.
    """
    config = config or OptimizerConfig()
    cap = capacity_bits(n, m, m_a)
    points, previous = [], None
    for k, num_symbols in enumerate(x_values):
        try:
            result = maximize_entropy(
                n, m, m_a, num_symbols, config, seed=seed + k,
                initial_codebook=previous if warm_start else None)
        except (np.linalg.LinAlgError, ValueError):
            points.append(SweepPoint(num_symbols, math.nan,
                                     math.log2(num_symbols), cap, False,
                                     config.restarts))
            continue
        if warm_start:
            previous = result.codebook
        points.append(SweepPoint(
            num_symbols=num_symbols,
            s_max_bits=result.s_max_bits,
            log2_num_symbols=math.log2(num_symbols),
            capacity_bits=cap,
            converged=result.converged,
            restarts_used=result.restarts_used,
        ))
    return points


# --------------------------------------------------------------------------
# codebook files

CODEBOOK_FORMAT = "locap-codebook-v1"


def _complex_pairs(z):
    return [[float(c.real), float(c.imag)] for c in np.asarray(z).ravel()]


def _from_pairs(pairs, shape):
    arr = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return arr.reshape(shape)


def save_codebook(path, codebook: Codebook, metadata: dict | None = None):
    basis = codebook.psi1.basis
    m_a = codebook.unitaries[0].shape[0]
    payload = {
        "format": CODEBOOK_FORMAT,
        "n_photons": basis.n_photons,
        "n_modes": basis.n_modes,
        "m_alice": m_a,
        "psi1": _complex_pairs(codebook.psi1.amplitudes),
        "unitaries": [_complex_pairs(u) for u in codebook.unitaries],
        "probabilities": [float(p) for p in codebook.probabilities],
        "metadata": metadata or {},
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_codebook(path):
    """Read a codebook file; returns (codebook, metadata)."""
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != CODEBOOK_FORMAT:
        raise ValueError(f"not a {CODEBOOK_FORMAT} file: {path}")
    basis = enumerate_basis(payload["n_photons"], payload["n_modes"])
    m_a = payload["m_alice"]
    psi1 = StateVector(basis, _from_pairs(payload["psi1"], (basis.dim,)))
    unitaries = [_from_pairs(u, (m_a, m_a)) for u in payload["unitaries"]]
    probs = np.array(payload["probabilities"], dtype=float)
    return Codebook(psi1, unitaries, probs), payload.get("metadata", {})

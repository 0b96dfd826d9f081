import math

import numpy as np
import pytest

from locap import protocol
from locap.capacity import capacity_bits
from locap.entropyopt import (
    Codebook,
    OptimizerConfig,
    _EntropyObjective,
    codebook_states,
    density_matrix,
    gram_matrix,
    load_codebook,
    maximize_entropy,
    probability_gradient,
    save_codebook,
    symbol_sweep,
    von_neumann_entropy,
)
from locap.fock import enumerate_basis, sector_split
from locap.multiphoton import StateVector, apply, lift_alice_unitary
from locap.numerics import haar_unitary
from locap.spanrank import random_initial_state


@pytest.fixture(scope="module")
def system_242():
    basis = enumerate_basis(2, 4)
    return basis, sector_split(basis, 2)


def random_codebook(basis, decomp, num_symbols, rng):
    psi1 = random_initial_state(basis, rng)
    unitaries = [np.eye(decomp.m_alice, dtype=complex)]
    unitaries += [haar_unitary(decomp.m_alice, rng) for _ in range(num_symbols - 1)]
    return Codebook(psi1, unitaries)


# -- ensemble quantities ----------------------------------------------------


def test_density_matrix_single_symbol_is_projector(system_242):
    basis, decomp = system_242
    book = random_codebook(basis, decomp, 1, np.random.default_rng(0))
    rho = density_matrix(book, basis, decomp)
    w = np.linalg.eigvalsh(rho)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
    assert np.count_nonzero(w > 1e-10) == 1
    assert w[-1] == pytest.approx(1.0, abs=1e-10)


def test_density_matrix_orthogonal_mixture(system_242):
    basis, decomp = system_242
    book = protocol.codebook(protocol.default_params())
    rho = density_matrix(book, basis, decomp)
    w = np.sort(np.linalg.eigvalsh(rho))
    assert np.allclose(w[-8:], 1.0 / 8.0, atol=1e-10)
    assert np.allclose(w[:-8], 0.0, atol=1e-10)


def test_density_matrix_trace_and_psd(system_242):
    basis, decomp = system_242
    rng = np.random.default_rng(1)
    for k in (2, 5):
        rho = density_matrix(random_codebook(basis, decomp, k, rng), basis, decomp)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_von_neumann_entropy_values():
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(np.eye(8) / 8.0) == pytest.approx(3.0, abs=1e-12)
    assert von_neumann_entropy(np.diag([0.5, 0.25, 0.25])) == pytest.approx(
        1.5, abs=1e-12)


def test_von_neumann_entropy_trace_violation():
    with pytest.raises(ValueError):
        von_neumann_entropy(np.eye(3))


def test_gram_matrix_identical_unitaries(system_242):
    basis, decomp = system_242
    psi1 = random_initial_state(basis, np.random.default_rng(2))
    u = haar_unitary(2, np.random.default_rng(3))
    # same operation twice gives identical states, with the identity first
    book = Codebook(psi1, [np.eye(2, dtype=complex), u, u])
    g = gram_matrix(book, basis, decomp)
    assert np.abs(g[1:, 1:] - 1.0).max() < 1e-10
    assert np.abs(g - g.conj().T).max() < 1e-12
    assert np.allclose(np.diag(g).real, 1.0, atol=1e-9)


def test_gram_matrix_verified_protocol(system_242):
    basis, decomp = system_242
    book = protocol.codebook(protocol.default_params())
    g = gram_matrix(book, basis, decomp)
    assert np.abs(g - np.eye(8)).max() < 1e-10


def test_codebook_validation(system_242):
    basis, decomp = system_242
    psi1 = random_initial_state(basis, np.random.default_rng(4))
    with pytest.raises(ValueError):
        Codebook(psi1, [haar_unitary(2, np.random.default_rng(5))])
    with pytest.raises(ValueError):
        Codebook(psi1, [np.eye(2)], probabilities=np.array([0.5]))


# -- gradient ---------------------------------------------------------------


def test_analytic_gradient_matches_finite_differences():
    rng = np.random.default_rng(55)
    objective = _EntropyObjective(2, 4, 2, 5)
    eps = 1e-5
    for _ in range(20):
        theta = objective.random_theta(rng)
        _, grad = objective.value_and_grad(theta)
        for k in rng.choice(objective.n_params, size=8, replace=False):
            up, down = theta.copy(), theta.copy()
            up[k] += eps
            down[k] -= eps
            fd = (objective.value(up) - objective.value(down)) / (2 * eps)
            assert abs(fd - grad[k]) <= 1e-4 * max(abs(fd), abs(grad[k]), 1e-6)


# -- optimization -----------------------------------------------------------


def test_maximize_two_symbols_reaches_one_bit():
    cfg = OptimizerConfig(restarts=2, max_iter=2000)
    res = maximize_entropy(2, 4, 2, 2, cfg, seed=1)
    assert res.s_max_bits == pytest.approx(1.0, abs=1e-6)
    assert res.converged


def test_maximize_validates_symbol_count():
    with pytest.raises(ValueError):
        maximize_entropy(2, 4, 2, 1)


def test_holevo_chain_bounds(system_242):
    basis, decomp = system_242
    cfg = OptimizerConfig(restarts=2, max_iter=500)
    for num_symbols in (2, 6, 12):
        res = maximize_entropy(2, 4, 2, num_symbols, cfg, seed=num_symbols)
        assert 0.0 <= res.s_max_bits <= math.log2(num_symbols) + 1e-9
        assert res.s_max_bits <= capacity_bits(2, 4, 2) + 1e-9
        assert np.allclose(np.diag(res.gram).real, 1.0, atol=1e-9)


def test_entropy_invariant_under_global_lift(system_242):
    basis, decomp = system_242
    rng = np.random.default_rng(9)
    book = random_codebook(basis, decomp, 5, rng)
    rho = density_matrix(book, basis, decomp)
    rotation = lift_alice_unitary(haar_unitary(2, rng), decomp)
    rotated_states = [apply(rotation, StateVector(basis, s)).amplitudes
                      for s in codebook_states(book, decomp)]
    rotated = np.array(rotated_states)
    rho_rot = (rotated.T * book.probabilities) @ rotated.conj()
    assert von_neumann_entropy(rho_rot) == pytest.approx(
        von_neumann_entropy(rho), abs=1e-10)


def _probability_step_gain(book, basis, decomp, step):
    s_uniform = von_neumann_entropy(density_matrix(book, basis, decomp))
    grad = probability_gradient(book, basis, decomp)
    direction = grad - grad.mean()  # projected onto the simplex tangent
    p = np.clip(book.probabilities + step * direction, 0.0, None)
    p /= p.sum()
    perturbed = Codebook(book.psi1, book.unitaries, p)
    return von_neumann_entropy(density_matrix(perturbed, basis, decomp)) - s_uniform


def test_uniform_probabilities_optimal_at_converged_plateau():
    # at the fully saturated 8-symbol plateau the mixture is maximally flat,
    # so no probability reweighting can help
    cfg = OptimizerConfig(restarts=8, max_iter=4000)
    res = maximize_entropy(2, 4, 2, 8, cfg, seed=7)
    assert res.s_max_bits == pytest.approx(3.0, abs=1e-6)
    basis = enumerate_basis(2, 4)
    decomp = sector_split(basis, 2)
    for step in (1e-3, 1e-2):
        assert _probability_step_gain(res.codebook, basis, decomp, step) <= 1e-6


def test_uniform_probabilities_near_optimal_363(opt_363_x60):
    # the large plateau is approached slowly, so the achievable probability
    # gain is bounded by the remaining convergence slack rather than zero
    basis = enumerate_basis(3, 6)
    decomp = sector_split(basis, 3)
    slack = math.log2(38) - opt_363_x60.s_max_bits
    assert slack < 0.1
    for step in (1e-3, 1e-2):
        gain = _probability_step_gain(opt_363_x60.codebook, basis, decomp, step)
        assert gain <= max(1e-6, 0.1 * slack)


def test_simplex_mode_does_not_beat_uniform_plateau():
    cfg = OptimizerConfig(restarts=2, max_iter=1000, optimize_probabilities=True)
    res = maximize_entropy(2, 4, 2, 8, cfg, seed=3)
    assert res.s_max_bits <= 3.0 + 1e-9
    assert res.codebook.probabilities.sum() == pytest.approx(1.0, abs=1e-12)


def test_symbol_sweep_shape_242():
    cfg = OptimizerConfig(restarts=4, max_iter=2000)
    points = symbol_sweep(2, 4, 2, range(2, 11), cfg, seed=5)
    for p in points:
        if p.num_symbols <= 8:
            assert p.s_max_bits == pytest.approx(p.log2_num_symbols, abs=2e-2)
        else:
            assert p.s_max_bits == pytest.approx(3.0, abs=1e-2)
        assert p.capacity_bits == pytest.approx(3.0, abs=1e-12)


def test_momentum_fallback_improves():
    cfg = OptimizerConfig(restarts=1, max_iter=400, method="momentum")
    res = maximize_entropy(2, 4, 2, 2, cfg, seed=8)
    assert res.s_max_bits > 0.9
    assert res.s_max_bits <= 1.0 + 1e-9


def test_fd_gradient_mode():
    cfg = OptimizerConfig(restarts=1, max_iter=300, gradient="fd")
    res = maximize_entropy(2, 4, 2, 2, cfg, seed=2)
    assert res.s_max_bits == pytest.approx(1.0, abs=1e-4)


def test_warm_start_from_protocol_codebook():
    cfg = OptimizerConfig(restarts=1, max_iter=500)
    res = maximize_entropy(2, 4, 2, 8, cfg, seed=4,
                           initial_codebook=protocol.codebook(protocol.default_params()))
    assert res.s_max_bits == pytest.approx(3.0, abs=1e-9)


def test_codebook_roundtrip(tmp_path, system_242):
    basis, decomp = system_242
    book = random_codebook(basis, decomp, 4, np.random.default_rng(12))
    path = tmp_path / "codebook.json"
    save_codebook(path, book, metadata={"note": "test"})
    loaded, meta = load_codebook(path)
    assert meta == {"note": "test"}
    assert np.abs(loaded.psi1.amplitudes - book.psi1.amplitudes).max() < 1e-15
    assert len(loaded.unitaries) == 4
    for a, b in zip(loaded.unitaries, book.unitaries):
        assert np.abs(a - b).max() < 1e-15
    g1 = gram_matrix(book, basis, decomp)
    g2 = gram_matrix(loaded, basis, decomp)
    assert np.abs(g1 - g2).max() < 1e-12

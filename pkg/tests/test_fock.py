import itertools
import math

import numpy as np
import pytest

from locap.exceptions import DimensionCapExceeded, InvalidModeSplit
from locap.fock import dim_fock, enumerate_basis, log2_dim_fock, sector_split


def brute_force_occupations(n, m):
    return [occ for occ in itertools.product(range(n + 1), repeat=m) if sum(occ) == n]


def test_dim_fock_known_values():
    assert dim_fock(2, 4) == 10
    assert dim_fock(0, 5) == 1
    assert dim_fock(3, 3) == len(brute_force_occupations(3, 3)) == 10


def test_dim_fock_validation():
    with pytest.raises(ValueError):
        dim_fock(-1, 3)
    with pytest.raises(ValueError):
        dim_fock(2, 0)


def test_log2_dim_fock_small():
    assert log2_dim_fock(2, 4) == pytest.approx(math.log2(10), rel=1e-12)
    for m in (1, 3, 17):
        assert log2_dim_fock(0, m) == 0.0


def test_log2_dim_fock_against_exact_bigint():
    for n, m in [(40, 40), (200, 130), (7, 10**6), (5000, 5001)]:
        exact = math.log2(dim_fock(n, m))
        assert log2_dim_fock(n, m) == pytest.approx(exact, rel=1e-10)


def test_enumerate_basis_order_2_4():
    basis = enumerate_basis(2, 4)
    expected = [(2, 0, 0, 0), (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1),
                (0, 2, 0, 0), (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 2, 0),
                (0, 0, 1, 1), (0, 0, 0, 2)]
    assert list(basis.states) == expected


def test_enumerate_basis_degenerate_cases():
    vacuum = enumerate_basis(0, 3)
    assert vacuum.states == ((0, 0, 0),)
    single = enumerate_basis(1, 5)
    assert single.dim == 5
    for k, state in enumerate(single.states):
        assert state[k] == 1 and sum(state) == 1


def test_enumerate_basis_index_round_trip():
    basis = enumerate_basis(3, 4)
    for i, state in enumerate(basis.states):
        assert basis.index_of[state] == i
        assert basis.states[basis.index_of[state]] == state


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("m", range(1, 9))
def test_enumerate_basis_dimension(n, m):
    assert enumerate_basis(n, m).dim == dim_fock(n, m)


def test_enumerate_basis_cap():
    with pytest.raises(DimensionCapExceeded):
        enumerate_basis(30, 30, cap=1000)


def test_sector_split_sizes_2_4_2():
    decomp = sector_split(enumerate_basis(2, 4), 2)
    assert decomp.sector_sizes == [3, 4, 3]
    assert sum(decomp.sector_sizes) == 10


def test_sector_split_sizes_3_5_2_brute_force():
    by_alice = {}
    for occ in brute_force_occupations(3, 5):
        by_alice.setdefault(sum(occ[:2]), []).append(occ)
    decomp = sector_split(enumerate_basis(3, 5), 2)
    assert decomp.sector_sizes == [len(by_alice[n_a]) for n_a in range(4)]
    assert decomp.sector_sizes == [10, 12, 9, 4]


def test_sector_split_single_bob_mode():
    decomp = sector_split(enumerate_basis(3, 4), 3)
    for n_a, sector in enumerate(decomp.sectors):
        assert sector.index_grid.shape == (dim_fock(n_a, 3), 1)


@pytest.mark.parametrize("n,m", [(1, 2), (2, 4), (3, 5), (4, 4)])
def test_sector_split_partitions_basis(n, m):
    basis = enumerate_basis(n, m)
    for m_a in range(1, m):
        decomp = sector_split(basis, m_a)
        seen = np.concatenate([s.index_grid.ravel() for s in decomp.sectors])
        assert sorted(seen) == list(range(basis.dim))
        for n_a, sector in enumerate(decomp.sectors):
            assert sector.size == dim_fock(n_a, m_a) * dim_fock(n - n_a, m - m_a)


def test_sector_split_grid_consistency():
    basis = enumerate_basis(3, 5)
    decomp = sector_split(basis, 2)
    for sector in decomp.sectors:
        for i, sa in enumerate(sector.alice_basis.states):
            for j, sb in enumerate(sector.bob_basis.states):
                assert basis.states[sector.index_grid[i, j]] == sa + sb


def test_sector_split_invalid():
    basis = enumerate_basis(2, 4)
    for m_a in (0, 4, 5):
        with pytest.raises(InvalidModeSplit):
            sector_split(basis, m_a)

"""Dense full-space references against the sector machinery."""
import itertools
import math

import numpy as np
import pytest

from cavitysim.hamiltonian import ModelParams, build_hamiltonian
from cavitysim.hilbert import LatticeSpec, SiteConfig, enumerate_sector
from cavitysim.oracle import (
    dense_collapse_operators,
    dense_hamiltonian,
    dense_lindblad_propagate,
    sector_embedding,
)
from cavitysim.solvers import (
    dissipative_chain,
    ensemble_average,
    evolve,
    run_trajectories,
)
from cavitysim.states import QuantumState

P = ModelParams(hop_A=0.01)


def total_excitation_diagonal(lattice):
    d = 2 * (lattice.photon_cutoff + 1)
    dim = d**lattice.num_sites
    diag = np.zeros(dim)
    for idx in range(dim):
        rest = idx
        for _ in range(lattice.num_sites):
            local = rest % d
            rest //= d
            diag[idx] += local // 2 + local % 2
    return diag


def test_single_cell_block_structure():
    lattice = LatticeSpec(1, photon_cutoff=1)
    h = dense_hamiltonian(lattice, P).matrix
    assert h.shape == (4, 4)
    totals = total_excitation_diagonal(lattice)
    for i, j in itertools.product(range(4), repeat=2):
        if totals[i] != totals[j]:
            assert abs(h[i, j]) < 1e-15


def test_block_structure_two_sites():
    lattice = LatticeSpec(2, photon_cutoff=2)
    h = dense_hamiltonian(lattice, ModelParams(hop_A=0.4, detuning=0.9)).matrix
    totals = total_excitation_diagonal(lattice)
    mask = totals[:, None] != totals[None, :]
    assert np.abs(h[mask]).max() < 1e-15


def test_decoupled_spectrum_is_sum_of_cells():
    cell = LatticeSpec(1, photon_cutoff=1)
    params = ModelParams(hop_A=0.0, detuning=0.3)
    w_cell = np.linalg.eigvalsh(dense_hamiltonian(cell, params).matrix)
    pair = LatticeSpec(2, photon_cutoff=1)
    w_pair = np.sort(np.linalg.eigvalsh(dense_hamiltonian(pair, params).matrix))
    sums = np.sort([a + b for a in w_cell for b in w_cell])
    assert np.allclose(w_pair, sums, atol=1e-12)


@pytest.mark.parametrize("n_sites,cutoff", [(2, 2), (3, 1)])
def test_sector_eigenvalues_match_dense_blocks(n_sites, cutoff):
    lattice = LatticeSpec(n_sites, photon_cutoff=cutoff)
    params = ModelParams(hop_A=0.01, detuning=0.35)
    dense = dense_hamiltonian(lattice, params).matrix
    for total in range(n_sites * (cutoff + 1) + 1):
        sector = enumerate_sector(lattice, total)
        idx = sector_embedding(sector)
        w_sector = np.linalg.eigvalsh(build_hamiltonian(sector, params).toarray())
        w_dense = np.linalg.eigvalsh(dense[np.ix_(idx, idx)])
        rel = np.abs(w_sector - w_dense) / np.maximum(1.0, np.abs(w_dense))
        assert rel.max() < 1e-10


def test_sector_embedding_requires_matching_cutoff():
    sector = enumerate_sector(LatticeSpec(2), 2)  # exact cutoff, lattice has none
    with pytest.raises(ValueError):
        sector_embedding(sector)


def test_full_hamiltonian_preserves_sector():
    lattice = LatticeSpec(2, photon_cutoff=2)
    params = ModelParams(hop_A=0.7, detuning=0.2)
    dense = dense_hamiltonian(lattice, params).matrix
    sector = enumerate_sector(lattice, 2)
    idx = sector_embedding(sector)
    rng = np.random.default_rng(0)
    vec = rng.normal(size=sector.dimension) + 1j * rng.normal(size=sector.dimension)
    vec /= np.linalg.norm(vec)
    full = np.zeros(dense.shape[0], dtype=complex)
    full[idx] = vec
    out = dense @ full
    outside = np.delete(out, idx)
    assert np.abs(outside).max() < 1e-14


def test_lab_frame_shift():
    lattice = LatticeSpec(1, photon_cutoff=1)
    sector = enumerate_sector(lattice, 2)
    idx = sector_embedding(sector)
    h_rot = dense_hamiltonian(lattice, P).matrix
    h_lab = dense_hamiltonian(lattice, P, frame="lab", omega_d=1e4).matrix
    w_rot = np.linalg.eigvalsh(h_rot[np.ix_(idx, idx)])
    w_lab = np.linalg.eigvalsh(h_lab[np.ix_(idx, idx)])
    assert np.allclose(w_lab - w_rot, 2e4, atol=1e-9)


def test_dimension_caps():
    with pytest.raises(ValueError):
        dense_hamiltonian(LatticeSpec(4, photon_cutoff=4), P)
    with pytest.raises(ValueError):
        dense_lindblad_propagate(
            LatticeSpec(2, photon_cutoff=4),
            ModelParams(hop_A=0.01, kappa=0.1),
            np.eye(100),
            [0.0, 1.0],
        )
    with pytest.raises(ValueError):
        dense_hamiltonian(LatticeSpec(2), P)  # needs explicit cutoff


# --- Lindblad propagation -----------------------------------------------------


def test_unitary_limit_matches_evolve():
    lattice = LatticeSpec(1, photon_cutoff=1)
    sector = enumerate_sector(lattice, 1)
    idx = sector_embedding(sector)
    h = build_hamiltonian(sector, P)
    psi0 = QuantumState.basis_state(sector, sector.index((SiteConfig(1, False),)))
    times = np.linspace(0.0, 5.0, 6)
    states = evolve(h, psi0, times)

    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[idx[1], idx[1]] = 1.0
    assert idx[1] == sector_embedding(sector)[sector.index((SiteConfig(1, False),))]
    rhos = dense_lindblad_propagate(lattice, P, rho0, times)
    for st, rho in zip(states, rhos):
        full = np.zeros(4, dtype=complex)
        full[idx] = st.amplitudes
        assert np.abs(rho - np.outer(full, full.conj())).max() < 1e-8


def test_single_cavity_decay_mean_photon_number():
    lattice = LatticeSpec(1, photon_cutoff=1)
    params = ModelParams(hop_A=0.01, kappa=0.25, g=0.0)
    sector = enumerate_sector(lattice, 1)
    idx = sector_embedding(sector)
    j = sector.index((SiteConfig(1, False),))
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[idx[j], idx[j]] = 1.0
    times = np.linspace(0.0, 10.0, 11)
    rhos = dense_lindblad_propagate(lattice, params, rho0, times)
    n_op = np.zeros((4, 4))
    for code in range(4):
        n_op[code, code] = code // 2
    for t, rho in zip(times, rhos):
        n_mean = float(np.real(np.trace(n_op @ rho)))
        assert abs(n_mean - math.exp(-params.kappa * t)) < 1e-8


def test_lindblad_trace_and_hermiticity():
    lattice = LatticeSpec(1, photon_cutoff=1)
    params = ModelParams(hop_A=0.01, kappa=0.05, gamma=0.03)
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[2, 2] = 0.6
    rho0[1, 1] = 0.4
    rho0[2, 1] = rho0[1, 2] = 0.2
    times = np.linspace(0.0, 50.0, 6)
    rhos = dense_lindblad_propagate(lattice, params, rho0, times)
    for rho in rhos:
        assert abs(np.trace(rho).real - 1.0) < 1e-10
        assert np.array_equal(rho, rho.conj().T)
        assert np.linalg.eigvalsh(rho).min() > -1e-8


def test_trajectories_reproduce_lindblad_populations():
    lattice = LatticeSpec(1, photon_cutoff=1)
    params = ModelParams(hop_A=0.01, kappa=1e-3, gamma=1e-3)
    hams, collapse = dissipative_chain(lattice, params, 1)
    sector = hams[1].domain
    idx = sector_embedding(sector)
    j_photon = sector.index((SiteConfig(1, False),))
    j_excited = sector.index((SiteConfig(0, True),))
    psi0 = QuantumState.basis_state(sector, j_photon)
    times = np.linspace(0.0, 400.0, 9)
    recs = run_trajectories(hams, collapse, psi0, times, base_seed=21, n_trajectories=300)

    def p_excited(st):
        if st.sector.total_excitations != 1:
            return 0.0
        return float(abs(st.amplitudes[j_excited]) ** 2)

    mean, err = ensemble_average(recs, p_excited)
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[idx[j_photon], idx[j_photon]] = 1.0
    rhos = dense_lindblad_propagate(lattice, params, rho0, times)
    ref = [float(np.real(r[idx[j_excited], idx[j_excited]])) for r in rhos]
    for m, e, r in zip(mean, err, ref):
        assert abs(m - r) <= max(3 * e, 1e-9)


def test_dense_collapse_operator_count():
    lattice = LatticeSpec(2, photon_cutoff=1)
    ops = dense_collapse_operators(lattice, ModelParams(hop_A=0.01, kappa=0.1, gamma=0.2))
    assert len(ops) == 4
    ops_k = dense_collapse_operators(lattice, ModelParams(hop_A=0.01, kappa=0.1))
    assert len(ops_k) == 2

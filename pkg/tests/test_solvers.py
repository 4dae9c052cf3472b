"""Ground states, propagation accuracy, ramps, and quantum-jump trajectories."""
import math

import numpy as np
import pytest

from cavitysim.hamiltonian import (
    ModelParams,
    build_hamiltonian,
    polariton_product_state,
)
from cavitysim.hilbert import LatticeSpec, SiteConfig, enumerate_sector
from cavitysim.observables import excitation_moments, fidelity
from cavitysim.solvers import (
    RampSchedule,
    adiabatic_ramp,
    cutoff_convergence,
    dissipative_chain,
    ensemble_average,
    evolve,
    ground_state,
    quantum_trajectory,
    ramp_hamiltonian,
    run_trajectories,
)
from cavitysim.states import QuantumState

P = ModelParams(hop_A=0.01)


# --- ground states -----------------------------------------------------------


def test_single_cell_ground_state():
    sector = enumerate_sector(LatticeSpec(1), 1)
    energy, gs = ground_state(build_hamiltonian(sector, P))
    assert energy == pytest.approx(-1.0, abs=1e-12)
    minus = polariton_product_state(sector, [(1, "-")])
    assert fidelity(gs, minus) == pytest.approx(1.0, abs=1e-12)


def test_decoupled_chain_ground_state():
    params = ModelParams(hop_A=0.0)
    sector = enumerate_sector(LatticeSpec(3), 3)
    energy, gs = ground_state(build_hamiltonian(sector, params))
    assert energy == pytest.approx(-3.0, abs=1e-12)
    product = polariton_product_state(sector, [(1, "-")] * 3)
    assert fidelity(gs, product) == pytest.approx(1.0, abs=1e-10)


def test_strong_coupling_ground_state_is_unit_filled():
    sector = enumerate_sector(LatticeSpec(3), 3)
    _, gs = ground_state(build_hamiltonian(sector, P))
    product = polariton_product_state(sector, [(1, "-")] * 3)
    assert fidelity(gs, product) > 0.99


def test_dense_and_iterative_agree():
    sector = enumerate_sector(LatticeSpec(3), 3)
    h = build_hamiltonian(sector, ModelParams(hop_A=0.01, detuning=2.5))
    e_dense, _ = ground_state(h)
    e_iter, v_iter = ground_state(h, dense_dim=8)
    assert abs(e_dense - e_iter) < 1e-9
    residual = np.linalg.norm(h.matrix @ v_iter.amplitudes - e_iter * v_iter.amplitudes)
    assert residual < 1e-10


def test_ground_state_requires_hermitian():
    sector = enumerate_sector(LatticeSpec(1), 1)
    h = build_hamiltonian(sector, P)
    h.hermitian = False
    with pytest.raises(ValueError):
        ground_state(h)


def test_cutoff_convergence_utility():
    rows = cutoff_convergence(2, "open", ModelParams(hop_A=0.2), 2, [1, 2])
    assert rows[0][0] == 1 and rows[1][0] == 2
    assert rows[0][1] < rows[1][1] == 8
    # exact cutoff reproduces the untruncated energy; the truncated one is close
    sector = enumerate_sector(LatticeSpec(2), 2)
    e_exact, _ = ground_state(build_hamiltonian(sector, ModelParams(hop_A=0.2)))
    assert rows[1][2] == pytest.approx(e_exact, abs=1e-12)
    assert abs(rows[0][2] - e_exact) < 0.2


# --- unitary propagation -------------------------------------------------------


def test_eigenstate_stays_put():
    sector = enumerate_sector(LatticeSpec(1), 1)
    h = build_hamiltonian(sector, P)
    minus = polariton_product_state(sector, [(1, "-")])
    for state in evolve(h, minus, [0.0, 3.7, 11.0]):
        assert fidelity(state, minus) == pytest.approx(1.0, abs=1e-12)


def test_rabi_oscillation_analytic():
    sector = enumerate_sector(LatticeSpec(1), 1)
    h = build_hamiltonian(sector, P)
    idx_p = sector.index((SiteConfig(1, False),))
    idx_e = sector.index((SiteConfig(0, True),))
    psi0 = QuantumState.basis_state(sector, idx_p)
    times = np.linspace(0.0, 12.0, 121)
    states = evolve(h, psi0, times)
    worst = max(
        abs(abs(st.amplitudes[idx_e]) ** 2 - math.sin(t) ** 2)
        for t, st in zip(times, states)
    )
    assert worst < 1e-6


def test_empty_cavity_hopping_analytic():
    params = ModelParams(hop_A=0.01, g=0.0)
    sector = enumerate_sector(LatticeSpec(2), 1)
    h = build_hamiltonian(sector, params)
    idx_l = sector.index((SiteConfig(1, False), SiteConfig(0, False)))
    idx_r = sector.index((SiteConfig(0, False), SiteConfig(1, False)))
    psi0 = QuantumState.basis_state(sector, idx_l)
    times = np.linspace(0.0, 300.0, 61)
    states = evolve(h, psi0, times)
    worst = max(
        abs(abs(st.amplitudes[idx_r]) ** 2 - math.sin(0.01 * t) ** 2)
        for t, st in zip(times, states)
    )
    assert worst < 1e-6


def test_norm_and_energy_conserved_on_long_run():
    sector = enumerate_sector(LatticeSpec(2), 2)
    h = build_hamiltonian(sector, ModelParams(hop_A=0.3, detuning=0.4))
    rng = np.random.default_rng(3)
    vec = rng.normal(size=sector.dimension) + 1j * rng.normal(size=sector.dimension)
    psi0 = QuantumState(sector, vec / np.linalg.norm(vec))
    e0 = np.real(np.vdot(psi0.amplitudes, h.matrix @ psi0.amplitudes))
    final = evolve(h, psi0, [0.0, 1000.0])[-1]
    assert abs(final.norm() - 1.0) < 1e-8
    e1 = np.real(np.vdot(final.amplitudes, h.matrix @ final.amplitudes))
    assert abs(e1 - e0) < 1e-8 * max(1.0, abs(e0))


def test_time_dependent_propagation_converged():
    # Step-doubling result at working tolerance vs a much tighter reference.
    sector = enumerate_sector(LatticeSpec(2), 2)
    params = ModelParams(hop_A=0.05)
    schedule = RampSchedule(0.0, 50.0, duration=1.0)
    ham = ramp_hamiltonian(sector, params, schedule)
    psi0 = polariton_product_state(sector, [(1, "-"), (1, "-")])
    a = evolve(ham, psi0, [0.0, ham.duration], tol=1e-7)[-1]
    b = evolve(ham, psi0, [0.0, ham.duration], tol=1e-10)[-1]
    assert np.linalg.norm(a.amplitudes - b.amplitudes) < 1e-6
    assert abs(a.norm() - 1.0) < 1e-8


def test_stepper_is_fourth_order():
    # Fixed-step convergence of the commutator-free scheme on a fast ramp.
    from dataclasses import replace

    from cavitysim.hamiltonian import detuning_diagonal
    from cavitysim.solvers import TimeDependentHamiltonian, _cf4_step, _DenseDrift

    sector = enumerate_sector(LatticeSpec(2), 2)
    params = ModelParams(hop_A=0.3)
    base = build_hamiltonian(sector, replace(params, detuning=0.0))
    ham = TimeDependentHamiltonian(
        base, detuning_diagonal(sector), RampSchedule(1e-3, 50.0, duration=1.0), duration=2.0
    )
    drift = _DenseDrift(ham)
    rng = np.random.default_rng(0)
    psi0 = rng.normal(size=sector.dimension) + 1j * rng.normal(size=sector.dimension)
    psi0 /= np.linalg.norm(psi0)

    def propagate(n_steps):
        h = 2.0 / n_steps
        psi, t = psi0.copy(), 0.0
        for _ in range(n_steps):
            psi = _cf4_step(drift, psi, t, h)
            t += h
        return psi

    ref = propagate(4096)
    err_coarse = np.linalg.norm(propagate(64) - ref)
    err_fine = np.linalg.norm(propagate(256) - ref)
    order = math.log(err_coarse / err_fine) / math.log(4.0)
    assert order > 3.5


def test_evolve_validation():
    sector = enumerate_sector(LatticeSpec(1), 1)
    h = build_hamiltonian(sector, P)
    psi = QuantumState.basis_state(sector, 0)
    with pytest.raises(ValueError):
        evolve(h, psi, [])
    with pytest.raises(ValueError):
        evolve(h, psi, [1.0, 0.5])
    other = QuantumState.basis_state(enumerate_sector(LatticeSpec(1), 2), 0)
    with pytest.raises(ValueError):
        evolve(h, other, [0.0, 1.0])


# --- ramps ---------------------------------------------------------------------


def test_ramp_schedule_validation_and_shape():
    with pytest.raises(ValueError):
        RampSchedule(0.0, 1.0, duration=0.0)
    with pytest.raises(ValueError):
        RampSchedule(0.0, 1.0, shape="cubic")
    sch = RampSchedule(1e-3, 1e2, duration=5.0)
    assert sch.delta_at(0.0) == pytest.approx(1e-3)
    assert sch.delta_at(1.0) == pytest.approx(1e2)
    assert sch.delta_at(0.5) == pytest.approx(10 ** ((-3 + 2) / 2))
    lin = RampSchedule(1e-3, 1e2, duration=5.0, shape="linear_in_log")
    assert lin.delta_at(0.2) == pytest.approx(10 ** (-3 + 0.2 * 5))
    # zero start clamps to the grid floor
    assert RampSchedule(0.0, 1e2).delta_at(0.0) == pytest.approx(1e-3)


def test_trivial_ramp_returns_initial_state():
    # state0 must be the delta_start ground state; then a flat schedule only
    # accumulates a global phase.
    from dataclasses import replace

    sector = enumerate_sector(LatticeSpec(2), 2)
    sch = RampSchedule(1e-3, 1e-3, duration=1.0)
    _, psi0 = ground_state(build_hamiltonian(sector, replace(P, detuning=1e-3)))
    result = adiabatic_ramp(sector, P, sch, psi0)
    assert fidelity(result.state, psi0) == pytest.approx(1.0, abs=1e-8)
    assert result.ground_overlap == pytest.approx(1.0, abs=1e-8)


@pytest.mark.slow
def test_ramp_default_duration_partially_adiabatic():
    # Calibrated: the default 10/A ramp keeps 0.77 ground overlap at the
    # transition endpoint; full adiabaticity needs roughly twice that.
    sector = enumerate_sector(LatticeSpec(3), 3)
    psi0 = polariton_product_state(sector, [(1, "-")] * 3)
    forward = adiabatic_ramp(sector, P, RampSchedule(0.0, 1e2, duration=10.0), psi0, tol=1e-6)
    assert forward.ground_overlap > 0.75


@pytest.mark.slow
def test_ramp_and_round_trip_at_double_duration():
    sector = enumerate_sector(LatticeSpec(3), 3)
    psi0 = polariton_product_state(sector, [(1, "-")] * 3)
    forward = adiabatic_ramp(sector, P, RampSchedule(0.0, 1e2, duration=20.0), psi0, tol=1e-6)
    assert forward.ground_overlap > 0.9
    backward = adiabatic_ramp(
        sector, P, RampSchedule(1e2, 0.0, duration=20.0), forward.state, tol=1e-6
    )
    assert fidelity(backward.state, psi0) > 0.8


# --- trajectories ----------------------------------------------------------------


def test_closed_trajectory_equals_evolve():
    sector = enumerate_sector(LatticeSpec(1), 1)
    h = build_hamiltonian(sector, P)
    psi0 = QuantumState.basis_state(sector, sector.index((SiteConfig(1, False),)))
    times = np.linspace(0.0, 10.0, 21)
    rec = quantum_trajectory(h, [], psi0, times, seed=1)
    closed = evolve(h, psi0, times)
    assert rec.jump_times == []
    for a, b in zip(rec.states, closed):
        assert fidelity(a, b.normalized()) == pytest.approx(1.0, abs=1e-10)


def _decay_setup(kappa=0.1):
    lattice = LatticeSpec(1)
    params = ModelParams(hop_A=0.01, kappa=kappa, g=0.0)
    hams, collapse = dissipative_chain(lattice, params, 1)
    sector = hams[1].domain
    psi0 = QuantumState.basis_state(sector, sector.index((SiteConfig(1, False),)))
    return hams, collapse, psi0


def test_photon_decay_matches_exponential():
    kappa = 0.1
    hams, collapse, psi0 = _decay_setup(kappa)
    times = np.linspace(0.0, 20.0, 9)
    recs = run_trajectories(hams, collapse, psi0, times, base_seed=3, n_trajectories=400)
    mean, err = ensemble_average(recs, lambda st: excitation_moments(st, 0)[0])
    for t, m, e in zip(times, mean, err):
        ref = math.exp(-kappa * t)
        assert abs(m - ref) <= max(3 * e, 1e-9)


def test_atom_decay_matches_exponential():
    gamma = 0.2
    lattice = LatticeSpec(1)
    params = ModelParams(hop_A=0.01, gamma=gamma, g=0.0)
    hams, collapse = dissipative_chain(lattice, params, 1)
    sector = hams[1].domain
    psi0 = QuantumState.basis_state(sector, sector.index((SiteConfig(0, True),)))
    times = np.linspace(0.0, 10.0, 6)
    recs = run_trajectories(hams, collapse, psi0, times, base_seed=5, n_trajectories=400)
    mean, err = ensemble_average(recs, lambda st: excitation_moments(st, 0)[0])
    for t, m, e in zip(times, mean, err):
        assert abs(m - math.exp(-gamma * t)) <= max(3 * e, 1e-9)


def test_trajectory_record_properties():
    hams, collapse, psi0 = _decay_setup(0.5)
    times = np.linspace(0.0, 10.0, 5)
    rec = quantum_trajectory(hams, collapse, psi0, times, seed=11)
    assert len(rec.states) == len(times)
    for st in rec.states:
        assert st.norm() == pytest.approx(1.0, abs=1e-10)
    jump_ts = [t for t, _ in rec.jump_times]
    assert jump_ts == sorted(jump_ts)
    if rec.jump_times:
        assert rec.states[-1].sector.total_excitations == 0


def test_trajectory_determinism():
    hams, collapse, psi0 = _decay_setup(0.3)
    times = np.linspace(0.0, 15.0, 7)
    a = quantum_trajectory(hams, collapse, psi0, times, seed=(9, 4))
    b = quantum_trajectory(hams, collapse, psi0, times, seed=(9, 4))
    assert a.jump_times == b.jump_times
    for sa, sb in zip(a.states, b.states):
        assert np.array_equal(sa.amplitudes, sb.amplitudes)


def test_worker_pool_matches_serial():
    hams, collapse, psi0 = _decay_setup(0.3)
    times = np.linspace(0.0, 10.0, 4)
    serial = run_trajectories(hams, collapse, psi0, times, base_seed=2, n_trajectories=8)
    pooled = run_trajectories(
        hams, collapse, psi0, times, base_seed=2, n_trajectories=8, workers=2
    )
    for a, b in zip(serial, pooled):
        assert a.jump_times == b.jump_times
        for sa, sb in zip(a.states, b.states):
            assert np.array_equal(sa.amplitudes, sb.amplitudes)


def test_norm_monotone_between_jumps():
    # Drift-only decay of the survival probability: sample the raw norm by
    # evolving the non-Hermitian generator directly.
    lattice = LatticeSpec(1)
    params = ModelParams(hop_A=0.01, kappa=0.2)
    hams, collapse = dissipative_chain(lattice, params, 1)
    from cavitysim.solvers import _DenseDrift

    ops = collapse[1]
    decay = sum((op.matrix.conj().T @ op.matrix).toarray() for op in ops)
    drift = _DenseDrift(hams[1], decay)
    sector = hams[1].domain
    psi = polariton_product_state(sector, [(1, "-")]).amplitudes
    norms = []
    for dt in np.linspace(0.0, 30.0, 31):
        norms.append(np.linalg.norm(drift.propagate_const(psi, dt)))
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_ensemble_average_edges():
    hams, collapse, psi0 = _decay_setup(0.3)
    times = np.linspace(0.0, 5.0, 3)
    rec = quantum_trajectory(hams, collapse, psi0, times, seed=1)
    mean, err = ensemble_average([rec], lambda st: excitation_moments(st, 0)[0])
    assert np.all(err == 0.0)
    mean2, err2 = ensemble_average([rec, rec, rec], lambda st: excitation_moments(st, 0)[0])
    assert np.allclose(mean2, mean)
    assert np.all(err2 == 0.0)
    with pytest.raises(ValueError):
        ensemble_average([], lambda st: 0.0)
    other = quantum_trajectory(hams, collapse, psi0, times + 1.0, seed=1)
    with pytest.raises(ValueError):
        ensemble_average([rec, other], lambda st: 0.0)


def test_missing_chain_sector_raises():
    hams, collapse, psi0 = _decay_setup(0.5)
    del hams[0]
    times = np.linspace(0.0, 50.0, 3)
    with pytest.raises(KeyError):
        quantum_trajectory(hams, collapse, psi0, times, seed=0)

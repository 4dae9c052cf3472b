"""Hard-core spin-chain limit of the cavity array and its cross-validation.

At strong coupling and unit filling the low manifold of the chain reduces to
spins: spin up at site k means a single lower-branch dressed excitation is
present, spin down means the bare cell ground state.  The nearest-neighbor
exchange then reads J * (sigma+_k sigma-_{k+1} + h.c.), which equals
(J/2) * (sx sx + sy sy) per bond.

Conversion note: a photon hopping rate A between cavities translates into a
dressed-excitation exchange J = A/2, because each hop picks up one factor
1/sqrt(2) from the photonic weight of the dressed state on either side.
``compare_models`` applies that factor; ``build_xy_hamiltonian`` itself uses
its argument literally as the exchange amplitude.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy import sparse

from .hamiltonian import ModelParams, SparseOperator, build_hamiltonian, polariton_product_state
from .hilbert import Boundary, LatticeSpec, enumerate_sector
from .observables import fidelity
from .solvers import evolve
from .states import QuantumState

__all__ = [
    "SpinBasis",
    "SpinChainState",
    "enumerate_spin_sector",
    "build_xy_hamiltonian",
    "spin_basis_state",
    "map_polariton_to_spin",
    "compare_models",
    "CompareResult",
]

# A spin-chain state is an amplitude vector over a SpinBasis.
SpinChainState = QuantumState


@dataclass(frozen=True)
class SpinBasis:
    """Fixed-magnetization spin basis, ordered lexicographically over sites."""

    num_spins: int
    total_up: int
    configs: tuple[tuple[bool, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.configs)

    def index(self, config: tuple[bool, ...]) -> int:
        return self.configs.index(config)


def enumerate_spin_sector(num_spins: int, total_up: int) -> SpinBasis:
    """All spin configurations with ``total_up`` up spins, lexicographic order."""
    if num_spins < 1:
        raise ValueError(f"num_spins must be >= 1, got {num_spins}")
    if not 0 <= total_up <= num_spins:
        raise ValueError(f"total_up must lie in [0, {num_spins}], got {total_up}")
    configs = []
    for ups in combinations(range(num_spins), total_up):
        cfg = tuple(k in ups for k in range(num_spins))
        configs.append(cfg)
    configs.sort()  # lexicographic with down < up
    return SpinBasis(num_spins, total_up, tuple(configs))


def spin_basis_state(basis: SpinBasis, up_sites: Sequence[int]) -> QuantumState:
    """Product spin state with up spins at the given sites."""
    cfg = tuple(k in set(up_sites) for k in range(basis.num_spins))
    return QuantumState.basis_state(basis, basis.index(cfg))


def build_xy_hamiltonian(
    num_spins: int,
    hop_A: float,
    boundary: str | Boundary = Boundary.OPEN,
    *,
    total_up: int = 1,
) -> SparseOperator:
    """Nearest-neighbor exchange hop_A * (s+_k s-_{k+1} + h.c.) in a magnetization sector.

    Double occupancy cannot occur by construction (hard-core spins).
    """
    if num_spins < 2:
        raise ValueError(f"need at least 2 spins, got {num_spins}")
    basis = enumerate_spin_sector(num_spins, total_up)
    bonds = [(k, k + 1) for k in range(num_spins - 1)]
    if Boundary(boundary) is Boundary.PERIODIC:
        bonds.append((num_spins - 1, 0))

    index = {cfg: i for i, cfg in enumerate(basis.configs)}
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []
    for j, cfg in enumerate(basis.configs):
        for k, l in bonds:
            for src, dst in ((k, l), (l, k)):
                if cfg[src] and not cfg[dst]:
                    flipped = list(cfg)
                    flipped[src] = False
                    flipped[dst] = True
                    rows.append(index[tuple(flipped)])
                    cols.append(j)
                    vals.append(hop_A)
    matrix = sparse.csr_array(
        sparse.coo_array(
            (np.asarray(vals, dtype=np.complex128), (rows, cols)),
            shape=(basis.dimension, basis.dimension),
        )
    )
    return SparseOperator(matrix, basis, basis, hermitian=True, label="H_xy")


def map_polariton_to_spin(
    state: QuantumState, basis: SpinBasis | None = None
) -> tuple[QuantumState, float]:
    """Project each site onto span{|g,0>, lower dressed state} and read off spins.

    Returns the normalized projected spin state together with the leakage
    1 - (projected norm)^2.  Leakage reports how far the state strays from
    the hard-core manifold; it is not an error.
    """
    sector = state.sector
    num_sites = sector.lattice.num_sites
    total = sector.total_excitations
    if basis is None:
        basis = enumerate_spin_sector(num_sites, total)
    if basis.num_spins != num_sites or basis.total_up != total:
        raise ValueError("spin basis does not match the state's sector")

    index = {cfg: i for i, cfg in enumerate(basis.configs)}
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    spin_amp = np.zeros(basis.dimension, dtype=np.complex128)
    for j, cfg in enumerate(sector.configs):
        weight = 1.0
        spins = []
        inside = True
        for site in cfg:
            n, e = site
            if n == 0 and not e:
                spins.append(False)
            elif n == 1 and not e:
                spins.append(True)
                weight *= inv_sqrt2
            elif n == 0 and e:
                spins.append(True)
                weight *= -inv_sqrt2
            else:
                inside = False
                break
        if inside:
            spin_amp[index[tuple(spins)]] += weight * state.amplitudes[j]

    captured = float(np.real(np.vdot(spin_amp, spin_amp)))
    leakage = max(0.0, 1.0 - captured)
    if captured > 0.0:
        spin_amp = spin_amp / np.sqrt(captured)
    return QuantumState(basis, spin_amp), leakage


@dataclass
class CompareResult:
    """Pointwise agreement between the full chain and its spin-chain limit."""

    times: np.ndarray
    fidelity: np.ndarray
    leakage: np.ndarray


def compare_models(
    num_sites: int,
    params: ModelParams,
    initial_spin_config: Sequence[bool],
    t_grid: Sequence[float],
    *,
    boundary: str | Boundary = Boundary.OPEN,
    tol: float = 1e-9,
) -> CompareResult:
    """Evolve the full chain and the spin chain side by side.

    The full model starts from the product of lower-branch dressed states at
    the up sites; the spin model starts from the corresponding basis state
    with exchange hop_A/2 (see the module conversion note).  Before each
    fidelity the mapped state is rotated by exp(i g m t), removing the
    dressed-state self-energy, which is a global phase at fixed magnetization.
    """
    if params.detuning != 0.0:
        raise ValueError("the spin-chain correspondence is defined at zero detuning")
    config = tuple(bool(b) for b in initial_spin_config)
    if len(config) != num_sites:
        raise ValueError("initial_spin_config length must equal num_sites")
    m = sum(config)
    if m == 0:
        raise ValueError("need at least one excitation to compare dynamics")

    lattice = LatticeSpec(num_sites, Boundary(boundary))
    sector = enumerate_sector(lattice, m)
    h_full = build_hamiltonian(sector, params)
    occupations = [(1, "-") if up else None for up in config]
    psi0 = polariton_product_state(sector, occupations)

    basis = enumerate_spin_sector(num_sites, m)
    h_spin = build_xy_hamiltonian(
        num_sites, params.hop_A / 2.0, boundary, total_up=m
    )
    phi0 = spin_basis_state(basis, [k for k, up in enumerate(config) if up])

    times = np.asarray(t_grid, dtype=float)
    full_states = evolve(h_full, psi0, times, tol=tol)
    spin_states = evolve(h_spin, phi0, times, tol=tol)

    fid = np.empty(times.size)
    leak = np.empty(times.size)
    for i, (t, full, spin) in enumerate(zip(times, full_states, spin_states)):
        mapped, leak[i] = map_polariton_to_spin(full, basis)
        mapped = QuantumState(
            basis, mapped.amplitudes * np.exp(1j * params.g * m * t)
        )
        fid[i] = fidelity(spin, mapped)
    return CompareResult(times=times, fidelity=fid, leakage=leak)

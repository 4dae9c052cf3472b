"""Dense full-product-space references for small chains.

Everything here scales exponentially and exists only for tests and
cross-checks: the unrestricted dense Hamiltonian, its sector embedding, and
a density-matrix propagator for the dissipative dynamics.  Production code
must never call into this module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .hamiltonian import ModelParams
from .hilbert import BasisSector, Boundary, LatticeSpec

__all__ = [
    "DenseOperator",
    "dense_hamiltonian",
    "dense_collapse_operators",
    "sector_embedding",
    "dense_lindblad_propagate",
]

MAX_DENSE_DIM = 4096
MAX_LINDBLAD_DIM = 64


@dataclass
class DenseOperator:
    """Operator over the full (2*(n_max+1))^N product space."""

    matrix: np.ndarray
    lattice: LatticeSpec

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _require_cutoff(lattice: LatticeSpec) -> int:
    if lattice.photon_cutoff is None:
        raise ValueError(
            "dense oracle operators need an explicit photon_cutoff on the lattice"
        )
    return lattice.photon_cutoff


def _local_dim(lattice: LatticeSpec) -> int:
    return 2 * (_require_cutoff(lattice) + 1)


def _check_dim(lattice: LatticeSpec, cap: int) -> int:
    dim = _local_dim(lattice) ** lattice.num_sites
    if dim > cap:
        raise ValueError(f"full product dimension {dim} exceeds the cap {cap}")
    return dim


def _local_ops(cutoff: int) -> dict[str, np.ndarray]:
    # Local basis index 2n + e, matching the sector packing convention.
    d = 2 * (cutoff + 1)
    a = np.zeros((d, d))
    sm = np.zeros((d, d))
    n_phot = np.zeros((d, d))
    e_proj = np.zeros((d, d))
    for n in range(cutoff + 1):
        for e in (0, 1):
            i = 2 * n + e
            n_phot[i, i] = n
            e_proj[i, i] = e
            if n >= 1:
                a[2 * (n - 1) + e, i] = math.sqrt(n)
            if e == 1:
                sm[2 * n, i] = 1.0
    return {"a": a, "sm": sm, "n": n_phot, "e": e_proj}


def _site_operator(local: np.ndarray, site: int, n_sites: int, d: int) -> np.ndarray:
    op = np.array([[1.0]])
    for k in range(n_sites):
        op = np.kron(op, local if k == site else np.eye(d))
    return op


def dense_hamiltonian(
    lattice: LatticeSpec,
    params: ModelParams,
    *,
    frame: str = "rotating",
    omega_d: float = 0.0,
) -> DenseOperator:
    """Full-space chain Hamiltonian, block diagonal in total excitations."""
    if frame not in ("rotating", "lab"):
        raise ValueError(f"frame must be 'rotating' or 'lab', got {frame!r}")
    cutoff = _require_cutoff(lattice)
    dim = _check_dim(lattice, MAX_DENSE_DIM)
    d = _local_dim(lattice)
    n_sites = lattice.num_sites
    ops = _local_ops(cutoff)

    h = np.zeros((dim, dim), dtype=np.complex128)
    for k in range(n_sites):
        a_k = _site_operator(ops["a"], k, n_sites, d)
        sm_k = _site_operator(ops["sm"], k, n_sites, d)
        e_k = _site_operator(ops["e"], k, n_sites, d)
        h += params.detuning * e_k
        h += params.g * (a_k.conj().T @ sm_k + sm_k.conj().T @ a_k)
        if frame == "lab":
            n_k = _site_operator(ops["n"], k, n_sites, d)
            h += omega_d * (n_k + e_k)

    if n_sites > 1:
        bonds = [(k, k + 1) for k in range(n_sites - 1)]
        if lattice.boundary is Boundary.PERIODIC:
            bonds.append((n_sites - 1, 0))
        for k, l in bonds:
            a_k = _site_operator(ops["a"], k, n_sites, d)
            a_l = _site_operator(ops["a"], l, n_sites, d)
            h += params.hop_A * (a_k.conj().T @ a_l + a_l.conj().T @ a_k)

    return DenseOperator(h, lattice)


def dense_collapse_operators(lattice: LatticeSpec, params: ModelParams) -> list[np.ndarray]:
    """Full-space jump operators sqrt(kappa) a_k and sqrt(gamma) |g><e|_k."""
    cutoff = _require_cutoff(lattice)
    _check_dim(lattice, MAX_DENSE_DIM)
    d = _local_dim(lattice)
    n_sites = lattice.num_sites
    ops = _local_ops(cutoff)
    out: list[np.ndarray] = []
    if params.kappa > 0.0:
        for k in range(n_sites):
            out.append(math.sqrt(params.kappa) * _site_operator(ops["a"], k, n_sites, d))
    if params.gamma > 0.0:
        for k in range(n_sites):
            out.append(math.sqrt(params.gamma) * _site_operator(ops["sm"], k, n_sites, d))
    return out


def sector_embedding(sector: BasisSector) -> np.ndarray:
    """Full-space index of every sector configuration.

    Requires the lattice to carry the explicit cutoff the dense operators
    use; site 0 is the most significant tensor factor.
    """
    lattice = sector.lattice
    cutoff = _require_cutoff(lattice)
    if sector.cutoff != cutoff:
        raise ValueError(
            f"sector cutoff {sector.cutoff} differs from lattice cutoff {cutoff}"
        )
    d = _local_dim(lattice)
    n_sites = lattice.num_sites
    idx = np.empty(sector.dimension, dtype=np.int64)
    for j, cfg in enumerate(sector.configs):
        code = 0
        for s in cfg:
            code = code * d + (2 * s.photon_number + int(s.atom_excited))
        idx[j] = code
    return idx


def dense_lindblad_propagate(
    lattice: LatticeSpec,
    params: ModelParams,
    rho0: np.ndarray,
    t_grid: np.ndarray,
    *,
    frame: str = "rotating",
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> list[np.ndarray]:
    """Propagate the density matrix under the standard dissipator.

    d rho/dt = -i[H, rho] + sum_j (C_j rho C_j^dag - {C_j^dag C_j, rho}/2)

    Outputs are re-Hermitized, which keeps rho exactly Hermitian and the
    trace preserved to integrator accuracy.
    """
    dim = _check_dim(lattice, MAX_LINDBLAD_DIM)
    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.shape != (dim, dim):
        raise ValueError(f"rho0 must be {dim}x{dim}, got {rho0.shape}")

    h = dense_hamiltonian(lattice, params, frame=frame).matrix
    c_ops = dense_collapse_operators(lattice, params)
    c_dag_c = [c.conj().T @ c for c in c_ops]

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(dim, dim)
        drho = -1j * (h @ rho - rho @ h)
        for c, cdc in zip(c_ops, c_dag_c):
            drho += c @ rho @ c.conj().T - 0.5 * (cdc @ rho + rho @ cdc)
        return drho.reshape(-1)

    t_grid = np.asarray(t_grid, dtype=float)
    sol = solve_ivp(
        rhs,
        (t_grid[0], t_grid[-1]),
        rho0.reshape(-1),
        t_eval=t_grid,
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"Lindblad propagation failed: {sol.message}")
    out = []
    for col in sol.y.T:
        rho = col.reshape(dim, dim)
        out.append(0.5 * (rho + rho.conj().T))
    return out

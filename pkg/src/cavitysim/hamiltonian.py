"""Sparse sector-restricted operators for the doped cavity chain.

All rates are dimensionless multiples of the light-matter coupling g, which
sets the unit of energy.  Operators are assembled in the frame rotating at
the bare photon frequency: the conserved total-excitation term is a constant
inside a sector and is dropped, leaving

    H = detuning * sum_k |e><e|_k
        + g * sum_k (a_k^dag |g><e|_k + h.c.)
        + hop_A * sum_bonds (a_k^dag a_{k+1} + h.c.)

Lab-frame assembly (adding the large common frequency back) is available
behind a flag for cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import sparse

from .hilbert import BasisSector, Boundary, SiteConfig, enumerate_sector
from .states import QuantumState

__all__ = [
    "ModelParams",
    "SparseOperator",
    "build_hamiltonian",
    "build_collapse_operators",
    "detuning_diagonal",
    "polariton_product_state",
    "polariton_energy",
    "dispersive_shift",
]

BRANCH_SIGNS = {"+": 1.0, "-": -1.0}


@dataclass(frozen=True)
class ModelParams:
    """Chain rates in units where the light-matter coupling g is 1.

    ``g`` exists as a field only so the decoupled photon-hopping limit (g=0)
    can be exercised in diagnostics; physical runs keep g=1.  ``hop_A=0``
    likewise gives decoupled atom-cavity cells.
    """

    hop_A: float
    detuning: float = 0.0
    kappa: float = 0.0
    gamma: float = 0.0
    filling: int = 1
    g: float = 1.0

    def __post_init__(self) -> None:
        if self.hop_A < 0:
            raise ValueError(f"hop_A must be >= 0, got {self.hop_A}")
        if self.kappa < 0 or self.gamma < 0:
            raise ValueError("decay rates kappa and gamma must be >= 0")
        if self.filling < 0:
            raise ValueError(f"filling must be >= 0, got {self.filling}")
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")


@dataclass
class SparseOperator:
    """Sparse operator between sector bases (codomain defaults to the domain)."""

    matrix: sparse.csr_array
    domain: object
    codomain: object
    hermitian: bool
    label: str = ""

    @property
    def dimension(self) -> int:
        return self.domain.dimension

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def _csr(
    rows: list[int],
    cols: list[int],
    vals: list[complex],
    shape: tuple[int, int],
) -> sparse.csr_array:
    return sparse.csr_array(
        sparse.coo_array((np.asarray(vals, dtype=np.complex128), (rows, cols)), shape=shape)
    )


def _bonds(lattice) -> list[tuple[int, int]]:
    n = lattice.num_sites
    bonds = [(k, k + 1) for k in range(n - 1)]
    if lattice.boundary is Boundary.PERIODIC and n > 1:
        # The wrap bond follows the formal sum k=1..N; for N=2 this doubles
        # the single physical bond, consistent with that sum.
        bonds.append((n - 1, 0))
    return bonds


def build_hamiltonian(
    sector: BasisSector,
    params: ModelParams,
    *,
    frame: str = "rotating",
    omega_d: float = 0.0,
) -> SparseOperator:
    """Assemble the chain Hamiltonian restricted to one excitation sector.

    The hopping sum runs over k=1..N-1 bonds for an open chain plus the wrap
    bond for a periodic one.  Photon creation beyond the sector cutoff is
    absent; with the default exact cutoff no matrix element is ever lost.
    Every directed term is assembled together with its reverse, so the matrix
    equals its conjugate transpose exactly.

    ``frame="lab"`` adds the common frequency ``omega_d`` times the (constant)
    total excitation number, shifting the sector spectrum rigidly.
    """
    if sector.dimension == 0:
        raise ValueError("sector is empty")
    if frame not in ("rotating", "lab"):
        raise ValueError(f"frame must be 'rotating' or 'lab', got {frame!r}")

    n_sites = sector.lattice.num_sites
    cutoff = sector.cutoff
    bits = sector.site_bits
    shifts = sector.site_shifts
    configs = sector.configs
    packed = sector.packed
    index_of = sector.index_of

    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []

    diag_shift = params.detuning
    lab_offset = omega_d * sector.total_excitations if frame == "lab" else 0.0
    for j, cfg in enumerate(configs):
        n_exc = sum(int(s.atom_excited) for s in cfg)
        d = diag_shift * n_exc + lab_offset
        if d != 0.0:
            rows.append(j)
            cols.append(j)
            vals.append(d)

    g = params.g
    if g != 0.0:
        for k in range(n_sites):
            shift = shifts[k]
            for j, cfg in enumerate(configs):
                n, e = cfg[k]
                if e:
                    if n + 1 <= cutoff:
                        # a^dag |g><e|: (n, e) -> (n+1, g), local code +1
                        rows.append(index_of[packed[j] + (1 << shift)])
                        cols.append(j)
                        vals.append(g * math.sqrt(n + 1))
                elif n >= 1:
                    # a |e><g|: (n, g) -> (n-1, e), local code -1
                    rows.append(index_of[packed[j] - (1 << shift)])
                    cols.append(j)
                    vals.append(g * math.sqrt(n))

    hop = params.hop_A
    if hop != 0.0 and n_sites > 1:
        for k, l in _bonds(sector.lattice):
            for src, dst in ((l, k), (k, l)):
                s_shift = shifts[src]
                d_shift = shifts[dst]
                for j, cfg in enumerate(configs):
                    n_src = cfg[src].photon_number
                    n_dst = cfg[dst].photon_number
                    if n_src >= 1 and n_dst + 1 <= cutoff:
                        # a_dst^dag a_src
                        target = packed[j] - (2 << s_shift) + (2 << d_shift)
                        rows.append(index_of[target])
                        cols.append(j)
                        vals.append(hop * math.sqrt(n_src * (n_dst + 1)))

    matrix = _csr(rows, cols, vals, (sector.dimension, sector.dimension))
    return SparseOperator(matrix, sector, sector, hermitian=True, label="H")


def detuning_diagonal(sector: BasisSector) -> np.ndarray:
    """Diagonal multiplying the detuning: excited-emitter count per config."""
    return sector.excited_atom_diagonal()


def build_collapse_operators(
    sector: BasisSector,
    params: ModelParams,
    *,
    target: BasisSector | None = None,
) -> list[SparseOperator]:
    """Jump operators sqrt(kappa) a_k and sqrt(gamma) |g><e|_k for every site.

    Each operator maps the sector with m total excitations into the m-1
    sector.  Operators with zero rate are omitted; for the vacuum sector the
    list is empty.
    """
    m = sector.total_excitations
    if m == 0 or (params.kappa == 0.0 and params.gamma == 0.0):
        return []
    if target is None:
        target = enumerate_sector(sector.lattice, m - 1)
    if target.total_excitations != m - 1:
        raise ValueError(
            f"target sector has total {target.total_excitations}, expected {m - 1}"
        )

    n_sites = sector.lattice.num_sites
    shape = (target.dimension, sector.dimension)
    ops: list[SparseOperator] = []

    if params.kappa > 0.0:
        root_kappa = math.sqrt(params.kappa)
        for k in range(n_sites):
            rows: list[int] = []
            cols: list[int] = []
            vals: list[complex] = []
            for j, cfg in enumerate(sector.configs):
                n, e = cfg[k]
                if n >= 1:
                    dst = cfg[:k] + (SiteConfig(n - 1, e),) + cfg[k + 1 :]
                    rows.append(target.index(dst))
                    cols.append(j)
                    vals.append(root_kappa * math.sqrt(n))
            ops.append(
                SparseOperator(
                    _csr(rows, cols, vals, shape),
                    sector,
                    target,
                    hermitian=False,
                    label=f"photon_loss[{k}]",
                )
            )

    if params.gamma > 0.0:
        root_gamma = math.sqrt(params.gamma)
        for k in range(n_sites):
            rows = []
            cols = []
            vals = []
            for j, cfg in enumerate(sector.configs):
                n, e = cfg[k]
                if e:
                    dst = cfg[:k] + (SiteConfig(n, False),) + cfg[k + 1 :]
                    rows.append(target.index(dst))
                    cols.append(j)
                    vals.append(root_gamma)
            ops.append(
                SparseOperator(
                    _csr(rows, cols, vals, shape),
                    sector,
                    target,
                    hermitian=False,
                    label=f"atom_decay[{k}]",
                )
            )

    return ops


def polariton_product_state(
    sectors: BasisSector | Sequence[BasisSector],
    occupations: Sequence[tuple[int, str] | None],
) -> QuantumState:
    """Product of single-cell polaritons embedded into the matching sector.

    ``occupations`` holds one entry per site: ``None`` for the absolute
    ground state |g,0> or ``(n, branch)`` with branch "+" or "-" for the
    dressed state (|g,n> +/- |e,n-1>)/sqrt(2).  The summed excitation numbers
    select the sector from ``sectors``.
    """
    if isinstance(sectors, BasisSector):
        family = [sectors]
    else:
        family = list(sectors)
    if not family:
        raise ValueError("no sectors provided")

    lattice = family[0].lattice
    if len(occupations) != lattice.num_sites:
        raise ValueError(
            f"need one occupation per site: got {len(occupations)} for "
            f"N={lattice.num_sites}"
        )

    total = 0
    for occ in occupations:
        if occ is None:
            continue
        n, branch = occ
        if n < 1:
            raise ValueError(f"polariton occupation must have n >= 1, got {n}")
        if branch not in BRANCH_SIGNS:
            raise ValueError(f"branch must be '+' or '-', got {branch!r}")
        total += n

    sector = next((s for s in family if s.total_excitations == total), None)
    if sector is None:
        raise ValueError(f"no provided sector has total_excitations={total}")
    for occ in occupations:
        if occ is not None and occ[0] > sector.cutoff:
            raise ValueError(
                f"occupation n={occ[0]} exceeds photon cutoff {sector.cutoff}"
            )

    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    site_components: list[list[tuple[SiteConfig, float]]] = []
    for occ in occupations:
        if occ is None:
            site_components.append([(SiteConfig(0, False), 1.0)])
        else:
            n, branch = occ
            sign = BRANCH_SIGNS[branch]
            site_components.append(
                [
                    (SiteConfig(n, False), inv_sqrt2),
                    (SiteConfig(n - 1, True), sign * inv_sqrt2),
                ]
            )

    vec = np.zeros(sector.dimension, dtype=np.complex128)

    def expand(site: int, prefix: list[SiteConfig], amp: float) -> None:
        if site == lattice.num_sites:
            vec[sector.index(tuple(prefix))] = amp
            return
        for state, a in site_components[site]:
            prefix.append(state)
            expand(site + 1, prefix, amp * a)
            prefix.pop()

    expand(0, [], 1.0)
    return QuantumState(sector, vec)


def polariton_energy(n: int, branch: str, params: ModelParams) -> float:
    """Rotating-frame energy +/- g*sqrt(n) of the resonant n-excitation polariton.

    The closed form holds only on resonance; nonzero detuning is rejected.
    """
    if n < 1:
        raise ValueError(f"polariton manifold requires n >= 1, got {n}")
    if branch not in BRANCH_SIGNS:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    if params.detuning != 0.0:
        raise ValueError("closed-form polariton energies require detuning = 0")
    return BRANCH_SIGNS[branch] * params.g * math.sqrt(n)


def dispersive_shift(n: int, delta: float) -> float:
    """Far-detuned level shift g^2 (n+1) / delta in units of g = 1.

    Valid when |delta| is large compared to g*sqrt(n+1); the caller is
    responsible for that regime.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if delta == 0.0:
        raise ValueError("dispersive shift diverges at delta = 0")
    return (n + 1) / delta

"""Atom-cavity product bases restricted to fixed total-excitation sectors.

Each site of the chain holds one cavity mode (Fock states up to a photon
cutoff) and one two-level emitter.  The total number of excitations, photonic
plus atomic, commutes with the chain Hamiltonian, so all heavy computation
runs inside one fixed-total sector enumerated here.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

__all__ = [
    "Boundary",
    "SiteConfig",
    "LatticeSpec",
    "BasisSector",
    "enumerate_sector",
    "local_occupation",
]


class Boundary(str, Enum):
    """Boundary condition of the cavity chain."""

    OPEN = "open"
    PERIODIC = "periodic"


class SiteConfig(NamedTuple):
    """Local state of one atom-cavity cell."""

    photon_number: int
    atom_excited: bool

    @property
    def excitations(self) -> int:
        """Local excitation count: photons plus one if the emitter is excited."""
        return self.photon_number + int(self.atom_excited)


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry and truncation of the cavity chain.

    ``photon_cutoff=None`` means "exact per sector": each sector uses its own
    total excitation number as the per-cavity Fock cutoff, which is lossless
    because a single cavity can hold at most all excitations in the sector.
    A lower explicit cutoff trades accuracy for speed; see
    :func:`cavitysim.solvers.cutoff_convergence` to check it.
    """

    num_sites: int
    boundary: Boundary = Boundary.OPEN
    photon_cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.num_sites < 1:
            raise ValueError(f"num_sites must be >= 1, got {self.num_sites}")
        if self.photon_cutoff is not None and self.photon_cutoff < 0:
            raise ValueError(f"photon_cutoff must be >= 0, got {self.photon_cutoff}")
        object.__setattr__(self, "boundary", Boundary(self.boundary))


def _local_code(photon_number: int, atom_excited: int) -> int:
    # Packed local index; also the canonical local sort key (n, e).
    return 2 * photon_number + int(atom_excited)


class BasisSector:
    """Ordered basis of all chain configurations with one total excitation count.

    Canonical order: lexicographic over sites (site 0 most significant), each
    site keyed by (photon_number, atom_excited).  ``index_of`` is the exact
    inverse of the ``configs`` list.  Instances are immutable after
    construction and safe for concurrent reads; build them through
    :func:`enumerate_sector`.
    """

    def __init__(
        self,
        lattice: LatticeSpec,
        total_excitations: int,
        cutoff: int,
        configs: tuple[tuple[SiteConfig, ...], ...],
    ):
        self.lattice = lattice
        self.total_excitations = total_excitations
        self.cutoff = cutoff
        self.configs = configs
        # One packed integer per configuration: fixed bit width per site so
        # operator assembly can update codes arithmetically.
        self.site_bits = max(1, (2 * (cutoff + 1) - 1).bit_length())
        self.site_shifts = tuple(
            self.site_bits * (lattice.num_sites - 1 - k)
            for k in range(lattice.num_sites)
        )
        packed = [self.pack(cfg) for cfg in configs]
        self.packed = packed
        self.index_of = {code: i for i, code in enumerate(packed)}
        self._site_diagonals: dict[int, np.ndarray] = {}

    @property
    def dimension(self) -> int:
        return len(self.configs)

    def pack(self, config: tuple[SiteConfig, ...]) -> int:
        code = 0
        for (n, e), shift in zip(config, self.site_shifts):
            code |= _local_code(n, e) << shift
        return code

    def index(self, config: tuple[SiteConfig, ...]) -> int:
        """Ordinal of a configuration; KeyError if not in the sector."""
        return self.index_of[self.pack(config)]

    def excitation_diagonal(self, site: int) -> np.ndarray:
        """Diagonal of the local excitation-number operator at ``site``.

        The operator counts photons plus the emitter flag and is diagonal in
        this basis.  Cached per site.
        """
        if not 0 <= site < self.lattice.num_sites:
            raise IndexError(f"site {site} out of range for N={self.lattice.num_sites}")
        cached = self._site_diagonals.get(site)
        if cached is None:
            cached = np.array(
                [c[site].photon_number + c[site].atom_excited for c in self.configs],
                dtype=float,
            )
            self._site_diagonals[site] = cached
        return cached

    def excited_atom_diagonal(self) -> np.ndarray:
        """Diagonal counting excited emitters per configuration."""
        return np.array(
            [sum(int(s.atom_excited) for s in cfg) for cfg in self.configs],
            dtype=float,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BasisSector):
            return NotImplemented
        return (
            self.lattice == other.lattice
            and self.total_excitations == other.total_excitations
            and self.cutoff == other.cutoff
        )

    def __hash__(self) -> int:
        return hash((self.lattice, self.total_excitations, self.cutoff))

    def __repr__(self) -> str:
        return (
            f"BasisSector(N={self.lattice.num_sites}, total={self.total_excitations}, "
            f"cutoff={self.cutoff}, dim={self.dimension})"
        )


def enumerate_sector(lattice: LatticeSpec, total_excitations: int) -> BasisSector:
    """Enumerate all configurations with the given total excitation count.

    Ordering is lexicographic over sites with the local key
    (photon_number, atom_excited) and is deterministic across runs.

    Raises ValueError for negative totals or totals unreachable under the
    photon cutoff (total > N * (cutoff + 1)).
    """
    if total_excitations < 0:
        raise ValueError(f"total_excitations must be >= 0, got {total_excitations}")
    cutoff = lattice.photon_cutoff
    if cutoff is None:
        cutoff = total_excitations
    per_site_max = cutoff + 1  # photons up to cutoff, plus the emitter
    n_sites = lattice.num_sites
    if total_excitations > n_sites * per_site_max:
        raise ValueError(
            f"total={total_excitations} unreachable: N={n_sites} sites hold at most "
            f"{n_sites * per_site_max} excitations at photon_cutoff={cutoff}"
        )

    local_states = [
        (SiteConfig(n, bool(e)), n + e) for n in range(cutoff + 1) for e in (0, 1)
    ]
    configs: list[tuple[SiteConfig, ...]] = []
    prefix: list[SiteConfig] = []

    def fill(site: int, remaining: int) -> None:
        if site == n_sites:
            if remaining == 0:
                configs.append(tuple(prefix))
            return
        sites_left = n_sites - site - 1
        for state, count in local_states:
            if count > remaining:
                continue
            if remaining - count > sites_left * per_site_max:
                continue
            prefix.append(state)
            fill(site + 1, remaining - count)
            prefix.pop()

    fill(0, total_excitations)
    return BasisSector(lattice, total_excitations, cutoff, tuple(configs))


def local_occupation(sector: BasisSector, config_index: int, site: int) -> SiteConfig:
    """Photon number and emitter state of one site in one basis element."""
    if not 0 <= config_index < sector.dimension:
        raise IndexError(
            f"config_index {config_index} out of range for dimension {sector.dimension}"
        )
    if not 0 <= site < sector.lattice.num_sites:
        raise IndexError(f"site {site} out of range for N={sector.lattice.num_sites}")
    return sector.configs[config_index][site]

"""Complex amplitude vectors over an enumerated sector basis."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

__all__ = ["QuantumState"]


@dataclass
class QuantumState:
    """Pure state as an amplitude vector over a sector basis.

    ``sector`` may be any basis object exposing ``dimension`` (a
    :class:`~cavitysim.hilbert.BasisSector` or a spin-sector basis).
    """

    sector: Any
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.sector.dimension,):
            raise ValueError(
                f"amplitude vector of length {self.amplitudes.shape} does not match "
                f"sector dimension {self.sector.dimension}"
            )

    @classmethod
    def basis_state(cls, sector: Any, index: int) -> "QuantumState":
        vec = np.zeros(sector.dimension, dtype=np.complex128)
        vec[index] = 1.0
        return cls(sector, vec)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "QuantumState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return QuantumState(self.sector, self.amplitudes / n)

    def overlap(self, other: "QuantumState") -> complex:
        """Inner product <self|other>; both states must share the sector."""
        if self.sector != other.sector:
            raise ValueError("states live in different sectors")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def copy(self) -> "QuantumState":
        return QuantumState(self.sector, self.amplitudes.copy())

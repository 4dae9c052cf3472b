"""Expectation values over sector states.

The local excitation-number operators are diagonal in the sector basis, so
means and variances reduce to weighted sums; polariton populations need the
two-component dressed-state overlap per site.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import BasisSector
from .states import QuantumState

__all__ = [
    "ObservableResult",
    "excitation_moments",
    "polariton_population",
    "site_ground_population",
    "fidelity",
    "middle_site",
]


@dataclass(frozen=True)
class ObservableResult:
    """Labelled scalar observable; variance_flag marks second-moment values."""

    label: str
    value: float
    variance_flag: bool = False


def middle_site(num_sites: int) -> int:
    """Zero-based index of the middle cavity (ceil(N/2) in 1-based counting)."""
    return (num_sites - 1) // 2


def excitation_moments(state: QuantumState, site: int) -> tuple[float, float]:
    """Mean and variance of the local excitation number at ``site``."""
    diag = state.sector.excitation_diagonal(site)
    p = np.abs(state.amplitudes) ** 2
    mean = float(p @ diag)
    var = float(p @ (diag * diag) - mean * mean)
    if -1e-12 < var < 0.0:
        var = 0.0
    return mean, var


def _branch_sign(branch: str) -> float:
    if branch == "+":
        return 1.0
    if branch == "-":
        return -1.0
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def polariton_population(
    state: QuantumState, site: int, n: int, branch: str
) -> float:
    """Probability of the dressed state |n+/-> at ``site`` (identity elsewhere).

    Computed as sum over the rest-of-chain configurations of the squared
    two-component overlap (<g,n| +/- <e,n-1|)/sqrt(2) with the state.
    """
    sector = state.sector
    if not isinstance(sector, BasisSector):
        raise TypeError("polariton populations are defined on cavity-chain sectors")
    if n < 1:
        raise ValueError(f"polariton manifold requires n >= 1, got {n}")
    if n > sector.cutoff:
        raise ValueError(f"n={n} exceeds the sector photon cutoff {sector.cutoff}")
    sign = _branch_sign(branch)

    shift = sector.site_shifts[site]
    bits = sector.site_bits
    site_mask = ((1 << bits) - 1) << shift
    code_gn = (2 * n) << shift
    code_en1 = (2 * (n - 1) + 1) << shift

    # rest-of-chain key -> [amplitude on |g,n>, amplitude on |e,n-1>]
    rest: dict[int, list[complex]] = {}
    amps = state.amplitudes
    for j, code in enumerate(sector.packed):
        local = code & site_mask
        if local == code_gn:
            rest.setdefault(code & ~site_mask, [0.0, 0.0])[0] = amps[j]
        elif local == code_en1:
            rest.setdefault(code & ~site_mask, [0.0, 0.0])[1] = amps[j]

    total = 0.0
    for a_gn, a_en1 in rest.values():
        total += abs(a_gn + sign * a_en1) ** 2
    return total / 2.0


def site_ground_population(state: QuantumState, site: int) -> float:
    """Probability that ``site`` is in the absolute ground state |g,0>."""
    sector = state.sector
    shift = sector.site_shifts[site]
    bits = sector.site_bits
    site_mask = ((1 << bits) - 1) << shift
    amps = state.amplitudes
    total = 0.0
    for j, code in enumerate(sector.packed):
        if code & site_mask == 0:
            total += abs(amps[j]) ** 2
    return total


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """Squared overlap |<a|b>|^2; sectors must match."""
    return abs(a.overlap(b)) ** 2

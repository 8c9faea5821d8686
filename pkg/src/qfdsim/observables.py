"""Transition properties in the Ritz basis, oscillator strengths and spectra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import PauliSum
from .propagators import Basis
from .qfd import RitzSolution, evaluate_matrices, hermitize
from .statevector import ShotPlan


@dataclass(frozen=True, eq=False)
class TransitionTable:
    """``values[t, u] = <Psi_t| O |Psi_u>`` with the Ritz energies attached."""

    name: str
    values: np.ndarray
    energies: np.ndarray

    def rows(self):
        n = self.values.shape[0]
        return [(t, u, complex(self.values[t, u])) for t in range(n) for u in range(n)]

    def is_hermitian(self, tol: float = 1e-8) -> bool:
        return bool(np.allclose(self.values, self.values.conj().T, atol=tol, rtol=0))


@dataclass(frozen=True)
class SpectrumLine:
    delta_e: float
    strength: float


def subspace_operator(
    o: PauliSum, basis: Basis, path: str = "direct", plan: ShotPlan | None = None
) -> np.ndarray:
    """``<Gamma_i| O |Gamma_j>`` on the requested evaluation path."""
    (mat,), _ = evaluate_matrices(basis, [o], path, plan, tags=("O",))
    if path == "sampled":
        mat, _ = hermitize(mat)
    return mat


def transition_values(sol: RitzSolution, o_mat: np.ndarray, name: str = "O") -> TransitionTable:
    o_mat = np.asarray(o_mat)
    m = sol.coeffs.shape[0]
    if o_mat.shape != (m, m):
        raise ValueError(f"operator matrix {o_mat.shape} does not match basis dimension {m}")
    return TransitionTable(name, sol.coeffs.conj().T @ o_mat @ sol.coeffs, sol.energies)


def strengths_from_moments(energies, moments: Sequence[np.ndarray]) -> list[SpectrumLine]:
    """``(2/3) dE |<0|mu|t>|^2`` summed over Cartesian components.

    ``moments`` holds one vector ``<Psi_0|mu_axis|Psi_t>`` per axis.
    """
    energies = np.asarray(energies, dtype=float)
    de = energies - energies[0]
    total = np.zeros_like(de)
    for mom in moments:
        total += np.abs(np.asarray(mom)) ** 2
    return [SpectrumLine(float(d), float(2.0 / 3.0 * d * s)) for d, s in zip(de, total)]


def oscillator_strengths(
    sol: RitzSolution,
    mu_components: Sequence[PauliSum | np.ndarray],
    basis: Basis | None = None,
    path: str = "direct",
    plan: ShotPlan | None = None,
) -> list[SpectrumLine]:
    """Oscillator strength of every Ritz state relative to the lowest one.

    Each dipole component is either a :class:`PauliSum` (evaluated over
    ``basis`` on ``path``) or a precomputed subspace matrix.
    """
    if not mu_components:
        raise ValueError("at least one dipole component is required")
    moments = []
    for mu in mu_components:
        if isinstance(mu, PauliSum):
            if basis is None:
                raise ValueError("a basis is needed to evaluate PauliSum dipoles")
            mu = subspace_operator(mu, basis, path, plan)
        moments.append(transition_values(sol, mu).values[0])
    return strengths_from_moments(sol.energies, moments)


def dense_oscillator_strengths(
    evals: np.ndarray, evecs: np.ndarray, mu_components: Sequence[PauliSum], n_states: int
) -> list[SpectrumLine]:
    """Reference strengths from explicit eigenvectors (columns of ``evecs``)."""
    ground = evecs[:, 0]
    moments = []
    for mu in mu_components:
        mv = mu.sparse_matrix() @ evecs[:, :n_states]
        moments.append(ground.conj() @ mv)
    return strengths_from_moments(evals[:n_states], moments)


def lorentzian(e: np.ndarray, center: float, delta: float) -> np.ndarray:
    """Unit-area Lorentzian ``(delta/pi) / ((e - center)^2 + delta^2)``."""
    return (delta / np.pi) / ((e - center) ** 2 + delta**2)


def lorentzian_spectrum(
    lines: Sequence[SpectrumLine], delta: float, grid: tuple[float, float, int]
) -> tuple[np.ndarray, np.ndarray]:
    """Broadened spectrum sampled on ``linspace(e_lo, e_hi, n_points)``."""
    e_lo, e_hi, n_points = grid
    if delta <= 0:
        raise ValueError("width must be positive")
    if int(n_points) < 2 or not e_hi > e_lo:
        raise ValueError("grid needs e_hi > e_lo and at least two points")
    e = np.linspace(e_lo, e_hi, int(n_points))
    intensity = np.zeros_like(e)
    for line in lines:
        intensity += line.strength * lorentzian(e, line.delta_e, delta)
    return e, intensity

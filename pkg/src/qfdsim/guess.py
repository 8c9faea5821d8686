"""Guess states: CIS in the qubit configuration basis, and interfering references."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliSum
from .statevector import State

ORTHO_TOL = 1e-10


def fix_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude component is real and positive.

    Ties on magnitude go to the lowest index.
    """
    vec = np.asarray(vec, dtype=complex)
    mags = np.abs(vec)
    j = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return vec * (abs(vec[j]) / vec[j]) if vec[j] != 0 else vec


@dataclass(frozen=True)
class GuessSet:
    states: tuple[State, ...]
    provenance: str = "custom"
    cis_energies: tuple[float, ...] | None = None

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i) -> State:
        return self.states[i]

    @property
    def n_qubits(self) -> int:
        return self.states[0].n_qubits

    def overlap_matrix(self) -> np.ndarray:
        g = np.array([s.amplitudes for s in self.states])
        return g.conj() @ g.T

    def is_orthonormal(self, tol: float = ORTHO_TOL) -> bool:
        return bool(np.allclose(self.overlap_matrix(), np.eye(len(self)), atol=tol, rtol=0))

    def to_json(self) -> str:
        return json.dumps(
            [[[float(a.real), float(a.imag)] for a in s.amplitudes] for s in self.states]
        )


def configurations(n_qubits: int) -> list[int]:
    """Basis indices of the reference and all single bit flips (qubit 0 first)."""
    return [0] + [1 << (n_qubits - 1 - a) for a in range(n_qubits)]


def cis_matrix(h: PauliSum) -> np.ndarray:
    """Projection of ``h`` onto the CIS configurations, built term by term."""
    n = h.n_qubits
    configs = configurations(n)
    where = {b: i for i, b in enumerate(configs)}
    mat = np.zeros((n + 1, n + 1), dtype=complex)
    for j, b in enumerate(configs):
        for c, p in h.terms:
            image, phase = p.act_on_index(b, n)
            i = where.get(image)
            if i is not None:
                mat[i, j] += c * phase
    return mat


def _lift(coeffs: np.ndarray, n_qubits: int) -> State:
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[configurations(n_qubits)] = coeffs
    return State(n_qubits, amps)


def cis_guesses(h: PauliSum, n_states: int) -> GuessSet:
    """Lowest ``n_states`` CIS eigenvectors lifted to the full register."""
    n = h.n_qubits
    if n_states > n + 1 or n_states < 1:
        raise ValueError(f"n_states must lie in [1, {n + 1}], got {n_states}")
    evals, evecs = np.linalg.eigh(cis_matrix(h))
    # eigh is already ascending; a stable sort keeps degenerate order deterministic.
    order = np.argsort(evals, kind="stable")[:n_states]
    states = tuple(_lift(fix_phase(evecs[:, i]), n) for i in order)
    return GuessSet(states, "cis", tuple(float(evals[i]) for i in order))


def configuration_guesses(h: PauliSum, n_states: int) -> GuessSet:
    """Raw CIS configurations sorted by diagonal energy (no diagonalization)."""
    n = h.n_qubits
    if n_states > n + 1 or n_states < 1:
        raise ValueError(f"n_states must lie in [1, {n + 1}], got {n_states}")
    diag = cis_matrix(h).diagonal().real
    order = np.argsort(diag, kind="stable")[:n_states]
    states = tuple(_lift(np.eye(n + 1)[i], n) for i in order)
    return GuessSet(states, "configurations", tuple(float(diag[i]) for i in order))


def load_guesses(text: str, allow_nonorthonormal: bool = False) -> GuessSet:
    """Guess set from a JSON list of amplitude arrays (``[re, im]`` pairs or reals)."""
    raw = json.loads(text)
    states = []
    for amps in raw:
        vec = np.array(
            [complex(a[0], a[1]) if isinstance(a, (list, tuple)) else complex(a) for a in amps]
        )
        states.append(State.from_vector(vec, normalize=False))
    gs = GuessSet(tuple(states), "file")
    if not allow_nonorthonormal and not gs.is_orthonormal(1e-8):
        raise ValueError("guess states are not orthonormal within 1e-8")
    return gs


@dataclass(frozen=True)
class InterferingState:
    xi: int
    xi_prime: int
    sign: str
    part: str
    state: State = field(repr=False)
    # Squared norm of (|Phi_xi> + s|Phi_xi'>)/sqrt(2); 1 for orthonormal guesses.
    weight: float = 1.0


def interfering(states: GuessSet, xi: int, xi_prime: int, sign: str, part: str) -> InterferingState:
    """``(|Phi_xi> + s |Phi_xi'>)/sqrt(2)`` with ``s`` in ``{+1, -1, +i, -i}``."""
    if xi == xi_prime:
        raise ValueError("interfering states need two distinct guesses")
    if sign not in "+-" or len(sign) != 1:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    if part not in ("Re", "Im"):
        raise ValueError(f"part must be 'Re' or 'Im', got {part!r}")
    s = (1.0 if sign == "+" else -1.0) * (1.0 if part == "Re" else 1j)
    vec = states[xi].amplitudes + s * states[xi_prime].amplitudes
    # Renormalize explicitly: exact 1/sqrt(2) only if the pair is orthogonal.
    weight = float(np.vdot(vec, vec).real) / 2.0
    return InterferingState(xi, xi_prime, sign, part, State.from_vector(vec), weight)

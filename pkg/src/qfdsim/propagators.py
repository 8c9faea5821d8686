"""Exact and first-order Trotterized propagation ``U_k = exp(-2 pi i k H / kappa)``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .guess import GuessSet
from .pauli import (
    DENSE_LIMIT,
    DenseLimitError,
    PauliString,
    PauliSum,
    TrotterGroupingError,
    to_dense,
    trotter_groups,
)
from .statevector import State, _rotate


def trotter_factors(h: PauliSum) -> tuple[list[tuple[float, PauliString]], str]:
    """Ordered ``(coeff, string)`` list of one first-order step, as a written product.

    For the X/Z two-local class the product is ``E_XX E_XZ E_ZZ E_ZX``; other
    operators fall back to one exponential per string in canonical order.
    The identity is kept as a global-phase factor.
    """
    try:
        tg = trotter_groups(h)
    except TrotterGroupingError:
        return [(c, p) for c, p in h.terms], "termwise"
    factors = [t for g in tg.groups for t in g.terms]
    if tg.constant:
        factors.append((tg.constant, PauliString()))
    return factors, "xx-xz-zz-zx"


@dataclass(frozen=True, eq=False)
class PropagatorSpec:
    """How ``U_k`` is realized.

    Build with :meth:`exact` or :meth:`trotter` so the per-operator cache
    (spectral decomposition or Trotter factor list) is computed once.
    """

    mode: str
    kappa: float
    steps_per_k: int = 1
    dense_eig_cache: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)
    factors: tuple | None = field(default=None, repr=False)
    grouping: str | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "trotter"):
            raise ValueError(f"unknown propagation mode {self.mode!r}")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if int(self.steps_per_k) < 1:
            raise ValueError("steps_per_k must be >= 1")

    @classmethod
    def exact(cls, h: PauliSum, kappa: float, limit: int = DENSE_LIMIT) -> "PropagatorSpec":
        if h.n_qubits > limit:
            raise DenseLimitError(
                f"exact propagation needs a dense {h.n_qubits}-qubit matrix (limit {limit})"
            )
        evals, evecs = np.linalg.eigh(to_dense(h, limit))
        return cls("exact", float(kappa), 1, (evals, evecs))

    @classmethod
    def trotter(cls, h: PauliSum, kappa: float, steps_per_k: int = 1) -> "PropagatorSpec":
        factors, grouping = trotter_factors(h)
        return cls("trotter", float(kappa), int(steps_per_k), None, tuple(factors), grouping)

    @classmethod
    def build(cls, h: PauliSum, kappa: float, mode: str = "exact", steps_per_k: int = 1):
        if mode == "exact":
            return cls.exact(h, kappa)
        return cls.trotter(h, kappa, steps_per_k)

    @property
    def theta(self) -> float:
        """Time per unit ``k``: ``2 pi / kappa``."""
        return 2.0 * np.pi / self.kappa


def _exact(spec: PropagatorSpec, h: PauliSum, amps: np.ndarray, t_units: float) -> np.ndarray:
    cache = spec.dense_eig_cache
    if cache is None:
        cache = np.linalg.eigh(to_dense(h))
    evals, evecs = cache
    phases = np.exp(-1j * spec.theta * t_units * evals)
    return evecs @ (phases * (evecs.conj().T @ amps))


def trotter_step(
    amps: np.ndarray, factors: Sequence[tuple[float, PauliString]], angle: float, n_qubits: int
) -> np.ndarray:
    """One first-order step ``prod_j exp(-i angle c_j P_j)`` in written-product order."""
    for c, p in reversed(factors):
        amps = _rotate(amps, p, angle * c, n_qubits)
    return amps


def trotter_step_adjoint(
    amps: np.ndarray, factors: Sequence[tuple[float, PauliString]], angle: float, n_qubits: int
) -> np.ndarray:
    """Adjoint of :func:`trotter_step`: reversed order, opposite angles."""
    for c, p in factors:
        amps = _rotate(amps, p, -angle * c, n_qubits)
    return amps


def propagate(spec: PropagatorSpec, h: PauliSum, k: int, psi: State) -> State:
    """``U_k |psi>``; in trotter mode ``|k| * steps_per_k`` first-order steps.

    Negative ``k`` applies the adjoint step so that ``U_{-k} = U_k^dagger``
    holds exactly for the Trotterized product.
    """
    if psi.n_qubits != h.n_qubits:
        raise ValueError("state and Hamiltonian act on different registers")
    return propagate_time(spec, h, int(k), psi, spec.steps_per_k)


def propagate_time(spec: PropagatorSpec, h: PauliSum, units: int, psi: State, steps: int) -> State:
    """``U(units)`` with an explicit total step count (used by the Toeplitz variant)."""
    if units == 0:
        return psi
    if spec.mode == "exact":
        return State(psi.n_qubits, _exact(spec, h, psi.amplitudes, units))
    factors = spec.factors if spec.factors is not None else trotter_factors(h)[0]
    n_steps = abs(units) * steps
    angle = spec.theta / steps
    step = trotter_step if units > 0 else trotter_step_adjoint
    amps = psi.amplitudes
    for _ in range(n_steps):
        amps = step(amps, factors, angle, psi.n_qubits)
    return State(psi.n_qubits, amps)


def product_formula(spec: PropagatorSpec, h: PauliSum, units: int, psi: State, steps: int) -> State:
    """First-order product formula at signed time ``units * 2 pi / kappa``.

    Unlike :func:`propagate_time`, negative time keeps the forward factor
    order with negated angles, so ``U(-t)`` is not exactly ``U(t)^dagger``.
    Exact mode is unaffected.
    """
    if units == 0 or spec.mode == "exact":
        return propagate_time(spec, h, units, psi, steps)
    factors = spec.factors if spec.factors is not None else trotter_factors(h)[0]
    angle = np.sign(units) * spec.theta / steps
    amps = psi.amplitudes
    for _ in range(abs(units) * steps):
        amps = trotter_step(amps, factors, angle, psi.n_qubits)
    return State(psi.n_qubits, amps)


@dataclass(frozen=True, eq=False)
class Basis:
    """Time-propagated basis ``|Gamma_{xi k}> = U_k |Phi_xi>``.

    Ordered with the guess index outer and ``k`` inner, ``-k_max .. +k_max``.
    Keeps the propagator and Hamiltonian so swap-test circuits can propagate
    their own reference states.
    """

    h: PauliSum
    guesses: GuessSet
    k_max: int
    spec: PropagatorSpec
    states: tuple[State, ...]

    @property
    def ks(self) -> list[int]:
        return list(range(-self.k_max, self.k_max + 1))

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, xi: int, k: int) -> int:
        return xi * (2 * self.k_max + 1) + (k + self.k_max)

    def labels(self) -> list[tuple[int, int]]:
        return [(xi, k) for xi in range(len(self.guesses)) for k in self.ks]

    def matrix(self) -> np.ndarray:
        """Rows are basis amplitude vectors."""
        return np.array([s.amplitudes for s in self.states])

    def propagate(self, k: int, psi: State) -> State:
        return propagate(self.spec, self.h, k, psi)


def basis_states(spec: PropagatorSpec, h: PauliSum, guesses: GuessSet, k_max: int) -> Basis:
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    states = []
    for phi in guesses.states:
        for k in range(-k_max, k_max + 1):
            states.append(propagate(spec, h, k, phi))
    return Basis(h, guesses, int(k_max), spec, tuple(states))

"""Dense statevector engine.

States are immutable wrappers around a complex amplitude vector of length
``2**n_qubits``; qubit 0 is the most significant bit of the basis index.
Ancilla-extended states put the ancilla at qubit 0.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pauli import DimensionError, PauliString, PauliSum, apply

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class State:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.shape[0] != 1 << int(self.n_qubits):
            raise DimensionError(
                f"{amps.shape[0]} amplitudes do not describe {self.n_qubits} qubits"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec, normalize: bool = True) -> "State":
        vec = np.asarray(vec, dtype=complex)
        n = int(round(np.log2(vec.shape[0])))
        if normalize:
            nrm = np.linalg.norm(vec)
            if nrm == 0:
                raise ValueError("cannot normalize a zero vector")
            vec = vec / nrm
        return cls(n, vec)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def to_json(self) -> str:
        return json.dumps([[float(a.real), float(a.imag)] for a in self.amplitudes])

    @classmethod
    def from_json(cls, text: str | list) -> "State":
        pairs = json.loads(text) if isinstance(text, str) else text
        return cls.from_vector([complex(re, im) for re, im in pairs], normalize=False)

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)


def _check_same(*states: State):
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise DimensionError(f"states have mismatched dimensions {sorted(dims)}")


def basis_state(bits: str | Sequence[int]) -> State:
    """Computational basis state; ``bits[0]`` is qubit 0 (the MSB)."""
    bits = "".join(str(int(b)) for b in bits) if not isinstance(bits, str) else bits
    n = len(bits)
    amps = np.zeros(1 << n, dtype=complex)
    amps[int(bits, 2) if n else 0] = 1.0
    return State(n, amps)


def plus_state(n_qubits: int = 1) -> State:
    return State(n_qubits, np.full(1 << n_qubits, 2 ** (-n_qubits / 2), dtype=complex))


def random_state(n_qubits: int, rng: np.random.Generator) -> State:
    vec = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return State.from_vector(vec)


def inner(bra: State, ket: State) -> complex:
    _check_same(bra, ket)
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def superpose(states: Iterable[State], coeffs: Iterable[complex]) -> State:
    """Normalized linear combination."""
    states = list(states)
    vec = sum(c * s.amplitudes for c, s in zip(coeffs, states))
    return State.from_vector(vec)


def _pauli_image(amps: np.ndarray, p: PauliString, n_qubits: int) -> np.ndarray:
    x, z, ny = p.masks(n_qubits)
    idx = np.arange(amps.shape[0], dtype=np.int64)
    src = idx ^ x
    signs = 1 - 2 * (np.bitwise_count(src & z) & 1).astype(np.int64)
    return (1j**ny) * signs * amps[src]


def apply_pauli_exponential(psi: State, p: PauliString, theta: float) -> State:
    """``exp(-i theta P) |psi> = cos(theta)|psi> - i sin(theta) P|psi>``."""
    return State(psi.n_qubits, _rotate(psi.amplitudes, p, theta, psi.n_qubits))


def _rotate(amps: np.ndarray, p: PauliString, theta: float, n_qubits: int) -> np.ndarray:
    if p.is_identity:
        return np.exp(-1j * theta) * amps
    return np.cos(theta) * amps - 1j * np.sin(theta) * _pauli_image(amps, p, n_qubits)


@dataclass(frozen=True, eq=False)
class AncillaState(State):
    """``(|0>(x)V|Omega> + |1>(x)W|Omega>)/sqrt(2)`` on ``N + 1`` qubits."""

    @property
    def system_qubits(self) -> int:
        return self.n_qubits - 1


def swap_test_state(omega: State, v_image: State, w_image: State) -> AncillaState:
    """Output of the one-ancilla extended swap test.

    The controlled propagations are not gate-compiled: the branch images
    ``V|Omega>`` and ``W|Omega>`` come in already propagated.  ``omega`` is
    only used to validate the register.
    """
    _check_same(omega, v_image, w_image)
    amps = np.concatenate([v_image.amplitudes, w_image.amplitudes]) / np.sqrt(2.0)
    return AncillaState(omega.n_qubits + 1, amps)


def ancilla_readout(aleph: AncillaState, o: PauliSum) -> complex:
    """``<aleph|X(x)O|aleph> + i <aleph|Y(x)O|aleph>``, which equals ``<A|O|B>``."""
    if o.n_qubits != aleph.n_qubits - 1:
        raise DimensionError(
            f"operator on {o.n_qubits} qubits vs ancilla state on {aleph.n_qubits}"
        )
    amps = aleph.amplitudes
    ex = np.vdot(amps, apply(_ancilla_op(o, "X"), amps))
    ey = np.vdot(amps, apply(_ancilla_op(o, "Y"), amps))
    return complex(ex.real + 1j * ey.real)


def _ancilla_op(o: PauliSum, axis: str) -> PauliSum:
    key = ("ancilla", axis)
    if key not in o._cache:
        o._cache[key] = o.tensor_ancilla(axis)
    return o._cache[key]


# -- shot sampling ----------------------------------------------------------


@dataclass(frozen=True)
class ShotPlan:
    """Shot budget and RNG key for sampled Pauli measurements.

    With ``correlated`` set, the system-identity strings needed for the
    metric ride along in the measurement settings used for the Hamiltonian,
    so both matrices come from the same shots.
    """

    shots_per_pauli: int
    seed: int = 0
    correlated: bool = True

    def __post_init__(self):
        if int(self.shots_per_pauli) < 1:
            raise ValueError("shots_per_pauli must be >= 1")


def substream(seed: int, circuit_id: str, basis: str) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, circuit_id, basis)``.

    Philox keyed through a SeedSequence; evaluation order cannot change the
    draws of any given key.
    """
    digest = hashlib.blake2b(f"{circuit_id}|{basis}".encode(), digest_size=16).digest()
    words = np.frombuffer(digest, dtype=np.uint32).tolist()
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(words))
    return np.random.Generator(np.random.Philox(ss))


def setting_label(setting: dict[int, str]) -> str:
    return " ".join(f"{a}{q}" for q, a in sorted(setting.items())) or "Z"


def _rotate_to_setting(amps: np.ndarray, setting: dict[int, str], n_qubits: int) -> np.ndarray:
    """Rotate qubits so that measuring Z reads out the requested axes."""
    psi = amps.reshape((2,) * n_qubits)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    # H S^dagger maps the Y eigenbasis onto Z.
    hsdg = h @ np.diag([1, -1j])
    for q, a in setting.items():
        if a == "Z":
            continue
        u = h if a == "X" else hsdg
        psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [q])), 0, q)
    return psi.reshape(-1)


def sample_setting(
    psi: State,
    setting: dict[int, str],
    strings: Sequence[PauliString],
    shots: int,
    rng: np.random.Generator,
) -> list[tuple[float, float]]:
    """Sample ``shots`` bitstrings in one qubit-wise basis and estimate each string.

    Every string must be diagonal in ``setting``.  Returns ``(mean, std_error)``
    per string, all computed from the same shots.
    """
    n = psi.n_qubits
    rotated = _rotate_to_setting(psi.amplitudes, setting, n)
    probs = np.abs(rotated) ** 2
    probs = probs / probs.sum()
    counts = rng.multinomial(int(shots), probs)
    hit = np.nonzero(counts)[0]
    out = []
    for p in strings:
        for q, a in p.factors:
            if setting.get(q, "Z") != a:
                raise ValueError(f"{p.label()} is not measurable in setting {setting_label(setting)}")
        mask = 0
        for q in p.qubits:
            mask |= 1 << (n - 1 - q)
        vals = 1 - 2 * (np.bitwise_count(hit & mask) & 1).astype(np.int64)
        mean = float(np.dot(counts[hit], vals)) / shots
        var = max(0.0, 1.0 - mean * mean)
        # Bessel-corrected sample variance of +-1 outcomes.
        std_err = np.sqrt(var * shots / max(shots - 1, 1) / shots) if shots > 1 else 0.0
        out.append((mean, float(std_err)))
    return out


def sample_pauli(
    psi: State, p: PauliString, plan: ShotPlan, circuit_id: str
) -> tuple[float, float]:
    """Shot estimate of ``<psi|P|psi>`` and its standard error.

    Outcomes are +-1 with ``P(+1) = (1 + <P>)/2``, drawn from the substream
    keyed by ``(plan.seed, circuit_id, basis of P)``.
    """
    setting = dict(p.factors)
    rng = substream(plan.seed, circuit_id, setting_label(setting))
    return sample_setting(psi, setting, [p], plan.shots_per_pauli, rng)[0]


def group_qubitwise(strings: Sequence[PauliString]) -> list[tuple[dict[int, str], list[int]]]:
    """Greedy qubit-wise-commuting grouping, in input order.

    Returns ``(setting, member indices)`` pairs.
    """
    groups: list[tuple[dict[int, str], list[int]]] = []
    for i, p in enumerate(strings):
        for setting, members in groups:
            if all(setting.get(q, a) == a for q, a in p.factors):
                setting.update(p.factors)
                members.append(i)
                break
        else:
            groups.append((dict(p.factors), [i]))
    return groups

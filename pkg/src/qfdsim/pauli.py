"""Hermitian operators in sparse Pauli form.

A :class:`PauliSum` is a real-weighted list of Pauli strings on ``n_qubits``
qubits.  Qubit 0 is the most significant bit of a computational basis index,
so a string acting on qubit ``q`` touches bit ``n_qubits - 1 - q``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

AXES = ("X", "Y", "Z")
DENSE_LIMIT = 14


class PauliParseError(ValueError):
    """Base class for operator-document parse failures."""


class AxisLabelError(PauliParseError):
    pass


class DuplicateQubitError(PauliParseError):
    pass


class CoefficientError(PauliParseError):
    pass


class QubitRangeError(PauliParseError):
    pass


class DimensionError(ValueError):
    """Operator and state act on different registers."""


class DenseLimitError(ValueError):
    """Requested a dense 2^N object above the configured qubit limit."""


class TrotterGroupingError(ValueError):
    """Term shape is outside the four-group X/Z two-local class."""


@dataclass(frozen=True, order=True)
class PauliString:
    """Tensor product of single-qubit Paulis, stored as sorted ``(qubit, axis)`` pairs."""

    factors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        factors = tuple((int(q), str(a)) for q, a in self.factors)
        for q, a in factors:
            if a not in AXES:
                raise AxisLabelError(f"axis {a!r} is not one of X, Y, Z")
            if q < 0:
                raise QubitRangeError(f"negative qubit index {q}")
        qubits = [q for q, _ in factors]
        if len(set(qubits)) != len(qubits):
            raise DuplicateQubitError(f"qubit repeated in {factors}")
        object.__setattr__(self, "factors", tuple(sorted(factors)))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse ``"X0 Z3"`` style labels; ``""`` or ``"I"`` is the identity."""
        label = label.strip()
        if label in ("", "I"):
            return cls()
        return cls(tuple((int(tok[1:]), tok[0]) for tok in label.split()))

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    @property
    def axes(self) -> str:
        return "".join(a for _, a in self.factors)

    @property
    def is_identity(self) -> bool:
        return not self.factors

    def sort_key(self):
        # (order, first qubit, axes lexicographic), then remaining qubits.
        first = self.factors[0][0] if self.factors else -1
        return (self.order, first, self.axes, self.qubits)

    def label(self) -> str:
        return " ".join(f"{a}{q}" for q, a in self.factors) or "I"

    def shifted(self, offset: int) -> "PauliString":
        return PauliString(tuple((q + offset, a) for q, a in self.factors))

    def masks(self, n_qubits: int) -> tuple[int, int, int]:
        """Return ``(x_mask, z_mask, n_y)`` over basis-index bits.

        ``P|b> = i**n_y * (-1)**popcount(b & z_mask) |b ^ x_mask>`` because
        ``Y = iXZ`` factor by factor.
        """
        x = z = ny = 0
        for q, a in self.factors:
            if q >= n_qubits:
                raise QubitRangeError(f"qubit {q} outside a {n_qubits}-qubit register")
            bit = 1 << (n_qubits - 1 - q)
            if a in ("X", "Y"):
                x |= bit
            if a in ("Z", "Y"):
                z |= bit
            if a == "Y":
                ny += 1
        return x, z, ny

    def act_on_index(self, b: int, n_qubits: int) -> tuple[int, complex]:
        """Image of a single basis state: ``P|b> = phase * |b'>``."""
        x, z, ny = self.masks(n_qubits)
        sign = -1 if bin(b & z).count("1") % 2 else 1
        return b ^ x, sign * (1j**ny)

    def __str__(self):
        return self.label()


def _string_matrix(p: PauliString, n_qubits: int) -> sparse.csr_matrix:
    dim = 1 << n_qubits
    x, z, ny = p.masks(n_qubits)
    idx = np.arange(dim, dtype=np.int64)
    signs = 1 - 2 * (np.bitwise_count(idx & z) & 1).astype(np.int64)
    # Column b maps to row b ^ x with the phase evaluated at b.
    data = signs * (1j**ny)
    return sparse.csr_matrix((data.astype(complex), (idx ^ x, idx)), shape=(dim, dim))


@dataclass(frozen=True)
class PauliSum:
    """Real-weighted sum of Pauli strings in canonical merged form."""

    n_qubits: int
    terms: tuple[tuple[float, PauliString], ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if int(self.n_qubits) < 1:
            raise ValueError("n_qubits must be >= 1")
        merged: dict[PauliString, float] = {}
        for c, p in self.terms:
            if not isinstance(p, PauliString):
                p = PauliString(tuple(p))
            if isinstance(c, complex) or np.iscomplexobj(c):
                if np.imag(c) != 0:
                    raise CoefficientError(f"coefficient {c!r} is not real")
                c = np.real(c)
            c = float(c)
            if not math.isfinite(c):
                raise CoefficientError(f"coefficient {c!r} is not finite")
            for q in p.qubits:
                if q >= self.n_qubits:
                    raise QubitRangeError(f"qubit {q} >= n_qubits={self.n_qubits}")
            merged[p] = merged.get(p, 0.0) + c
        terms = tuple(
            (c, p) for p, c in sorted(merged.items(), key=lambda kv: kv[0].sort_key())
        )
        object.__setattr__(self, "n_qubits", int(self.n_qubits))
        object.__setattr__(self, "terms", terms)

    # -- construction ---------------------------------------------------
    @classmethod
    def from_terms(cls, n_qubits: int, terms: Iterable[tuple[float, str | PauliString]]):
        out = []
        for c, p in terms:
            out.append((c, PauliString.from_label(p) if isinstance(p, str) else p))
        return cls(n_qubits, tuple(out))

    @classmethod
    def identity(cls, n_qubits: int, coeff: float = 1.0) -> "PauliSum":
        return cls(n_qubits, ((coeff, PauliString()),))

    # -- algebra needed by the solver ----------------------------------
    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.n_qubits != self.n_qubits:
            raise DimensionError("cannot add operators on different registers")
        merged = PauliSum(self.n_qubits, self.terms + other.terms)
        # Drop strings that cancelled exactly; parsed zeros are kept as given.
        return PauliSum(self.n_qubits, tuple(t for t in merged.terms if t[0] != 0.0))

    def __mul__(self, scalar: float) -> "PauliSum":
        return PauliSum(self.n_qubits, tuple((scalar * c, p) for c, p in self.terms))

    __rmul__ = __mul__

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_qubits, self.terms))

    @property
    def identity_coeff(self) -> float:
        for c, p in self.terms:
            if p.is_identity:
                return c
        return 0.0

    def without_identity(self) -> "PauliSum":
        return PauliSum(self.n_qubits, tuple(t for t in self.terms if not t[1].is_identity))

    def tensor_ancilla(self, axis: str) -> "PauliSum":
        """``axis_0 (x) self`` on an ``n_qubits + 1`` register with the ancilla at qubit 0."""
        terms = []
        for c, p in self.terms:
            shifted = p.shifted(1)
            terms.append((c, PauliString(((0, axis),) + shifted.factors)))
        return PauliSum(self.n_qubits + 1, tuple(terms))

    # -- numerics ------------------------------------------------------
    @property
    def _sparse(self) -> sparse.csr_matrix:
        # Frozen dataclass: memoize in the excluded-from-eq cache dict.
        if "sparse" not in self._cache:
            dim = 1 << self.n_qubits
            mat = sparse.csr_matrix((dim, dim), dtype=complex)
            for c, p in self.terms:
                mat = mat + c * _string_matrix(p, self.n_qubits)
            self._cache["sparse"] = mat.tocsr()
        return self._cache["sparse"]

    def sparse_matrix(self) -> sparse.csr_matrix:
        return self._sparse

    def to_dense(self, limit: int = DENSE_LIMIT) -> np.ndarray:
        return to_dense(self, limit)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "terms": [
                {"coeff": c, "paulis": [[q, a] for q, a in p.factors]} for c, p in self.terms
            ],
        }

    def to_json(self, **kwargs) -> str:
        # json emits repr(float), the shortest string that round-trips exactly.
        return json.dumps(self.to_dict(), **kwargs)

    def __repr__(self):
        body = " + ".join(f"{c:.6g}*{p.label()}" for c, p in self.terms) or "0"
        return f"PauliSum(n_qubits={self.n_qubits}, {body})"


def parse_pauli_sum(document: str | dict) -> PauliSum:
    """Parse the operator JSON document into a canonical :class:`PauliSum`.

    Raises a distinct :class:`PauliParseError` subclass for bad axis labels,
    duplicated qubits, non-real coefficients and out-of-range qubits.
    """
    doc = json.loads(document) if isinstance(document, (str, bytes)) else document
    try:
        n = int(doc["n_qubits"])
        raw_terms = doc["terms"]
    except (KeyError, TypeError) as exc:
        raise PauliParseError(f"missing field: {exc}") from exc
    terms = []
    for entry in raw_terms:
        c = entry["coeff"]
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise CoefficientError(f"coefficient {c!r} is not a real number")
        factors = []
        for pair in entry["paulis"]:
            q, a = pair
            if a not in AXES:
                raise AxisLabelError(f"axis {a!r} is not one of X, Y, Z")
            if not isinstance(q, int) or isinstance(q, bool):
                raise QubitRangeError(f"qubit index {q!r} is not an integer")
            if q < 0 or q >= n:
                raise QubitRangeError(f"qubit {q} outside [0, {n})")
            factors.append((q, a))
        terms.append((float(c), PauliString(tuple(factors))))
    return PauliSum(n, tuple(terms))


def load_pauli_sum(path) -> PauliSum:
    with open(path, encoding="utf-8") as fh:
        return parse_pauli_sum(fh.read())


def _amplitudes(psi) -> np.ndarray:
    return np.asarray(getattr(psi, "amplitudes", psi))


def apply(op: PauliSum, psi) -> np.ndarray:
    """Return the (unnormalized) amplitudes of ``op |psi>``."""
    amps = _amplitudes(psi)
    if amps.shape[0] != 1 << op.n_qubits:
        raise DimensionError(
            f"operator on {op.n_qubits} qubits applied to a state of length {amps.shape[0]}"
        )
    return op._sparse @ amps


def expectation(op: PauliSum, bra, ket) -> complex:
    """``<bra| op |ket>``."""
    b = _amplitudes(bra)
    if b.shape != _amplitudes(ket).shape:
        raise DimensionError("bra and ket have different dimensions")
    return complex(np.vdot(b, apply(op, ket)))


def to_dense(op: PauliSum, limit: int = DENSE_LIMIT) -> np.ndarray:
    if op.n_qubits > limit:
        raise DenseLimitError(f"{op.n_qubits} qubits exceeds the dense limit of {limit}")
    mat = op._sparse.toarray()
    if not np.allclose(mat, mat.conj().T, atol=1e-12, rtol=0):
        raise AssertionError("dense operator is not Hermitian")
    return mat


TROTTER_GROUP_LABELS = ("XX", "XZ", "ZZ", "ZX")


@dataclass(frozen=True)
class TrotterGroups:
    """Four-way split of a real two-local X/Z operator.

    ``groups`` follows :data:`TROTTER_GROUP_LABELS`; ``constant`` holds the
    identity coefficient, which only contributes a global phase.
    """

    groups: tuple[PauliSum, PauliSum, PauliSum, PauliSum]
    constant: float = 0.0

    def __getitem__(self, label: str) -> PauliSum:
        return self.groups[TROTTER_GROUP_LABELS.index(label)]

    def merged(self) -> PauliSum:
        n = self.groups[0].n_qubits
        terms = tuple(t for g in self.groups for t in g.terms)
        if self.constant:
            terms += ((self.constant, PauliString()),)
        return PauliSum(n, terms)


def trotter_groups(op: PauliSum) -> TrotterGroups:
    """Split ``op`` into the XX, XZ, ZZ, ZX groups of the first-order product.

    Two-body terms are classified by (lower-qubit axis, higher-qubit axis);
    one-body X joins XX and one-body Z joins ZZ.
    """
    buckets: dict[str, list] = {k: [] for k in TROTTER_GROUP_LABELS}
    constant = 0.0
    for c, p in op.terms:
        if p.is_identity:
            constant += c
            continue
        axes = p.axes
        if "Y" in axes or p.order > 2:
            raise TrotterGroupingError(f"term {p.label()} is not X/Z two-local")
        key = axes * 2 if p.order == 1 else axes
        buckets[key].append((c, p))
    groups = tuple(PauliSum(op.n_qubits, tuple(buckets[k])) for k in TROTTER_GROUP_LABELS)
    return TrotterGroups(groups, constant)


def random_pauli_sum(
    n_qubits: int,
    n_terms: int,
    rng: np.random.Generator,
    max_order: int | None = None,
    axes: Sequence[str] = AXES,
    scale: float = 1.0,
) -> PauliSum:
    """Random Hermitian operator, handy for tests and demos."""
    max_order = n_qubits if max_order is None else min(max_order, n_qubits)
    terms = []
    for _ in range(n_terms):
        order = int(rng.integers(1, max_order + 1))
        qubits = rng.choice(n_qubits, size=order, replace=False)
        factors = tuple((int(q), str(rng.choice(list(axes)))) for q in qubits)
        terms.append((scale * float(rng.normal()), PauliString(factors)))
    return PauliSum(n_qubits, tuple(terms))

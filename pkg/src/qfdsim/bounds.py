"""Spectral range estimation from Gershgorin disks."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass

import numpy as np

from .pauli import DENSE_LIMIT, DenseLimitError, PauliSum

log = logging.getLogger(__name__)

DEFAULT_OVERAGE_FRACTION = 0.10


@dataclass(frozen=True)
class SpectralBounds:
    e_minus: float
    e_plus: float
    overage: float
    kappa: float
    contained: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if d["contained"] is None:
            del d["contained"]
        return d


def _bits_to_index(bits) -> tuple[int, int]:
    if isinstance(bits, str):
        return int(bits, 2) if bits else 0, len(bits)
    bits = [int(b) for b in bits]
    return int("".join(map(str, bits)) or "0", 2), len(bits)


def gershgorin_row(h: PauliSum, bits) -> tuple[float, float]:
    """Center and radius of the disk for basis row ``bits``.

    Each Pauli term sends ``|b>`` to a single basis state, so the row is
    accumulated term by term without forming it densely.
    """
    b, n = _bits_to_index(bits)
    if n != h.n_qubits:
        raise ValueError(f"bitstring of length {n} for a {h.n_qubits}-qubit operator")
    center = 0.0
    off: dict[int, complex] = {}
    for c, p in h.terms:
        image, phase = p.act_on_index(b, h.n_qubits)
        if image == b:
            center += (c * phase).real
        else:
            off[image] = off.get(image, 0.0) + c * phase
    radius = float(sum(abs(v) for v in off.values()))
    return float(center), radius


def heuristic_bounds(h: PauliSum, overage: float | None = None) -> SpectralBounds:
    """Bounds from the all-zeros and all-ones rows.

    ``overage`` defaults to 10% of the raw two-row width and is split evenly
    between the two ends.
    """
    n = h.n_qubits
    disks = [gershgorin_row(h, "0" * n), gershgorin_row(h, "1" * n)]
    lo = min(c - r for c, r in disks)
    hi = max(c + r for c, r in disks)
    if overage is None:
        overage = DEFAULT_OVERAGE_FRACTION * (hi - lo)
    if overage < 0:
        raise ValueError("overage must be non-negative")
    e_minus = lo - overage / 2
    e_plus = hi + overage / 2
    kappa = e_plus - e_minus
    if kappa <= 0:
        # Degenerate spectrum (e.g. pure identity); any positive period works.
        log.warning("zero-width Gershgorin interval; using kappa = 1")
        e_minus, e_plus, kappa = e_minus - 0.5, e_plus + 0.5, kappa + 1.0
    return SpectralBounds(float(e_minus), float(e_plus), float(overage), float(kappa))


def full_gershgorin(h: PauliSum, limit: int = DENSE_LIMIT) -> list[tuple[float, float]]:
    """All ``2**N`` disks, row by row (diagnostic only)."""
    if h.n_qubits > limit:
        raise DenseLimitError(f"{h.n_qubits} qubits exceeds the dense limit of {limit}")
    mat = abs(h.sparse_matrix()).tocsr()
    diag = h.sparse_matrix().diagonal().real
    row_abs = np.asarray(mat.sum(axis=1)).ravel() - np.abs(diag)
    return [(float(c), float(max(r, 0.0))) for c, r in zip(diag, row_abs)]


def check_containment(bounds: SpectralBounds, eigenvalues, tol: float = 1e-12) -> SpectralBounds:
    """Attach the containment flag computed against a dense spectrum."""
    ev = np.asarray(eigenvalues)
    flag = bool(ev.min() >= bounds.e_minus - tol and ev.max() <= bounds.e_plus + tol)
    if not flag:
        log.warning(
            "heuristic interval [%g, %g] misses the spectrum [%g, %g]; extremal states may alias",
            bounds.e_minus, bounds.e_plus, ev.min(), ev.max(),
        )
    return SpectralBounds(bounds.e_minus, bounds.e_plus, bounds.overage, bounds.kappa, flag)


def disks_cover(disks, eigenvalues, tol: float = 1e-9) -> bool:
    """True when every eigenvalue lies in some disk."""
    centers = np.array([c for c, _ in disks])
    radii = np.array([r for _, r in disks])
    for ev in np.asarray(eigenvalues).real:
        if not np.any(np.abs(ev - centers) <= radii + tol):
            return False
    return True

"""Synthetic exciton-model Hamiltonians.

A linear stack of two-level chromophores mapped to qubits: ``|0>`` is the
site ground state and ``|1>`` its excited state.  Every term class of a real
two-local exciton Hamiltonian is present (one-body Z and X, nearest-neighbor
ZZ, ZX, XZ and XX); all inter-site pieces scale with ``coupling_j`` so the
``coupling_j = 0`` limit reduces to independent sites.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .pauli import PauliString, PauliSum


@dataclass(frozen=True)
class ModelSpec:
    n_sites: int = 8
    site_energy: float = 2.0
    site_energy_spread: float = 0.05
    coupling_j: float = 0.25
    coupling_law: str = "nearest-neighbor"
    dipole: float = 1.0
    seed: int = 0
    # Ratios of the secondary couplings to coupling_j.
    x_field_ratio: float = 0.3
    zz_ratio: float = 0.3
    zx_ratio: float = 0.4
    coupling_jitter: float = 0.2

    def to_dict(self) -> dict:
        return asdict(self)


def generate_model(spec: ModelSpec) -> tuple[PauliSum, list[PauliSum]]:
    """Hamiltonian and three Cartesian transition-dipole operators for ``spec``.

    Deterministic for a given ``spec.seed``.
    """
    n = int(spec.n_sites)
    if n < 2:
        raise ValueError("n_sites must be >= 2")
    if spec.coupling_law != "nearest-neighbor":
        raise ValueError(f"unsupported coupling law {spec.coupling_law!r}")
    if spec.site_energy <= 0:
        raise ValueError("site_energy must be positive")
    rng = np.random.default_rng(spec.seed)
    eps = spec.site_energy + spec.site_energy_spread * rng.standard_normal(n)
    j = spec.coupling_j

    def jitter(size):
        return 1.0 + spec.coupling_jitter * rng.uniform(-1.0, 1.0, size)

    terms = [(float(eps.sum() / 2.0), PauliString())]
    x_field = spec.x_field_ratio * j * jitter(n)
    for a in range(n):
        # eps/2 (I - Z) puts the site excitation energy on |1>.
        terms.append((-eps[a] / 2.0, PauliString(((a, "Z"),))))
        terms.append((float(x_field[a]), PauliString(((a, "X"),))))
    xx = j * jitter(n - 1)
    zz = spec.zz_ratio * j * jitter(n - 1)
    zx = spec.zx_ratio * j * jitter(n - 1)
    xz = spec.zx_ratio * j * jitter(n - 1)
    for a in range(n - 1):
        b = a + 1
        terms.append((float(xx[a]), PauliString(((a, "X"), (b, "X")))))
        terms.append((float(zz[a]), PauliString(((a, "Z"), (b, "Z")))))
        terms.append((float(zx[a]), PauliString(((a, "Z"), (b, "X")))))
        terms.append((float(xz[a]), PauliString(((a, "X"), (b, "Z")))))
    h = PauliSum(n, tuple(t for t in terms if t[0] != 0.0))

    # Transition dipoles near the stack axis with a small random tilt.
    tilt = 0.15 * rng.standard_normal((n, 2))
    dirs = np.column_stack([tilt, np.ones(n)])
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    mus = []
    for axis in range(3):
        mus.append(
            PauliSum(
                n,
                tuple(
                    (float(spec.dipole * dirs[a, axis]), PauliString(((a, "X"),)))
                    for a in range(n)
                ),
            )
        )
    return h, mus


def random_model(rng: np.random.Generator, n_sites: int | None = None, max_sites: int = 8):
    """Random spec in the separated-band regime (site energy well above couplings)."""
    n = int(rng.integers(2, max_sites + 1)) if n_sites is None else n_sites
    spec = ModelSpec(
        n_sites=n,
        site_energy=float(rng.uniform(1.5, 2.5)),
        site_energy_spread=float(rng.uniform(0.0, 0.1)),
        coupling_j=float(rng.uniform(0.02, 0.2)),
        seed=int(rng.integers(2**31)),
    )
    return spec, generate_model(spec)

"""Subspace matrices over the propagated basis and the generalized Ritz solve.

Three evaluation paths produce the same matrices:

``direct``
    contract basis statevectors immediately;
``swaptest``
    build the one-ancilla swap-test state for every circuit and read the
    ancilla X and Y Pauli expectation values exactly;
``sampled``
    the same circuits, with each Pauli expectation estimated from shots.

Off-diagonal guess blocks use four interfering reference states.  With
``f(s) = <Omega_s| U_k^dag O U_k' |Omega_s>`` for ``Omega_s = (a + s b)/sqrt(2)``::

    <a|M|b> = [(f(+1) - f(-1)) - i (f(+i) - f(-i))] / 2
    <b|M|a> = [(f(+1) - f(-1)) + i (f(+i) - f(-i))] / 2

so one set of four circuits fills both the ``(a, b)`` and ``(b, a)`` blocks.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .guess import GuessSet, fix_phase, interfering
from .pauli import PauliString, PauliSum
from .propagators import Basis, PropagatorSpec, basis_states, product_formula, propagate_time
from .statevector import (
    ShotPlan,
    State,
    ancilla_readout,
    group_qubitwise,
    sample_setting,
    setting_label,
    substream,
    swap_test_state,
)

log = logging.getLogger(__name__)

PATHS = ("direct", "swaptest", "sampled")
# Relative metric cutoff.  Checking C^H S C = I in double precision carries an
# error of about eps / cutoff, so 1e-6 keeps that check near 1e-10.
DEFAULT_CUTOFF = 1e-6
HERMITIAN_TOL = 1e-9


class EmptySubspaceError(ValueError):
    """Every metric eigenvalue fell below the cutoff."""


@dataclass(frozen=True, eq=False)
class SubspaceProblem:
    """Subspace Hamiltonian and metric over ``(xi, k)`` labels.

    ``h_mat`` excludes the identity part of the Hamiltonian; its coefficient
    is carried in ``offset`` and re-added to Ritz energies.
    """

    h_mat: np.ndarray
    s_mat: np.ndarray
    labels: tuple[tuple[int, int], ...]
    offset: float = 0.0
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.h_mat.shape[0]

    @property
    def h_full(self) -> np.ndarray:
        """Subspace matrix of the full Hamiltonian, identity part included."""
        return self.h_mat + self.offset * self.s_mat

    def index(self, xi: int, k: int) -> int:
        return self.labels.index((xi, k))


@dataclass(frozen=True, eq=False)
class RitzSolution:
    energies: np.ndarray
    coeffs: np.ndarray
    kept: int
    s_spectrum: np.ndarray
    labels: tuple[tuple[int, int], ...] = ()
    offset: float = 0.0

    @property
    def n_states(self) -> int:
        return self.energies.shape[0]

    def reconstruct(self, basis: Basis, theta: int | None = None) -> np.ndarray:
        """Explicit Ritz vectors (columns), or one of them, from the basis states."""
        vecs = basis.matrix().T @ self.coeffs
        return vecs if theta is None else vecs[:, theta]


def hermitize(a: np.ndarray) -> tuple[np.ndarray, float]:
    """``(A + A^H)/2`` and the max elementwise asymmetry ``|A - A^H|``."""
    asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    return (a + a.conj().T) / 2, asym


# -- matrix-element evaluation --------------------------------------------


def _direct(basis: Basis, ops: Sequence[PauliSum]) -> list[np.ndarray]:
    g = basis.matrix()
    gt = g.T
    return [g.conj() @ (op.sparse_matrix() @ gt) for op in ops]


class _Sampler:
    """Shot-sampled ``<A|O|B>`` readouts for a batch of operators on one circuit."""

    def __init__(self, ops: Sequence[PauliSum], plan: ShotPlan, tags: Sequence[str]):
        self.plan = plan
        self.ops = ops
        self.tags = tags
        self.n_settings = 0

    def _estimate(
        self, aleph: State, circuit_id: str, strings: list[PauliString], tag: str, weights: np.ndarray
    ):
        """Means of ``strings`` (on the ancilla register), grouped qubit-wise.

        ``strings[0]`` is the ancilla-only string behind the metric.  It is
        compatible with every setting, so it joins the group carrying the most
        Hamiltonian weight; its noise then tracks that of the dominant terms.
        """
        means = np.zeros(len(strings))
        groups = group_qubitwise(strings[1:])
        groups = [(setting, [i + 1 for i in members]) for setting, members in groups]
        if groups:
            heaviest = max(range(len(groups)), key=lambda g: sum(weights[i] for i in groups[g][1]))
            groups[heaviest][1].insert(0, 0)
        else:
            groups = [(dict(strings[0].factors), [0])]
        for setting, members in groups:
            rng = substream(self.plan.seed, circuit_id, tag + setting_label(setting))
            res = sample_setting(
                aleph, setting, [strings[i] for i in members], self.plan.shots_per_pauli, rng
            )
            for i, (m, _) in zip(members, res):
                means[i] = m
            self.n_settings += 1
        return means

    def readout(self, aleph: State, circuit_id: str) -> list[complex]:
        out = [0j] * len(self.ops)
        batches = [list(range(len(self.ops)))] if self.plan.correlated else [
            [i] for i in range(len(self.ops))
        ]
        for batch in batches:
            tag = "" if self.plan.correlated else f"{self.tags[batch[0]]}:"
            # System identity first; _estimate places it in the heaviest setting.
            system = [PauliString()]
            weights = [0.0]
            for i in batch:
                for c, p in self.ops[i].terms:
                    if p not in system:
                        system.append(p)
                        weights.append(0.0)
                    weights[system.index(p)] += abs(c)
            where = {p: j for j, p in enumerate(system)}
            weights = np.asarray(weights)
            parts = {}
            for axis in ("X", "Y"):
                strings = [PauliString(((0, axis),) + p.shifted(1).factors) for p in system]
                parts[axis] = self._estimate(aleph, circuit_id, strings, tag, weights)
            for i in batch:
                val = 0j
                for c, p in self.ops[i].terms:
                    j = where[p]
                    val += c * (parts["X"][j] + 1j * parts["Y"][j])
                out[i] = val
        return out


def _swaptest(
    basis: Basis,
    ops: Sequence[PauliSum],
    plan: ShotPlan | None = None,
    tags: Sequence[str] = (),
) -> tuple[list[np.ndarray], dict]:
    guesses = basis.guesses
    n_g = len(guesses)
    ks = basis.ks
    dim = basis.dim
    mats = [np.zeros((dim, dim), dtype=complex) for _ in ops]
    sampler = _Sampler(ops, plan, tags or [f"op{i}" for i in range(len(ops))]) if plan else None
    n_circuits = 0

    def run(omega: State, images: dict[int, State], k: int, kp: int, cid: str) -> list[complex]:
        aleph = swap_test_state(omega, images[k], images[kp])
        if sampler is not None:
            return sampler.readout(aleph, cid)
        return [ancilla_readout(aleph, op) for op in ops]

    for xi in range(n_g):
        omega = guesses[xi]
        images = {k: basis.states[basis.index(xi, k)] for k in ks}
        for a, k in enumerate(ks):
            for kp in ks[a:]:
                vals = run(omega, images, k, kp, f"diag:{xi}:{k}:{kp}")
                n_circuits += 1
                i, j = basis.index(xi, k), basis.index(xi, kp)
                for m, v in zip(mats, vals):
                    m[i, j] = v
                    if i != j:
                        m[j, i] = np.conj(v)

    for xi in range(n_g):
        for xj in range(xi + 1, n_g):
            f = {}
            for sign in "+-":
                for part in ("Re", "Im"):
                    ref = interfering(guesses, xi, xj, sign, part)
                    images = {k: basis.propagate(k, ref.state) for k in ks}
                    for k in ks:
                        for kp in ks:
                            cid = f"off:{xi}:{xj}:{sign}{part}:{k}:{kp}"
                            vals = run(ref.state, images, k, kp, cid)
                            n_circuits += 1
                            f[sign, part, k, kp] = [ref.weight * v for v in vals]
            for k in ks:
                for kp in ks:
                    i, j = basis.index(xi, k), basis.index(xj, kp)
                    i2, j2 = basis.index(xj, k), basis.index(xi, kp)
                    for n, m in enumerate(mats):
                        re = f["+", "Re", k, kp][n] - f["-", "Re", k, kp][n]
                        im = f["+", "Im", k, kp][n] - f["-", "Im", k, kp][n]
                        m[i, j] = 0.5 * (re - 1j * im)
                        m[i2, j2] = 0.5 * (re + 1j * im)
    meta = {"n_circuits": n_circuits}
    if sampler is not None:
        meta["n_settings"] = sampler.n_settings
    return mats, meta


def evaluate_matrices(
    basis: Basis,
    ops: Sequence[PauliSum],
    path: str = "direct",
    plan: ShotPlan | None = None,
    tags: Sequence[str] = (),
) -> tuple[list[np.ndarray], dict]:
    """Subspace matrices ``<Gamma_i|O|Gamma_j>`` for each operator, on one path.

    All operators share the same circuits; on the sampled path with a
    correlated plan they also share the same shots.
    """
    if path not in PATHS:
        raise ValueError(f"unknown path {path!r}; expected one of {PATHS}")
    if path == "direct":
        return _direct(basis, ops), {"n_circuits": 0}
    if path == "sampled":
        if plan is None:
            raise ValueError("sampled path requires a ShotPlan")
        if plan.shots_per_pauli < 1:
            raise ValueError("shots must be positive")
        return _swaptest(basis, ops, plan, tags)
    return _swaptest(basis, ops)


def build_subspace(
    h: PauliSum,
    guesses: GuessSet,
    k_max: int,
    prop: PropagatorSpec,
    path: str = "direct",
    plan: ShotPlan | None = None,
    basis: Basis | None = None,
) -> SubspaceProblem:
    """Subspace Hamiltonian and metric over ``U_k |Phi_xi>``, ``|k| <= k_max``."""
    if basis is None:
        basis = basis_states(prop, h, guesses, k_max)
    h_body = h.without_identity()
    ops = [PauliSum.identity(h.n_qubits), h_body]
    (s_mat, h_mat), meta = evaluate_matrices(basis, ops, path, plan, tags=("S", "H"))
    meta.update(path=path, k_max=int(k_max), mode=prop.mode, steps_per_k=prop.steps_per_k)
    if path == "sampled":
        s_mat, s_asym = hermitize(s_mat)
        h_mat, h_asym = hermitize(h_mat)
        meta.update(
            shots=plan.shots_per_pauli, seed=plan.seed, correlated=plan.correlated,
            s_asymmetry=s_asym, h_asymmetry=h_asym,
        )
    else:
        for name, m in (("s", s_mat), ("h", h_mat)):
            asym = float(np.max(np.abs(m - m.conj().T)))
            meta[f"{name}_asymmetry"] = asym
            if asym > HERMITIAN_TOL:
                raise AssertionError(f"{name}_mat not Hermitian (asymmetry {asym:.3g})")
        s_mat, _ = hermitize(s_mat)
        h_mat, _ = hermitize(h_mat)
    return SubspaceProblem(h_mat, s_mat, tuple(basis.labels()), h.identity_coeff, meta)


def build_subspace_nonvariational(
    h: PauliSum,
    guesses: GuessSet,
    k_max: int,
    prop: PropagatorSpec,
    steps_per_unit: int | None = None,
    negative_time: str = "formula",
) -> SubspaceProblem:
    """Toeplitz-reduced matrices with propagation applied after the reduction.

    Uses ``H_{xi k, xi' k'} = <Phi_xi| H U(k' - k) |Phi_xi'>`` and the metric
    analogue, so only ``4 k_max + 1`` shifts are evaluated per guess pair.
    With Trotterized ``U`` this loses the variational bound.

    ``negative_time="formula"`` Trotterizes ``U(-t)`` with the same product
    formula at negative time; ``"adjoint"`` uses the exact adjoint of
    ``U(t)``, which keeps the metric a Gram matrix.
    """
    steps = prop.steps_per_k if steps_per_unit is None else int(steps_per_unit)
    if negative_time not in ("formula", "adjoint"):
        raise ValueError(f"negative_time must be 'formula' or 'adjoint', got {negative_time!r}")
    shift = product_formula if negative_time == "formula" else propagate_time
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    h_body = h.without_identity()
    hs = h_body.sparse_matrix()
    n_g = len(guesses)
    ks = list(range(-k_max, k_max + 1))
    shifts = range(-2 * k_max, 2 * k_max + 1)
    kets = {
        (b, d): shift(prop, h, d, guesses[b], steps).amplitudes
        for b in range(n_g)
        for d in shifts
    }
    unique = {}
    counts = {}
    for a in range(n_g):
        bra = guesses[a].amplitudes
        h_bra = hs.conj().T @ bra
        for b in range(n_g):
            counts[a, b] = 0
            for d in shifts:
                ket = kets[b, d]
                unique[a, b, d] = (np.vdot(h_bra, ket), np.vdot(bra, ket))
                counts[a, b] += 1
    labels = [(xi, k) for xi in range(n_g) for k in ks]
    dim = len(labels)
    h_mat = np.zeros((dim, dim), dtype=complex)
    s_mat = np.zeros((dim, dim), dtype=complex)
    for i, (a, k) in enumerate(labels):
        for j, (b, kp) in enumerate(labels):
            h_mat[i, j], s_mat[i, j] = unique[a, b, kp - k]
    h_mat, h_asym = hermitize(h_mat)
    s_mat, s_asym = hermitize(s_mat)
    meta = {
        "path": "nonvariational",
        "k_max": int(k_max),
        "mode": prop.mode,
        "steps_per_unit": steps,
        "negative_time": negative_time,
        "unique_elements_per_pair": sorted(set(counts.values())),
        "unique_elements": int(sum(counts.values())),
        "h_asymmetry": h_asym,
        "s_asymmetry": s_asym,
    }
    return SubspaceProblem(h_mat, s_mat, tuple(labels), h.identity_coeff, meta)


# -- generalized eigensolve -------------------------------------------------


def _canonical(s_mat: np.ndarray, cutoff: float, max_kept: int | None):
    s_mat, _ = hermitize(np.asarray(s_mat, dtype=complex))
    sigma, u = np.linalg.eigh(s_mat)
    order = np.argsort(-sigma, kind="stable")
    sigma, u = sigma[order], u[:, order]
    top = sigma[0] if sigma.size else 0.0
    if top <= 0:
        raise EmptySubspaceError("metric has no positive eigenvalues")
    keep = sigma > cutoff * top
    if max_kept is not None:
        keep &= np.arange(sigma.size) < max_kept
    if not keep.any():
        raise EmptySubspaceError("all metric eigenvalues fall below the cutoff")
    x = u[:, keep] / np.sqrt(sigma[keep])
    return x, sigma


def canonical_orthogonalize(
    s_mat: np.ndarray, cutoff: float = DEFAULT_CUTOFF, max_kept: int | None = None
) -> np.ndarray:
    """``X = U_kept sigma_kept^{-1/2}`` so that ``X^H S X = I``.

    Keeps metric eigenvalues above ``cutoff * max(sigma)``; ``max_kept``
    additionally caps the dimension (largest eigenvalues first).
    """
    return _canonical(s_mat, cutoff, max_kept)[0]


def solve(
    problem: SubspaceProblem, cutoff: float = DEFAULT_CUTOFF, max_kept: int | None = None
) -> RitzSolution:
    """Ritz energies (ascending, offset re-added) and ``S``-orthonormal coefficients."""
    x, sigma = _canonical(problem.s_mat, cutoff, max_kept)
    hk, _ = hermitize(x.conj().T @ problem.h_mat @ x)
    evals, vecs = np.linalg.eigh(hk)
    coeffs = x @ vecs
    for t in range(coeffs.shape[1]):
        coeffs[:, t] = fix_phase(coeffs[:, t])
    return RitzSolution(
        evals + problem.offset, coeffs, x.shape[1], sigma, problem.labels, problem.offset
    )


def qfd(
    h: PauliSum,
    guesses: GuessSet,
    k_max: int,
    prop: PropagatorSpec,
    path: str = "direct",
    plan: ShotPlan | None = None,
    cutoff: float = DEFAULT_CUTOFF,
    max_kept: int | None = None,
) -> tuple[RitzSolution, SubspaceProblem, Basis]:
    """Build, solve and return ``(solution, problem, basis)``."""
    basis = basis_states(prop, h, guesses, k_max)
    problem = build_subspace(h, guesses, k_max, prop, path, plan, basis=basis)
    return solve(problem, cutoff, max_kept), problem, basis

"""End-to-end QFD driver: configuration, the six-step run, method comparison, artifacts.

The six steps, in order:

1. ``hamiltonian``   load or generate the operator and dipoles
2. ``bounds``        two-row Gershgorin estimate of the spectral range and kappa
3. ``guesses``       classical guess states (CIS by default)
4. ``matrices``      subspace Hamiltonian and metric over the propagated basis
5. ``diagonalize``   canonical orthogonalization and the Ritz solve
6. ``properties``    transition dipoles, oscillator strengths and spectrum
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .bounds import SpectralBounds, check_containment, heuristic_bounds
from .guess import GuessSet, cis_guesses, configuration_guesses, load_guesses
from .models import ModelSpec, generate_model
from .observables import (
    SpectrumLine,
    dense_oscillator_strengths,
    lorentzian_spectrum,
    oscillator_strengths,
)
from .pauli import DENSE_LIMIT, PauliSum, load_pauli_sum, parse_pauli_sum, to_dense
from .propagators import PropagatorSpec, basis_states
from .qfd import (
    DEFAULT_CUTOFF,
    RitzSolution,
    SubspaceProblem,
    build_subspace,
    build_subspace_nonvariational,
    solve,
)
from .statevector import ShotPlan

STEPS = ("hamiltonian", "bounds", "guesses", "matrices", "diagonalize", "properties")


class PipelineError(RuntimeError):
    """A failure attributed to one step of the procedure."""

    def __init__(self, step: str, message: str, cause: BaseException | None = None):
        super().__init__(f"step {STEPS.index(step) + 1} ({step}): {message}")
        self.step = step
        self.message = message
        self.cause = cause

    def to_dict(self) -> dict:
        return {
            "error": self.message,
            "step": STEPS.index(self.step) + 1,
            "step_name": self.step,
            "type": type(self.cause).__name__ if self.cause else type(self).__name__,
        }


class _step:
    """Context manager that re-raises any exception as a :class:`PipelineError`."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None or isinstance(exc, PipelineError):
            return False
        raise PipelineError(self.name, str(exc) or exc_type.__name__, exc) from exc


@dataclass
class RunConfig:
    """Everything a run depends on; serializable to and from JSON.

    The operator comes from ``hamiltonian`` (operator JSON path) when set,
    else from ``model``.  ``dipoles`` optionally lists operator JSON paths,
    one per Cartesian axis.
    """

    model: ModelSpec = field(default_factory=ModelSpec)
    hamiltonian: str | None = None
    dipoles: list[str] | None = None
    n_guesses: int = 9
    guess_mode: str = "cis"
    guess_file: str | None = None
    allow_nonorthonormal: bool = False
    k_max: int = 2
    prop: str = "exact"
    steps_per_k: int = 1
    path: str = "direct"
    shots: int | None = None
    seed: int = 0
    correlated: bool = True
    cutoff: float = DEFAULT_CUTOFF
    nonvariational: bool = False
    overage: float | None = None
    broadening: float = 0.15
    grid: tuple[float, float, int] | None = None
    oracle: bool = True

    def __post_init__(self):
        if isinstance(self.model, dict):
            self.model = ModelSpec(**self.model)
        if self.grid is not None:
            lo, hi, n = self.grid
            self.grid = (float(lo), float(hi), int(n))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = list(self.grid) if self.grid is not None else None
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ValueError(f"unknown config keys {unknown}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def plan(self) -> ShotPlan | None:
        if self.path != "sampled":
            return None
        if self.shots is None:
            raise ValueError("the sampled path needs a shot count")
        return ShotPlan(int(self.shots), int(self.seed), bool(self.correlated))


@dataclass
class RunReport:
    """Results of one run.  ``timing`` is excluded from the deterministic JSON."""

    config: dict
    bounds: dict
    energies: dict[str, list[float]]
    excitation_errors: dict[str, list[float]] = field(default_factory=dict)
    strength_errors: dict[str, list[float]] = field(default_factory=dict)
    lines: dict[str, list[dict]] = field(default_factory=dict)
    solve: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    problem: SubspaceProblem | None = field(default=None, repr=False)
    solution: RitzSolution | None = field(default=None, repr=False)

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "config": self.config,
            "bounds": self.bounds,
            "energies": self.energies,
            "excitation_errors": self.excitation_errors,
            "strength_errors": self.strength_errors,
            "lines": self.lines,
            "solve": self.solve,
            "flags": self.flags,
        }
        if timing:
            d["timing"] = self.timing
        return _plain(d)

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)

    def max_error(self, method: str) -> float:
        return float(np.max(self.excitation_errors[method]))


def _plain(obj):
    """Recursively convert numpy scalars/arrays to JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


# -- steps --------------------------------------------------------------------


def load_operators(config: RunConfig) -> tuple[PauliSum, list[PauliSum]]:
    if config.hamiltonian is not None:
        h = load_pauli_sum(config.hamiltonian)
        mus = [load_pauli_sum(p) for p in (config.dipoles or [])]
    else:
        h, mus = generate_model(config.model)
        if config.dipoles is not None:
            mus = [load_pauli_sum(p) for p in config.dipoles]
    for mu in mus:
        if mu.n_qubits != h.n_qubits:
            raise ValueError("dipole operator and Hamiltonian act on different registers")
    return h, mus


def make_guesses(h: PauliSum, config: RunConfig) -> GuessSet:
    n = min(int(config.n_guesses), h.n_qubits + 1)
    if config.guess_file is not None:
        text = Path(config.guess_file).read_text(encoding="utf-8")
        return load_guesses(text, allow_nonorthonormal=config.allow_nonorthonormal)
    if config.guess_mode == "cis":
        return cis_guesses(h, n)
    if config.guess_mode == "configurations":
        return configuration_guesses(h, n)
    raise ValueError(f"unknown guess mode {config.guess_mode!r}")


def _dense_oracle(h: PauliSum, config: RunConfig):
    if not config.oracle or h.n_qubits > DENSE_LIMIT:
        return None
    return np.linalg.eigh(to_dense(h))


def _errors(energies: np.ndarray, reference: np.ndarray, n: int) -> list[float]:
    """Absolute excitation-energy errors for transitions ``1 .. n-1``."""
    m = min(n, len(energies), len(reference))
    de = energies[1:m] - energies[0]
    dr = reference[1:m] - reference[0]
    return np.abs(de - dr).tolist()


def _strength_errors(lines, reference, n: int) -> list[float]:
    m = min(n, len(lines), len(reference))
    return [abs(lines[t].strength - reference[t].strength) for t in range(1, m)]


def _line_dicts(lines: Sequence[SpectrumLine]) -> list[dict]:
    return [{"delta_e": ln.delta_e, "strength": ln.strength} for ln in lines]


@dataclass
class _Context:
    h: PauliSum
    mus: list[PauliSum]
    bounds: SpectralBounds
    guesses: GuessSet
    dense: tuple[np.ndarray, np.ndarray] | None
    timing: dict


def _prepare(config: RunConfig) -> _Context:
    timing = {}
    t0 = time.perf_counter()
    with _step("hamiltonian"):
        h, mus = load_operators(config)
    timing["hamiltonian"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    with _step("bounds"):
        bounds = heuristic_bounds(h, config.overage)
        dense = _dense_oracle(h, config)
        if dense is not None:
            bounds = check_containment(bounds, dense[0])
    timing["bounds"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    with _step("guesses"):
        guesses = make_guesses(h, config)
    timing["guesses"] = time.perf_counter() - t0
    return _Context(h, mus, bounds, guesses, dense, timing)


def _qfd_run(ctx: _Context, config: RunConfig, k_max: int, nonvariational: bool):
    """Steps 4 to 6 for one ``k_max``; returns ``(solution, problem, lines)``."""
    t0 = time.perf_counter()
    with _step("matrices"):
        prop = PropagatorSpec.build(ctx.h, ctx.bounds.kappa, config.prop, config.steps_per_k)
        if nonvariational:
            problem = build_subspace_nonvariational(ctx.h, ctx.guesses, k_max, prop)
            basis = None
        else:
            basis = basis_states(prop, ctx.h, ctx.guesses, k_max)
            problem = build_subspace(
                ctx.h, ctx.guesses, k_max, prop, config.path, config.plan(), basis=basis
            )
    ctx.timing[f"matrices[{k_max}]"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    with _step("diagonalize"):
        sol = solve(problem, config.cutoff)
    ctx.timing[f"diagonalize[{k_max}]"] = time.perf_counter() - t0
    lines = None
    t0 = time.perf_counter()
    with _step("properties"):
        if ctx.mus and basis is not None:
            lines = oscillator_strengths(sol, ctx.mus, basis, config.path, config.plan())
    ctx.timing[f"properties[{k_max}]"] = time.perf_counter() - t0
    return sol, problem, lines


def _cis_run(ctx: _Context, config: RunConfig):
    """The guesses alone (a ``k_max = 0`` direct solve), as the CIS reference."""
    # No propagation happens at k = 0, so the cheap Trotter spec suffices.
    return _qfd_run(ctx, replace(config, prop="trotter", path="direct"), 0, False)


def _reference(ctx: _Context, n: int):
    if ctx.dense is None:
        return None, None
    evals, evecs = ctx.dense
    lines = dense_oscillator_strengths(evals, evecs, ctx.mus, n) if ctx.mus else None
    return evals, lines


def _report(config, ctx, methods: dict, n: int) -> RunReport:
    """Assemble energies, error tables and lines for ``{name: (solution, lines)}``."""
    ref_e, ref_lines = _reference(ctx, n)
    energies, ex_err, st_err, line_tab = {}, {}, {}, {}
    for name, (sol, lines) in methods.items():
        energies[name] = sol.energies[:n].tolist()
        if lines is not None:
            line_tab[name] = _line_dicts(lines[:n])
        if ref_e is not None:
            ex_err[name] = _errors(sol.energies, ref_e, n)
            if lines is not None and ref_lines is not None:
                st_err[name] = _strength_errors(lines, ref_lines, n)
    if ref_e is not None:
        energies["FCI"] = ref_e[:n].tolist()
        if ref_lines is not None:
            line_tab["FCI"] = _line_dicts(ref_lines)
    return RunReport(
        config=config.to_dict(),
        bounds=ctx.bounds.to_dict(),
        energies=energies,
        excitation_errors=ex_err,
        strength_errors=st_err,
        lines=line_tab,
        timing=ctx.timing,
    )


def run_pipeline(config: RunConfig) -> RunReport:
    """Execute all six steps for ``config.k_max`` and report against CIS and FCI.

    With ``nonvariational`` set, the variational build of the same
    configuration is also solved and the error ratio is flagged.
    """
    ctx = _prepare(config)
    n = len(ctx.guesses)
    cis_sol, _, cis_lines = _cis_run(ctx, config)
    sol, problem, lines = _qfd_run(ctx, config, config.k_max, config.nonvariational)
    name = f"QFD-{config.k_max}" + ("-nonvariational" if config.nonvariational else "")
    methods = {"CIS": (cis_sol, cis_lines), name: (sol, lines)}
    var_sol = None
    if config.nonvariational:
        var_sol, _, var_lines = _qfd_run(ctx, config, config.k_max, False)
        methods[f"QFD-{config.k_max}"] = (var_sol, var_lines)
    report = _report(config, ctx, methods, n)
    report.problem, report.solution = problem, sol
    report.solve = {
        "method": name,
        "energies": sol.energies.tolist(),
        "kept": sol.kept,
        "s_spectrum": sol.s_spectrum.tolist(),
        "metadata": problem.metadata,
    }
    report.flags["containment"] = ctx.bounds.contained
    if config.nonvariational and report.excitation_errors:
        nv = max(report.excitation_errors[name])
        var = max(report.excitation_errors[f"QFD-{config.k_max}"])
        ratio = nv / var if var > 0 else float("inf")
        report.flags["nonvariational_error_ratio"] = ratio
        report.flags["nonvariational_exceeds_10x"] = bool(ratio >= 10.0)
    return report


def compare_methods(config: RunConfig) -> RunReport:
    """CIS, QFD-0 .. QFD-k_max and the dense oracle with per-state error tables."""
    ctx = _prepare(config)
    n = len(ctx.guesses)
    cis_sol, _, cis_lines = _cis_run(ctx, config)
    methods = {"CIS": (cis_sol, cis_lines)}
    last = None
    for k in range(0, config.k_max + 1):
        sol, problem, lines = _qfd_run(ctx, config, k, False)
        methods[f"QFD-{k}"] = (sol, lines)
        last = (sol, problem)
    report = _report(config, ctx, methods, n)
    report.solution, report.problem = last
    report.flags["containment"] = ctx.bounds.contained
    if "CIS" in report.excitation_errors and "QFD-1" in report.excitation_errors:
        cis = np.asarray(report.excitation_errors["CIS"])
        q1 = np.asarray(report.excitation_errors["QFD-1"])
        report.flags["qfd1_over_cis_median"] = float(np.median(q1 / np.maximum(cis, 1e-300)))
    if ctx.dense is not None:
        ref = ctx.dense[0]
        report.flags["ritz_bound_holds"] = bool(
            all(
                np.all(sol.energies[:n] >= ref[: min(n, sol.n_states)] - 1e-9)
                for sol, _ in methods.values()
            )
        )
    return report


# -- artifacts ----------------------------------------------------------------


def write_matrices_csv(problem: SubspaceProblem, path, full: bool = True) -> None:
    """Long-format CSV (matrix, row, col, re, im) of the subspace matrices.

    ``full`` writes the Hamiltonian with its identity part included.
    """
    h = problem.h_full if full else problem.h_mat
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["matrix", "row", "col", "re", "im"])
        for name, m in (("H", h), ("S", problem.s_mat)):
            for i in range(m.shape[0]):
                for j in range(m.shape[1]):
                    w.writerow([name, i, j, repr(float(m[i, j].real)), repr(float(m[i, j].imag))])


def read_matrices_csv(path) -> tuple[np.ndarray, np.ndarray]:
    entries = {"H": {}, "S": {}}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            entries[row["matrix"]][int(row["row"]), int(row["col"])] = complex(
                float(row["re"]), float(row["im"])
            )
    out = []
    for name in ("H", "S"):
        dim = 1 + max(i for i, _ in entries[name])
        m = np.zeros((dim, dim), dtype=complex)
        for (i, j), v in entries[name].items():
            m[i, j] = v
        out.append(m)
    return out[0], out[1]


def spectrum_curve(lines: Sequence[SpectrumLine], delta: float, grid=None):
    """Lorentzian spectrum; the default grid pads the lines by ``10 delta``."""
    if grid is None:
        de = [ln.delta_e for ln in lines if ln.delta_e > 0] or [0.0, 1.0]
        grid = (max(0.0, min(de) - 10 * delta), max(de) + 10 * delta, 2001)
    return lorentzian_spectrum(lines, delta, grid)


def write_spectrum_csv(energy: np.ndarray, intensity: np.ndarray, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["energy", "intensity"])
        for e, i in zip(energy, intensity):
            w.writerow([repr(float(e)), repr(float(i))])


def operator_from_arg(text: str) -> PauliSum:
    """Operator from a path or an inline JSON document."""
    if text.lstrip().startswith("{"):
        return parse_pauli_sum(text)
    return load_pauli_sum(text)

"""Statevector simulator of quantum filter diagonalization (QFD)."""

from .bounds import SpectralBounds, check_containment, full_gershgorin, gershgorin_row, heuristic_bounds
from .guess import GuessSet, InterferingState, cis_guesses, configuration_guesses, interfering, load_guesses
from .models import ModelSpec, generate_model, random_model
from .observables import (
    SpectrumLine,
    TransitionTable,
    dense_oscillator_strengths,
    lorentzian_spectrum,
    oscillator_strengths,
    subspace_operator,
    transition_values,
)
from .pauli import (
    PauliParseError,
    PauliString,
    PauliSum,
    TrotterGroups,
    apply,
    expectation,
    parse_pauli_sum,
    to_dense,
    trotter_groups,
)
from .pipeline import PipelineError, RunConfig, RunReport, compare_methods, run_pipeline
from .propagators import Basis, PropagatorSpec, basis_states, propagate
from .qfd import (
    RitzSolution,
    SubspaceProblem,
    build_subspace,
    build_subspace_nonvariational,
    canonical_orthogonalize,
    qfd,
    solve,
)
from .statevector import (
    AncillaState,
    ShotPlan,
    State,
    ancilla_readout,
    apply_pauli_exponential,
    basis_state,
    inner,
    sample_pauli,
    swap_test_state,
)

__version__ = "0.1.0"

import numpy as np
import pytest

from qfdsim.bounds import heuristic_bounds
from qfdsim.guess import cis_guesses
from qfdsim.models import ModelSpec, generate_model
from qfdsim.observables import (
    SpectrumLine,
    dense_oscillator_strengths,
    lorentzian,
    lorentzian_spectrum,
    oscillator_strengths,
    strengths_from_moments,
    subspace_operator,
    transition_values,
)
from qfdsim.pauli import PauliSum, random_pauli_sum, to_dense
from qfdsim.propagators import PropagatorSpec
from qfdsim.qfd import qfd


@pytest.fixture(scope="module")
def small():
    h, mus = generate_model(ModelSpec(n_sites=3))
    g = cis_guesses(h, 4)
    spec = PropagatorSpec.exact(h, heuristic_bounds(h).kappa)
    sol, prob, basis = qfd(h, g, 1, spec)
    return h, mus, sol, prob, basis


def test_subspace_operator_identity_and_h(small):
    h, _, _, prob, basis = small
    np.testing.assert_allclose(subspace_operator(PauliSum.identity(3), basis), prob.s_mat, atol=1e-12)
    np.testing.assert_allclose(subspace_operator(h, basis), prob.h_full, atol=1e-12)


def test_subspace_operator_paths_agree(small, rng):
    _, _, _, _, basis = small
    o = random_pauli_sum(3, 6, rng)
    d = subspace_operator(o, basis, "direct")
    s = subspace_operator(o, basis, "swaptest")
    assert np.max(np.abs(d - s)) < 1e-10


def test_transition_values_ritz_consistency(small):
    _, _, sol, prob, _ = small
    s_tab = transition_values(sol, prob.s_mat, "S")
    np.testing.assert_allclose(s_tab.values, np.eye(sol.kept), atol=1e-8)
    h_tab = transition_values(sol, prob.h_full, "H")
    np.testing.assert_allclose(h_tab.values, np.diag(sol.energies), atol=1e-8)
    assert h_tab.is_hermitian()
    assert len(h_tab.rows()) == sol.kept**2


def test_transition_values_match_reconstruction(small):
    h, mus, sol, _, basis = small
    vecs = sol.reconstruct(basis)
    for mu in mus:
        tab = transition_values(sol, subspace_operator(mu, basis))
        ref = vecs.conj().T @ (mu.sparse_matrix() @ vecs)
        assert np.max(np.abs(tab.values - ref)) < 1e-9
        assert tab.is_hermitian()


def test_transition_values_shape_check(small):
    _, _, sol, _, _ = small
    with pytest.raises(ValueError):
        transition_values(sol, np.eye(2))


def test_oscillator_strength_examples(small):
    h, mus, sol, _, basis = small
    zero = [PauliSum(3, ((0.0, mus[0].terms[0][1]),))]
    assert all(ln.strength == 0 for ln in oscillator_strengths(sol, zero, basis))
    lines = oscillator_strengths(sol, mus, basis)
    assert lines[0].delta_e == 0 and lines[0].strength == 0
    assert all(ln.strength >= -1e-10 for ln in lines)
    with pytest.raises(ValueError):
        oscillator_strengths(sol, [])


def test_strength_formula():
    lines = strengths_from_moments([1.0, 3.0], [np.array([0.0, 0.5]), np.array([0.0, 1j])])
    assert lines[1].delta_e == 2.0
    assert lines[1].strength == pytest.approx(2 / 3 * 2.0 * 1.25)


def test_two_site_strengths_match_dense():
    h, mus = generate_model(ModelSpec(n_sites=2))
    g = cis_guesses(h, 3)
    spec = PropagatorSpec.exact(h, heuristic_bounds(h).kappa)
    sol, _, basis = qfd(h, g, 2, spec)
    evals, evecs = np.linalg.eigh(to_dense(h))
    ours = oscillator_strengths(sol, mus, basis)
    ref = dense_oscillator_strengths(evals, evecs, mus, 3)
    for a, b in zip(ours, ref):
        assert abs(a.delta_e - b.delta_e) < 1e-9
        assert abs(a.strength - b.strength) < 1e-9


def test_lorentzian_peak():
    delta = 0.15
    e, i = lorentzian_spectrum([SpectrumLine(1.0, 1.0)], delta, (0.0, 2.0, 2001))
    assert i[1000] == pytest.approx(1 / (np.pi * delta), abs=1e-12)


def test_lorentzian_integral():
    lines = [SpectrumLine(1.0, 0.4), SpectrumLine(1.5, 0.6)]
    e, i = lorentzian_spectrum(lines, 0.15, (-200.0, 200.0, 400_001))
    assert np.trapezoid(i, e) == pytest.approx(1.0, rel=0.02)


def test_lorentzian_empty_and_errors():
    e, i = lorentzian_spectrum([], 0.1, (0.0, 1.0, 5))
    assert np.all(i == 0)
    with pytest.raises(ValueError):
        lorentzian_spectrum([], 0.0, (0.0, 1.0, 5))
    with pytest.raises(ValueError):
        lorentzian_spectrum([], 0.1, (1.0, 0.0, 5))
    with pytest.raises(ValueError):
        lorentzian_spectrum([], 0.1, (0.0, 1.0, 1))


def test_lorentzian_unit_area_shape():
    assert lorentzian(np.array([0.0]), 0.0, 2.0)[0] == pytest.approx(1 / (2 * np.pi))

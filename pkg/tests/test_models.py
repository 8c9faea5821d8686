import numpy as np
import pytest

from qfdsim.bounds import check_containment, heuristic_bounds
from qfdsim.guess import cis_guesses
from qfdsim.models import ModelSpec, generate_model, random_model
from qfdsim.pauli import to_dense, trotter_groups


def test_term_classes(default_model):
    h, mus = default_model
    kinds = {(p.order, p.axes) for _, p in h.terms}
    assert kinds == {(0, ""), (1, "X"), (1, "Z"), (2, "XX"), (2, "XZ"), (2, "ZX"), (2, "ZZ")}
    for _, p in h.terms:
        if p.order == 2:
            a, b = p.qubits
            assert b == a + 1
    assert len(h) == 45
    assert h.identity_coeff == pytest.approx(8.070398870385155, abs=1e-12)
    assert len(mus) == 3 and all(len(m) == 8 for m in mus)
    trotter_groups(h)  # must be in the groupable class


def test_deterministic():
    a, _ = generate_model(ModelSpec(seed=3))
    b, _ = generate_model(ModelSpec(seed=3))
    c, _ = generate_model(ModelSpec(seed=4))
    assert a == b and a != c


def test_decoupled_limit():
    h, _ = generate_model(ModelSpec(n_sites=2, site_energy_spread=0.0, coupling_j=0.0))
    assert {p.axes for _, p in h.terms} == {"", "Z"}
    ev = np.linalg.eigvalsh(to_dense(h))
    np.testing.assert_allclose(ev, [0.0, 2.0, 2.0, 4.0], atol=1e-12)
    np.testing.assert_allclose(cis_guesses(h, 3).cis_energies, ev[:3], atol=1e-12)


def test_coupling_adds_xx():
    h, _ = generate_model(ModelSpec(n_sites=3, coupling_j=0.1))
    assert any(p.axes == "XX" for _, p in h.terms)


def test_default_contained(default_model):
    h, _ = default_model
    ev = np.linalg.eigvalsh(to_dense(h))
    assert check_containment(heuristic_bounds(h), ev).contained
    assert len(ev) == 256


def test_band_separation(default_model):
    h, _ = default_model
    ev = np.linalg.eigvalsh(to_dense(h))
    # ground plus the eight-state single-excitation band sit below a visible gap
    assert ev[9] - ev[8] > 0.4
    assert ev[1] - ev[0] > 1.0


@pytest.mark.parametrize("bad", [dict(n_sites=1), dict(coupling_law="all-to-all"), dict(site_energy=-1.0)])
def test_invalid_spec(bad):
    with pytest.raises(ValueError):
        generate_model(ModelSpec(**bad))


def test_random_model(rng):
    spec, (h, mus) = random_model(rng, max_sites=5)
    assert 2 <= spec.n_sites <= 5 and h.n_qubits == spec.n_sites

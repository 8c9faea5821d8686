import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfdsim.pauli import (
    AxisLabelError,
    CoefficientError,
    DenseLimitError,
    DimensionError,
    DuplicateQubitError,
    PauliString,
    PauliSum,
    QubitRangeError,
    TrotterGroupingError,
    apply,
    expectation,
    parse_pauli_sum,
    random_pauli_sum,
    to_dense,
    trotter_groups,
)
from qfdsim.statevector import basis_state, plus_state, random_state

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)
MATS = {"X": X, "Y": Y, "Z": Z}


def kron_oracle(p: PauliString, n: int) -> np.ndarray:
    """Dense string matrix by explicit Kronecker products, qubit 0 leftmost."""
    axes = dict(p.factors)
    out = np.array([[1.0 + 0j]])
    for q in range(n):
        out = np.kron(out, MATS[axes[q]] if q in axes else I2)
    return out


def doc(n, *terms):
    return {"n_qubits": n, "terms": [{"coeff": c, "paulis": ps} for c, ps in terms]}


# -- parsing -----------------------------------------------------------------


def test_parse_single_term():
    op = parse_pauli_sum(doc(1, (1.0, [[0, "Z"]])))
    assert op.terms == ((1.0, PauliString(((0, "Z"),))),)


def test_parse_merges_duplicates():
    op = parse_pauli_sum(doc(1, (0.5, [[0, "X"]]), (0.25, [[0, "X"]])))
    assert len(op) == 1
    assert op.terms[0][0] == 0.75


def test_parse_duplicate_qubit():
    with pytest.raises(DuplicateQubitError):
        parse_pauli_sum(doc(1, (0.1, [[0, "Z"], [0, "X"]])))


def test_parse_errors_are_distinct():
    with pytest.raises(AxisLabelError):
        parse_pauli_sum(doc(1, (0.1, [[0, "W"]])))
    with pytest.raises(CoefficientError):
        parse_pauli_sum(doc(1, ([0.1, 0.2], [[0, "X"]])))
    with pytest.raises(CoefficientError):
        parse_pauli_sum(doc(1, (float("nan"), [[0, "X"]])))
    with pytest.raises(QubitRangeError):
        parse_pauli_sum(doc(2, (0.1, [[2, "X"]])))


def test_parse_accepts_text_and_unsorted_factors():
    text = json.dumps(doc(3, (0.2, [[2, "X"], [0, "Z"]])))
    op = parse_pauli_sum(text)
    assert op.terms[0][1].factors == ((0, "Z"), (2, "X"))


def test_canonical_order():
    op = PauliSum.from_terms(3, [(1, "Z0 Z1"), (1, "X2"), (1, ""), (1, "X0"), (1, "X0 X1")])
    labels = [p.label() for _, p in op.terms]
    assert labels == ["I", "X0", "X2", "X0 X1", "Z0 Z1"]


def test_round_trip_is_bit_exact(rng):
    op = random_pauli_sum(4, 12, rng)
    back = parse_pauli_sum(op.to_json())
    assert back == op
    for (c1, _), (c2, _) in zip(op.terms, back.terms):
        assert c1 == c2


def test_round_trip_awkward_coefficient():
    c = 0.1 + 0.2  # not representable in short decimal
    op = PauliSum.from_terms(1, [(c, "X0")])
    assert parse_pauli_sum(op.to_json()).terms[0][0] == c


# -- apply / expectation -----------------------------------------------------


def test_apply_examples():
    z0 = PauliSum.from_terms(1, [(1.0, "Z0")])
    x0 = PauliSum.from_terms(1, [(1.0, "X0")])
    np.testing.assert_allclose(apply(z0, basis_state("0")), [1, 0])
    np.testing.assert_allclose(apply(x0, basis_state("0")), [0, 1])
    xz = PauliSum.from_terms(1, [(1.0, "X0"), (1.0, "Z0")])
    np.testing.assert_allclose(apply(xz, plus_state(1)), [2 / np.sqrt(2), 0], atol=1e-15)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(PauliSum.from_terms(2, [(1.0, "Z0")]), basis_state("0"))


def test_expectation_examples():
    z0 = PauliSum.from_terms(1, [(1.0, "Z0")])
    x0 = PauliSum.from_terms(1, [(1.0, "X0")])
    assert expectation(z0, basis_state("0"), basis_state("0")) == pytest.approx(1.0)
    assert expectation(x0, plus_state(1), plus_state(1)) == pytest.approx(1.0)
    op = PauliSum.from_terms(1, [(0.3, "X0"), (0.2, "Z0")])
    assert expectation(op, basis_state("0"), basis_state("1")) == pytest.approx(0.3)


def test_y_phase_convention():
    y = PauliSum.from_terms(1, [(1.0, "Y0")])
    # Y|0> = i|1>
    np.testing.assert_allclose(apply(y, basis_state("0")), [0, 1j])


def test_to_dense_examples():
    np.testing.assert_array_equal(to_dense(PauliSum.from_terms(1, [(1.0, "Z0")])), Z)
    np.testing.assert_array_equal(to_dense(PauliSum.from_terms(1, [(1.0, "X0")])), X)


def test_to_dense_limit():
    with pytest.raises(DenseLimitError):
        to_dense(PauliSum.from_terms(4, [(1.0, "Z0")]), limit=3)


def test_dense_matches_kronecker_oracle(rng):
    op = random_pauli_sum(3, 10, rng, max_order=3)
    ref = sum(c * kron_oracle(p, 3) for c, p in op.terms)
    np.testing.assert_allclose(to_dense(op), ref, atol=1e-14)


def test_dense_cross_check_on_random_pairs(rng):
    op = random_pauli_sum(3, 8, rng)
    m = to_dense(op)
    for _ in range(20):
        a, b = random_state(3, rng), random_state(3, rng)
        assert abs(expectation(op, a, b) - np.vdot(a.amplitudes, m @ b.amplitudes)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 6), n_terms=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_expectation_matches_dense(n, n_terms, seed):
    rng = np.random.default_rng(seed)
    op = random_pauli_sum(n, n_terms, rng, max_order=min(3, n))
    a, b = random_state(n, rng), random_state(n, rng)
    m = to_dense(op)
    assert abs(expectation(op, a, b) - np.vdot(a.amplitudes, m @ b.amplitudes)) < 1e-12
    assert abs(expectation(op, a, a).imag) < 1e-12


def test_single_string_action_matches_oracle(rng):
    for label in ["X0 Y2", "Y1", "Z0 X1 Y2", "Y0 Y1 Y2"]:
        p = PauliString.from_label(label)
        for b in range(8):
            j, phase = p.act_on_index(b, 3)
            col = kron_oracle(p, 3)[:, b]
            assert col[j] == pytest.approx(phase)


# -- Trotter grouping -------------------------------------------------------


def test_trotter_groups_example():
    op = PauliSum.from_terms(2, [(0.3, "X0"), (0.2, "Z1"), (0.1, "Z0 X1")])
    tg = trotter_groups(op)
    assert [p.label() for _, p in tg["XX"].terms] == ["X0"]
    assert [p.label() for _, p in tg["ZZ"].terms] == ["Z1"]
    assert [p.label() for _, p in tg["ZX"].terms] == ["Z0 X1"]
    assert tg["XZ"].terms == ()


def test_trotter_groups_identity_only():
    tg = trotter_groups(PauliSum.identity(2, 1.5))
    assert all(not g.terms for g in tg.groups)
    assert tg.constant == 1.5


def test_trotter_groups_xx_only():
    tg = trotter_groups(PauliSum.from_terms(2, [(0.7, "X0 X1")]))
    assert [len(g.terms) for g in tg.groups] == [1, 0, 0, 0]


def test_trotter_groups_partition(default_model):
    h, _ = default_model
    tg = trotter_groups(h)
    assert tg.merged() == h
    seen = [p for g in tg.groups for _, p in g.terms]
    assert len(seen) == len(set(seen))


@pytest.mark.parametrize("label", ["Y0", "X0 X1 X2", "Y0 Z1"])
def test_trotter_groups_rejects(label):
    with pytest.raises(TrotterGroupingError):
        trotter_groups(PauliSum.from_terms(3, [(1.0, label)]))


def test_sum_algebra():
    a = PauliSum.from_terms(2, [(1.0, "X0"), (2.0, "")])
    b = PauliSum.from_terms(2, [(-1.0, "X0"), (0.5, "Z1")])
    s = a + b
    assert [p.label() for _, p in s.terms] == ["I", "Z1"]
    assert s.identity_coeff == 2.0
    assert (a * 2.0).terms[1][0] == 2.0
    assert s.without_identity().identity_coeff == 0.0

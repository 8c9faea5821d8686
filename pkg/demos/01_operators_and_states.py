"""Pauli operators, statevectors and the one-ancilla swap test."""

import numpy as np

from qfdsim.pauli import PauliSum, expectation, parse_pauli_sum, to_dense
from qfdsim.statevector import ancilla_readout, basis_state, plus_state, random_state, swap_test_state

# Operators are sums of Pauli strings with real weights; qubit 0 is the leftmost bit.
h = parse_pauli_sum({
    "n_qubits": 2,
    "terms": [
        {"coeff": -1.0, "paulis": [[0, "Z"]]},
        {"coeff": -0.8, "paulis": [[1, "Z"]]},
        {"coeff": 0.2, "paulis": [[0, "X"], [1, "X"]]},
        {"coeff": 0.05, "paulis": [[0, "X"], [1, "X"]]},  # merged with the line above
    ],
})
print(h)
print(to_dense(h).real)

# Expectation values come from sparse products, never from the dense matrix.
print("<00|H|00> =", expectation(h, basis_state("00"), basis_state("00")))
print("<++|H|++> =", expectation(h, plus_state(2), plus_state(2)))

# Swap test: |aleph> = (|0>|A> + |1>|B>)/sqrt(2).  X and Y on the ancilla read out <A|O|B>.
rng = np.random.default_rng(0)
omega, a, b = (random_state(2, rng) for _ in range(3))
aleph = swap_test_state(omega, a, b)
print("ancilla readout:", ancilla_readout(aleph, h))
print("direct        :", expectation(h, a, b))

"""CIS guess states and the interfering references for off-diagonal blocks."""

import numpy as np

from qfdsim.guess import cis_guesses, interfering
from qfdsim.models import ModelSpec, generate_model
from qfdsim.pauli import expectation, to_dense

h, mus = generate_model(ModelSpec())
guesses = cis_guesses(h, 9)
fci = np.linalg.eigvalsh(to_dense(h))[:9]

# CIS diagonalizes H over |0...0> and the 8 single flips; each energy bounds FCI from above.
for t, (e_cis, e_fci) in enumerate(zip(guesses.cis_energies, fci)):
    print(f"state {t}: CIS {e_cis:.5f}  FCI {e_fci:.5f}  gap {e_cis - e_fci:.2e}")

# Off-diagonal matrix elements come from four diagonal-type expectation values.
f = {}
for sign in "+-":
    for part in ("Re", "Im"):
        ref = interfering(guesses, 0, 1, sign, part)
        f[sign, part] = ref.weight * expectation(mus[2], ref.state, ref.state).real
recovered = 0.5 * ((f["+", "Re"] - f["-", "Re"]) - 1j * (f["+", "Im"] - f["-", "Im"]))
print("<Phi_0|mu_z|Phi_1> from interference:", recovered)
print("direct                            :", expectation(mus[2], guesses[0], guesses[1]))

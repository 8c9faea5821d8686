"""Oscillator strengths and a Lorentzian-broadened absorption spectrum."""

import numpy as np

from qfdsim.bounds import heuristic_bounds
from qfdsim.guess import cis_guesses
from qfdsim.models import ModelSpec, generate_model
from qfdsim.observables import dense_oscillator_strengths, lorentzian_spectrum, oscillator_strengths
from qfdsim.pauli import to_dense
from qfdsim.propagators import PropagatorSpec
from qfdsim.qfd import qfd

h, mus = generate_model(ModelSpec())
guesses = cis_guesses(h, 9)
spec = PropagatorSpec.trotter(h, heuristic_bounds(h).kappa, steps_per_k=1)
sol, _, basis = qfd(h, guesses, 2, spec)

evals, evecs = np.linalg.eigh(to_dense(h))
ref = dense_oscillator_strengths(evals, evecs, mus, 9)
ours = oscillator_strengths(sol, mus, basis)

print("state   dE (QFD)   dE (FCI)   f (QFD)   f (FCI)")
for t in range(1, 9):
    print(f"{t:5d}  {ours[t].delta_e:9.5f}  {ref[t].delta_e:9.5f}  {ours[t].strength:8.5f}  {ref[t].strength:8.5f}")

delta = 0.15
e, curve = lorentzian_spectrum(ours[1:], delta, (0.5, 3.5, 301))
e, curve_ref = lorentzian_spectrum(ref[1:], delta, (0.5, 3.5, 301))
print(f"\nspectrum peak at {e[np.argmax(curve)]:.3f} (FCI: {e[np.argmax(curve_ref)]:.3f}); "
      f"max |difference| {np.max(np.abs(curve - curve_ref)):.2e}")

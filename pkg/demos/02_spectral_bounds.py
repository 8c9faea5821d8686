"""Gershgorin estimate of the spectral range and the propagation scale kappa."""

import numpy as np

from qfdsim.bounds import check_containment, disks_cover, full_gershgorin, gershgorin_row, heuristic_bounds
from qfdsim.models import ModelSpec, generate_model
from qfdsim.pauli import to_dense

h, _ = generate_model(ModelSpec())
print(f"{h.n_qubits} qubits, {len(h)} Pauli terms")

# Only the all-ground and all-excited rows are evaluated; each costs O(terms).
for bits in ("0" * 8, "1" * 8):
    c, r = gershgorin_row(h, bits)
    print(f"row |{bits}>: center {c:+.4f}, radius {r:.4f}")

b = heuristic_bounds(h)  # 10% overage by default
print(f"E- = {b.e_minus:.4f}, E+ = {b.e_plus:.4f}, kappa = {b.kappa:.4f}")

# At 8 qubits the dense oracle is cheap enough to check the heuristic.
ev = np.linalg.eigvalsh(to_dense(h))
b = check_containment(b, ev)
print(f"true range [{ev.min():.4f}, {ev.max():.4f}], contained: {b.contained}")
print(f"overestimate of the width: {(b.kappa - b.overage) / (ev.max() - ev.min()):.2f}x")
print("all 256 disks cover the spectrum:", disks_cover(full_gershgorin(h), ev))

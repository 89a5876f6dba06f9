"""
Two-qubit entanglement measures
===============================

Concurrence, the t-state closed form, the fully entangled fraction and the
teleportation fidelity that follows from it.
"""

# %%
import numpy as np

from zxzcert.entanglement import (
    bloch_decompose,
    concurrence,
    fully_entangled_fraction,
    t_state,
    t_state_concurrence,
    teleport_fidelity,
)

bell = np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2
print("Bell state: C =", concurrence(bell), " FEF =", fully_entangled_fraction(bell))
print("maximally mixed: C =", concurrence(np.eye(4) / 4), " FEF =", fully_entangled_fraction(np.eye(4) / 4))

# %%
# A t-state is fixed by three correlators; its concurrence has a closed form.
for t in [(1, 1, 1), (0.9, 0.9, 0.9), (0.8, 0.5, 0.4), (1 / 3, 1 / 3, 1 / 3)]:
    print(t, round(t_state_concurrence(t), 6), round(concurrence(t_state(*t)), 6))

# %%
# Bloch form of a t-state: no local vectors, diagonal correlation matrix.
dec = bloch_decompose(t_state(0.9, 0.8, 0.7))
print(np.round(dec.T_matrix, 6))

# %%
for f in (0.25, 0.5, 0.85, 1.0):
    print(f"FEF {f:.2f} -> teleportation fidelity {teleport_fidelity(f):.4f}")

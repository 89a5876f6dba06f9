"""
Searching for better measurements on worst-case states
======================================================

Equatorial measurements give 2 lambda - 1 on the worst-case state.  A
Nelder-Mead search over all single-qubit measurement directions finds
nothing better for lambda >= 1/2.  Below 1/2 the picture changes: on odd
chains some equatorial sequences leave positive entanglement.
"""

# %%
import numpy as np

from zxzcert.densesim import wc_state
from zxzcert.localize import OptimizerConfig, equatorial_check, maximize_le, wc4_grid_compare

for lam in (0.6, 0.8, 1.0):
    res = maximize_le(wc_state(5, lam), OptimizerConfig(restarts=4, seed=0))
    print(f"lambda {lam}: best {res.best_value:.6f} vs 2 lambda - 1 = {2 * lam - 1:.6f}, "
          f"theta rms off pi/2 {res.best_angles.theta_rms_deviation():.1e}")

# %%
# The 4-qubit case has a closed form; compare it with the simulator.
_, worst = wc4_grid_compare(np.linspace(0, 1, 5), np.linspace(0, np.pi, 9), np.linspace(0, np.pi, 9))
print("largest closed-form deviation on the 4-qubit grid:", worst)

# %%
# X measurements on qubits 2, 4, ... merge two Z-flip branches.
for n in (3, 5, 7):
    print(f"n = {n}, lambda = 0: concurrence {equatorial_check(0.0, n, np.zeros(n - 2)):.4f}")

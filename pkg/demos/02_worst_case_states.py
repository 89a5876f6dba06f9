"""
Worst-case states
=================

Given only <ZXZ> = z on every generator, the state that pushes every
stabilizer expectation down to its floor m (z - 1) + 1 is a mixture of the
cluster with its single-qubit Z-flipped copies.  This script builds it with
the dense simulator and checks the floor and the fidelity identity.
"""

# %%
import itertools

from zxzcert.bounds import wc_lambda
from zxzcert.densesim import expectation, fidelity_with_cluster, wc_state
from zxzcert.pauli import cluster_generators, compose

n, z = 6, 0.95
lam = wc_lambda(z, n)
rho = wc_state(n, lam)
print(f"n = {n}, z = {z}: cluster weight lambda = {lam:.4f}")

# %%
gens = cluster_generators(n)
worst = 0.0
for mask in itertools.product((0, 1), repeat=n):
    el = compose(gens, [i + 1 for i, b in enumerate(mask) if b])
    worst = max(worst, abs(expectation(rho, el.operator) - (el.m * (z - 1) + 1)))
print(f"largest deviation from m (z - 1) + 1 over all {2**n} elements: {worst:.1e}")

# %%
print("fidelity with the cluster:", fidelity_with_cluster(rho))
print("1 - n (1 - z) / 2       :", 1 - n * (1 - z) / 2)

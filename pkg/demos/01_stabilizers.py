"""
Cluster stabilizers and the surviving triplet
=============================================

A linear cluster state on n qubits is fixed by the generators K_1 = XZ..,
K_i = Z_{i-1} X_i Z_{i+1} and K_n = ..ZX.  When the interior qubits are
measured in X or Y, exactly three stabilizer elements commute with every
measurement and act on the two end qubits only.  Their generator counts
decide how fast the certified entanglement decays along the chain.
"""

# %%
from zxzcert.pauli import all_sequences, cluster_generators, compose, surviving_triplet, triplet_m_sum

gens = cluster_generators(5)
for i, g in enumerate(gens.generators, start=1):
    print(f"K_{i} = {g.label}")

# %%
# Products of generators are tracked with their phase.
el = compose(gens, [2, 3, 4])
print("K_2 K_3 K_4 =", el.operator.label, "with m =", el.m)

# %%
# The surviving triplet for a few measurement sequences on five qubits.
for seq in ("XXX", "YYY", "XYX"):
    trip = surviving_triplet(5, seq)
    print(seq, [(t.operator.label, t.m) for t in trip])

# %%
# Whatever the sequence, the generator counts add up to 4 + 2 (n - 2).
for n in range(3, 9):
    sums = {sum(t.m for t in surviving_triplet(n, s)) for s in all_sequences(n)}
    print(n, sums, triplet_m_sum(n))

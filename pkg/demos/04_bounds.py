"""
Certified floors from a single correlator
=========================================

A measured <ZXZ> value fixes floors on localizable entanglement, cluster
fidelity, fully entangled fraction and teleportation fidelity.  The
threshold table shows how good <ZXZ> must be to certify entanglement across
a given number of measured qubits.
"""

# %%
from zxzcert.bounds import BoundReport, direct_bound, max_certified_span, reports_to_csv, threshold_z_exact

for k in (1, 2, 5, 10, 20):
    t = threshold_z_exact(k)
    print(f"{k:2d} measured qubits: <ZXZ> > {t} = {float(t):.4f}")

# %%
reports = [BoundReport.from_z(0.97, k) for k in (1, 3, 10, 30)]
print(reports_to_csv(reports))

# %%
print("longest certified span at <ZXZ> = 0.99:", max_certified_span(0.99))

# %%
# The direct bound uses three measured correlators instead of one.
print("direct bound from (0.95, 0.9, 0.85):", direct_bound(0.95, 0.9, 0.85))

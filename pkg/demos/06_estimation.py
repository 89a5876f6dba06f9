"""
Estimating <ZXZ> from lossy photon counts
=========================================

Simulated three-photon coincidence windows, a Hoeffding interval at 99 %
confidence and the certified floors that follow from its lower end.  The
plan shows how many windows a target precision needs at low efficiency.
"""

# %%
from zxzcert.errormodel import SourceParams, zxz_value
from zxzcert.estimation import ExperimentPlan, certified_report, estimate_correlator, plan_samples, simulate_tally

source = SourceParams(5, 0.01)
plan = ExperimentPlan(efficiency=0.5, windows=400_000, seed=1)
est = estimate_correlator(simulate_tally(source, plan))
print(f"true {zxz_value(0.01):.5f}, estimate {est.mean:.5f}, interval [{est.ci_low:.5f}, {est.ci_high:.5f}]")
print(f"{est.n_complete} complete triples out of {est.n_total} windows")

# %%
for r in certified_report(est, [1, 2, 3]):
    print(r.to_dict())

# %%
for eta in (1.0, 0.1, 0.01):
    complete, windows = plan_samples(eta, 0.01, 0.01)
    print(f"eta = {eta}: {complete} complete triples, {windows} windows")

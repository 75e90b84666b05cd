"""
The rank attack against resampled evaluation sets
=================================================

With a fresh random subset of evaluation points per set, the common
kernel disappears and both distributions reach full rank.
"""

from permpuzzle import ExperimentConfig, Params, run_experiment

params = Params(lam=4, q=17, m=14037, conjecture="new", s=8)
report = run_experiment(ExperimentConfig(params, trials_per_case=20, master_seed=3))

for name, summary in (("poly", report.poly), ("rand", report.rand)):
    lo, hi = summary.case1_ci
    print(f"{name}: Pr[Case1] = {summary.case1_rate:.2f}  95% CI [{lo:.3f}, {hi:.3f}]")
print("advantage:", report.advantage)

# the original conjecture, same parameters, for contrast
report = run_experiment(ExperimentConfig(Params(4, 17, 14037), trials_per_case=20, master_seed=3))
print("original conjecture advantage:", report.advantage)

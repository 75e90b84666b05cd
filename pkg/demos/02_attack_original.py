"""
Breaking the original toy conjecture
====================================

Build instances from both distributions, compute the exact rank of the
indicator matrix, and compare against the threshold q^2 - q + 1.
"""

from permpuzzle import Params, build_instance, distinguish, failure_bound, recommend_m, threshold
from permpuzzle.attack import beta_witness, check_annihilation, k_basis

lam, q = 4, 17
m = recommend_m(q, 1e-3)
print(f"lambda={lam} q={q} m={m} threshold={threshold(q)} failure bound={failure_bound(q, m):.2e}")

for case in ("poly", "rand"):
    inst = build_instance(Params(lam, q, m, case=case), master_seed=1, trial_index=0, keep_secrets=True)
    d = distinguish(inst, exact_rank=True)
    print(f"{case}: rank={d.rank} verdict={d.verdict.value}")

    # the certificates need pi, so they only run on debug instances
    pi = inst.secrets.permutation
    k_ok = all(check_annihilation(inst.rows, v, pi, q) for v in k_basis(q))
    beta_ok = check_annihilation(inst.rows, beta_witness(q), pi, q)
    print(f"      K annihilates every row: {k_ok}; beta witness annihilates every row: {beta_ok}")

# the default mode stops as soon as the rank reaches the threshold
inst = build_instance(Params(lam, q, m, case="rand"), master_seed=1, trial_index=0)
d = distinguish(inst)
print(f"early exit after {d.rows_consumed} of {m} rows")

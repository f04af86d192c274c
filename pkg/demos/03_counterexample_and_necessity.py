"""
Why the weight condition is necessary
=====================================

The ratio-of-moments mean (sum w x^2) / (sum w x), extended by 0 when
the denominator vanishes, is homogeneous, symmetric, and Jensen convex,
so the reversed prefix-mean inequality holds for every weight sequence
with nonincreasing ratios.  For any other positive weight sequence there
are entries that break it, and a derivative probe at zero pins down
exactly where.
"""

import numpy as np

from kedlaya import (
    check_kedlaya,
    counterexample_mu_prime_0,
    mean_from_id,
    necessity_probe,
    sample_jensen_concavity,
    search_violation,
)
from kedlaya.sampling import entries_log_uniform, rational_v_weights
from kedlaya.weights import is_in_V, make_weights

cex = mean_from_id("gini21")

# Jensen convexity, seen by sampling the midpoint inequality.
verdict = sample_jensen_concavity(cex, n=3, trials=20_000, seed=1)
print("midpoint sampling verdict:", verdict.verdict)

# With admissible weights the reversed inequality always holds.
rng = np.random.default_rng(2)
worst = None
for _ in range(2000):
    n = int(rng.integers(2, 7))
    w = rational_v_weights(rng, n)
    x = entries_log_uniform(rng, n)
    r = check_kedlaya(cex, x, w)
    assert r.verdict in ("reversed", "equality")
print("2000 admissible-weight trials: reversed inequality never broken")

# Weights (1, 1, 4) have ratios 1, 1/2, 2/3: the last step increases, so
# the sequence is not admissible.
w = make_weights([1, 1, 4], "W0")
print("\nweights (1,1,4): ratio-nonincreasing?", is_in_V(w))

# The probe estimates the derivative at 0 of t -> M((0,...,0,t,1), w) by
# extrapolated forward differences; analytically it is -w[n-2]/w[n-1].
probe = necessity_probe(cex, w)
print(f"mu'(0) estimate = {probe.mu_prime_0:.9f}, "
      f"analytic = {counterexample_mu_prime_0(w):.2f}")
print("last-two-ratio condition holds?", probe.lambda_condition)

# A negative derivative plus a failing ratio condition forces a breaking
# point; the search scans t = 1, 1/2, 1/4, ... first.
witness = search_violation(cex, w, budget=100_000, seed=0)
print("\nviolation witness:", witness.x)
print(f"  lhs = {witness.report.lhs:.6f} < rhs = {witness.report.rhs:.6f} "
      f"(gap {witness.report.gap:.2e}); the reversed inequality fails here")

"""
The weighted prefix-mean inequality
===================================

For a weighted mean M, compare the arithmetic mean of the prefix
M-means against the M-mean of the prefix arithmetic means.  Jensen
concave means keep the left side below the right whenever the weight
ratio sequence w_k / (w_1 + ... + w_k) is nonincreasing; Jensen convex
means reverse it.
"""

import math

import numpy as np

from kedlaya import check_kedlaya, kedlaya_sides, mean_from_id, step_inequality
from kedlaya.sampling import entries_log_uniform, rational_v_weights

geo = mean_from_id("power:0")

# The classic two-entry anchor: entries (1, 4), equal weights.
lhs, rhs = kedlaya_sides(geo, (1, 4), (1, 1))
print("geometric mean, x=(1,4), w=(1,1)")
print(f"  lhs = (1 + sqrt(4))/2       = {lhs}")
print(f"  rhs = sqrt(1 * (1+4)/2)     = {rhs}  (sqrt(2.5) = {math.sqrt(2.5)})")

report = check_kedlaya(geo, (1, 4), (1, 1))
print(f"  verdict: {report.verdict}, gap = {report.gap:.6f}")

# The proof works one index at a time; the per-step gaps telescope to the
# full gap scaled by the total weight.
print("\ntelescoping steps for x=(1,2,6), w=(3,2,1):")
x, w = (1.0, 2.0, 6.0), (3, 2, 1)
for j in (2, 3):
    slhs, srhs = step_inequality(geo, x, w, j)
    print(f"  step j={j}: lhs = {slhs:.6f}, rhs = {srhs:.6f}, "
          f"gap = {srhs - slhs:.6f}")
full = check_kedlaya(geo, x, w)
print(f"  sum of step gaps = {sum(full.step_gaps):.6f} "
      f"= total weight * full gap = {6 * full.gap:.6f}")

# Randomized sweep over admissible rational weights: concave families
# never lose, the arithmetic mean sits exactly at equality.
rng = np.random.default_rng(0)
print("\n1000-trial sweeps (n = 2..7, random admissible weights):")
for mean_id in ["power:-1", "power:0", "power:0.5", "gini:0.5:-1", "arithmetic"]:
    mean = mean_from_id(mean_id)
    verdicts = {}
    min_gap = math.inf
    for _ in range(1000):
        n = int(rng.integers(2, 8))
        weights = rational_v_weights(rng, n)
        entries = entries_log_uniform(rng, n)
        r = check_kedlaya(mean, entries, weights)
        verdicts[r.verdict] = verdicts.get(r.verdict, 0) + 1
        min_gap = min(min_gap, r.gap)
    print(f"  {mean_id:12s} verdicts={verdicts} min gap={min_gap:.2e}")

"""
A tour of weighted mean families
================================

Build mean handles, evaluate them, and watch the four weighted-mean
axioms hold numerically: weight rescaling changes nothing, weights can
be split across duplicated entries, values stay between min and max,
and zero-weight entries drop out.
"""

import math

from kedlaya import (
    MeanHandle,
    check_elimination,
    check_nullhomogeneity,
    check_reduction,
    evaluate,
    mean_from_id,
    weighted_from_repetition_invariant,
)
from kedlaya.means import arithmetic_base

x = (1.0, 4.0)
w = (1, 3)

print("entries", x, "weights", w)
for mean_id in ["arithmetic", "min", "max", "power:0", "power:-1",
                "power:0.5", "gini:2:1", "qa:log", "homdev:shifted-power:0.5"]:
    mean = mean_from_id(mean_id)
    print(f"  {mean_id:24s} -> {evaluate(mean, x, w):.6f}")

# The geometric mean of (1, 4) with equal weights is the square root of 4.
geo = mean_from_id("power:0")
print("\ngeometric(1,4; 1,1) =", evaluate(geo, x, (1, 1)), "= sqrt(4)")

# Axiom residuals: each check returns |left - right| of one identity.
gini = mean_from_id("gini:2:1")
print("\naxiom residuals for gini:2:1 on small inputs")
print("  rescale weights by 3:  ",
      check_nullhomogeneity(gini, (1, 2), (1, 1), 3).residual)
print("  split weights across duplicates:",
      check_reduction(gini, (1, 2), (2, 0), (0, 2)).residual)
print("  drop a zero-weight entry:",
      check_elimination(gini, (5, 1), (0, 1), 0).residual)

# Integer weights are repetition counts: the weighted mean of (1, 3) with
# weights (1, 3) is the plain mean of the multiset (1, 3, 3, 3).
v = weighted_from_repetition_invariant(arithmetic_base, (1.0, 3.0), (1, 3))
print("\nmultiset expansion of (1,3) with counts (1,3):", v)
print("matches the weighted arithmetic mean exactly:",
      v == evaluate(MeanHandle.arithmetic(), (1.0, 3.0), (1.0, 3.0)))

# Affine conjugation moves a mean to a shifted/scaled domain.
shifted = MeanHandle.affine(geo, 2.0, 10.0)
print("\ngeometric mean conjugated by x -> 2x + 10:")
print("  evaluate on (12, 18):", evaluate(shifted, (12.0, 18.0), (1, 1)))
print("  direct check: 2 * sqrt(1 * 4) + 10 =", 2 * math.sqrt(4) + 10)

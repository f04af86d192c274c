"""
Exact rational geometry behind the inequality
=============================================

The telescoping step of the prefix-mean inequality is the swap
inequality between an arithmetic integral and a mean integral of a
specific piecewise-constant function.  Everything geometric here is
exact rational arithmetic: proportional subsets, block partitions,
slice measures.
"""

import json
from fractions import Fraction

from kedlaya import (
    build_proof_function,
    function_to_json,
    jensen_fubini_sides,
    m_integral,
    mean_from_id,
    proportional_set,
    rect,
    step_inequality,
    verify_proportionality,
)
from kedlaya.stepfn import QInterval, SimpleFunction1D

# A proportional subset meets every horizontal and vertical line of its
# host rectangle in exactly theta of its measure.  theta = 2/5 on the
# unit square: a 5x5 cell grid with 2 wrapped-diagonal cells per column.
ps = proportional_set(rect(0, 1, 0, 1), Fraction(2, 5))
print(f"theta=2/5: {len(ps.rectangles)} cells, "
      f"verified exactly: {verify_proportionality(ps)}")

# Mean integrals of step functions: values weighted by exact lengths.
geo = mean_from_id("power:0")
f1 = SimpleFunction1D(((QInterval(0, 1), 1.0), (QInterval(1, 2), 4.0)))
print("\nmean integral of [1 on [0,1), 4 on [1,2)] under the geometric mean:",
      m_integral(geo, f1))

# The block construction: for entries x, admissible rational weights w
# and a step index j, a function on the square [0, S_j)^2 whose swap
# sides equal the telescoping-step sides divided by S_j.
x, w, j = (1.0, 4.0), (1, 1), 2
f = build_proof_function(x, w, j)
print(f"\nproof function for x={x}, w={w}, j={j}")
print("  domain:", f.bounding)
for r, v in f.pieces:
    print(f"  value {v} on x-range [{r.dx.lower},{r.dx.upper}) "
          f"y-range [{r.dy.lower},{r.dy.upper})")

lhs, rhs = jensen_fubini_sides(geo, f)
slhs, srhs = step_inequality(geo, x, w, j)
print(f"  swap sides:            ({lhs:.12f}, {rhs:.12f})")
print(f"  step sides / S_j:      ({slhs / 2:.12f}, {srhs / 2:.12f})")

# The construction serializes to JSON (rationals as p/q strings) for
# external plotting; the CLI subcommand `kedlaya proof-fn` emits the same.
doc = function_to_json(f)
print("\nJSON wire format (first piece):")
print(json.dumps(doc["pieces"][0], sort_keys=True))

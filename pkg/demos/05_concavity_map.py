"""
Mapping Jensen concavity across the two-parameter family
========================================================

The two-parameter power-sum means are Jensen concave exactly when
min(p,q) <= 0 <= max(p,q) <= 1.  Midpoint sampling can refute concavity
or convexity but never prove either, so the sampled verdicts should
agree with the analytic region wherever they claim a refutation.
"""

from kedlaya import (
    MeanHandle,
    gini_concavity_condition,
    qa_concavity_condition,
    sample_jensen_concavity,
)
from kedlaya.deviation import log_generator, power_generator

grid = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0]
marks = {"concave": "n", "convex": "x", "neither": "*", "inconclusive": "="}

print("sampled verdicts (rows p, cols q); letter key:",
      "n concave, x convex, * neither, = inconclusive")
print("region membership in brackets: [+] analytically concave\n")
header = "      " + "".join(f"{q:>8}" for q in grid)
print(header)
for p in grid:
    cells = []
    for q in grid:
        verdict = sample_jensen_concavity(MeanHandle.gini(p, q), n=2,
                                          trials=20_000, seed=5)
        tag = marks[verdict.verdict]
        region = "+" if gini_concavity_condition(p, q) else " "
        cells.append(f"   {tag}[{region}]")
    print(f"{p:>6}" + "".join(cells))

print("\nsampling never refutes concavity inside the region, and refutes "
      "it at every sampled point outside")

# The quasi-arithmetic criterion: the generator ratio f'/f'' must be a
# negative convex function (or f'' identically zero).
print("\ngenerator criterion for quasi-arithmetic means:")
for gen in (power_generator(1.0), log_generator(), power_generator(0.5),
            power_generator(2.0)):
    print(f"  {gen.label:10s} concave generator condition:",
          qa_concavity_condition(gen))

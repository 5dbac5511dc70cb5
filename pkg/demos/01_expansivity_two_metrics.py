"""One homeomorphism, two metrics, two different expansivity verdicts.

The plane map (x, y) -> (2x, y/2) moves every pair of distinct points
apart eventually: in the Euclidean metric no pair can stay within a
fixed ball forever, and for a diagonal matrix that is a closed-form
fact about the eigenrates. Pull the same plane onto a sphere through
the stereographic chart, though, and distances between far-out points
collapse: a pair can ride to infinity while its chart distance shrinks,
so the same map stops being expansive in the new metric.
"""

import random

from topodyn import expansive_check, metric_ball
from topodyn.systems import catalog

plane = catalog()["plane-two-metrics"].build()
euclid = plane.metrics["euclidean"]
sphere = plane.metrics["sphere"]

print("system:", plane.name)
print()

# sample pairs near the origin plus one pair far out along the x axis,
# where the chart crushes distances
rng = random.Random(4)
pairs = [((rng.uniform(-2, 2), rng.uniform(-2, 2)),
          (rng.uniform(-2, 2), rng.uniform(-2, 2))) for _ in range(24)]
far = ((float(2 ** 20), 0.0), (float(2 ** 20) + 1.0, 0.0))
pairs.append(far)

print("the far pair sits one unit apart in the plane,",
      f"{sphere(*far):.3e} apart on the sphere")
print()

for label, metric in (("euclidean", euclid), ("sphere", sphere)):
    N = metric_ball(plane, 0.1, metric=metric)
    report = expansive_check(plane, N, pair_samples=pairs, horizon=60)
    print(f"{label} ball of radius 0.1: {report.verdict}"
          f"  (proof level: {report.proof_level})")
    if report.refutation is not None:
        print(f"  witness pair {report.refutation.x} /"
              f" {report.refutation.y} stays inside the ball"
              f" for the whole horizon")
print()

# why the Euclidean verdict needs no horizon at all: along the expanding
# axis a gap g becomes 2^n g, along the contracting axis it becomes
# 2^n g under backward iteration, so some iterate always exceeds 0.1
close = ((0.5, 0.0), (0.5 + 1e-5, 0.0))
gap = euclid(*close)
n = 0
while gap < 0.1:
    gap *= 2.0
    n += 1
print(f"euclidean separation of a pair starting {euclid(*close):g} apart:"
      f" exceeds 0.1 after {n} forward steps")

# the sphere pair instead contracts in the chart under forward iterates
# (both points run off to the chart's pole) and the backward iterates
# return them toward the origin slowly enough to stay trapped
u, v = far
worst = sphere(u, v)
for _ in range(60):
    u, v = plane.forward(u), plane.forward(v)
    worst = max(worst, sphere(u, v))
u, v = far
for _ in range(60):
    u, v = plane.backward(u), plane.backward(v)
    worst = max(worst, sphere(u, v))
print(f"sphere separation of the far pair over 60 steps both ways:"
      f" never above {worst:.2e}")

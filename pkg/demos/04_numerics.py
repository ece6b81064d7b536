"""Desk-scale numerics: conservation, order of accuracy, commuting flows.

From the start (1,1,1,1) the t-flow reaches a movable pole just before
t = 1, so the unit-time protocol is run on [0, 0.5] there, and on [0, 1]
from a start off the diagonal q1 = q2, p1 = p2 (where the s-flow is at
rest and the commutation test would be empty).
"""

from garnier.numerics import benchmark_autoG14

print(benchmark_autoG14(horizon=1.0).summary())
print(benchmark_autoG14(horizon=0.5).summary())
print(benchmark_autoG14(horizon=1.0, start=(0.1, 0.2, -0.1, 0.3)).summary())

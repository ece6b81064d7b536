"""The autonomous two-time system: brackets, flows, symmetries, mKdV.

Run with ``python3 demos/01_autonomous_system.py``.
"""

from garnier.catalog import registry_get, vector_field
from garnier.verify import (
    check_commuting_flows,
    check_mkdv_reduction,
    check_relations,
    poisson_bracket,
)

sys = registry_get("autoG14")
K1, K2 = sys.hamiltonians
print("K1 =", K1)
print("K2 =", K2)

# The two Hamiltonians Poisson-commute, so their flows commute.
print("{K1, K2} =", poisson_bracket(K1, K2, sys.pairs))
print(check_commuting_flows(sys).verdict, "compatibility")

# Vector field of the t-flow: dq = dK/dp, dp = -dK/dq.
for v, comp in zip(sys.phase, vector_field(sys, 0)):
    print(f"d{v}/dt =", comp)

# The affine Weyl group relations among the Backlund transformations.
for rep in check_relations("autoG14"):
    print(f"{rep.verdict:4s} {rep.id}  {rep.detail}")

# A polynomial change of variables turns the system into the mKdV hierarchy.
for rep in check_mkdv_reduction():
    print(f"{rep.verdict:4s} {rep.id}  {rep.detail}")

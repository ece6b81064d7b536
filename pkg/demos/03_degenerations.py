"""Confluence: eps -> 0 limits along the degeneration diagram.

Each scheme introduces new parameters and variables depending on eps.
The limiting vector fields are compared with the registered targets.  Two
edges only match after permuting the target parameters; both identities
are printed.
"""

from garnier.transforms import degeneration_ids, get_degeneration
from garnier.verify import check_degeneration

for did in degeneration_ids():
    d = get_degeneration(did)
    print(f"{d.source} -> {d.target}")
    for rep in check_degeneration(d):
        print(f"  {rep.verdict:4s} {rep.id}  {rep.detail}")

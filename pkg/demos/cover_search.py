"""Run one exhaustive double-cover search and print its per-family tallies.

usage: python demos/cover_search.py [q3g6|q27g4|q32g4]
"""

import sys
import time

from weilbounds.ffsearch import PRESETS

name = sys.argv[1] if len(sys.argv) > 1 else "q3g6"
t0 = time.time()
res = PRESETS[name]()
for fam, n in res.families.items():
    print(f"{n:>12}  {fam}")
for stage, n in getattr(res, "stages", {}).items():
    print(f"{n:>12}  {stage}")
print("maximum over all families:", res.family_maximum_bound)
print("target reached:", res.target_reached, f"({time.time() - t0:.0f} s)")

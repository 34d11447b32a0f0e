"""Walk N downward from the Weil-Serre bound until a candidate survives."""

import sys

from weilbounds.eliminate import table_bound
from weilbounds.weil import context

rows = [(16, 4), (128, 4), (9, 10), (27, 4)] if len(sys.argv) < 3 else [(int(sys.argv[1]), int(sys.argv[2]))]
for q, g in rows:
    row = table_bound(context(q), g)
    print(f"q={q} g={g}: Weil-Serre {context(q).ws_bound(g)}")
    for N, outcome in row.steps:
        print(f"   N={N}: {outcome}")
    print(f"   best upper bound {row.bound}")

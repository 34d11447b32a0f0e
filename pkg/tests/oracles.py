"""Independent reference computations shared by the unit and acceptance suites."""

import copy
import itertools
import json
import random
from math import comb

from weilbounds.exact import IntPoly, all_roots_real_in, factor


def brute_force_small_deficiency(D: int, max_deg: int) -> set:
    """Irreducible monic totally positive integer polynomials by exhaustive coefficient search."""
    found = set()
    for n in range(1, max_deg + 1):
        for T in range(n, n + D + 1):
            # roots lie in (0, T], so |e_k| <= C(n, k) T^k
            ranges = [range(0, 1 + comb(n, k) * T ** k) for k in range(2, n + 1)]
            for es in itertools.product(*ranges):
                e = (1, T) + es
                coeffs = [(-1) ** k * e[k] for k in range(n + 1)]  # top-down
                H = IntPoly(list(reversed(coeffs)))
                if H.coeff(0) == 0 or not all_roots_real_in(H, 0, "+inf"):
                    continue
                facs = factor(H)
                if len(facs) == 1 and facs[0][1] == 1:
                    found.add(H)
    return found


def candidate_key(cs):
    return sorted(tuple(h.poly.coeffs) for h in cs.polys)


def _int_paths(obj, path=()):
    if isinstance(obj, bool):
        return
    if isinstance(obj, int):
        yield path
    elif isinstance(obj, dict):
        for k in sorted(obj):
            yield from _int_paths(obj[k], path + (k,))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _int_paths(v, path + (i,))


def numeric_mutations(report_dicts, count, seed):
    """Single-field edits to numeric evidence: certificate values, place counts, report header."""
    rng = random.Random(seed)
    dicts = [json.loads(json.dumps(d)) for d in report_dicts]
    targets = []
    for ri, d in enumerate(dicts):
        for ci, c in enumerate(d["candidates"]):
            if c["certificate"] is not None and c["status"] in ("Eliminated", "NotWeil"):
                targets += [(ri, ("candidates", ci, "certificate") + p)
                            for p in _int_paths(c["certificate"])]
            targets += [(ri, ("candidates", ci, "place_counts", k)) for k in range(len(c["place_counts"]))]
        targets += [(ri, (key,)) for key in ("ws_bound", "defect")]
    for _ in range(count):
        ri, path = rng.choice(targets)
        mutated = copy.deepcopy(dicts[ri])
        obj = mutated
        for key in path[:-1]:
            obj = obj[key]
        obj[path[-1]] += rng.choice((-2, -1, 1, 2))
        yield path, mutated

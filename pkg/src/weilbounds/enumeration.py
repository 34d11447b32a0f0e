"""Enumeration of candidate real Weil polynomials.

Two routes are provided.  The table route starts from the complete list of
irreducible totally positive polynomials of small deficiency, shifts them into
real Weil polynomials and multiplies them together.  The trace route walks
over all monic polynomials of a given degree and trace whose roots lie in the
Weil interval, using the fact that every derivative of a real-rooted
polynomial is real-rooted on the same interval.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from .exact import (
    DomainError,
    IntPoly,
    all_roots_real_in,
    divisors,
    floor_two_sqrt,
    mobius,
    pseudo_remainder,
)
from .isogeny import Unknown, honda_tate_exponent
from .weil import FieldContext, RealWeilPoly, roots_admissible, validate

TABLE_ROUTE_MAX_DEFECT = 6
SMYTH_CACHE_VERSION = 1


class WorkLimitExceeded(RuntimeError):
    """The search visited more nodes than the configured budget."""


# ---------------------------------------------------------------------------
# the derivative-interlacing search

class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise WorkLimitExceeded(f"more than {self.limit} search nodes")


def _interlacing_range(deg, k, a, lo, hi, fact):
    """Float range of admissible a[k] given a[0..k-1].

    D_k, the (deg-k)-th derivative, has degree k; its critical points are the
    roots of D_{k-1}.  D_k has all roots in [lo, hi] iff its values alternate
    in sign at lo, the critical points and hi.
    """
    # coefficients of D_k in x^j, constant term excluded (it carries a[k])
    dk = [a[k - j] * fact[deg - k + j] / fact[j] if j else 0.0 for j in range(k + 1)]
    # D_{k-1} = D_k' ; roots are the critical points
    crit_coeffs = [dk[j] * j for j in range(k, 0, -1)]  # high to low
    if k == 1:
        crit = []
    elif k == 2:
        crit = [-crit_coeffs[1] / crit_coeffs[0]]
    else:
        crit = sorted(float(r.real) for r in np.roots(crit_coeffs))
    pts = [(lo, k % 2 == 0)]  # (point, requires D >= 0)
    for j, r in enumerate(crit, 1):
        r = min(max(r, lo), hi)
        pts.append((r, (k - j) % 2 == 0))
    pts.append((hi, True))
    low, high = -math.inf, math.inf
    for x, nonneg in pts:
        val = 0.0
        scale = 0.0
        for c in reversed(dk):
            val = val * x + c
            scale = scale * abs(x) + abs(c)
        tol = 1e-9 * scale + 1e-9
        if nonneg:
            low = max(low, -val - tol)
        else:
            high = min(high, -val + tol)
    f = fact[deg - k]
    return math.ceil(low / f), math.floor(high / f)


@lru_cache(maxsize=None)
def _factorials(n):
    return tuple(float(math.factorial(i)) for i in range(n + 1))


def real_rooted_search(
    deg: int,
    trace: int,
    lo: float,
    hi: float,
    extra_bounds: Optional[Callable] = None,
    budget: Optional[_Budget] = None,
    prefix: Optional[list] = None,
) -> list[tuple]:
    """Top-down coefficient vectors (1, -trace, a_2, ..., a_deg) passing the
    interlacing conditions on [lo, hi].  Survivors still need an exact check.

    ``extra_bounds(k, a)`` may return an integer (low, high) window for a[k].
    """
    fact = _factorials(deg)
    a = [1, -trace] + [0] * (deg - 1)
    out: list[tuple] = []
    start = 2
    if prefix:
        for i, v in enumerate(prefix):
            a[2 + i] = v
        start = 2 + len(prefix)

    def rec(k):
        if budget:
            budget.tick()
        if k > deg:
            out.append(tuple(a))
            return
        low, high = _interlacing_range(deg, k, a, lo, hi, fact)
        if extra_bounds is not None:
            el, eh = extra_bounds(k, a)
            low, high = max(low, el), min(high, eh)
        for v in range(low, high + 1):
            a[k] = v
            rec(k + 1)
        a[k] = 0

    if deg <= 0:
        return [(1,)]
    if deg == 1:
        if lo - 1e-9 <= trace <= hi + 1e-9:
            return [(1, -trace)]
        return []
    rec(start)
    return out


def _to_intpoly(top_down: tuple) -> IntPoly:
    return IntPoly(reversed(top_down))


# ---------------------------------------------------------------------------
# totally positive polynomials of small deficiency

@dataclass(frozen=True)
class DeficiencyTable:
    max_deficiency: int
    entries: dict  # deficiency -> tuple of IntPoly

    def all(self) -> list[tuple[int, IntPoly]]:
        return [(d, p) for d in sorted(self.entries) for p in self.entries[d]]

    def __len__(self):
        return sum(len(v) for v in self.entries.values())


def deficiency(H: IntPoly) -> int:
    return H.trace() - H.degree


def _totally_positive(H: IntPoly) -> bool:
    return H.coeff(0) != 0 and all_roots_real_in(H, 0, "+inf")


def _divides(d: IntPoly, f: IntPoly) -> bool:
    return pseudo_remainder(f, d).is_zero()


# Auxiliary function F(z) = z - sum w_j log|Q_j(z)| with Q_j small-deficiency
# polynomials; weights come from a linear program and min F over z > 0 exceeds
# AUX_LAMBDA (checked on a fine grid in the tests).  For any other irreducible
# totally positive H the resultants with Q_j are nonzero integers, so summing F
# over the roots gives trace(H) >= AUX_LAMBDA * deg(H).
AUX_WEIGHTS = (
    ((0, 1), 0.630755),
    ((-1, 1), 0.544336),
    ((-2, 1), 0.098524),
    ((1, -3, 1), 0.211506),
    ((1, -4, 1), 0.005612),
    ((2, -4, 1), 0.033589),
    ((-1, 6, -5, 1), 0.1065),
    ((5, -5, 1), 0.004232),
    ((-2, 8, -6, 1), 0.001224),
    ((-1, 8, -6, 1), 0.010815),
    ((-3, 9, -6, 1), 0.016893),
    ((-1, 9, -6, 1), 0.012782),
    ((1, -7, 13, -7, 1), 0.031616),
    ((1, -8, 14, -7, 1), 0.02881),
)
AUX_LAMBDA = 1.76
_DIRECT_MAX_DEFICIENCY = 3  # every auxiliary Q_j has deficiency <= 3


def auxiliary_function(z):
    """F(z) for a scalar or numpy array of positive reals."""
    z = np.asarray(z, dtype=float)
    out = z.copy()
    for coeffs, w in AUX_WEIGHTS:
        out = out - w * np.log(np.abs(np.polyval(coeffs[::-1], z)))
    return out


@lru_cache(maxsize=None)
def _root_window(bound: float) -> tuple[float, float]:
    """Outer float bounds for {z > 0 : F(z) <= bound}."""
    grid = np.linspace(1e-9, max(40.0, 2 * bound + 10), 400001)
    with np.errstate(divide="ignore"):
        vals = auxiliary_function(grid)
    inside = np.nonzero(vals <= bound + 0.05)[0]
    if not len(inside):
        return 1.0, 0.0
    step = grid[1] - grid[0]
    return max(0.0, grid[inside[0]] - 2 * step), grid[inside[-1]] + 2 * step


def max_degree_for(dfc: int) -> int:
    """Largest degree an irreducible totally positive polynomial of this deficiency can have."""
    if dfc <= _DIRECT_MAX_DEFICIENCY:
        return 2 * dfc  # trace >= 3/2 degree for every such polynomial but x - 1
    return int(dfc / (AUX_LAMBDA - 1))


def smyth_enumerate(D: int, budget: Optional[_Budget] = None) -> DeficiencyTable:
    """All irreducible monic totally positive integer polynomials with deficiency <= D."""
    if D < 0:
        raise DomainError("deficiency must be non-negative")
    if D > 8:
        raise DomainError("deficiency tables are capped at 8")
    found: dict[int, list[IntPoly]] = {d: [] for d in range(D + 1)}
    found[0].append(IntPoly((-1, 1)))
    lower: list[IntPoly] = [IntPoly((-1, 1))]
    top_degree = max((max_degree_for(d) for d in range(1, D + 1)), default=0)
    for deg in range(1, top_degree + 1):
        new = []
        for dfc in range(1, D + 1):
            if deg > max_degree_for(dfc):
                continue
            T = deg + dfc
            if deg == 1:
                tops = [(1, -T)]
            else:
                lo, hi = 0.0, float(T)
                if dfc > _DIRECT_MAX_DEFICIENCY:
                    wlo, whi = _root_window(T - (deg - 1) * AUX_LAMBDA)
                    lo, hi = max(lo, wlo), min(hi, whi)
                if lo > hi:
                    continue
                tops = real_rooted_search(deg, T, lo, hi, budget=budget)
            for top in tops:
                H = _to_intpoly(top)
                if not _totally_positive(H):
                    continue
                if any(_divides(d, H) for d in lower if d.degree < deg):
                    continue
                new.append((dfc, H))
        for dfc, H in new:
            found[dfc].append(H)
            lower.append(H)
    entries = {d: tuple(sorted(v, key=lambda p: p.sort_key())) for d, v in found.items()}
    return DeficiencyTable(D, entries)


def save_table(table: DeficiencyTable, path) -> None:
    lines = [
        f"# weilbounds deficiency table v{SMYTH_CACHE_VERSION}",
        f"# max_deficiency {table.max_deficiency}",
        "# deficiency; degree; coefficients (constant first)",
    ]
    for d, H in table.all():
        lines.append(f"{d}; {H.degree}; {' '.join(str(c) for c in H.coeffs)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_table(path) -> DeficiencyTable:
    """Read and validate a cached table; raises ValueError on any inconsistency."""
    text = Path(path).read_text().splitlines()
    if not text or text[0].strip() != f"# weilbounds deficiency table v{SMYTH_CACHE_VERSION}":
        raise ValueError("unrecognised deficiency table header")
    maxd = None
    entries: dict[int, list[IntPoly]] = {}
    for line in text[1:]:
        line = line.strip()
        if line.startswith("# max_deficiency"):
            maxd = int(line.split()[-1])
            continue
        if not line or line.startswith("#"):
            continue
        d_s, deg_s, coeffs_s = (s.strip() for s in line.split(";"))
        H = IntPoly(int(c) for c in coeffs_s.split())
        if H.degree != int(deg_s) or not H.is_monic() or deficiency(H) != int(d_s):
            raise ValueError(f"inconsistent table line: {line}")
        if not _totally_positive(H):
            raise ValueError(f"entry is not totally positive: {line}")
        entries.setdefault(int(d_s), []).append(H)
    if maxd is None:
        raise ValueError("missing max_deficiency line")
    for d in range(maxd + 1):
        entries.setdefault(d, [])
    return DeficiencyTable(maxd, {d: tuple(v) for d, v in entries.items()})


_TABLES: dict[int, DeficiencyTable] = {}


def default_cache_path(D: int) -> Path:
    base = os.environ.get("WEILBOUNDS_CACHE") or os.path.join(
        os.path.expanduser("~"), ".cache", "weilbounds"
    )
    return Path(base) / f"deficiency_{D}.txt"


def deficiency_table(D: int, use_cache: bool = True) -> DeficiencyTable:
    """Memoized table, read from (or written to) the on-disk cache."""
    for have, tab in _TABLES.items():
        if have >= D:
            return _restrict(tab, D)
    tab = None
    path = default_cache_path(D)
    if use_cache and path.exists():
        try:
            tab = load_table(path)
        except (ValueError, OSError):
            tab = None
    if tab is None:
        tab = smyth_enumerate(D)
        if use_cache:
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                save_table(tab, path)
            except OSError:
                pass
    _TABLES[D] = tab
    return tab


def _restrict(tab: DeficiencyTable, D: int) -> DeficiencyTable:
    return DeficiencyTable(D, {d: v for d, v in tab.entries.items() if d <= D})


# ---------------------------------------------------------------------------
# minimal real Weil polynomials

@dataclass(frozen=True)
class _Piece:
    h: IntPoly
    defect: int
    exponent: object


def _pieces(ctx: FieldContext, D: int) -> list[_Piece]:
    out = []
    for dfc, H in deficiency_table(D).all():
        if dfc == 0:
            continue  # x - 1 becomes x + m, never part of a minimal polynomial
        h = H.shift(ctx.m + 1)
        if not roots_admissible(h, ctx.q):
            continue
        out.append(_Piece(h, dfc, honda_tate_exponent(h, ctx)))
    return out


def minimal_realweil(
    ctx: FieldContext, D: int, honda_tate: bool = True, max_degree: Optional[int] = None
) -> list[RealWeilPoly]:
    """Products of shifted table entries coprime to x + m with total defect <= D.

    With ``honda_tate`` each multiplicity is a multiple of the factor's
    exponent (Unknown exponents are treated as 1 so nothing is dropped).
    The empty product is included.
    """
    if D > 8:
        raise DomainError("defect cap for the table route is 8")
    pieces = _pieces(ctx, D)
    results: list[RealWeilPoly] = []

    def rec(i, chosen, used, degree):
        if i == len(pieces):
            results.append(RealWeilPoly(ctx, tuple(chosen)))
            return
        pc = pieces[i]
        step = pc.exponent if (honda_tate and isinstance(pc.exponent, int)) else 1
        mult = 0
        while used + mult * pc.defect <= D:
            if max_degree is None or degree + mult * pc.h.degree <= max_degree:
                rec(i + 1, chosen + ([(pc.h, mult)] if mult else []), used + mult * pc.defect,
                    degree + mult * pc.h.degree)
            mult += step

    rec(0, [], 0, 0)
    results.sort(key=lambda h: h.poly.sort_key())
    return results


# ---------------------------------------------------------------------------
# candidates for (q, g, N)

@dataclass
class CandidateSet:
    ctx: FieldContext
    g: int
    N: int
    polys: list
    route: str
    note: str = ""
    nodes: int = 0


def _chebyshev_table(q: int, n: int) -> list[list[int]]:
    """c_k(y) = alpha^k + conj(alpha)^k as a polynomial in y = alpha + conj(alpha)."""
    T = [[2], [0, 1]]
    for k in range(2, n + 1):
        prev, prev2 = T[k - 1], T[k - 2]
        row = [0] * (k + 1)
        for j, c in enumerate(prev):
            row[j + 1] += c
        for j, c in enumerate(prev2):
            row[j] -= q * c
        T.append(row)
    return T


class _PlaceBounds:
    """Integer window for the next coefficient from a_k >= 0 and the extension bounds."""

    def __init__(self, q: int, g: int):
        self.q, self.g = q, g
        self.cheb = _chebyshev_table(q, g)
        self.ext = [0] + [floor_two_sqrt(q ** k) for k in range(1, g + 1)]

    def __call__(self, k: int, a: list):
        q, g = self.q, self.g
        # power sums of h from the fixed top coefficients
        p = [g]
        for j in range(1, k):
            s = j * a[j]
            for i in range(1, j):
                s += a[i] * p[j - i]
            p.append(-s)
        # p_k = -(k a[k] + sum_{i<k} a[i] p[k-i]); N_k = B + k a[k]
        rest = sum(a[i] * p[k - i] for i in range(1, k))
        row = self.cheb[k]
        lower_sums = sum(row[j] * p[j] for j in range(k))
        B = q ** k + 1 - lower_sums + rest
        counts = self._counts(k, a, p)
        mu_rest = sum(mobius(k // e) * counts[e - 1] for e in divisors(k) if e < k)
        n_min = max(-mu_rest, q ** k + 1 - g * self.ext[k])
        n_max = q ** k + 1 + g * self.ext[k]
        low = -((B - n_min) // k)  # ceil((n_min - B) / k)
        high = (n_max - B) // k
        return low, high

    def _counts(self, k, a, p):
        q = self.q
        out = []
        for d in range(1, k):
            row = self.cheb[d]
            out.append(q ** d + 1 - sum(row[j] * p[j] for j in range(d + 1)))
        return out


def _weil_interval(ctx: FieldContext, g: int, t: int) -> tuple[float, float]:
    r = 2.0 * math.sqrt(ctx.q)
    lo, hi = -r - 1e-9, r + 1e-9
    # all roots are >= -2 sqrt q, so the largest is at most t + (g-1) 2 sqrt q
    hi = min(hi, t + (g - 1) * r + 1e-9)
    lo = max(lo, t - (g - 1) * r - 1e-9)
    return lo, hi


def _search_chunk(args):
    q, g, t, prefix, limit = args
    ctx = FieldContext(q)
    lo, hi = _weil_interval(ctx, g, t)
    budget = _Budget(limit)
    tops = real_rooted_search(g, t, lo, hi, _PlaceBounds(q, g), budget, prefix=prefix)
    return tops, budget.nodes


def enumerate_by_trace(
    ctx: FieldContext,
    g: int,
    t: int,
    work_limit: Optional[int] = None,
    workers: int = 1,
    monotone: bool = True,
) -> CandidateSet:
    """All valid real Weil polynomial candidates of degree g and trace t."""
    if g < 1:
        raise DomainError("genus must be positive")
    N = ctx.q + 1 - t
    if abs(t) > g * ctx.m:
        return CandidateSet(ctx, g, N, [], "trace", "trace outside [-g m, g m]")
    if g == 1:
        tops = [(1, -t)]
        nodes = 1
    else:
        lo, hi = _weil_interval(ctx, g, t)
        bounds = _PlaceBounds(ctx.q, g)
        if workers > 1 and g >= 3:
            a = [1, -t] + [0] * (g - 1)
            low, high = _interlacing_range(g, 2, a, lo, hi, _factorials(g))
            el, eh = bounds(2, a)
            firsts = list(range(max(low, el), min(high, eh) + 1))
            jobs = [(ctx.q, g, t, [v], work_limit) for v in firsts]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_search_chunk, jobs))
            tops = [tp for part, _ in parts for tp in part]
            nodes = sum(n for _, n in parts)
            if work_limit is not None and nodes > work_limit:
                raise WorkLimitExceeded(f"more than {work_limit} search nodes")
        else:
            budget = _Budget(work_limit)
            tops = real_rooted_search(g, t, lo, hi, bounds, budget)
            nodes = budget.nodes
    polys = []
    for top in tops:
        h = _to_intpoly(top)
        if not roots_admissible(h, ctx.q):
            continue
        rw = RealWeilPoly.from_poly(ctx, h)
        if validate(rw, monotone=monotone):
            polys.append(rw)
    polys.sort(key=lambda r: r.poly.sort_key())
    return CandidateSet(ctx, g, N, polys, "trace", nodes=nodes)


def candidates(
    ctx: FieldContext,
    g: int,
    N: int,
    work_limit: Optional[int] = None,
    workers: int = 1,
    monotone: bool = True,
    route: Optional[str] = None,
) -> CandidateSet:
    """Every (x + m)^n h_min of degree g with N rational points passing validate.

    Honda-Tate screening is not applied here; the analysis records it per
    candidate.
    """
    ws = ctx.ws_bound(g)
    if N > ws:
        return CandidateSet(ctx, g, N, [], "none", f"N exceeds the Weil-Serre bound {ws}")
    if N < 0:
        raise DomainError("N must be non-negative")
    dft = ws - N
    if route is None:
        route = "table" if dft <= TABLE_ROUTE_MAX_DEFECT else "trace"
    if route == "trace":
        return enumerate_by_trace(ctx, g, ctx.q + 1 - N, work_limit, workers, monotone)
    if dft > 8:
        raise DomainError("table route is limited to defect 8")
    xm = IntPoly.linear(ctx.m)
    polys = []
    for hmin in minimal_realweil(ctx, dft, honda_tate=False, max_degree=g):
        if hmin.degree > g:
            continue
        t_min = hmin.poly.trace() if hmin.degree else 0
        if ctx.m * hmin.degree + t_min != dft:
            continue
        n = g - hmin.degree
        facs = hmin.factors + (((xm, n),) if n else ())
        h = RealWeilPoly(ctx, facs)
        if validate(h, monotone=monotone):
            polys.append(h)
    polys.sort(key=lambda r: r.poly.sort_key())
    return CandidateSet(ctx, g, N, polys, "table")

"""Elimination of candidate real Weil polynomials.

A candidate h is split into two complementary groups of irreducible factors.
The absolute resultant of the two radicals bounds the gluing exponent s of
the corresponding isogeny factors, and small values of s force strong
geometric consequences (no curve at all when s = 1, a double cover when
s = 2, a low-degree map to an elliptic curve when one side is elliptic).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .enumeration import WorkLimitExceeded, candidates, minimal_realweil
from .exact import DomainError, IntPoly, factor_integer, resultant
from .isogeny import (
    Unknown,
    elliptic_trace_admissible,
    exceptional_defect_bound,
    honda_tate_exponent,
)
from .weil import FieldContext, RealWeilPoly, p_rank, place_counts

RULESETS = ("paper", "extended")

RULE_TEXT = {
    "HT": "Not Weil polynomial",
    "R1": "resultant=1 method",
    "R2": "resultant=2 method",
    "R3": "elliptic quotient bound",
    "C-ec": "elliptic quotient genus bound",
    "R5": "square-field polarization obstruction",
}

# ---------------------------------------------------------------------------
# literature data

# Best published upper bounds on N_q(g) used when judging a putative quotient.
DEFAULT_KNOWN_BOUNDS = {
    (3, 2): 8,
    (8, 5): 30,
    (4, 5): 17, (4, 10): 27, (4, 11): 29,
    (8, 7): 38, (8, 8): 42, (8, 9): 45, (8, 10): 49, (8, 11): 53, (8, 15): 67,
    (16, 4): 45, (16, 5): 53, (16, 7): 69, (16, 8): 75, (16, 11): 91, (16, 13): 102,
    (16, 14): 107,
    (128, 4): 215, (128, 6): 258, (128, 8): 302, (128, 9): 322, (128, 11): 366,
    (3, 6): 14,
    (9, 9): 50, (9, 10): 54, (9, 11): 58, (9, 12): 62, (9, 13): 65, (9, 14): 69,
    (9, 15): 73, (9, 16): 77, (9, 17): 81, (9, 18): 84,
    (27, 4): 64, (27, 14): 163,
}

# Upper bounds from the 2002 tables that the descent in ``table_bound`` starts from.
PRIOR_BOUNDS = {
    (4, 5): 18, (4, 10): 28, (4, 11): 30,
    (8, 5): 32, (8, 7): 39, (8, 8): 43, (8, 9): 47, (8, 10): 50, (8, 11): 54, (8, 15): 68,
    (16, 4): 46, (16, 5): 54, (16, 7): 70, (16, 8): 76, (16, 11): 92, (16, 13): 103,
    (16, 14): 108,
    (128, 4): 217, (128, 6): 261, (128, 8): 305, (128, 9): 327, (128, 11): 371,
    (3, 6): 15,
    (9, 9): 51, (9, 10): 55, (9, 11): 59, (9, 12): 63, (9, 13): 66, (9, 14): 70,
    (9, 15): 74, (9, 16): 78, (9, 17): 82, (9, 18): 85,
    (27, 4): 66, (27, 14): 164,
}


# Genera where a curve meeting the value is known, so N_q(g) >= value; a table
# descent has nothing to prove below these.
KNOWN_LOWER_BOUNDS = {
    (4, 5): 17, (4, 10): 27, (8, 9): 45, (16, 4): 45, (128, 4): 215,
    (3, 6): 14, (9, 10): 54, (27, 4): 64,
}


def prior_bound(ctx: FieldContext, g: int) -> int:
    ws = ctx.ws_bound(g)
    if (ctx.q, g) in PRIOR_BOUNDS:
        return min(ws, PRIOR_BOUNDS[(ctx.q, g)])
    q = ctx.q
    if q == 32 and 4 <= g <= 15 or q == 27 and 5 <= g <= 13:
        return ws - 2
    if q == 81 and 13 <= g <= 35 and g != 16:
        return ws - 2
    if q == 64 and 11 <= g <= 27 and g != 12:
        return ws - 3
    return ws


# Published results ruling out curves that meet the Weil-Serre bound exactly.
NO_DEFECT_ZERO = (
    (32, 3, None, (), "Lauter-Serre: the bound is not met for q = 32 and g >= 3"),
    (27, 3, None, (), "Lauter-Serre: the bound is not met for q = 27 and g >= 3"),
    (64, 11, 11, (), "Korchmaros-Torres: no maximal-type curve of genus 11 over F_64"),
    (64, 13, 27, (), "Fuhrmann-Torres: no defect-0 curve over F_64 for 13 <= g <= 27"),
    (81, 13, 35, (16,), "Fuhrmann-Torres, Korchmaros-Torres: no defect-0 curve over F_81"),
)


@dataclass(frozen=True)
class KnownBounds:
    table: dict

    @classmethod
    def default(cls) -> "KnownBounds":
        return cls(dict(DEFAULT_KNOWN_BOUNDS))

    @classmethod
    def from_csv(cls, path, base: Optional["KnownBounds"] = None) -> "KnownBounds":
        """Read "q,g,upper" lines ('#' starts a comment); entries override ``base``."""
        out = dict((base or cls.default()).table)
        with open(path, newline="") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                row = [c.strip() for c in next(csv.reader([line]))]
                if len(row) != 3:
                    raise ValueError(f"{path}:{lineno}: expected q,g,upper")
                q, g, upper = (int(c) for c in row)
                out[(q, g)] = upper
        return cls(out)

    def upper(self, q: int, g: int) -> Optional[int]:
        return self.table.get((q, g))


@dataclass(frozen=True)
class RuleSet:
    name: str = "paper"
    known_bounds: KnownBounds = field(default_factory=KnownBounds.default)

    def __post_init__(self):
        if self.name not in RULESETS:
            raise DomainError(f"unknown rule set {self.name!r}")

    @property
    def extended(self) -> bool:
        return self.name == "extended"


# ---------------------------------------------------------------------------
# splittings

def radical_of(h: RealWeilPoly) -> IntPoly:
    out = IntPoly((1,))
    for f, _ in h.factors:
        out = out * f
    return out


@dataclass(frozen=True)
class Splitting:
    indices: tuple  # 1-based indices of the factors on the h1 side
    h1: RealWeilPoly
    h2: RealWeilPoly
    s_upper: int

    @property
    def s_lower(self) -> int:
        return math.prod(factor_integer(self.s_upper).keys()) if self.s_upper > 1 else self.s_upper


def splittings(h: RealWeilPoly) -> list[Splitting]:
    """Unordered two-sided groupings of the distinct factors, in binary counting order.

    The last factor always lands on the h2 side, so each grouping appears once.
    """
    k = len(h.factors)
    out = []
    for mask in range(1, 2 ** (k - 1)):
        left = [h.factors[i] for i in range(k) if mask >> i & 1]
        right = [h.factors[i] for i in range(k) if not mask >> i & 1]
        h1, h2 = RealWeilPoly(h.ctx, tuple(left)), RealWeilPoly(h.ctx, tuple(right))
        s = abs(resultant(radical_of(h1), radical_of(h2)))
        idx = tuple(i + 1 for i in range(k) if mask >> i & 1)
        out.append(Splitting(idx, h1, h2, s))
    return out


# ---------------------------------------------------------------------------
# per-candidate outcome

@dataclass
class CandidateResult:
    h: RealWeilPoly
    place_counts: tuple
    status: str  # Eliminated | Survivor | NotWeil | UnknownValidity
    rule: Optional[str] = None
    splitting: Optional[list] = None
    reasons: list = field(default_factory=list)
    certificate: Optional[dict] = None
    notes: list = field(default_factory=list)

    @property
    def eliminated(self) -> bool:
        return self.status in ("Eliminated", "NotWeil")


def _factor_json(h: RealWeilPoly) -> list:
    return [[list(f.coeffs), k] for f, k in h.factors]


def honda_tate_screen(h: RealWeilPoly):
    """('NotWeil', cert) | ('Unknown', factors) | ('Weil', None)."""
    unknown = []
    for i, (f, k) in enumerate(h.factors, 1):
        e = honda_tate_exponent(f, h.ctx)
        if e is Unknown:
            unknown.append(str(f))
            continue
        if k % e:
            cert = {"rule": "HT", "factor": i, "multiplicity": k, "exponent": e}
            return "NotWeil", cert
    if unknown:
        return "Unknown", unknown
    return "Weil", None


def odd_ramification_degree(places: tuple, g: int) -> int:
    """Sum of the odd d <= g with an odd number of degree-d places."""
    return sum(d for d in range(1, g + 1, 2) if places[d - 1] % 2)


def _quotient_failure(h, places, side: RealWeilPoly, opts: RuleSet) -> Optional[dict]:
    """First reason a double cover C -> D with D on ``side`` is impossible, or None."""
    ctx, g = h.ctx, h.degree
    gD = side.degree
    side_places = place_counts(side, g).place_counts
    degrees = range(1, g + 1, 2) if opts.extended else (1,)
    for d in degrees:
        if places[d - 1] > 2 * side_places[d - 1]:
            return {"check": "point counts", "degree": d, "a": places[d - 1],
                    "b": side_places[d - 1]}
    r = odd_ramification_degree(places, g)
    if 2 * g < 4 * gD - 2 + r:
        return {"check": "Riemann-Hurwitz", "genus": g, "quotient_genus": gD, "r": r}
    if opts.extended:
        bound = opts.known_bounds.upper(ctx.q, gD)
        nD = side_places[0]
        if bound is not None and nD > bound:
            return {"check": "known bounds", "quotient_points": nD, "bound": bound}
        if ctx.p == 2:
            gamma_c, gamma_d = p_rank(h), p_rank(side)
            ram = gamma_c - 1 - 2 * (gamma_d - 1)
            diff = 2 * g - 2 - 2 * (2 * gD - 2)
            if ram < 0 or ram < r or 2 * ram > diff or (ram == 0) != (diff == 0):
                return {"check": "Deuring-Shafarevich", "p_rank": gamma_c,
                        "quotient_p_rank": gamma_d, "r": r, "ramified": ram,
                        "different": diff}
    return None


def _elliptic_side(sp: Splitting):
    """The elliptic side (as x + c, its index 1 or 2) of a splitting, if any."""
    out = []
    for which, side in ((1, sp.h1), (2, sp.h2)):
        if len(side.factors) == 1 and side.factors[0][1] == 1 and side.degree == 1:
            f = side.factors[0][0]
            if honda_tate_exponent(f, side.ctx) == 1:
                out.append((which, f.coeff(0)))
    return out


def _is_one_defect_type(h: RealWeilPoly):
    """n if h = (x+m)^(g-1) (x+m-n), else None."""
    m = h.ctx.m
    xm = IntPoly.linear(m)
    if h.degree < 2:
        return None
    if h.multiplicity(xm) != h.degree - 1 or len(h.factors) != 2:
        return None
    other = [f for f, _ in h.factors if f != xm][0]
    return m - other.coeff(0)


def apply_rules(h: RealWeilPoly, N: int, opts: RuleSet, places: Optional[tuple] = None,
                splits: Optional[list] = None) -> CandidateResult:
    """Rules run rule-major: every splitting is tried for R1 before any R2, and so on."""
    ctx, g = h.ctx, h.degree
    if places is None:
        places = place_counts(h, g).place_counts
    if splits is None:
        splits = splittings(h)
    res = CandidateResult(h, places, "Survivor")

    for sp in splits:
        if sp.s_upper == 1:
            res.status, res.rule, res.splitting = "Eliminated", "R1", list(sp.indices)
            res.certificate = {"rule": "R1", "splitting": list(sp.indices), "resultant": 1}
            return res

    for sp in splits:
        if sp.s_upper != 2:
            continue
        fails = [_quotient_failure(h, places, side, opts) for side in (sp.h1, sp.h2)]
        if all(fails):
            res.status, res.rule, res.splitting = "Eliminated", "R2", list(sp.indices)
            res.reasons = [f["check"] for f in fails]
            res.certificate = {"rule": "R2", "splitting": list(sp.indices), "resultant": 2,
                               "quotients": fails}
            return res
        res.notes.append(f"splitting {list(sp.indices)}: resultant 2, a double cover "
                         f"of side {1 if not fails[0] else 2} is not excluded")

    one_defect = _is_one_defect_type(h)
    for sp in splits:
        for which, c in _elliptic_side(sp):
            e_points = ctx.q + 1 + c
            bound = sp.s_upper * e_points
            if N > bound:
                rule = "R3"
                cert = {"rule": "R3", "splitting": list(sp.indices), "resultant": sp.s_upper,
                        "elliptic_side": which, "elliptic_points": e_points, "points": N}
                if one_defect is not None and c == ctx.m - one_defect:
                    n = one_defect
                    num = (n - 1) * ctx.q - (n - 1) ** 2 + n * ctx.m
                    if g * ctx.m > num:
                        rule = "C-ec"
                        cert["rule"] = rule
                        cert["genus_bound"] = [num, ctx.m]
                res.status, res.rule, res.splitting = "Eliminated", rule, list(sp.indices)
                res.certificate = cert
                return res
            res.notes.append(f"splitting {list(sp.indices)}: #C <= {sp.s_upper}*{e_points} "
                             f"= {bound}, not violated")

    if opts.extended and ctx.is_square and one_defect is not None:
        n = one_defect
        if n >= 1 and math.gcd(n, ctx.p) == 1 and all(
            k == 1 for k in factor_integer(n).values()
        ):
            res.status, res.rule = "Eliminated", "R5"
            res.splitting = list(splits[0].indices) if splits else None
            res.certificate = {"rule": "R5", "splitting": res.splitting, "n": n}
            return res
    return res


# ---------------------------------------------------------------------------
# whole analysis

@dataclass
class AnalysisReport:
    q: int
    g: int
    N: int
    ws_bound: int
    defect: int
    ruleset: str
    candidates: list
    conclusion: str
    notes: list = field(default_factory=list)
    route: str = ""

    @property
    def impossible(self) -> bool:
        return self.conclusion == "Impossible"

    def survivors(self) -> list:
        return [c for c in self.candidates if not c.eliminated]


def _conclude(cands) -> str:
    return "Impossible" if all(c.eliminated for c in cands) else "Undecided"


def analyze(ctx: FieldContext, g: int, N: int, opts: Optional[RuleSet] = None,
            work_limit: Optional[int] = None, workers: int = 1) -> AnalysisReport:
    opts = opts or RuleSet()
    if g < 1 or N < 0:
        raise DomainError("need g >= 1 and N >= 0")
    ws = ctx.ws_bound(g)
    defect = ws - N
    base = dict(q=ctx.q, g=g, N=N, ws_bound=ws, defect=defect, ruleset=opts.name)
    if N > ws:
        return AnalysisReport(**base, candidates=[], conclusion="Impossible",
                              notes=[f"N exceeds the Weil-Serre bound {ws}"])
    floor = exceptional_defect_bound(ctx, g)
    if defect < floor:
        return AnalysisReport(**base, candidates=[], conclusion="Impossible",
                              notes=[f"defect {defect} is below the exceptional-field "
                                     f"bound {floor}"])
    try:
        cs = candidates(ctx, g, N, work_limit=work_limit, workers=workers)
    except WorkLimitExceeded as exc:
        return AnalysisReport(**base, candidates=[], conclusion="Undecided",
                              notes=[f"work limit exceeded: {exc}"])
    results = []
    for h in cs.polys:
        places = place_counts(h, g).place_counts
        verdict, info = honda_tate_screen(h)
        if verdict == "NotWeil":
            results.append(CandidateResult(h, places, "NotWeil", "HT", certificate=info))
            continue
        r = apply_rules(h, N, opts, places)
        if verdict == "Unknown" and r.status != "Eliminated":
            r.status = "UnknownValidity"
            r.notes.append("Honda-Tate data unknown for " + ", ".join(info)
                           + "; the candidate is kept for soundness")
        results.append(r)
    notes = [cs.note] if cs.note else []
    return AnalysisReport(**base, candidates=results, conclusion=_conclude(results),
                          notes=notes, route=cs.route)


# ---------------------------------------------------------------------------
# closed-form bounds

def _types_of_defect(ctx: FieldContext, g: int, d: int) -> list[RealWeilPoly]:
    xm = IntPoly.linear(ctx.m)
    out = []
    for hmin in minimal_realweil(ctx, d, honda_tate=False, max_degree=g):
        if ctx.m * hmin.degree + (hmin.poly.trace() if hmin.degree else 0) != d:
            continue
        n = g - hmin.degree
        out.append(RealWeilPoly(ctx, hmin.factors + (((xm, n),) if n else ())))
    return out


def _ec_genus_limit(ctx: FieldContext, n: int) -> Fraction:
    return Fraction((n - 1) * ctx.q - (n - 1) ** 2 + n * ctx.m, ctx.m)


def defect_exclusion(ctx: FieldContext, g: int, d: int) -> Optional[str]:
    """Why no genus-g curve over F_q can have defect d, from closed-form results only."""
    q, m = ctx.q, ctx.m
    r_floor = exceptional_defect_bound(ctx, g)
    if d < r_floor:
        return f"exceptional field: defect is at least {r_floor}"
    if d == 0:
        for fq, lo, hi, skip, why in NO_DEFECT_ZERO:
            if q == fq and g >= lo and (hi is None or g <= hi) and g not in skip:
                return why
    if d == 1 and g > 2:
        return "Serre: defect 1 is impossible for g > 2"
    if ctx.is_square:
        if d == 2 and q != 4 and g > 2:
            return "square field: defect 2 impossible for g > 2, q != 4"
        if d == 3 and q != 9 and g > 3:
            return "square field: defect 3 impossible for g > 3, q != 9"
        if d == 4 and g > Fraction(3 * q + 4 * m - 9, m):
            return "square field: defect 4 impossible for g > (3q + 4m - 9)/m"
        if d == 4 and ctx.p == 2 and ctx.a // 2 > 2 and g > 2 ** (ctx.a // 2 - 1) + 2:
            return "square field 2^(2e), e > 2: defect 4 impossible for g > 2^(e-1) + 2"
    if d == 2 and g > 5 and g > Fraction(q - 1 + 4 * m, m):
        return "defect-2 double cover bound g > (q - 1 + 4m)/m"
    if d in (2, 3) and g >= 2:
        remaining = []
        for h in _types_of_defect(ctx, g, d):
            verdict, _ = honda_tate_screen(h)
            if verdict == "NotWeil":
                continue
            if any(sp.s_upper == 1 for sp in splittings(h)):
                continue
            remaining.append(h)
        if not remaining:
            return f"every defect-{d} type fails Honda-Tate or has resultant 1"
        if all(_is_one_defect_type(h) == d for h in remaining):
            if d == 2 and g > 3 and g > Fraction(q - 1 + 2 * m, m):
                return "only type [m,...,m,m-2] remains; double cover bound (q - 1 + 2m)/m"
            if g > _ec_genus_limit(ctx, d):
                return f"only type [m,...,m,m-{d}] remains; elliptic quotient genus bound"
    return None


def general_bound(ctx: FieldContext, g: int) -> tuple[int, list]:
    """Upper bound on N_q(g) from closed-form filters, with the reason for each skipped defect."""
    if g < 1:
        raise DomainError("genus must be positive")
    ws = ctx.ws_bound(g)
    provenance = []
    d = 0
    while d <= ws:
        why = defect_exclusion(ctx, g, d)
        if why is None:
            break
        provenance.append((d, why))
        d += 1
    return ws - d, provenance


@dataclass
class TableRow:
    q: int
    g: int
    ws_bound: int
    start: int
    bound: int
    steps: list  # (N, disposition)
    complete: bool = True


def table_bound(ctx: FieldContext, g: int, opts: Optional[RuleSet] = None,
                floor: Optional[int] = None, work_limit: Optional[int] = None,
                workers: int = 1, start: Optional[int] = None) -> TableRow:
    """Descend N from the prior bound until a value is not ruled out."""
    ws = ctx.ws_bound(g)
    top = prior_bound(ctx, g) if start is None else start
    lowest = 0 if floor is None else floor
    steps = []
    N = top
    while N >= lowest:
        why = defect_exclusion(ctx, g, ws - N)
        if why:
            steps.append((N, "excluded: " + why))
            N -= 1
            continue
        rep = analyze(ctx, g, N, opts, work_limit=work_limit, workers=workers)
        if rep.impossible:
            steps.append((N, f"impossible: {len(rep.candidates)} candidates eliminated"))
            N -= 1
            continue
        partial = any(n.startswith("work limit") for n in rep.notes)
        steps.append((N, "undecided: " + ("work limit exceeded" if partial else
                                          f"{len(rep.survivors())} survivors")))
        return TableRow(ctx.q, g, ws, top, N, steps, not partial)
    return TableRow(ctx.q, g, ws, top, N, steps, False)

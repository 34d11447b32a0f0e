"""Independent replay of the evidence stored in a JSON analysis report.

Only the exact, weil and isogeny layers are used here; nothing from the rule
engine is trusted.  Every number in a certificate is recomputed and compared.
"""

from __future__ import annotations

import math
from typing import Optional

from .exact import DomainError, IntPoly, factor, factor_integer, floor_two_sqrt, prime_power, resultant
from .isogeny import Unknown, exceptional_defect_bound, honda_tate_exponent
from .weil import FieldContext, RealWeilPoly, p_rank, place_counts, validate

ELIMINATING = ("Eliminated", "NotWeil")


class ReplayError(Exception):
    pass


def _check(cond: bool, msg: str):
    if not cond:
        raise ReplayError(msg)


def _radical(polys) -> IntPoly:
    out = IntPoly((1,))
    for f in polys:
        out = out * f
    return out


def _sides(factors, idx):
    k = len(factors)
    _check(isinstance(idx, list) and idx, "splitting must be a non-empty list")
    _check(idx == sorted(set(idx)), "splitting indices must be increasing")
    _check(all(isinstance(i, int) and 1 <= i < k for i in idx),
           "splitting indices must name factors other than the last")
    left = [factors[i - 1] for i in idx]
    right = [factors[i] for i in range(k) if i + 1 not in idx]
    return left, right


def _replay_quotient(ev: dict, q, g, h, side, places, extended, known_bounds):
    ctx = h.ctx
    gD = side.degree
    side_places = place_counts(side, g).place_counts
    r = sum(d for d in range(1, g + 1, 2) if places[d - 1] % 2)
    check = ev.get("check")
    if check == "point counts":
        d = ev["degree"]
        _check(isinstance(d, int) and 1 <= d <= g and d % 2 == 1, "bad degree")
        _check(extended or d == 1, "base rules only compare rational points")
        _check(ev["a"] == places[d - 1] and ev["b"] == side_places[d - 1], "place counts differ")
        _check(ev["a"] > 2 * ev["b"], "point-count inequality holds")
    elif check == "Riemann-Hurwitz":
        _check(ev["genus"] == g and ev["quotient_genus"] == gD and ev["r"] == r, "genus data differ")
        _check(2 * g < 4 * gD - 2 + r, "Riemann-Hurwitz inequality holds")
    elif check == "known bounds":
        _check(extended, "known bounds are an extended rule")
        bound = known_bounds.get((q, gD)) if known_bounds is not None else None
        _check(bound is not None and ev["bound"] == bound, "bound not in the known-bounds table")
        _check(ev["quotient_points"] == side_places[0] > bound, "quotient point count")
    elif check == "Deuring-Shafarevich":
        _check(extended and ctx.p == 2, "Deuring-Shafarevich applies to p = 2 in extended mode")
        gc, gd = p_rank(h), p_rank(side)
        ram = gc - 1 - 2 * (gd - 1)
        diff = 2 * g - 2 - 2 * (2 * gD - 2)
        _check((ev["p_rank"], ev["quotient_p_rank"], ev["r"], ev["ramified"], ev["different"])
               == (gc, gd, r, ram, diff), "p-rank data differ")
        _check(ram < 0 or ram < r or 2 * ram > diff or (ram == 0) != (diff == 0),
               "Deuring-Shafarevich accounting is consistent")
    else:
        raise ReplayError(f"unknown quotient check {check!r}")


def _replay_candidate(c: dict, rep: dict, known_bounds):
    q, g, N = rep["q"], rep["g"], rep["N"]
    ctx = FieldContext(q)
    extended = rep["ruleset"] == "extended"
    factors = []
    for coeffs, k in c["factors"]:
        f = IntPoly(coeffs)
        _check(f.is_monic() and f.degree >= 1, f"factor {f} is not monic")
        fl = factor(f)
        _check(len(fl) == 1 and fl[0][1] == 1, f"factor {f} is not irreducible")
        _check(isinstance(k, int) and k >= 1, "bad multiplicity")
        factors.append((f, k))
    _check([f.sort_key() for f, _ in factors] == sorted({f.sort_key() for f, _ in factors}),
           "factors must be distinct and sorted")
    h = RealWeilPoly(ctx, tuple(factors))
    _check(h.degree == g, "degree differs from genus")
    _check(q + 1 - h.poly.trace() == N, "trace does not give N")
    places = place_counts(h, g).place_counts
    _check(list(places) == c["place_counts"], "place counts differ")
    _check(bool(validate(h)), "candidate fails numerical validation")
    status, cert = c["status"], c["certificate"]
    if status not in ELIMINATING:
        return
    _check(isinstance(cert, dict), "missing certificate")
    _check(cert.get("rule") == c["rule"], "certificate rule differs")
    rule = cert["rule"]
    if status == "NotWeil":
        _check(rule == "HT", "NotWeil needs a Honda-Tate certificate")
        first = None
        for i, (f, k) in enumerate(factors, 1):
            e = honda_tate_exponent(f, ctx)
            _check(e is not Unknown, "exponent unknown")
            if k % e:
                first = (i, k, e)
                break
        _check(first is not None, "all multiplicities are admissible")
        _check((cert["factor"], cert["multiplicity"], cert["exponent"]) == first,
               "Honda-Tate evidence differs")
        return
    _check(c["splitting"] == cert.get("splitting"), "splitting differs from certificate")
    if rule == "R5":
        _check(extended and ctx.is_square, "R5 needs square q in extended mode")
        n = cert["n"]
        xm = IntPoly.linear(ctx.m)
        _check(len(factors) == 2 and (xm, g - 1) in factors
               and (IntPoly.linear(ctx.m - n), 1) in factors, "type differs")
        _check(n >= 1 and math.gcd(n, ctx.p) == 1
               and all(v == 1 for v in factor_integer(n).values()), "n must be squarefree, prime to p")
        _check(c["splitting"] == [1] or c["splitting"] is None, "R5 splitting")
        return
    left, right = _sides(factors, cert["splitting"])
    s = abs(resultant(_radical(f for f, _ in left), _radical(f for f, _ in right)))
    _check(cert["resultant"] == s, "resultant differs")
    h1, h2 = RealWeilPoly(ctx, tuple(left)), RealWeilPoly(ctx, tuple(right))
    if rule == "R1":
        _check(s == 1, "resultant is not 1")
    elif rule == "R2":
        _check(s == 2, "resultant is not 2")
        quotients = cert["quotients"]
        _check(isinstance(quotients, list) and len(quotients) == 2, "need two quotient records")
        _check(c["reasons"] == [ev["check"] for ev in quotients], "reasons differ")
        for side, ev in zip((h1, h2), quotients):
            _replay_quotient(ev, q, g, h, side, places, extended, known_bounds)
    elif rule in ("R3", "C-ec"):
        which = cert["elliptic_side"]
        _check(which in (1, 2), "bad elliptic side")
        side = h1 if which == 1 else h2
        _check(side.degree == 1 and side.factors[0][1] == 1, "side is not elliptic")
        lin = side.factors[0][0]
        _check(honda_tate_exponent(lin, ctx) == 1, "elliptic factor is not realized")
        ep = q + 1 + lin.coeff(0)
        _check(cert["elliptic_points"] == ep and cert["points"] == N, "point data differ")
        _check(N > s * ep, "elliptic quotient inequality holds")
        if rule == "C-ec":
            n = ctx.m - lin.coeff(0)
            other = h2 if which == 1 else h1
            _check(other.factors == ((IntPoly.linear(ctx.m), g - 1),), "type differs")
            bound = [(n - 1) * q - (n - 1) ** 2 + n * ctx.m, ctx.m]
            _check(cert["genus_bound"] == bound and g * bound[1] > bound[0], "genus bound")
    else:
        raise ReplayError(f"unknown rule {rule!r}")


def _recount(rep: dict) -> None:
    from .enumeration import candidates

    cs = candidates(FieldContext(rep["q"]), rep["g"], rep["N"])
    want = sorted(repr([[list(f.coeffs), k] for f, k in h.factors]) for h in cs.polys)
    have = sorted(repr(c["factors"]) for c in rep["candidates"])
    _check(want == have, "candidate list differs from a fresh enumeration")


def verify_report(rep: dict, known_bounds: Optional[dict] = None, recount: bool = False) -> list[str]:
    """Problems found in the report (empty when every claim replays).

    With ``recount`` the candidate list itself is re-enumerated and compared.
    """
    problems = []
    try:
        _check(rep.get("schema") == 1, "unsupported report schema")
        q, g, N = rep["q"], rep["g"], rep["N"]
        prime_power(q)
        m = floor_two_sqrt(q)
        _check(isinstance(g, int) and g >= 1, "bad genus")
        _check(rep["ws_bound"] == q + 1 + g * m, "Weil-Serre bound differs")
        _check(rep["defect"] == rep["ws_bound"] - N, "defect differs")
        _check(rep["ruleset"] in ("paper", "extended"), "unknown rule set")
        cands = rep["candidates"]
        statuses = [c["status"] for c in cands]
        _check(all(s in ("Eliminated", "NotWeil", "Survivor", "UnknownValidity") for s in statuses),
               "unknown status")
        impossible = all(s in ELIMINATING for s in statuses)
        _check(rep["conclusion"] == ("Impossible" if impossible else "Undecided")
               or (rep["conclusion"] == "Undecided" and not cands), "conclusion differs")
        if not cands and rep["conclusion"] == "Impossible":
            if N <= rep["ws_bound"]:
                floor = exceptional_defect_bound(FieldContext(q), g)
                _check(rep["defect"] < floor or rep.get("route") in ("table", "trace"),
                       "empty candidate list without a reason")
        if recount and N <= rep["ws_bound"] and rep["defect"] >= exceptional_defect_bound(
            FieldContext(q), g
        ):
            _recount(rep)
    except (ReplayError, KeyError, TypeError, DomainError) as exc:
        return [f"report: {exc}"]
    for i, c in enumerate(rep["candidates"], 1):
        try:
            _replay_candidate(c, rep, known_bounds)
        except (ReplayError, KeyError, TypeError, ValueError, DomainError) as exc:
            problems.append(f"candidate {i}: {exc}")
    return problems

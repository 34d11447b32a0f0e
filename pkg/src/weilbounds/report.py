"""JSON and text renderings of analysis reports."""

from __future__ import annotations

import json

from .eliminate import RULE_TEXT, AnalysisReport, CandidateResult, splittings
from .exact import IntPoly, resultant
from .weil import FieldContext, RealWeilPoly

SCHEMA_VERSION = 1


def candidate_to_dict(c: CandidateResult) -> dict:
    return {
        "factors": [[list(f.coeffs), k] for f, k in c.h.factors],
        "place_counts": list(c.place_counts),
        "status": c.status,
        "rule": c.rule,
        "splitting": c.splitting,
        "reasons": list(c.reasons),
        "certificate": c.certificate,
        "notes": list(c.notes),
    }


def report_to_dict(r: AnalysisReport) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "q": r.q,
        "g": r.g,
        "N": r.N,
        "ws_bound": r.ws_bound,
        "defect": r.defect,
        "ruleset": r.ruleset,
        "route": r.route,
        "candidates": [candidate_to_dict(c) for c in r.candidates],
        "conclusion": r.conclusion,
        "notes": list(r.notes),
    }


def to_json(r: AnalysisReport) -> str:
    return json.dumps(report_to_dict(r), indent=2, sort_keys=True) + "\n"


def report_from_dict(d: dict) -> AnalysisReport:
    ctx = FieldContext(d["q"])
    cands = []
    for c in d["candidates"]:
        h = RealWeilPoly(ctx, tuple((IntPoly(f), k) for f, k in c["factors"]))
        cands.append(CandidateResult(
            h, tuple(c["place_counts"]), c["status"], c["rule"], c["splitting"],
            list(c["reasons"]), c["certificate"], list(c["notes"]),
        ))
    return AnalysisReport(d["q"], d["g"], d["N"], d["ws_bound"], d["defect"], d["ruleset"],
                          cands, d["conclusion"], list(d["notes"]), d.get("route", ""))


def from_json(text: str) -> AnalysisReport:
    return report_from_dict(json.loads(text))


def _vector(values) -> str:
    return "[ " + ", ".join(str(v) for v in values) + " ]"


def candidate_text(c: CandidateResult) -> str:
    lines = [_vector(c.place_counts), "["]
    facs = [f"    <{f}, {k}>" for f, k in c.h.factors]
    lines.append(",\n".join(facs))
    lines.append("]")
    if c.status in ("Eliminated", "NotWeil"):
        lines.append(f"ELIMINATED: {RULE_TEXT[c.rule]}.")
        if c.splitting:
            lines.append(f"Splitting = {_vector(c.splitting)}")
        if c.reasons:
            lines.append("Reasons: " + ", ".join(c.reasons))
    else:
        lines.append("SURVIVOR." if c.status == "Survivor" else "UNDECIDED: unknown Honda-Tate data.")
        k = len(c.h.factors)
        if k > 1:
            lines.append("Resultants:")
            polys = [f for f, _ in c.h.factors]
            for i in range(k):
                row = [0 if i == j else abs(resultant(polys[i], polys[j])) for j in range(k)]
                lines.append("  " + _vector(row))
        for n in c.notes:
            lines.append(f"Note: {n}")
    return "\n".join(lines)


def to_text(r: AnalysisReport) -> str:
    head = (f"q = {r.q}, g = {r.g}, N = {r.N}  (Weil-Serre bound {r.ws_bound}, "
            f"defect {r.defect}, rules: {r.ruleset})")
    parts = [head]
    for n in r.notes:
        parts.append(f"Note: {n}")
    parts.append("")
    for c in r.candidates:
        parts.append(candidate_text(c))
        parts.append("")
    survivors = len(r.survivors())
    tail = f"CONCLUSION: {r.conclusion}"
    if r.conclusion != "Impossible":
        tail += f" ({survivors} of {len(r.candidates)} candidates survive)"
    parts.append(tail)
    return "\n".join(parts) + "\n"

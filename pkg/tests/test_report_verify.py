import copy
import json

import pytest

from weilbounds.eliminate import DEFAULT_KNOWN_BOUNDS, RuleSet, analyze
from weilbounds.report import from_json, report_to_dict, to_json, to_text
from weilbounds.verify import verify_report
from weilbounds.weil import context

from oracles import numeric_mutations

# (q, g, N, ruleset): the runs behind the headline results plus small cases
# that between them exercise every certificate kind
RUNS = [
    (4, 5, 18, "paper"), (4, 10, 28, "paper"), (8, 9, 47, "paper"), (8, 9, 46, "paper"),
    (3, 6, 15, "paper"), (3, 6, 15, "extended"),
    (2, 3, 5, "paper"), (2, 4, 6, "extended"), (2, 5, 7, "extended"),
    (3, 5, 13, "extended"), (4, 2, 10, "extended"), (4, 2, 9, "paper"), (8, 6, 35, "paper"),
    (4, 5, 30, "paper"), (128, 4, 216, "paper"),
]


@pytest.fixture(scope="module")
def reports():
    return {run: analyze(context(run[0]), run[1], run[2], RuleSet(run[3])) for run in RUNS}


def test_json_roundtrip(reports):
    for rep in reports.values():
        text = to_json(rep)
        back = from_json(text)
        assert report_to_dict(back) == report_to_dict(rep)
        assert to_json(back) == text
        assert to_text(back) == to_text(rep)


def test_verify_accepts_generated_reports(reports):
    for run, rep in reports.items():
        d = json.loads(to_json(rep))
        assert verify_report(d, DEFAULT_KNOWN_BOUNDS, recount=True) == [], run


def test_all_rules_are_exercised(reports):
    rules = {c.rule for rep in reports.values() for c in rep.candidates if c.rule}
    assert {"HT", "R1", "R2", "C-ec", "R5"} <= rules
    checks = {ev["check"] for rep in reports.values() for c in rep.candidates
              if c.rule == "R2" for ev in c.certificate["quotients"]}
    assert checks == {"point counts", "Riemann-Hurwitz", "known bounds", "Deuring-Shafarevich"}


def test_mutation_fuzz_detects_every_numeric_edit(reports):
    dicts = [report_to_dict(r) for r in reports.values()]
    missed = [path for path, m in numeric_mutations(dicts, 100, seed=12345)
              if not verify_report(m, DEFAULT_KNOWN_BOUNDS)]
    assert missed == []


def test_verify_rejects_structural_edits(reports):
    base = json.loads(to_json(reports[(4, 5, 18, "paper")]))
    # survivor promoted to eliminated without evidence
    rep46 = json.loads(to_json(reports[(8, 9, 46, "paper")]))
    s = next(c for c in rep46["candidates"] if c["status"] == "Survivor")
    s["status"], s["rule"] = "Eliminated", "R1"
    s["certificate"] = {"rule": "R1", "resultant": 1, "splitting": [1]}
    s["splitting"] = [1]
    assert verify_report(rep46)
    # dropped candidate is caught by a recount
    dropped = copy.deepcopy(base)
    dropped["candidates"].pop()
    assert verify_report(dropped, recount=True)
    # conclusion flipped
    flipped = copy.deepcopy(base)
    flipped["conclusion"] = "Undecided"
    assert verify_report(flipped)
    # factor coefficient edited
    coeff = copy.deepcopy(base)
    coeff["candidates"][0]["factors"][0][0][0] += 1
    assert verify_report(coeff)
    # known-bounds evidence against a table that lacks the entry
    kb = json.loads(to_json(reports[(3, 5, 13, "extended")]))
    assert verify_report(kb, DEFAULT_KNOWN_BOUNDS) == []
    assert verify_report(kb, {})

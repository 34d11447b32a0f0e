from collections import Counter

import pytest

from weilbounds.eliminate import (
    KnownBounds,
    RuleSet,
    analyze,
    apply_rules,
    defect_exclusion,
    general_bound,
    splittings,
    table_bound,
)
from weilbounds.exact import DomainError, IntPoly
from weilbounds.weil import RealWeilPoly, context


def real_weil(q, *factors):
    return RealWeilPoly(context(q), tuple((IntPoly(c), k) for c, k in factors))


@pytest.mark.parametrize("q,g,gap", [(64, 13, 5), (32, 5, 3), (32, 6, 3), (32, 7, 3),
                                     (32, 8, 3), (81, 20, 5), (128, 4, 2)])
def test_general_bound_rows(q, g, gap):
    ctx = context(q)
    bound, provenance = general_bound(ctx, g)
    assert bound == ctx.ws_bound(g) - gap
    assert [d for d, _ in provenance] == list(range(gap))
    assert defect_exclusion(ctx, g, gap) is None


def test_general_bound_64_13_is_268():
    assert general_bound(context(64), 13)[0] == 268


def test_defect_exclusion_texts():
    assert "exceptional" in defect_exclusion(context(128), 4, 1)
    assert "Serre" in defect_exclusion(context(8), 5, 1)
    assert "defect 3" in defect_exclusion(context(16), 4, 3)
    assert defect_exclusion(context(9), 4, 3) is None


def test_splittings_enumerate_each_grouping_once():
    h = real_weil(4, ((1, 1), 1), ((2, 1), 1), ((3, 1), 2), ((4, 1), 1))
    sps = splittings(h)
    assert len(sps) == 2 ** 3 - 1
    assert all(4 not in sp.indices for sp in sps)
    sp = next(s for s in sps if s.indices == (2,))
    assert sp.s_upper == 2 and sp.s_lower == 2


def test_apply_rules_resultant_one():
    h = real_weil(4, ((3, 1), 2), ((7, 14, 7, 1), 1))
    r = apply_rules(h, 18, RuleSet())
    assert (r.status, r.rule, r.splitting) == ("Eliminated", "R1", [1])


def test_appendix_statuses():
    rep = analyze(context(4), 5, 18)
    assert rep.impossible and len(rep.candidates) == 8
    assert Counter(c.rule for c in rep.candidates) == Counter({"HT": 1, "R1": 5, "R2": 2})
    for c in rep.candidates:
        if c.rule == "R2":
            assert c.reasons == ["point counts", "Riemann-Hurwitz"]


def test_analyze_handles_trivial_inputs():
    rep = analyze(context(4), 5, 30)
    assert rep.impossible and rep.candidates == [] and "Weil-Serre" in rep.notes[0]
    rep = analyze(context(128), 4, 217)
    assert rep.impossible and "exceptional" in rep.notes[0]
    with pytest.raises(DomainError):
        analyze(context(4), 0, 3)


def test_analyze_work_limit_is_reported_as_undecided():
    rep = analyze(context(4), 10, 27, work_limit=10)
    assert rep.conclusion == "Undecided" and rep.notes[0].startswith("work limit")


def test_ruleset_and_bounds_file(tmp_path):
    with pytest.raises(DomainError):
        RuleSet("bogus")
    p = tmp_path / "b.csv"
    p.write_text("# q,g,upper\n3,2,9\n5, 3, 20  # comment\n")
    kb = KnownBounds.from_csv(p)
    assert kb.upper(3, 2) == 9 and kb.upper(5, 3) == 20 and kb.upper(8, 5) == 30
    p.write_text("3,2\n")
    with pytest.raises(ValueError):
        KnownBounds.from_csv(p)


def test_extended_rules_remove_third_survivor():
    base = analyze(context(3), 6, 15, RuleSet("paper"))
    ext = analyze(context(3), 6, 15, RuleSet("extended"))
    assert len(base.survivors()) == 3 and len(ext.survivors()) == 2
    gone = {str(c.h) for c in base.survivors()} - {str(c.h) for c in ext.survivors()}
    killed = [c for c in ext.candidates if str(c.h) in gone]
    assert killed[0].certificate["quotients"][0]["check"] == "known bounds"


def test_table_rows_with_closed_form_filters():
    row = table_bound(context(16), 4, floor=45)
    assert row.bound == 45 and row.steps[0][1].startswith("excluded: square field")
    row = table_bound(context(128), 4, floor=215)
    assert row.bound == 215 and [n for n, _ in row.steps] == [217, 216, 215]
    # 27 is attained, so the descent stops above it
    row = table_bound(context(4), 10, floor=28)
    assert row.steps == [(28, "impossible: 2 candidates eliminated")]
    assert row.bound == 27 and not row.complete

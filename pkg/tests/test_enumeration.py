import numpy as np
import pytest

from weilbounds.enumeration import (
    AUX_LAMBDA,
    AUX_WEIGHTS,
    WorkLimitExceeded,
    auxiliary_function,
    candidates,
    deficiency,
    enumerate_by_trace,
    load_table,
    max_degree_for,
    minimal_realweil,
    save_table,
    smyth_enumerate,
)
from weilbounds.exact import DomainError, IntPoly, all_roots_real_in
from weilbounds.weil import context

from oracles import brute_force_small_deficiency, candidate_key as _key


def test_smyth_table_matches_brute_force():
    tab = smyth_enumerate(2)
    listed = {H for _, H in tab.all() if H.degree <= 3}
    assert listed == brute_force_small_deficiency(2, 3)
    for d, H in tab.all():
        assert deficiency(H) == d


def test_smyth_table_small_counts():
    tab = smyth_enumerate(2)
    by_def = {d: sorted(str(H) for H in v) for d, v in tab.entries.items()}
    assert by_def[0] == ["x - 1"]
    assert len(tab.entries[1]) == 2  # x - 2 and x^2 - 3x + 1


def test_auxiliary_function_lower_bound_on_fine_grid():
    grid = np.concatenate([np.linspace(1e-6, 1.0, 400_001), np.linspace(1.0, 60.0, 1_200_001)])
    with np.errstate(divide="ignore"):
        vals = auxiliary_function(grid)
    assert np.nanmin(vals) >= AUX_LAMBDA
    # every auxiliary polynomial is totally positive and has deficiency <= 3
    for coeffs, w in AUX_WEIGHTS:
        Q = IntPoly(coeffs)
        assert all_roots_real_in(Q, 0, "+inf") and deficiency(Q) <= 3 and w > 0


def test_max_degree_for():
    assert max_degree_for(1) == 2 and max_degree_for(3) == 6
    assert max_degree_for(6) == int(6 / (AUX_LAMBDA - 1))


def test_table_cache_roundtrip(tmp_path):
    tab = smyth_enumerate(3)
    path = tmp_path / "tab.txt"
    save_table(tab, path)
    back = load_table(path)
    assert back.entries == tab.entries
    path.write_text(path.read_text().replace("x", "") + "1; 1; 5 1\n")
    with pytest.raises(ValueError):
        load_table(path)


def test_smyth_domain():
    with pytest.raises(DomainError):
        smyth_enumerate(-1)
    with pytest.raises(DomainError):
        smyth_enumerate(9)


ROUTE_CASES = [(16, 4, 46), (16, 4, 45), (128, 4, 217), (128, 4, 216), (128, 4, 215),
               (27, 4, 66), (32, 4, 75), (8, 4, 25), (4, 3, 14), (9, 3, 28)]


@pytest.mark.parametrize("q,g,N", ROUTE_CASES)
def test_route_equivalence_on_cited_cases(q, g, N):
    ctx = context(q)
    assert ctx.ws_bound(g) - N <= 6
    table = candidates(ctx, g, N, route="table")
    trace = enumerate_by_trace(ctx, g, q + 1 - N)
    assert _key(table) == _key(trace)


def test_route_equivalence_sweep():
    for q in (2, 3, 4, 5, 7, 8, 9):
        ctx = context(q)
        for g in (1, 2, 3):
            ws = ctx.ws_bound(g)
            for N in range(max(0, ws - 6), ws + 1):
                assert _key(candidates(ctx, g, N, route="table")) == \
                    _key(enumerate_by_trace(ctx, g, q + 1 - N)), (q, g, N)


def test_candidates_beyond_bound_and_work_limit():
    ctx = context(4)
    cs = candidates(ctx, 5, 30)
    assert cs.polys == [] and "Weil-Serre" in cs.note
    with pytest.raises(WorkLimitExceeded):
        enumerate_by_trace(context(4), 10, 5 - 27, work_limit=50)


def test_minimal_realweil_defects():
    ctx = context(16)
    for h in minimal_realweil(ctx, 3):
        d = ctx.m * h.degree + (h.poly.trace() if h.degree else 0)
        assert 0 <= d <= 3

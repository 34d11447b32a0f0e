import json

import pytest

from weilbounds.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_exit_codes(capsys):
    code, out, _ = run(capsys, "analyze", 4, 5, 18)
    assert code == 0 and out.count("ELIMINATED") == 8 and "CONCLUSION: Impossible" in out
    code, out, _ = run(capsys, "analyze", 8, 9, 46)
    assert code == 1 and "2 of 85 candidates survive" in out
    code, out, _ = run(capsys, "analyze", 4, 5, 30)
    assert code == 0 and "exceeds the Weil-Serre bound" in out


@pytest.mark.parametrize("argv", [
    ("analyze", 6, 5, 3), ("analyze", 4, 0, 3), ("analyze", "x", 5, 3),
    ("coversearch", "--preset", "q99g9"), ("smyth", "--deficiency", 20), ("nonsense",),
    ("table",), ("verify", "/nonexistent/report.json"),
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_exit_codes_stable_across_worker_counts(capsys):
    a = run(capsys, "analyze", 8, 9, 46, "--format", "json", "--workers", 1)
    b = run(capsys, "analyze", 8, 9, 46, "--format", "json", "--workers", 2)
    assert a[0] == b[0] == 1 and json.loads(a[1]) == json.loads(b[1])


def test_verify_accepts_then_rejects_tampered_report(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "analyze", 4, 5, 18, "-o", path)
    assert code == 0
    code, out, _ = run(capsys, "verify", path, "--recount")
    assert code == 0 and "report verified" in out
    rep = json.loads(path.read_text())
    cand = next(c for c in rep["candidates"] if c["rule"] == "R2")
    cand["certificate"]["resultant"] = 3
    path.write_text(json.dumps(rep))
    code, out, _ = run(capsys, "verify", path)
    assert code == 1 and "resultant differs" in out


def test_table_rows(capsys):
    code, out, _ = run(capsys, "table", 16, 4)
    assert code == 0 and "best upper bound: 45" in out and "square field" in out
    code, out, _ = run(capsys, "table", 128, 4, "--format", "json")
    row = json.loads(out)
    assert code == 0 and row["bound"] == 215 and row["closed_form_bound"] == 215
    code, out, _ = run(capsys, "table", 27, 4)
    assert "coversearch --preset q27g4" in out


def test_misc_subcommands(capsys):
    assert run(capsys, "defect0", 128)[1].strip() == "7"
    out = run(capsys, "exceptional", "--max-exp", 13)[1]
    assert "q = 128" in out and "q = 2048" in out and out.count("q = ") == 2
    code, out, _ = run(capsys, "smyth", "--deficiency", 2, "--no-cache", "--format", "json")
    assert code == 0 and json.loads(out)["max_deficiency"] == 2
    code, out, _ = run(capsys, "hermitian", "--demo")
    assert code == 0 and "identity reached" in out
    code, out, _ = run(capsys, "hermitian", "--random", 20, "--seed", 3, "--format", "json")
    assert code == 0 and json.loads(out)["failures"] == 0


def test_bounds_file_override(capsys, tmp_path):
    # with N_3(2) <= 8 removed from the table the extended rules keep the third survivor
    path = tmp_path / "b.csv"
    path.write_text("3,2,100\n")
    code, out, _ = run(capsys, "analyze", 3, 6, 15, "--ruleset", "extended", "--bounds", path)
    assert code == 1 and "3 of 23 candidates survive" in out
    code, out, _ = run(capsys, "analyze", 3, 6, 15, "--ruleset", "extended")
    assert "2 of 23 candidates survive" in out

import json
from fractions import Fraction

import pytest

from qes_groebner.cli import main
from qes_groebner.errors import ParseError
from qes_groebner.pipeline import parse_problem_text, run_pipeline
from qes_groebner.reports import from_json, to_json, to_markdown, to_table

QUARTIC_FILE = """\
# quartic family, minus branch
potential = x^4 + 4*x^3 + 2*x^2 - mu*x
param.mu = 8
s_max = 2
signs = minus
"""


def test_parse_problem_text():
    spec = parse_problem_text(QUARTIC_FILE)
    assert spec.params == {"mu": Fraction(8)}
    assert spec.s_max == 2 and [s.label for s in spec.signs] == ["minus"]


def test_undeclared_names_become_free():
    spec = parse_problem_text("potential = x^4 + a*x + b\nparam.b = 1\n")
    assert spec.params == {"b": Fraction(1), "a": None}
    assert spec.free_parameters() == ["a"]


@pytest.mark.parametrize("text,line,col", [
    ("potential = x^4\nbogus = 1\n", 2, 1),
    ("potential = x^4\npotential = x^2\n", 2, 1),
    ("potential = x^4 + lambda*x\nparam.lambda = 1\n", 2, 7),
    ("potential = x^4 + p0\n", 1, 19),
    ("potential = 2*x^4\n", 1, 13),
    ("potential = x^4 +\n", 1, 18),
    ("potential = x^4\ns_max = -1\n", 2, 9),
    ("just text\n", 1, 1),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_problem_text(text)
    assert (info.value.line, info.value.column) == (line, col), str(info.value)


def test_report_json_deterministic_and_round_trips():
    spec = parse_problem_text(QUARTIC_FILE)
    a = to_json(spec, run_pipeline(spec))
    b = to_json(spec, run_pipeline(parse_problem_text(QUARTIC_FILE)))
    assert a == b
    spec_dict, reports = from_json(a)
    assert spec_dict == spec.to_dict()
    assert to_json(spec, reports) == a
    data = json.loads(a)
    assert data["summary"]["cases"] == 3
    s1 = [c for c in data["cases"] if c["s"] == 1][0]
    assert s1["T"] == "lambda^2 - 6*lambda + 1"
    assert sorted(p["lambda"] for p in s1["eigenpairs"]) == ["3 + 2*sqrt(2)", "3 - 2*sqrt(2)"]


def test_markdown_and_table_render():
    spec = parse_problem_text(QUARTIC_FILE)
    reports = run_pipeline(spec)
    md = to_markdown(spec, reports)
    assert md.startswith("# Potential V(x) = x^4 + 4*x^3 + 2*x^2 - mu*x")
    assert "lambda^2 - 6*lambda + 1" in md
    rows = to_table(reports).splitlines()
    assert rows[0].split("\t")[0] == "s"
    # header, s=0 and s=2 fail quantization for mu = 8, s=1 has two eigenpairs
    assert len(rows) == 1 + 1 + 2 + 1


def test_odd_and_constant_potentials():
    [r] = run_pipeline(parse_problem_text("potential = x^3 + x\n"))
    assert r.verdict == "NotIntegrable" and r.s is None
    [r] = run_pipeline(parse_problem_text("potential = 0\n"))
    assert r.verdict == "Unconstrained"


def test_oscillator_notes_solvable():
    reports = run_pipeline(parse_problem_text("potential = x^2\ns_max = 1\n"))
    assert all("algebraically solvable" in " ".join(r.notes) for r in reports)
    minus = [r for r in reports if r.sign == "minus"]
    assert [r.eigenpairs[0]["lambda"] for r in minus] == ["1", "3"]
    assert all(r.eigenpairs[0]["bound_state"] for r in minus)


@pytest.fixture
def problem(tmp_path):
    path = tmp_path / "quartic.qes"
    path.write_text(QUARTIC_FILE)
    return str(path)


def test_cli_solve_formats(problem, capsys, tmp_path):
    assert main(["solve", problem]) == 0
    assert json.loads(capsys.readouterr().out)["summary"]["cases"] == 3
    assert main(["solve", problem, "--format", "md", "--s-max", "1"]) == 0
    assert "minus branch, s = 1" in capsys.readouterr().out
    out = tmp_path / "r.tsv"
    assert main(["solve", problem, "--format", "table", "-o", str(out)]) == 0
    assert out.read_text().startswith("s\tsign")


def test_cli_groebner(problem, capsys):
    assert main(["groebner", problem, "--s", "1", "--sign", "minus"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "# order: lex p0 > lambda"
    assert "lambda^2 - 6*lambda + 1" in out


def test_cli_groebner_unsatisfiable_quantization(problem, capsys):
    assert main(["groebner", problem, "--s", "0", "--sign", "minus"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "1"


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.qes"
    bad.write_text("potential = 3*x^4\n")
    assert main(["solve", str(bad)]) == 1
    assert "line 1" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.qes")]) == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1
    assert main(["reproduce", "--table", "nope"]) == 1


def test_cli_budget_exit_code(tmp_path, capsys):
    hard = tmp_path / "hard.qes"
    hard.write_text("potential = x^8+4*x^7+4*x^6+mu*x^3+delta*x^2+2*x\ns_max = 5\nsigns = plus\n")
    assert main(["groebner", str(hard), "--s", "5", "--sign", "plus", "--max-seconds", "0"]) == 3
    assert "budget" in capsys.readouterr().err


def test_cli_reproduce_single_table(capsys):
    assert main(["reproduce", "--table", "7"]) == 0
    out = capsys.readouterr().out
    assert "5 passed, 0 flagged, 0 failed" in out


def test_cli_reproduce_all_reports_known_conflicts(capsys):
    assert main(["reproduce"]) == 2
    out = capsys.readouterr().out
    failed = [line.split()[:2] for line in out.splitlines() if " FAIL " in line]
    assert failed == [["table5", "s=10"], ["table15", "plus"], ["table15", "minus"]]

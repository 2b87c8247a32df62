from __future__ import annotations

import io
import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from shadowtrace.cli import main
from shadowtrace.groups import TransferMatrix

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden" / "s3_a3_transfer.json"


def schema(name):
    return json.loads(resources.files("shadowtrace").joinpath("schemas", name).read_text())


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


GOOD_DOC = """\
0cell A, B;
1cell X : A -> B;
1cell Y : B -> A;
2cell f : X => X;
dualpair p : (X, Y);
shadow;
prove tri : (coev[p] (x) id[X]) ; (id[X] (x) eval[p]) == id[X] by {
  R1[p] @ / { W1=U[A], W2=U[B] }
}
search sq : theta[X, Y] ; theta[Y, X] == sid[X (x) Y] budget 1000 depth 6;
search unit : f ; id[X] == f budget 100 depth 4;
"""

BAD_DOC = GOOD_DOC + "2cell g : X => X;\nsearch free : f == g budget 50 depth 3;\n"


@pytest.fixture
def good(tmp_path):
    p = tmp_path / "good.st"
    p.write_text(GOOD_DOC)
    return p


class TestTransfer:
    def test_golden_json(self):
        code, out = run("transfer", "--group", DATA / "s3.json", "--subgroup", "a3", "--format", "json")
        assert code == 0
        assert out.encode() == GOLDEN.read_bytes()
        jsonschema.validate(json.loads(out), schema("transfer_matrix.schema.json"))

    def test_table_rows(self):
        code, out = run("transfer", "--group", DATA / "s3.json", "--subgroup", "a3", "--format", "table")
        assert code == 0
        labels = [line.split()[0] for line in out.splitlines()[1:]]
        assert labels == ["e", "(123)", "(132)"]

    def test_table_and_json_agree(self):
        _, js = run("transfer", "--group", DATA / "s3.json", "--subgroup", "a3", "--format", "json")
        _, tb = run("transfer", "--group", DATA / "s3.json", "--subgroup", "a3", "--format", "table")
        assert TransferMatrix.parse_table(tb) == json.loads(js)["entries"]

    def test_bg_check_on_z4(self):
        code, out = run("transfer", "--group", DATA / "z4.json", "--subgroup", "{0,2}", "--check-bg")
        assert code == 0
        assert "composite = 2" in out and "Pass" in out

    def test_all_checks(self):
        code, out = run("transfer", "--group", DATA / "z4.json", "--subgroup", "{0,2}",
                        "--check-bg", "--check-euler", "--cross-model")
        assert code == 0 and out.count("Pass") == 3

    def test_json_keeps_stdout_clean(self, capsys):
        code, out = run("transfer", "--group", DATA / "z4.json", "--subgroup", "{0,2}",
                        "--check-bg", "--format", "json")
        assert code == 0
        json.loads(out)
        assert "Pass" in capsys.readouterr().err

    def test_not_a_subgroup_is_usage_error(self, capsys):
        code, _ = run("transfer", "--group", DATA / "z4.json", "--subgroup", "{0,1}")
        assert code == 2
        assert "not closed" in capsys.readouterr().err

    def test_deterministic(self):
        args = ("transfer", "--group", DATA / "s3.json", "--subgroup", "a3", "--format", "json")
        assert run(*args) == run(*args)


class TestCheck:
    def test_good_document(self, good):
        code, out = run("check", good)
        assert code == 0
        assert [line.split()[0] for line in out.splitlines()] == ["Proved"] * 3

    def test_failing_task_is_named(self, tmp_path, capsys):
        p = tmp_path / "bad.st"
        p.write_text(BAD_DOC)
        code, out = run("check", p)
        assert code == 1
        assert "Unknown" in out
        assert "first failing task: free" in capsys.readouterr().err

    def test_json_report_schema(self, good):
        code, out = run("check", good, "--format", "json")
        rep = json.loads(out)
        jsonschema.validate(rep, schema("run_report.schema.json"))
        assert rep["ok"] and code == 0

    def test_jobs_preserve_order(self, good):
        _, one = run("check", good, "--format", "json")
        _, two = run("check", good, "--format", "json", "--jobs", "2")
        names = lambda s: [t["name"] for t in json.loads(s)["tasks"]]  # noqa: E731
        assert names(one) == names(two) == ["tri", "sq", "unit"]

    def test_models_document(self):
        code, out = run("check", DATA / "models.st")
        assert code == 0, out

    def test_parse_error_exit_code(self, tmp_path, capsys):
        p = tmp_path / "broken.st"
        p.write_text("0cell A;\n1cell X : A => A;\n")
        assert run("check", p)[0] == 2
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run("check", tmp_path / "nope.st")[0] == 2

    def test_usage_errors(self):
        assert run()[0] == 2
        assert run("frobnicate")[0] == 2
        assert run("check", DATA / "models.st", "--jobs", "0")[0] == 2


class TestOtherCommands:
    def test_corpus(self):
        code, out = run("corpus")
        assert code == 0
        assert out and all(line.startswith("Proved") for line in out.splitlines())

    def test_normalize(self):
        code, out = run("normalize", DATA / "models.st", "--expr", "twice")
        assert code == 0 and out.strip()
        assert run("normalize", DATA / "models.st", "--expr", "missing")[0] == 2

    def test_normalize_goal(self, good):
        code, out = run("normalize", good, "--expr", "unit")
        assert code == 0 and out.splitlines()[-1] == "equal"

    def test_trace_json(self):
        code, out = run("trace", "--model", "bimod", DATA / "models.st", "--format", "json")
        assert code == 0
        art = json.loads(out)
        jsonschema.validate(art, schema("trace_matrix.schema.json"))
        # exact rationals travel as strings
        assert art["entries"] == [["1", "0"], ["0", "1"]]

    def test_trace_table_matches_json(self):
        _, js = run("trace", "--model", "bimod", DATA / "models.st", "--format", "json")
        _, tb = run("trace", "--model", "bimod", DATA / "models.st")
        rows = [line.split()[1:] for line in tb.splitlines()[2:]]
        entries = [[Fraction(x) for x in r] for r in json.loads(js)["entries"]]
        assert [[Fraction(x) for x in r] for r in rows] == entries

    def test_trace_unknown_model(self):
        assert run("trace", "--model", "groups", DATA / "models.st")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shadowtrace.cli", "transfer", "--group",
                           str(DATA / "s3.json"), "--subgroup", "a3", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.encode() == GOLDEN.read_bytes()

import io
import subprocess
import sys

import pytest

from conftest import EXAMPLE_EN, EXAMPLE_TA2
from tagforge.cli import main


class Stdin(io.StringIO):
    def __init__(self, text="", tty=False):
        super().__init__(text)
        self._tty = tty

    def isatty(self):
        return self._tty


def run(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err, Stdin(stdin))
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def bad_grammar(tmp_path):
    p = tmp_path / "bad.tag"
    p.write_text('(tree :name "x" :class auxiliary :anchor-pos ("RB") (S (NP :foot) (A :anchor)))\n',
                 encoding="utf-8")
    return str(p)


class TestValidate:
    def test_bundled_ok(self):
        assert run("validate", "english.tag") == (0, "", "")

    def test_foot_mismatch(self, bad_grammar):
        code, out, _ = run("validate", bad_grammar)
        assert code == 3
        assert "FootRootMismatch" in out and ":1:56:" in out

    def test_missing_file(self):
        code, _, err = run("validate", "/no/such/grammar.tag")
        assert code == 2 and "no such grammar" in err

    def test_syntax_error(self, tmp_path):
        p = tmp_path / "g.tag"
        p.write_text("(tree", encoding="utf-8")
        code, _, err = run("validate", str(p))
        assert code == 2 and "1:1" in err


class TestParse:
    def test_deps(self):
        code, out, _ = run("parse", "--grammar", "english", "--format", "deps", stdin=EXAMPLE_EN)
        assert code == 0
        assert out.splitlines()[0] == "== parse 1/1 =="
        assert "nsubj(saw-4, man-3)" in out.splitlines()

    def test_argstruct(self):
        _, out, _ = run("parse", "--grammar", "english", "--format", "argstruct", stdin=EXAMPLE_EN)
        assert out.splitlines()[1:3] == ["saw(man, Mary, Yesterday)", "man(a)"]

    @pytest.mark.parametrize("fmt, needle", [
        ("derivation", "  b_yesterday[Yesterday] <adjoin @ 0>"),
        ("derived", "(S (Ad (ADV Yesterday)) (S (NP (D a) (N man)) (VP (V saw) (NP (N Mary)))))"),
        ("paper", "saw\ta_saw\t3\tVBD"),
        ("dot", '  a_saw -> b_yesterday [label="adjoin@0"];'),
    ])
    def test_formats(self, fmt, needle):
        code, out, _ = run("parse", "--grammar", "english", "--format", fmt, stdin=EXAMPLE_EN)
        assert code == 0 and needle in out.splitlines()

    def test_tamil_headers(self):
        code, out, err = run("parse", "--grammar", "tamil", "--max-derivations", "3", stdin=EXAMPLE_TA2)
        headers = [line for line in out.splitlines() if line.startswith("==")]
        assert code == 0 and len(headers) == 3
        m = int(headers[0].split("/")[1].rstrip(" ="))
        assert m >= 2 and headers[2] == f"== parse 3/{m} =="
        assert f"showing 3 of {m}" in err

    def test_no_parse(self):
        code, out, err = run("parse", "--grammar", "english", stdin="saw/VBD Mary/NNP")
        assert code == 1 and out == "" and "no parse" in err

    def test_batch_keeps_going(self, tmp_path):
        p = tmp_path / "in.txt"
        p.write_text(f"saw/VBD Mary/NNP\n{EXAMPLE_EN}\n", encoding="utf-8")
        code, out, _ = run("parse", "--grammar", "english", str(p))
        assert code == 1 and "== parse 1/1 ==" in out

    def test_bad_token(self):
        code, _, err = run("parse", "--grammar", "english", stdin="saw")
        assert code == 2 and "1:1" in err

    def test_missing_input(self):
        assert run("parse", "--grammar", "english", "/no/such/input.txt")[0] == 2

    def test_invalid_grammar(self, bad_grammar):
        assert run("parse", "--grammar", bad_grammar, stdin=EXAMPLE_EN)[0] == 3

    def test_deps_need_anchors(self):
        assert run("parse", "--grammar", "count", "--format", "deps", stdin="e/e")[0] == 3

    def test_usage_errors(self):
        assert run("parse", "--grammar", "english", "--format", "xml")[0] == 2
        assert run("parse", "--grammar", "english", "--max-derivations", "0")[0] == 2
        assert run()[0] == 2

    def test_byte_identical(self):
        a = run("parse", "--grammar", "tamil", "--format", "paper", stdin=EXAMPLE_TA2)
        b = run("parse", "--grammar", "tamil", "--format", "paper", stdin=EXAMPLE_TA2)
        assert a == b


class TestOracle:
    def test_count_check(self):
        code, out, err = run("oracle", "--grammar", "count.tag", "--max-ops", "2", "--check-parser")
        assert code == 0 and out == "" and "pass" in err

    def test_english_corpus(self):
        code, _, err = run("oracle", "--grammar", "english.tag", "--max-ops", "5", "--check-parser", stdin=EXAMPLE_EN)
        assert code == 0 and "checked 1 sentences" in err

    def test_language_listing(self):
        code, out, _ = run("oracle", "--grammar", "count", "--max-ops", "3")
        assert code == 0
        assert out.splitlines() == ["e", "a b e c d", "a a b b e c c d d", "a a a b b b e c c c d d d"]

    def test_tty_stdin_means_language(self):
        out, err = io.StringIO(), io.StringIO()
        assert main(["oracle", "--grammar", "count", "--max-ops", "1"], out, err, Stdin(tty=True)) == 0
        assert out.getvalue() == "e\na b e c d\n"

    def test_oracle_parse_listing(self):
        code, out, _ = run("oracle", "--grammar", "english", "--max-ops", "4", stdin=EXAMPLE_EN)
        assert code == 0 and out.startswith("== oracle 1/1 ==\na_saw[saw]\n")

    def test_budget_exceeded(self):
        code, _, err = run("oracle", "--grammar", "tamil", "--max-ops", "8")
        assert code == 4 and "budget exceeded" in err
        assert run("oracle", "--grammar", "count", "--max-ops", "3", "--hard-cap", "2")[0] == 4


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tagforge", "parse", "--grammar", "english", "--format", "deps"],
                          input=EXAMPLE_EN.encode(), capture_output=True)
    assert proc.returncode == 0
    assert b"root(ROOT-0, saw-4)\n" in proc.stdout

import pytest

from tagforge.composition import derivation
from tagforge.formats import bundled_grammar, read_sentences
from tagforge.lexicon import tokens

EXAMPLE_EN = "Yesterday/RB a/DT man/NN saw/VBD Mary/NNP"
EXAMPLE_TA2 = "MOtirattai/NN tirutiya/JJ vAliparai/NN pOIlcAr/NN tEti/RB varukinRanar/VB"


@pytest.fixture(scope="session")
def g_en():
    return bundled_grammar("english")


@pytest.fixture(scope="session")
def g_count():
    return bundled_grammar("count")


@pytest.fixture(scope="session")
def g_amb():
    return bundled_grammar("ambiguity")


@pytest.fixture(scope="session")
def g_ta():
    return bundled_grammar("tamil")


@pytest.fixture(scope="session")
def en_sentence():
    return read_sentences(EXAMPLE_EN)[0]


@pytest.fixture(scope="session")
def ta_sentence():
    return read_sentences(EXAMPLE_TA2)[0]


def fig3():
    """The worked example's derivation, built by hand."""
    return derivation(
        "a_saw", ("saw", 4, "VBD"),
        ("0.1", "subst", derivation("a_man", ("man", 3, "NN"),
                                    ("0.1", "subst", derivation("a_a", ("a", 2, "DT"))))),
        ("0.2.2", "subst", derivation("a_Mary", ("Mary", 5, "NNP"))),
        ("0", "adjoin", derivation("b_yesterday", ("Yesterday", 1, "RB"))),
    )


def count_derivation(k):
    """a_e with k nested adjunctions of b_count."""
    node = None
    for _ in range(k):
        node = derivation("b_count", None, *([("0.2", "adjoin", node)] if node else []))
    return derivation("a_e", None, *([("0", "adjoin", node)] if node else []))


def words(text):
    return tokens(text.split())


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.split("::")[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    if report.when == "call" or report.failed:
        _criteria.setdefault(n, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        runs = _criteria.get(n)
        verdict = "NOT RUN" if runs is None else ("PASS" if all(runs) else "FAIL")
        terminalreporter.write_line(f"criterion {n}: {verdict}  {CRITERIA[n]}")

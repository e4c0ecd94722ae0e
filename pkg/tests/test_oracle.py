import pytest
from hypothesis import given, settings, strategies as st

from conftest import EXAMPLE_EN, count_derivation, fig3, words
from tagforge.chart import enumerate_derivations, parse_forest
from tagforge.composition import DerivationTree
from tagforge.errors import BudgetExceeded
from tagforge.formats import read_grammar, read_sentences
from tagforge.grammar import Grammar
from tagforge.lexicon import tokens
from tagforge.oracle import (OracleBudget, check_equivalence, enumerate_language, language_corpus,
                             oracle_parse, oracle_sound)


def strings(pairs):
    return {" ".join(s) for s, _ in pairs}


def en_vocab():
    return [(t.surface, t.pos) for t in read_sentences(EXAMPLE_EN)[0]]


def test_budget_checks():
    with pytest.raises(ValueError):
        OracleBudget(-1)
    with pytest.raises(ValueError):
        OracleBudget(1, 0)


def test_count_language(g_count):
    assert strings(enumerate_language(g_count, OracleBudget(2))) == {"e", "a b e c d", "a a b b e c c d d"}


def test_english_language(g_en):
    found = strings(enumerate_language(g_en, OracleBudget(5), en_vocab()))
    assert "a man saw Mary" in found
    assert "Yesterday a man saw Mary" in found


def test_empty_grammar():
    assert enumerate_language(Grammar(()), OracleBudget(3)) == set()


def test_max_len_filters(g_count):
    assert strings(enumerate_language(g_count, OracleBudget(3, 5))) == {"e", "a b e c d"}


def test_oracle_parse_examples(g_en, g_count, en_sentence):
    assert oracle_parse(g_en, en_sentence, OracleBudget(5)) == [DerivationTree(fig3())]
    assert oracle_parse(g_count, words("a b e c d"), OracleBudget(3)) == [DerivationTree(count_derivation(1))]
    assert oracle_parse(g_en, tokens(["Mary/NNP", "saw/VBD"]), OracleBudget(5)) == []


def test_oracle_parse_respects_tags(g_en):
    assert oracle_parse(g_en, tokens("a/DT man/NN saw/NN Mary/NNP".split()), OracleBudget(5)) == []


def test_budget_guard(g_ta):
    with pytest.raises(BudgetExceeded):
        enumerate_language(g_ta, OracleBudget(8))
    with pytest.raises(BudgetExceeded):
        enumerate_language(g_ta, OracleBudget(3, hard_cap=10))


def test_oracle_output_is_sound(g_en, g_count, g_ta):
    for g, b in ((g_en, OracleBudget(5)), (g_count, OracleBudget(3)), (g_ta, OracleBudget(3))):
        for words_, d in enumerate_language(g, b):
            assert oracle_sound(g, d, words_)


def test_monotone_in_budget(g_ta):
    small = enumerate_language(g_ta, OracleBudget(2))
    large = enumerate_language(g_ta, OracleBudget(3))
    assert small < large


def test_equivalence_on_examples(g_en, g_count, en_sentence):
    assert check_equivalence(g_en, [en_sentence], OracleBudget(5)).passed
    corpus = [words(" ".join(s)) for s in ("e", "abecd", "aabbeccdd", "abcd", "aabecd", "ee")]
    report = check_equivalence(g_count, corpus, OracleBudget(2))
    assert report.passed and report.sentences == 6 and report.derivations == 3


def test_equivalence_over_tamil_language(g_ta):
    report = check_equivalence(g_ta, None, OracleBudget(3))
    assert report.passed and report.sentences > 20


def test_injected_parser_bug_is_reported(g_amb, g_count):
    def drops_last(g, s):
        return enumerate_derivations(parse_forest(g, s), None)[:-1]

    report = check_equivalence(g_amb, None, OracleBudget(2), parser=drops_last)
    assert not report.passed
    assert [m.kind for m in report.mismatches] == ["missing"]
    assert "oracle only" in report.mismatches[0].describe()

    def accepts_nothing(g, s):
        return []

    report = check_equivalence(g_count, [words("a b e c d")], OracleBudget(2), parser=accepts_nothing)
    assert [m.kind for m in report.mismatches] == ["membership", "missing"]


def test_parser_derivations_beyond_budget_are_ignored(g_count):
    # the parser finds the k=1 derivation, but a zero budget cannot reach it
    report = check_equivalence(g_count, [words("a b e c d")], OracleBudget(0))
    assert report.passed and report.derivations == 0


def test_language_corpus_is_tagged(g_en):
    corpus = language_corpus(g_en, OracleBudget(3), en_vocab())
    lines = [" ".join(f"{t.surface}/{t.pos}" for t in s) for s in corpus]
    assert lines[0] == "Mary/NNP saw/VBD Mary/NNP"
    assert "a/DT man/NN saw/VBD Mary/NNP" in lines


def test_unanchored_literals_tagged_with_themselves(g_count):
    [s] = language_corpus(g_count, OracleBudget(0))
    assert [(t.surface, t.pos) for t in s] == [("e", "e")]


TOY = """
(tree :name "s" :class initial (S (A :subst) (B :subst)))
(tree :name "a1" :class initial (A :na (x :term "x")))
(tree :name "a2" :class initial (A (y :term "y")))
(tree :name "b" :class initial (B (x :term "x")))
(tree :name "wrap" :class auxiliary (A (y :term "y") (A :foot :na)))
(tree :name "eps" :class auxiliary (B (B :foot) (E :eps)))
"""


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from("xy"), min_size=1, max_size=5))
def test_chart_matches_oracle_on_small_strings(s):
    g = read_grammar(TOY)
    b = OracleBudget(4)
    sentence = words(" ".join(s))
    report = check_equivalence(g, [sentence], b)
    assert report.passed, [m.describe() for m in report.mismatches]

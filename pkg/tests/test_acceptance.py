"""End-to-end acceptance checks, one test per criterion.

The terminal summary prints a PASS/FAIL line for each criterion (see
``conftest.py``).
"""

import itertools
import math
import random
import statistics
import time
from importlib import resources

import pytest

from conftest import EXAMPLE_EN, EXAMPLE_TA2, fig3, words
from tagforge.chart import accepted_strings, chart_size, enumerate_derivations, parse_forest, recognize
from tagforge.composition import replay_derivation, validate_derivation, yield_of
from tagforge.dependencies import mine_dependencies
from tagforge.errors import ValidationError
from tagforge.formats import bundled_grammar, read_grammar, read_sentences, render_deps, render_derivation
from tagforge.lexicon import tokens
from tagforge.oracle import OracleBudget, check_equivalence, enumerate_language, language_corpus

CRITERIA = {
    1: "English worked example: one derivation of the expected shape, < 1 s",
    2: "argument structures and typed dependency triples",
    3: "Tamil Example 2: >= 2 parses with rows at {0.1.1} and {0.2.2}, < 2 s",
    4: "count grammar accepts exactly e, abecd, aabbeccdd, aaabbbecccddd up to length 13, < 30 s",
    5: "chart/oracle equivalence on english, count, ambiguity within 4 operations, < 60 s",
    6: "replay soundness on >= 1000 sampled derivations",
    7: "chart growth exponent on the count grammar <= 6",
    8: "validation rejects the four ill-formed grammars with the named codes",
}


def test_criterion_1_english_parse(g_en):
    t0 = time.perf_counter()
    f = parse_forest(g_en, read_sentences(EXAMPLE_EN)[0])
    ds = enumerate_derivations(f)
    elapsed = time.perf_counter() - t0
    assert len(ds) == 1 and f.count() == 1
    root = ds[0].root
    assert root.tree == "a_saw"
    shape = {(str(e.site), e.op, e.child.tree) for e in root.children}
    assert shape == {("0.1", "subst", "a_man"), ("0.2.2", "subst", "a_Mary"), ("0", "adjoin", "b_yesterday")}
    [(site, op, a_a)] = [(str(e.site), e.op, e.child) for e in ds[0].node(["0.1"]).children]
    assert (site, op, a_a.tree) == ("0.1", "subst", "a_a")
    assert root == fig3()
    assert elapsed < 1.0


def test_criterion_2_dependency_functions(g_en):
    [d] = enumerate_derivations(parse_forest(g_en, read_sentences(EXAMPLE_EN)[0]))
    dg = mine_dependencies(g_en, d)
    argstruct = render_deps(dg, "argstruct").splitlines()
    triples = render_deps(dg, "triples").splitlines()
    assert argstruct.count("saw(man, Mary, Yesterday)") == 1
    assert argstruct.count("man(a)") == 1
    for line in ("root(ROOT-0, saw-4)", "nsubj(saw-4, man-3)", "dobj(saw-4, Mary-5)"):
        assert line in triples


def test_criterion_3_tamil_example(g_ta):
    t0 = time.perf_counter()
    ds = enumerate_derivations(parse_forest(g_ta, read_sentences(EXAMPLE_TA2)[0]), None)
    listings = [{row.strip() for row in render_derivation(d, "paper").splitlines()} for d in ds]
    elapsed = time.perf_counter() - t0
    assert len(ds) >= 2
    wanted = {"tirutiya\tbT-nxAnx\t{0.1.1}\t1\tJJ", "pOIlcAr\taT-NXN\t{0.2.2}\t3\tNN"}
    assert any(wanted <= rows for rows in listings)
    assert elapsed < 2.0


def test_criterion_3_full_listing_is_reproduced(g_ta):
    """Stronger than required: every row of the printed listing occurs in
    one parse (parentage aside)."""
    ds = enumerate_derivations(parse_forest(g_ta, read_sentences(EXAMPLE_TA2)[0]), None)
    listing = {
        "varukinRanar\tT-nx0e-VPadjn-V\t5\tVB", "tEti\tbT-ARBs\t{0}\t4\tRB",
        "MOtirattai\tbT-NSN\t{0}\t0\tNN", "tirutiya\tbT-nxAnx\t{0.1.1}\t1\tJJ",
        "pOIlcAr\taT-NXN\t{0.2.2}\t3\tNN", "vAliparai\tbT-NPnx\t{0}\t2\tNN",
    }
    assert any({r.strip() for r in render_derivation(d, "paper").splitlines()} == listing for d in ds)


def test_criterion_4_count_language(g_count):
    t0 = time.perf_counter()
    expected = {"e", "abecd", "aabbeccdd", "aaabbbecccddd"}
    parsed = {"".join(s) for n in range(1, 14) for s in accepted_strings(g_count, n)}
    oracle = {"".join(s) for s, _ in enumerate_language(g_count, OracleBudget(max_ops=3, max_len=13))}
    # the oracle is exhaustive here: every b_count adjunction adds four words
    beyond = {"".join(s) for s, _ in enumerate_language(g_count, OracleBudget(max_ops=4, max_len=13))}
    # literal sweep of every string over the alphabet, as far as is cheap
    swept = {"".join(s) for n in range(1, 6) for s in itertools.product("abcde", repeat=n)
             if recognize(g_count, tokens(list(s)))}
    elapsed = time.perf_counter() - t0
    assert parsed == oracle == beyond == expected
    assert swept == {x for x in expected if len(x) <= 5}
    for s in expected:
        assert recognize(g_count, words(" ".join(s)))
    assert elapsed < 30.0


def test_criterion_5_oracle_equivalence(g_en, g_count, g_amb):
    t0 = time.perf_counter()
    b = OracleBudget(max_ops=4)
    en_words = [(t.surface, t.pos) for t in read_sentences(EXAMPLE_EN)[0]]
    reports = [
        check_equivalence(g_en, None, b),
        check_equivalence(g_en, None, b, vocabulary=en_words),
        check_equivalence(g_count, None, b),
        check_equivalence(g_amb, None, b),
    ]
    elapsed = time.perf_counter() - t0
    for r in reports:
        assert r.sentences > 0
        assert r.passed, [m.describe() for m in r.mismatches]
    assert elapsed < 60.0


def _derivation_pool():
    pool = []
    en = bundled_grammar("english")
    pool += [(en, d, s) for s in read_sentences(EXAMPLE_EN) for d in enumerate_derivations(parse_forest(en, s), None)]
    ta = bundled_grammar("tamil")
    text = resources.files("tagforge").joinpath("data").joinpath("examples.txt").read_text(encoding="utf-8")
    sentences = read_sentences(text)[1:] + language_corpus(ta, OracleBudget(4))
    pool += [(ta, d, s) for s in sentences for d in enumerate_derivations(parse_forest(ta, s), None)]
    count = bundled_grammar("count")
    for k in range(6):
        s = words(" ".join("a" * k + "b" * k + "e" + "c" * k + "d" * k))
        pool += [(count, d, s) for d in enumerate_derivations(parse_forest(count, s), None)]
    amb = bundled_grammar("ambiguity")
    s = tokens(["w/X"])
    pool += [(amb, d, s) for d in enumerate_derivations(parse_forest(amb, s), None)]
    return pool


def test_criterion_6_replay_soundness():
    pool = _derivation_pool()
    sample = random.Random(20240917).sample(pool, 1000)
    failures = []
    for g, d, s in sample:
        if yield_of(replay_derivation(g, d)) != [t.surface for t in s] or validate_derivation(g, d):
            failures.append(render_derivation(d))
    assert len(sample) >= 1000
    assert failures == []


def test_criterion_7_chart_growth(g_count):
    t0 = time.perf_counter()
    ns, sizes = [], []
    for k in (1, 2, 3, 4):
        s = words(" ".join("a" * k + "b" * k + "e" + "c" * k + "d" * k))
        ns.append(len(s))
        sizes.append(chart_size(g_count, s))
    assert ns == [5, 9, 13, 17]
    slope, _ = statistics.linear_regression([math.log(n) for n in ns], [math.log(c) for c in sizes])
    assert slope <= 6.0
    assert time.perf_counter() - t0 < 60.0


BAD_GRAMMARS = {
    "FootRootMismatch": '(tree :name "b" :class auxiliary (S (x :term "x") (NP :foot)))',
    "FootInInitial": '(tree :name "a" :class initial (S (x :term "x") (S :foot)))',
    "DuplicateTreeName": '(tree :name "a" :class initial (S (x :term "x")))\n'
                         '(tree :name "a" :class initial (S (y :term "y")))',
    "SymbolOverlap": '(tree :name "a" :class initial (S (saw :term "saw")))\n'
                     '(tree :name "b" :class initial (S (saw (x :term "x"))))',
}


@pytest.mark.parametrize("code", sorted(BAD_GRAMMARS))
def test_criterion_8_validation(code):
    with pytest.raises(ValidationError) as e:
        read_grammar(BAD_GRAMMARS[code])
    assert code in [d.code for d in e.value.diagnostics]

"""Reference semantics by brute force.

Derivation trees are generated directly from the grammar: every legal
filling of substitution sites and every optional adjunction, up to a
budget of composition operations.  Each candidate is replayed with the
composition module, so the oracle shares no code with the chart parser.
It is meant for tiny grammars and budgets only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .composition import (ADJUNCTION, SUBSTITUTION, DerivationNode, DerivationTree, Lexeme,
                          replay_derivation, validate_derivation, yield_of)
from .chart import enumerate_derivations, parse_forest
from .errors import BudgetExceeded
from .grammar import Grammar, node_at
from .lexicon import Token

HARD_CAP = 10**6
_MARK = "\ue000"  # private-use prefix for anchor markers


@dataclass(frozen=True)
class OracleBudget:
    max_ops: int
    max_len: int = 32
    hard_cap: int = HARD_CAP

    def __post_init__(self):
        if self.max_ops < 0:
            raise ValueError("max_ops must be non-negative")
        if self.max_len < 1:
            raise ValueError("max_len must be at least 1")


class _Space:
    """Derivation shapes of a grammar, counted and listed by exact number
    of operations.  A shape is ``(tree name, ((site, op, shape), ...))``
    with sites in ascending address order."""

    def __init__(self, g: Grammar, weight: Callable[[str], int]):
        self.g = g
        self.weight = weight
        self.sites = {}
        for t in g.trees:
            sites = [(a, SUBSTITUTION, self._fillers(t.root, a, initial=True)) for a in t.substitution_sites()]
            sites += [(a, ADJUNCTION, self._fillers(t.root, a, initial=False)) for a in t.adjunction_sites()]
            self.sites[t.name] = sorted(sites, key=lambda s: s[0].path)
        self._count_memo = {}
        self._fill_memo = {}
        self._list_memo = {}

    def _fillers(self, root, a, initial):
        label = node_at(root, a).label
        pool = self.g.initial_trees if initial else self.g.auxiliary_trees
        return [t.name for t in pool if t.root.label == label]

    def count(self, name, ops):
        key = (name, ops)
        if key not in self._count_memo:
            self._count_memo[key] = self.weight(name) * self._fill_count(name, 0, ops)
        return self._count_memo[key]

    def _fill_count(self, name, i, ops):
        key = (name, i, ops)
        if key in self._fill_memo:
            return self._fill_memo[key]
        sites = self.sites[name]
        if i == len(sites):
            total = int(ops == 0)
        else:
            _, op, fillers = sites[i]
            total = self._fill_count(name, i + 1, ops) if op == ADJUNCTION else 0
            for f in fillers:
                for inner in range(ops):
                    n = self.count(f, inner)
                    if n:
                        total += n * self._fill_count(name, i + 1, ops - 1 - inner)
        self._fill_memo[key] = total
        return total

    def shapes(self, name, ops):
        key = (name, ops)
        if key not in self._list_memo:
            self._list_memo[key] = [(name, edges) for edges in self._fill(name, 0, ops)]
        return self._list_memo[key]

    def _fill(self, name, i, ops):
        sites = self.sites[name]
        if i == len(sites):
            return [()] if ops == 0 else []
        site, op, fillers = sites[i]
        out = list(self._fill(name, i + 1, ops)) if op == ADJUNCTION else []
        for f in fillers:
            for inner in range(ops):
                for child in self.shapes(f, inner):
                    for rest in self._fill(name, i + 1, ops - 1 - inner):
                        out.append(((site, op, child),) + rest)
        return out


def _roots(g: Grammar):
    return [t.name for t in g.initial_trees if t.root.label == g.start]


def _shapes(g: Grammar, b: OracleBudget, weight):
    space = _Space(g, weight)
    roots = _roots(g)
    total = sum(space.count(r, k) for r in roots for k in range(b.max_ops + 1))
    if total > b.hard_cap:
        raise BudgetExceeded(f"{total} derivations within {b.max_ops} operations exceed the cap of {b.hard_cap}")
    for k in range(b.max_ops + 1):
        for r in roots:
            yield from space.shapes(r, k)


def _anchored(g, shape):
    """Pre-order list of the anchored tree names in a shape."""
    name, edges = shape
    out = [name] if g.tree(name).has_anchor else []
    for _, _, child in edges:
        out += _anchored(g, child)
    return out


def _build(g, shape, lexemes):
    """DerivationNode for a shape, consuming ``lexemes`` in pre-order."""
    name, edges = shape
    lex = next(lexemes) if g.tree(name).has_anchor else None
    return DerivationNode(name, lex, tuple((s, op, _build(g, c, lexemes)) for s, op, c in edges))


def _marked_yield(g, shape):
    """Yield of a shape with each anchor bound to a unique marker; returns
    the yield and the 1-based position of every anchor (pre-order)."""
    n = len(_anchored(g, shape))
    marks = [Lexeme(f"{_MARK}{k}", k + 1) for k in range(n)]
    words = yield_of(replay_derivation(g, _build(g, shape, iter(marks))))
    where = {w: p for p, w in enumerate(words, 1) if w.startswith(_MARK)}
    return words, [where[m.surface] for m in marks]


def _key(node: DerivationNode):
    lex = node.lexeme.index if node.lexeme else 0
    return (node.tree, lex, tuple((e.site.path, e.op, _key(e.child)) for e in node.children))


def placeholder_vocabulary(g: Grammar) -> list:
    """One stand-in word per anchor tag, spelled as the tag itself."""
    tags = sorted({p for t in g.trees if t.anchor_pos for p in t.anchor_pos})
    return [(p, p) for p in tags]


def enumerate_language(g: Grammar, b: OracleBudget, vocabulary=None) -> set:
    """All (surface tuple, derivation) pairs with at most ``b.max_ops``
    compositions and at most ``b.max_len`` words.  Anchors are filled from
    ``vocabulary`` (``(surface, pos)`` pairs), by default one placeholder
    word per tag."""
    vocab = placeholder_vocabulary(g) if vocabulary is None else list(vocabulary)
    choices = {t.name: [(w, p) for w, p in vocab if p in t.anchor_pos]
               for t in g.trees if t.has_anchor and t.anchor_pos}
    weight = lambda name: len(choices[name]) if name in choices else 1
    out = set()
    for shape in _shapes(g, b, weight):
        anchored = _anchored(g, shape)
        if any(not choices.get(a) for a in anchored):
            continue
        words, positions = _marked_yield(g, shape)
        if len(words) > b.max_len:
            continue
        for pick in itertools.product(*(choices[a] for a in anchored)):
            surfaces = list(words)
            lexemes = []
            for (w, p), pos in zip(pick, positions):
                surfaces[pos - 1] = w
                lexemes.append(Lexeme(w, pos, p))
            out.add((tuple(surfaces), DerivationTree(_build(g, shape, iter(lexemes)))))
    return out


def language_corpus(g: Grammar, b: OracleBudget, vocabulary=None) -> list:
    """Distinct tagged sentences among the oracle's yields, in a stable order.
    Literal terminals are tagged with themselves."""
    seen = set()
    for _, d in enumerate_language(g, b, vocabulary):
        words = yield_of(replay_derivation(g, d))
        tags = {n.lexeme.index: n.lexeme.pos for _, n in d.nodes() if n.lexeme is not None}
        seen.add(tuple((w, tags.get(i, w)) for i, w in enumerate(words, 1)))
    return [[Token(w, p, i) for i, (w, p) in enumerate(s, 1)] for s in sorted(seen, key=lambda s: (len(s), s))]


def oracle_parse(g: Grammar, sentence, b: OracleBudget) -> list:
    """Every derivation within budget whose yield is the sentence, with
    anchors bound to the tokens at their yield positions."""
    sentence = list(sentence)
    n = len(sentence)
    if n > b.max_len:
        return []
    found = set()
    for shape in _shapes(g, b, lambda name: 1):
        words, positions = _marked_yield(g, shape)
        if len(words) != n:
            continue
        anchored = _anchored(g, shape)
        anchor_at = dict(zip(positions, anchored))
        ok = True
        for p, (w, tok) in enumerate(zip(words, sentence), 1):
            if p in anchor_at:
                ok = tok.pos in g.tree(anchor_at[p]).anchor_pos
            else:
                ok = w == tok.surface
            if not ok:
                break
        if not ok:
            continue
        lexemes = [Lexeme(sentence[p - 1].surface, p, sentence[p - 1].pos) for p in positions]
        found.add(_build(g, shape, iter(lexemes)))
    return [DerivationTree(r) for r in sorted(found, key=_key)]


@dataclass(frozen=True)
class Mismatch:
    sentence: tuple
    kind: str  # "membership", "missing" (oracle only) or "extra" (parser only)
    derivation: Optional[DerivationTree] = None

    def describe(self) -> str:
        text = " ".join(self.sentence)
        if self.kind == "membership":
            return f"{text}: parser and oracle disagree on membership"
        side = "oracle only" if self.kind == "missing" else "parser only"
        return f"{text}: derivation found by {side}"


@dataclass
class EquivalenceReport:
    sentences: int = 0
    derivations: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def check_equivalence(g: Grammar, corpus, b: OracleBudget, parser=None,
                      vocabulary=None) -> EquivalenceReport:
    """Compare the chart parser with the oracle on each sentence.

    Parser derivations using more than ``b.max_ops`` operations are out of
    the oracle's reach and are ignored.  With ``corpus=None`` the corpus is
    every sentence the oracle can generate within budget.  ``parser`` maps
    (grammar, sentence) to derivations and defaults to the chart parser.
    """
    if parser is None:
        parser = lambda g, s: enumerate_derivations(parse_forest(g, s), None, max_ops=b.max_ops)
    if corpus is None:
        corpus = language_corpus(g, b, vocabulary)
    report = EquivalenceReport()
    for sentence in corpus:
        sentence = list(sentence)
        report.sentences += 1
        surfaces = tuple(t.surface for t in sentence)
        expected = set(oracle_parse(g, sentence, b))
        got = {d for d in parser(g, sentence) if d.operation_count() <= b.max_ops}
        report.derivations += len(expected)
        if bool(expected) != bool(got):
            report.mismatches.append(Mismatch(surfaces, "membership"))
        for d in sorted(expected - got, key=lambda d: _key(d.root)):
            report.mismatches.append(Mismatch(surfaces, "missing", d))
        for d in sorted(got - expected, key=lambda d: _key(d.root)):
            report.mismatches.append(Mismatch(surfaces, "extra", d))
    return report


def oracle_sound(g: Grammar, d: DerivationTree, words) -> bool:
    """An oracle derivation must validate and replay to its recorded yield."""
    return not validate_derivation(g, d) and yield_of(replay_derivation(g, d)) == list(words)

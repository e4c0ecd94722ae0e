"""All-derivations TAG chart parser.

Items are ``(instance, node, stage, i, l, j, k)``: a node of a tree
instance that covers tokens ``i..l`` (boundary indices), with the foot
node's gap ``j..k`` when the node dominates its tree's foot (``-1`` when
there is no gap).  The stage is the number of children assembled so far
(``PARTIAL``), ``BELOW`` once all children are in and adjunction is still
undecided, or ``DONE``.

Deduction runs bottom-up from an agenda.  Foot items are created lazily:
a foot with gap ``(j, k)`` is only useful to adjoin at a node whose own
span is ``(j, k)``, so feet are introduced when such a node turns up.

Every deduction step is recorded as a backpointer, so the finished chart
is a packed forest from which derivation trees are read off.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .composition import (ADJUNCTION, SUBSTITUTION, DerivationNode, DerivationTree, Edge, Lexeme,
                          replay_derivation, yield_of)
from .errors import EmptySentence, GrammarInvalid
from .grammar import GornAddress, Grammar, validate_grammar, walk
from .lexicon import Token, instantiate, select_trees

log = logging.getLogger(__name__)

BELOW = -1
DONE = -2
NOGAP = -1

DEFAULT_MAX_DERIVATIONS = 64
# above this many derivations, enumeration truncates per item instead of
# materializing the whole forest before sorting
FULL_ENUMERATION_LIMIT = 200_000


class ChartItem(NamedTuple):
    inst: int
    path: tuple
    stage: int
    i: int
    l: int
    j: int = NOGAP
    k: int = NOGAP

    @property
    def gap(self):
        return None if self.j == NOGAP else (self.j, self.k)

    def describe(self, instances):
        stage = {BELOW: "BELOW", DONE: "DONE"}.get(self.stage, f"PARTIAL({self.stage})")
        gap = f" gap=({self.j},{self.k})" if self.j != NOGAP else ""
        return f"[{instances[self.inst].name}@{GornAddress(self.path)} {stage} ({self.i},{self.l}){gap}]"


class _TreeInfo:
    """Per-tree node tables keyed by address path."""

    def __init__(self, tree):
        self.tree = tree
        self.nodes = {a.path: n for a, n in walk(tree.root)}
        self.arity = {p: len(n.children) for p, n in self.nodes.items()}
        self.foot = tree.foot_address.path if tree.is_auxiliary and tree.foot_address else None
        self.root_label = tree.root.label


def _merge_gap(a, b):
    if a.j != NOGAP and b.j != NOGAP:
        return None
    return (a.j, a.k) if a.j != NOGAP else (b.j, b.k)


class Chart:
    """One parse: owns its items and agenda; never shared between parses."""

    def __init__(self, g: Grammar, sentence, wildcard=False):
        self.g = g
        self.sentence = list(sentence)
        self.n = len(self.sentence)
        self.wildcard = wildcard
        self.instances = []
        for t in g.trees:
            if not t.has_anchor:
                self.instances.append(instantiate(t))
        if not wildcard:
            for tok in self.sentence:
                self.instances.extend(select_trees(g, tok))
        infos = {t.name: _TreeInfo(t) for t in g.trees}
        self.info = [infos[inst.name] for inst in self.instances]

        self.subst_sites = defaultdict(list)
        self.aux_by_label = defaultdict(list)
        for x, info in enumerate(self.info):
            for p, node in info.nodes.items():
                if node.is_subst:
                    self.subst_sites[node.label].append((x, p))
            if info.tree.is_auxiliary:
                self.aux_by_label[info.root_label].append(x)

        self.bp = {}
        self.agenda = deque()
        self.partial_by_end = defaultdict(list)
        self.done_by_start = defaultdict(list)
        self.below_adj = defaultdict(list)
        self.auxroot_by_gap = defaultdict(list)
        self.feet_made = set()
        self.goals = []

    def add(self, item, back):
        known = self.bp.get(item)
        if known is None:
            self.bp[item] = {back}
            self.agenda.append(item)
        else:
            known.add(back)

    def _axioms(self):
        for x, (inst, info) in enumerate(zip(self.instances, self.info)):
            for p, node in info.nodes.items():
                if node.is_anchor:
                    q = inst.anchor_token.index
                    self.add(ChartItem(x, p, DONE, q - 1, q), ("ax",))
                elif node.is_term:
                    for q, tok in enumerate(self.sentence, 1):
                        if self.wildcard or tok.surface == node.literal:
                            self.add(ChartItem(x, p, DONE, q - 1, q), ("ax",))
                elif node.is_eps:
                    for q in range(self.n + 1):
                        self.add(ChartItem(x, p, DONE, q, q), ("ax",))

    def _combine(self, left, right, parent, c):
        """PARTIAL(c-1) ``left`` (None when c == 1) + DONE child ``right``."""
        x = right.inst
        gap = (right.j, right.k) if left is None else _merge_gap(left, right)
        if gap is None:
            return
        stage = c if c < self.info[x].arity[parent] else BELOW
        i = right.i if left is None else left.i
        self.add(ChartItem(x, parent, stage, i, right.l, *gap), ("comb", left, right))

    def _process(self, it):
        info = self.info[it.inst]
        node = info.nodes[it.path]
        if it.stage == DONE:
            self.done_by_start[(it.inst, it.path, it.i)].append(it)
            if it.path:
                parent, c = it.path[:-1], it.path[-1]
                if c == 1:
                    self._combine(None, it, parent, 1)
                else:
                    for left in self.partial_by_end[(it.inst, parent, c - 1, it.i)]:
                        self._combine(left, it, parent, c)
            elif info.tree.is_initial:
                if it.j == NOGAP:
                    for x, p in self.subst_sites[node.label]:
                        self.add(ChartItem(x, p, DONE, it.i, it.l), ("sub", it))
                    if node.label == self.g.start and it.i == 0 and it.l == self.n:
                        self.goals.append(it)
            elif it.j != NOGAP:
                self.auxroot_by_gap[(node.label, it.j, it.k)].append(it)
                for below in self.below_adj[(node.label, it.j, it.k)]:
                    self.add(ChartItem(below.inst, below.path, DONE, it.i, it.l, below.j, below.k),
                             ("adj", below, it))
        elif it.stage == BELOW:
            self.add(it._replace(stage=DONE), ("noadj", it))
            if node.adjoinable:
                key = (node.label, it.i, it.l)
                self.below_adj[key].append(it)
                for aux in self.auxroot_by_gap[key]:
                    self.add(ChartItem(it.inst, it.path, DONE, aux.i, aux.l, it.j, it.k), ("adj", it, aux))
                if key not in self.feet_made:
                    self.feet_made.add(key)
                    for x in self.aux_by_label[node.label]:
                        self.add(ChartItem(x, self.info[x].foot, DONE, it.i, it.l, it.i, it.l), ("ax",))
        else:
            c = it.stage
            self.partial_by_end[(it.inst, it.path, c, it.l)].append(it)
            for right in self.done_by_start[(it.inst, it.path + (c + 1,), it.l)]:
                self._combine(it, right, it.path, c + 1)

    def run(self):
        self._axioms()
        while self.agenda:
            self._process(self.agenda.popleft())
        log.debug("chart: %d items, %d goals", len(self.bp), len(self.goals))
        return self


@dataclass
class DerivationForest:
    """Packed forest: goal items plus the backpointer graph of the chart."""

    goals: list
    backpointers: dict
    sentence: list
    grammar: Grammar
    instances: list = field(repr=False)

    @property
    def item_count(self):
        return len(self.backpointers)

    def __bool__(self):
        return bool(self.goals)

    def _node(self, x, attachments):
        inst = self.instances[x]
        tok = inst.anchor_token
        lex = Lexeme(tok.surface, tok.index, tok.pos) if tok is not None else None
        return DerivationNode(inst.name, lex, attachments)

    def _analyses(self, item, memo, active, cap):
        """Attachment lists (tuples of Edges) deriving ``item``.

        Analyses that re-enter an item on the current path are cut; such
        cycles only arise from trees that cover no tokens.
        """
        if item in memo:
            return memo[item]
        if item in active:
            return []
        active.add(item)
        out = set()
        for back in self.backpointers[item]:
            kind = back[0]
            if kind == "ax":
                out.add(())
            elif kind == "comb":
                left = [()] if back[1] is None else self._analyses(back[1], memo, active, cap)
                right = self._analyses(back[2], memo, active, cap)
                out.update(a + b for a in left for b in right)
            elif kind == "noadj":
                out.update(self._analyses(back[1], memo, active, cap))
            elif kind == "adj":
                below, aux = back[1], back[2]
                site = GornAddress(below.path)
                subs = [Edge(site, ADJUNCTION, self._node(aux.inst, a))
                        for a in self._analyses(aux, memo, active, cap)]
                out.update(b + (e,) for b in self._analyses(below, memo, active, cap) for e in subs)
            elif kind == "sub":
                root = back[1]
                site = GornAddress(item.path)
                out.update((Edge(site, SUBSTITUTION, self._node(root.inst, a)),)
                           for a in self._analyses(root, memo, active, cap))
        active.discard(item)
        res = list(out)
        if cap is not None and len(res) > cap:
            res = sorted(res, key=_attachments_key)[:cap]
        memo[item] = res
        return res

    def _exact(self, item, ops, memo):
        """Attachment lists deriving ``item`` with exactly ``ops`` compositions.

        Every cycle in the backpointer graph passes through an adjunction or
        substitution, which costs one operation, so this unfolds cycles
        without cutting any derivation.
        """
        key = (item, ops)
        if key in memo:
            return memo[key]
        out = set()
        for back in self.backpointers[item]:
            kind = back[0]
            if kind == "ax":
                if ops == 0:
                    out.add(())
            elif kind == "comb":
                splits = [0] if back[1] is None else range(ops + 1)
                for k in splits:
                    left = [()] if back[1] is None else self._exact(back[1], k, memo)
                    if left:
                        right = self._exact(back[2], ops - k, memo)
                        out.update(a + b for a in left for b in right)
            elif kind == "noadj":
                out.update(self._exact(back[1], ops, memo))
            elif kind == "adj":
                below, aux = back[1], back[2]
                site = GornAddress(below.path)
                for k in range(ops):
                    subs = [Edge(site, ADJUNCTION, self._node(aux.inst, a))
                            for a in self._exact(aux, k, memo)]
                    if subs:
                        out.update(b + (e,) for b in self._exact(below, ops - 1 - k, memo) for e in subs)
            elif kind == "sub":
                if ops:
                    site = GornAddress(item.path)
                    out.update((Edge(site, SUBSTITUTION, self._node(back[1].inst, a)),)
                               for a in self._exact(back[1], ops - 1, memo))
        res = list(out)
        memo[key] = res
        return res

    def count(self) -> int:
        """Number of derivations in the forest (cycle-free readings)."""
        memo, active = {}, set()

        def cnt(item):
            if item in memo:
                return memo[item]
            if item in active:
                return 0
            active.add(item)
            total = 0
            for back in self.backpointers[item]:
                kind = back[0]
                if kind == "ax":
                    total += 1
                elif kind == "comb":
                    total += (1 if back[1] is None else cnt(back[1])) * cnt(back[2])
                elif kind == "noadj":
                    total += cnt(back[1])
                elif kind == "adj":
                    total += cnt(back[1]) * cnt(back[2])
                elif kind == "sub":
                    total += cnt(back[1])
            active.discard(item)
            memo[item] = total
            return total

        return sum(cnt(goal) for goal in self.goals)

    def derivations(self, max=None):
        return enumerate_derivations(self, max)


def derivation_key(node: DerivationNode):
    """Depth-first lexicographic order over (site, tree name)."""
    lex = node.lexeme.index if node.lexeme is not None else 0
    return (node.tree, lex, tuple((e.site.path, e.op, derivation_key(e.child)) for e in node.children))


def _attachments_key(atts):
    return tuple((e.site.path, e.op, derivation_key(e.child)) for e in sorted(atts, key=lambda e: e.site.path))


def _check_input(g, sentence):
    diags = validate_grammar(g)
    if diags:
        raise GrammarInvalid(diags)
    if not sentence:
        raise EmptySentence("cannot parse an empty sentence")


def parse_forest(g: Grammar, sentence) -> DerivationForest:
    _check_input(g, sentence)
    chart = Chart(g, sentence).run()
    return DerivationForest(chart.goals, chart.bp, list(sentence), g, chart.instances)


def recognize(g: Grammar, sentence) -> bool:
    return bool(parse_forest(g, sentence).goals)


def chart_size(g: Grammar, sentence) -> int:
    """Number of distinct chart items built for the sentence."""
    return parse_forest(g, sentence).item_count


def enumerate_derivations(f: DerivationForest, max=DEFAULT_MAX_DERIVATIONS, max_ops=None) -> list:
    """Distinct derivations in depth-first (site, tree name) order, at most ``max``.

    With ``max_ops`` only derivations of at most that many compositions
    are read off, and readings that repeat token-less material (cycles in
    the forest) are included up to that bound; without it such cycles are
    cut.
    """
    if max is not None and max < 1:
        raise ValueError("max must be at least 1")
    if not f.goals:
        return []
    if max_ops is not None:
        memo, roots = {}, set()
        for goal in f.goals:
            for k in range(max_ops + 1):
                roots.update(f._node(goal.inst, atts) for atts in f._exact(goal, k, memo))
        ordered = sorted(roots, key=derivation_key)
        return [DerivationTree(r) for r in (ordered if max is None else ordered[:max])]
    cap = None
    if max is not None and f.count() > FULL_ENUMERATION_LIMIT:
        cap = max
    memo, roots = {}, set()
    for goal in f.goals:
        for atts in f._analyses(goal, memo, set(), cap):
            roots.add(f._node(goal.inst, atts))
    ordered = sorted(roots, key=derivation_key)
    if max is not None:
        ordered = ordered[:max]
    return [DerivationTree(r) for r in ordered]


def accepted_strings(g: Grammar, length: int) -> set:
    """Every string of ``length`` terminals the chart accepts, found in one
    pass over a sentence of wildcard positions (any term leaf scans any
    position).  Anchored trees need real tokens and are not used."""
    placeholder = [Token("*", "*", q) for q in range(1, length + 1)]
    _check_input(g, placeholder)
    chart = Chart(g, placeholder, wildcard=True).run()
    forest = DerivationForest(chart.goals, chart.bp, placeholder, g, chart.instances)
    return {tuple(yield_of(replay_derivation(g, d))) for d in enumerate_derivations(forest, None)}

"""Dependency relations and argument structures read off derivation trees.

Every derivation edge becomes one relation between the anchors of the two
trees it joins.  The tree that is composed into supplies the head.  The
label comes from the grammar: ``rel`` on the substitution node, or
``adjrel`` on the adjoined auxiliary tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .composition import ADJUNCTION, SUBSTITUTION, DerivationNode, DerivationTree, validate_derivation
from .errors import GrammarNotLexicalized, InvalidDerivation
from .grammar import Grammar, node_at

SUBST_FALLBACK = "dep"
ADJOIN_FALLBACK = "mod"


class TokenRef(NamedTuple):
    index: int  # 1-based; 0 is the virtual root
    surface: str

    def __str__(self):
        return f"{self.surface}-{self.index}"


ROOT_REF = TokenRef(0, "ROOT")


@dataclass(frozen=True)
class Relation:
    label: str
    head: TokenRef
    dependent: TokenRef

    def __post_init__(self):
        if not self.label:
            raise ValueError("relation label must be non-empty")
        if self.head == self.dependent:
            raise ValueError("a token cannot depend on itself")

    def __str__(self):
        return f"{self.label}({self.head}, {self.dependent})"


@dataclass(frozen=True)
class ArgumentStructure:
    head: str
    arguments: tuple

    def __str__(self):
        return f"{self.head}({', '.join(self.arguments)})"


@dataclass(frozen=True)
class DependencyGraph:
    tokens: tuple
    relations: tuple
    arguments: tuple = ()  # ArgumentStructure per derivation node, depth-first

    def ordered(self):
        """Relations by dependent position, the usual typed-dependency order."""
        return sorted(self.relations, key=lambda r: (r.dependent.index, r.head.index, r.label))

    def root(self) -> Relation:
        return next(r for r in self.relations if r.head == ROOT_REF)


def _ref(node: DerivationNode) -> TokenRef:
    return TokenRef(node.lexeme.index, node.lexeme.surface)


def _ordered_edges(node: DerivationNode):
    """Substitutions in address order, then adjunctions in address order."""
    subst = [e for e in node.children if e.op == SUBSTITUTION]
    adjoin = [e for e in node.children if e.op == ADJUNCTION]
    key = lambda e: e.site.path
    return sorted(subst, key=key) + sorted(adjoin, key=key)


def _check(g: Grammar, d):
    if not g.lexicalized:
        raise GrammarNotLexicalized("dependency mining needs every tree to carry an anchor")
    if isinstance(d, DerivationNode):
        d = DerivationTree(d)
    diags = validate_derivation(g, d)
    if diags:
        raise InvalidDerivation(diags)
    return d


def _args(node: DerivationNode) -> ArgumentStructure:
    return ArgumentStructure(node.lexeme.surface, tuple(e.child.lexeme.surface for e in _ordered_edges(node)))


def mine_dependencies(g: Grammar, d) -> DependencyGraph:
    d = _check(g, d)
    relations = [Relation("root", ROOT_REF, _ref(d.root))]
    args, toks = [], []

    def visit(node):
        t = g.tree(node.tree)
        toks.append(_ref(node))
        args.append(_args(node))
        for e in _ordered_edges(node):
            if e.op == SUBSTITUTION:
                label = node_at(t.root, e.site).rel or SUBST_FALLBACK
            else:
                label = g.tree(e.child.tree).adj_rel or ADJOIN_FALLBACK
            relations.append(Relation(label, _ref(node), _ref(e.child)))
            visit(e.child)

    visit(d.root)
    return DependencyGraph(tuple(sorted(toks)), tuple(relations), tuple(args))


def argument_structure(g: Grammar, d, node_path=()) -> ArgumentStructure:
    """Argument structure of the derivation node reached by following the
    sites in ``node_path`` from the root."""
    d = _check(g, d)
    return _args(d.node(node_path))

"""Pseudo-lexicalization: trees are anchored by POS tag, and the actual
word is bound to the anchor when a tree is instantiated for a token."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import MissingToken, PosMismatch, UnexpectedToken
from .grammar import ElementaryTree, Grammar, TreeNode, node_at, replace_at, term

_ids = itertools.count(1)


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    index: int  # 1-based

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if self.index < 1:
            raise ValueError("token indices are 1-based")

    def __str__(self):
        return f"{self.surface}/{self.pos}"


def tokens(pairs) -> list:
    """Build an indexed sentence from (surface, pos) pairs or "w/TAG"
    strings.  A bare word is tagged with itself, which is enough for
    grammars whose trees carry literal terminals only."""
    out = []
    for i, p in enumerate(pairs, 1):
        if isinstance(p, str):
            surface, slash, pos = p.rpartition("/")
            p = (surface, pos) if slash else (p, p)
        out.append(Token(p[0], p[1], i))
    return out


@dataclass(frozen=True)
class TreeInstance:
    tree: ElementaryTree
    anchor_token: Optional[Token] = None
    instance_id: int = field(default_factory=lambda: next(_ids), compare=False)

    @property
    def name(self):
        return self.tree.name

    def lexicalized_root(self) -> TreeNode:
        if self.anchor_token is None:
            return self.tree.root
        return lexicalize(self.tree, self.anchor_token.surface)


def lexicalize(tree: ElementaryTree, surface: str) -> TreeNode:
    """Expand the anchor preterminal with a terminal child for ``surface``."""
    a = tree.anchor_address
    if a is None:
        raise UnexpectedToken(f"{tree.name} has no anchor")
    anchor = node_at(tree.root, a)
    return replace_at(tree.root, a, anchor.with_children([term(surface)]))


def instantiate(tree: ElementaryTree, tok: Optional[Token] = None) -> TreeInstance:
    if tree.has_anchor:
        if tok is None:
            raise MissingToken(f"{tree.name} is anchored and needs a token")
        if tree.anchor_pos is not None and tok.pos not in tree.anchor_pos:
            raise PosMismatch(f"{tree.name} anchors {'/'.join(tree.anchor_pos)}, got {tok.pos} for {tok.surface!r}")
    elif tok is not None:
        raise UnexpectedToken(f"{tree.name} has no anchor; cannot bind {tok.surface!r}")
    return TreeInstance(tree, tok)


def select_trees(g: Grammar, tok: Token) -> list:
    """All anchored trees whose anchor-pos admits the token's tag, in
    declaration order."""
    return [instantiate(t, tok) for t in g.trees
            if t.has_anchor and t.anchor_pos and tok.pos in t.anchor_pos]

"""TAG data model: symbols, elementary trees, Gorn addresses, validation.

Trees are immutable.  A ``TreeNode`` carries a label, a set of flags and a
tuple of children.  Flags:

    anchor   preterminal bound to a token at parse time (gets one child)
    subst    substitution site (down arrow)
    foot     foot node of an auxiliary tree (asterisk)
    term     terminal leaf; ``literal`` holds the surface string
    eps      empty leaf, contributes nothing to the yield
    na       null adjunction constraint

Nodes are addressed Gorn-style: the root is ``0``, child *i* of *a* is
``a.i`` with *i* counting from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import NoSuchAddress, NodeNotInTree

ANCHOR = "anchor"
SUBST = "subst"
FOOT = "foot"
TERM = "term"
EPS = "eps"
NA = "na"

FLAGS = frozenset({ANCHOR, SUBST, FOOT, TERM, EPS, NA})
# at most one of these per node
EXCLUSIVE_FLAGS = (ANCHOR, SUBST, FOOT, TERM, EPS)
LEAF_FLAGS = frozenset({SUBST, FOOT, TERM, EPS})

INITIAL = "initial"
AUXILIARY = "auxiliary"

TERMINAL = "terminal"
NONTERMINAL = "nonterminal"


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str  # TERMINAL or NONTERMINAL

    def __post_init__(self):
        if not self.name:
            raise ValueError("symbol name must be non-empty")
        if self.kind not in (TERMINAL, NONTERMINAL):
            raise ValueError(f"unknown symbol kind {self.kind!r}")


@dataclass(frozen=True, order=True)
class GornAddress:
    """Dotted-decimal node address; ``path`` excludes the leading root 0."""

    path: tuple = ()

    @classmethod
    def parse(cls, text) -> "GornAddress":
        """Parse ``"0.2.1"`` or the short form ``"2.1"``; ``"0"`` is the root."""
        if isinstance(text, GornAddress):
            return text
        if isinstance(text, (tuple, list)):
            return cls(tuple(int(p) for p in text))
        text = str(text).strip()
        if not text:
            raise ValueError("empty Gorn address")
        parts = text.split(".")
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"malformed Gorn address {text!r}") from None
        if any(p != p.strip() or not p.isdigit() for p in parts):
            raise ValueError(f"malformed Gorn address {text!r}")
        if nums[0] == 0:
            nums = nums[1:]
        if any(n < 1 for n in nums):
            raise ValueError(f"malformed Gorn address {text!r}")
        return cls(tuple(nums))

    def child(self, i: int) -> "GornAddress":
        if i < 1:
            raise ValueError("child ordinals start at 1")
        return GornAddress(self.path + (i,))

    @property
    def parent(self) -> Optional["GornAddress"]:
        if not self.path:
            return None
        return GornAddress(self.path[:-1])

    @property
    def depth(self) -> int:
        return len(self.path)

    def is_prefix_of(self, other: "GornAddress") -> bool:
        return other.path[: len(self.path)] == self.path

    def __str__(self):
        return ".".join(["0", *map(str, self.path)])

    def __repr__(self):
        return f"GornAddress({str(self)!r})"


ROOT = GornAddress()


def addr(text) -> GornAddress:
    return GornAddress.parse(text)


@dataclass(frozen=True)
class TreeNode:
    label: str
    flags: frozenset = frozenset()
    children: tuple = ()
    literal: Optional[str] = None
    rel: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.flags, frozenset):
            object.__setattr__(self, "flags", frozenset(self.flags))
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))

    @property
    def is_anchor(self):
        return ANCHOR in self.flags

    @property
    def is_subst(self):
        return SUBST in self.flags

    @property
    def is_foot(self):
        return FOOT in self.flags

    @property
    def is_term(self):
        return TERM in self.flags

    @property
    def is_eps(self):
        return EPS in self.flags

    @property
    def is_na(self):
        return NA in self.flags

    @property
    def is_leaf(self):
        return not self.children

    @property
    def adjoinable(self) -> bool:
        """Interior, non-anchor node without a null-adjunction constraint."""
        return bool(self.children) and not (self.flags & {ANCHOR, NA, SUBST, FOOT, TERM, EPS})

    def with_children(self, children) -> "TreeNode":
        return TreeNode(self.label, self.flags, tuple(children), self.literal, self.rel)

    def __repr__(self):
        bits = [self.label]
        bits += [f":{f}" for f in sorted(self.flags)]
        if self.literal is not None:
            bits.append(f"{self.literal!r}")
        bits += [repr(c) for c in self.children]
        return "(" + " ".join(bits) + ")"


def term(literal: str, label: Optional[str] = None) -> TreeNode:
    return TreeNode(label if label is not None else literal, frozenset({TERM}), (), literal)


def walk(root: TreeNode, start: GornAddress = ROOT) -> Iterator[tuple]:
    """Yield (address, node) in pre-order."""
    stack = [(start, root)]
    while stack:
        a, node = stack.pop()
        yield a, node
        for i in range(len(node.children), 0, -1):
            stack.append((a.child(i), node.children[i - 1]))


def _root_of(tree) -> TreeNode:
    if isinstance(tree, TreeNode):
        return tree
    return tree.root


def node_at(tree, address) -> TreeNode:
    node = _root_of(tree)
    a = GornAddress.parse(address)
    for depth, i in enumerate(a.path):
        if i > len(node.children):
            raise NoSuchAddress(f"no node at {a}: {GornAddress(a.path[:depth])} has {len(node.children)} children")
        node = node.children[i - 1]
    return node


def address_of(tree, node: TreeNode) -> GornAddress:
    """Inverse of node_at, by node identity."""
    for a, n in walk(_root_of(tree)):
        if n is node:
            return a
    raise NodeNotInTree(f"{node!r} does not occur in tree")


def children_addresses(tree, address) -> list:
    a = GornAddress.parse(address)
    n = node_at(tree, a)
    return [a.child(i) for i in range(1, len(n.children) + 1)]


def replace_at(root: TreeNode, address: GornAddress, new: TreeNode) -> TreeNode:
    """Return a copy of ``root`` with the subtree at ``address`` replaced."""
    if not address.path:
        return new
    i = address.path[0]
    if i > len(root.children):
        raise NoSuchAddress(f"no node at {address}")
    kids = list(root.children)
    kids[i - 1] = replace_at(kids[i - 1], GornAddress(address.path[1:]), new)
    return root.with_children(kids)


@dataclass(frozen=True)
class ElementaryTree:
    name: str
    cls: str  # INITIAL or AUXILIARY
    root: TreeNode
    anchor_pos: Optional[tuple] = None
    adj_rel: Optional[str] = None

    def __post_init__(self):
        if self.anchor_pos is not None and not isinstance(self.anchor_pos, tuple):
            object.__setattr__(self, "anchor_pos", tuple(self.anchor_pos))

    @property
    def is_initial(self):
        return self.cls == INITIAL

    @property
    def is_auxiliary(self):
        return self.cls == AUXILIARY

    def nodes(self):
        return walk(self.root)

    def _find(self, flag):
        return [a for a, n in walk(self.root) if flag in n.flags]

    @property
    def anchor_address(self) -> Optional[GornAddress]:
        found = self._find(ANCHOR)
        return found[0] if found else None

    @property
    def foot_address(self) -> Optional[GornAddress]:
        found = self._find(FOOT)
        return found[0] if found else None

    @property
    def has_anchor(self):
        return self.anchor_address is not None

    def substitution_sites(self):
        return self._find(SUBST)

    def adjunction_sites(self):
        return [a for a, n in walk(self.root) if n.adjoinable]

    def terminal_count(self) -> int:
        """Number of yield positions this tree contributes on its own."""
        return sum(1 for _, n in walk(self.root) if n.is_anchor or n.is_term)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    tree: Optional[str] = None
    address: Optional[GornAddress] = None

    def sort_key(self):
        return (self.tree or "", self.address.path if self.address else (), self.code, self.message)

    def __str__(self):
        where = ""
        if self.tree is not None:
            where = self.tree
            if self.address is not None:
                where += f"@{self.address}"
            where = f" [{where}]"
        return f"{self.code}{where}: {self.message}"


def _infer_symbols(trees):
    terminals, nonterminals = set(), set()
    for t in trees:
        for _, n in walk(t.root):
            if n.is_term:
                # a term leaf's label is display-only; its literal is the terminal
                if n.literal:
                    terminals.add(n.literal)
            else:
                nonterminals.add(n.label)
    return terminals, nonterminals


@dataclass(frozen=True)
class Grammar:
    """The quintuple: terminals, nonterminals, initial trees, auxiliary
    trees and start symbol.  ``trees`` keeps declaration order."""

    trees: tuple
    start: str = "S"
    terminals: frozenset = field(default=None)
    nonterminals: frozenset = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        t, nt = _infer_symbols(self.trees)
        if self.terminals is None:
            object.__setattr__(self, "terminals", frozenset(t))
        else:
            object.__setattr__(self, "terminals", frozenset(self.terminals) | t)
        if self.nonterminals is None:
            object.__setattr__(self, "nonterminals", frozenset(nt))
        else:
            object.__setattr__(self, "nonterminals", frozenset(self.nonterminals) | nt)
        object.__setattr__(self, "_by_name", {tr.name: tr for tr in self.trees})

    @property
    def initial_trees(self):
        return [t for t in self.trees if t.is_initial]

    @property
    def auxiliary_trees(self):
        return [t for t in self.trees if t.is_auxiliary]

    @property
    def lexicalized(self) -> bool:
        return bool(self.trees) and all(t.has_anchor for t in self.trees)

    def tree(self, name: str) -> ElementaryTree:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no elementary tree named {name!r}") from None

    def __contains__(self, name):
        return name in self._by_name

    def symbols(self):
        return {Symbol(n, TERMINAL) for n in self.terminals} | {Symbol(n, NONTERMINAL) for n in self.nonterminals}

    def extra_terminals(self):
        """Declared terminals not inferable from the trees."""
        return self.terminals - _infer_symbols(self.trees)[0]

    def extra_nonterminals(self):
        return self.nonterminals - _infer_symbols(self.trees)[1]


def validate_tree(tree: ElementaryTree, terminals=frozenset()) -> list:
    """Check node and tree invariants; returns a sorted list of Diagnostics.

    ``terminals`` lets the grammar-level check flag nonterminal-only
    positions (interior, subst, foot, anchor) labelled by a terminal.
    """
    out = []

    def diag(code, msg, a=None):
        out.append(Diagnostic(code, msg, tree.name, a))

    if tree.cls not in (INITIAL, AUXILIARY):
        diag("UnknownClass", f"tree class must be initial or auxiliary, not {tree.cls!r}")
    feet, anchors = [], []
    for a, n in walk(tree.root):
        if not n.label:
            diag("EmptyLabel", "node label is empty", a)
        unknown = n.flags - FLAGS
        if unknown:
            diag("UnknownFlag", f"unknown flags {sorted(unknown)}", a)
        kinds = [f for f in EXCLUSIVE_FLAGS if f in n.flags]
        if len(kinds) > 1:
            diag("ConflictingFlags", f"node carries {', '.join(kinds)}; at most one allowed", a)
        if n.children and n.flags & LEAF_FLAGS:
            diag("LeafHasChildren", f"{'/'.join(sorted(n.flags & LEAF_FLAGS))} node must be a leaf", a)
        if n.is_anchor and n.children:
            diag("AnchorHasChildren", "anchor preterminal receives its lexeme at parse time", a)
        if n.is_term:
            if not n.literal:
                diag("EmptyLiteral", "term node needs a non-empty literal", a)
        elif n.literal is not None:
            diag("LiteralOnNonTerm", "only term nodes carry a literal", a)
        if n.rel is not None and not n.is_subst:
            diag("RelOnNonSubst", "relation labels annotate substitution sites only", a)
        if n.label in terminals and not n.is_term:
            diag("TerminalAsNonterminal", f"{n.label!r} is a terminal but labels a non-terminal position", a)
        if not n.children and not (n.flags & (LEAF_FLAGS | {ANCHOR})):
            diag("UnmarkedFrontier", "frontier non-terminal must be marked subst, foot, anchor, term or eps", a)
        if n.is_foot:
            feet.append(a)
        if n.is_anchor:
            anchors.append(a)

    if tree.cls == INITIAL and feet:
        for a in feet:
            diag("FootInInitial", "initial trees contain no foot node", a)
    if tree.cls == AUXILIARY:
        if not feet:
            diag("MissingFoot", "auxiliary tree needs exactly one foot node", ROOT)
        elif len(feet) > 1:
            for a in feet[1:]:
                diag("MultipleFeet", "auxiliary tree needs exactly one foot node", a)
        for a in feet:
            if node_at(tree.root, a).label != tree.root.label:
                diag("FootRootMismatch",
                     f"foot label {node_at(tree.root, a).label!r} differs from root label {tree.root.label!r}", a)
    if tree.adj_rel is not None and tree.cls != AUXILIARY:
        diag("AdjRelOnInitial", "adjrel annotates auxiliary trees only")
    if len(anchors) > 1:
        for a in anchors[1:]:
            diag("MultipleAnchors", "single-anchor trees: at most one anchor node", a)
    if tree.anchor_pos is not None:
        if not anchors:
            diag("MissingAnchor", "anchor-pos given but the tree has no anchor node")
        if not tree.anchor_pos or any(not p for p in tree.anchor_pos):
            diag("EmptyAnchorPos", "anchor-pos must list non-empty tags")
    elif anchors:
        diag("AnchorWithoutPos", "anchor node present but no anchor-pos given", anchors[0])
    return sorted(out, key=Diagnostic.sort_key)


def validate_grammar(g: Grammar) -> list:
    out = []
    seen = {}
    for t in g.trees:
        seen[t.name] = seen.get(t.name, 0) + 1
    for name, n in sorted(seen.items()):
        if n > 1:
            out.append(Diagnostic("DuplicateTreeName", f"tree name used {n} times", name))
    for sym in sorted(g.terminals & g.nonterminals):
        out.append(Diagnostic("SymbolOverlap", f"{sym!r} is both terminal and non-terminal"))
    if g.start not in g.nonterminals:
        out.append(Diagnostic("StartSymbolMissing", f"start symbol {g.start!r} is not a non-terminal"))
    for t in g.trees:
        out.extend(validate_tree(t, g.terminals))
    # set semantics: duplicate-named trees may report identical diagnostics
    return sorted(set(out), key=Diagnostic.sort_key)

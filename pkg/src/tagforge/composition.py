"""Substitution, adjunction, derivation trees and their replay into
derived trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import (AdjunctionForbidden, AuxNotAuxiliary, FillerNotInitial, IncompleteTree,
                     LabelMismatch, NoSuchAddress, NoSuchNode, NotSubstitutionSite, TagError)
from .grammar import (AUXILIARY, INITIAL, ROOT, Diagnostic, ElementaryTree, GornAddress, Grammar,
                      TreeNode, node_at, replace_at, walk)
from .lexicon import lexicalize

SUBSTITUTION = "subst"
ADJUNCTION = "adjoin"


@dataclass(frozen=True)
class DerivedTree:
    """A (possibly partial) tree built by composition.  ``kind`` is the
    class of the elementary tree at the bottom of the build, which decides
    whether the tree can be substituted or adjoined."""

    root: TreeNode
    kind: str = INITIAL
    provenance: Optional["DerivationTree"] = field(default=None, compare=False, repr=False)


class Lexeme(NamedTuple):
    surface: str
    index: int  # 1-based token position
    pos: Optional[str] = None


class Edge(NamedTuple):
    site: GornAddress
    op: str
    child: "DerivationNode"


@dataclass(frozen=True)
class DerivationNode:
    tree: str
    lexeme: Optional[Lexeme] = None
    children: tuple = ()

    def __post_init__(self):
        kids = tuple(Edge(GornAddress.parse(e[0]), e[1], e[2]) for e in self.children)
        object.__setattr__(self, "children", tuple(sorted(kids, key=_edge_key)))

    def walk(self, path=()):
        """Pre-order (site path, node) pairs; the root's path is ()."""
        yield path, self
        for e in self.children:
            yield from e.child.walk(path + (e.site,))

    def size(self):
        return sum(1 for _ in self.walk())


def _edge_key(e):
    return (e.site.path, e.op, e.child.tree, e.child.lexeme or ("", 0, ""))


@dataclass(frozen=True)
class DerivationTree:
    root: DerivationNode

    def nodes(self):
        return self.root.walk()

    def node(self, path) -> DerivationNode:
        n = self.root
        for site in path:
            site = GornAddress.parse(site)
            for e in n.children:
                if e.site == site:
                    n = e.child
                    break
            else:
                raise NoSuchNode(f"no derivation child at site {site} below {n.tree}")
        return n

    def operation_count(self):
        return self.root.size() - 1


def derivation(tree, lexeme=None, *children) -> DerivationNode:
    """Shorthand constructor: ``derivation("a_saw", ("saw", 4), ("0.1", "subst", child), ...)``."""
    if lexeme is not None and not isinstance(lexeme, Lexeme):
        lexeme = Lexeme(*lexeme)
    return DerivationNode(tree, lexeme, tuple(children))


def _as_derived(t) -> DerivedTree:
    if isinstance(t, DerivedTree):
        return t
    if isinstance(t, ElementaryTree):
        return DerivedTree(t.root, t.cls)
    if isinstance(t, TreeNode):
        return DerivedTree(t, INITIAL)
    raise TypeError(f"cannot compose {type(t).__name__}")


def substitute(target, address, filler) -> DerivedTree:
    target, filler = _as_derived(target), _as_derived(filler)
    a = GornAddress.parse(address)
    n = node_at(target.root, a)
    if not n.is_subst:
        raise NotSubstitutionSite(f"node {a} ({n.label}) is not marked for substitution")
    if filler.kind != INITIAL:
        raise FillerNotInitial("only initial trees or their derivatives can be substituted")
    if filler.root.label != n.label:
        raise LabelMismatch(f"cannot substitute {filler.root.label} at {n.label} node {a}")
    return DerivedTree(replace_at(target.root, a, filler.root), target.kind)


def open_foot(root: TreeNode) -> Optional[GornAddress]:
    for a, n in walk(root):
        if n.is_foot:
            return a
    return None


def adjoin(target, address, aux) -> DerivedTree:
    target, aux = _as_derived(target), _as_derived(aux)
    a = GornAddress.parse(address)
    n = node_at(target.root, a)
    if n.is_subst:
        raise AdjunctionForbidden(f"node {a} is marked for substitution")
    if n.is_foot:
        raise AdjunctionForbidden(f"node {a} is a foot node")
    if n.is_na:
        raise AdjunctionForbidden(f"node {a} carries a null-adjunction constraint")
    if n.is_anchor:
        raise AdjunctionForbidden(f"node {a} is an anchor")
    if n.is_term or n.is_eps or not n.children:
        raise AdjunctionForbidden(f"node {a} is a leaf")
    if aux.kind != AUXILIARY:
        raise AuxNotAuxiliary("only auxiliary trees can be adjoined")
    foot = open_foot(aux.root)
    if foot is None:
        raise AuxNotAuxiliary("auxiliary tree has no open foot node")
    if aux.root.label != n.label or node_at(aux.root, foot).label != n.label:
        raise LabelMismatch(f"cannot adjoin {aux.root.label}-tree at {n.label} node {a}")
    planted = replace_at(aux.root, foot, n)
    return DerivedTree(replace_at(target.root, a, planted), target.kind)


def yield_of(t) -> list:
    root = _as_derived(t).root
    out = []
    for a, n in walk(root):
        if n.is_term:
            out.append(n.literal)
        elif n.is_subst or n.is_foot:
            raise IncompleteTree(f"open {'substitution' if n.is_subst else 'foot'} node {n.label} at {a}")
        elif n.is_anchor and not n.children:
            raise IncompleteTree(f"unbound anchor {n.label} at {a}")
        elif not n.children and not n.is_eps:
            raise IncompleteTree(f"unmarked frontier node {n.label} at {a}")
    return out


def _path_str(path):
    return "/".join(path) or "<root>"


def _replay(g: Grammar, node: DerivationNode, path) -> DerivedTree:
    here = path + [node.tree]
    try:
        tree = g.tree(node.tree)
    except KeyError as e:
        raise TagError(f"{_path_str(here)}: {e.args[0]}") from None
    if node.lexeme is not None:
        result = DerivedTree(lexicalize(tree, node.lexeme.surface), tree.cls)
    else:
        result = DerivedTree(tree.root, tree.cls)
    # deepest sites first: adjoining at an address moves everything below it
    for e in sorted(node.children, key=lambda e: e.site.path, reverse=True):
        child = _replay(g, e.child, here + [str(e.site)])
        try:
            if e.op == SUBSTITUTION:
                result = substitute(result, e.site, child)
            elif e.op == ADJUNCTION:
                result = adjoin(result, e.site, child)
            else:
                raise TagError(f"unknown operation {e.op!r}")
        except TagError as err:
            raise type(err)(f"{_path_str(here)} <{e.op} @ {e.site}> {e.child.tree}: {err}") from err
    return result


def replay_derivation(g: Grammar, d) -> DerivedTree:
    if isinstance(d, DerivationNode):
        d = DerivationTree(d)
    t = _replay(g, d.root, [])
    return DerivedTree(t.root, t.kind, provenance=d)


def validate_derivation(g: Grammar, d) -> list:
    if isinstance(d, DerivationNode):
        d = DerivationTree(d)
    out = []

    def diag(code, msg, path, site=None):
        out.append(Diagnostic(code, msg, _path_str(path), site))

    root = d.root
    if root.tree not in g:
        diag("UnknownTree", f"no elementary tree named {root.tree!r}", [root.tree])
    else:
        rt = g.tree(root.tree)
        if not rt.is_initial or rt.root.label != g.start:
            diag("RootNotInitialS", f"derivation root must be an initial {g.start}-type tree", [root.tree])

    tokens_seen = {}

    def visit(node, path):
        here = path + [node.tree]
        if node.tree not in g:
            if path:
                diag("UnknownTree", f"no elementary tree named {node.tree!r}", here)
            return
        t = g.tree(node.tree)
        if t.has_anchor and node.lexeme is None:
            diag("MissingLexeme", "anchored tree without a lexeme", here)
        if not t.has_anchor and node.lexeme is not None:
            diag("UnexpectedLexeme", "anchorless tree carries a lexeme", here)
        if node.lexeme is not None:
            if node.lexeme.pos is not None and t.anchor_pos and node.lexeme.pos not in t.anchor_pos:
                diag("PosMismatch", f"{node.lexeme.pos} not in anchor-pos {list(t.anchor_pos)}", here)
            tokens_seen.setdefault(node.lexeme.index, []).append(_path_str(here))
        sites = {}
        for e in node.children:
            sites.setdefault(e.site, []).append(e)
        for site, edges in sorted(sites.items()):
            if len(edges) > 1:
                diag("DuplicateSite", f"{len(edges)} compositions at site {site}", here, site)
        filled = {e.site for e in node.children if e.op == SUBSTITUTION}
        for site in t.substitution_sites():
            if site not in filled:
                diag("UnfilledSubstitution", f"substitution node {site} left open", here, site)
        for e in node.children:
            try:
                target = node_at(t.root, e.site)
            except NoSuchAddress:
                diag("NoSuchAddress", f"{t.name} has no node {e.site}", here, e.site)
                visit(e.child, here + [str(e.site)])
                continue
            child_t = g.tree(e.child.tree) if e.child.tree in g else None
            if e.op == SUBSTITUTION:
                if not target.is_subst:
                    diag("NotSubstitutionSite", f"node {e.site} is not a substitution site", here, e.site)
                if child_t is not None:
                    if not child_t.is_initial:
                        diag("FillerNotInitial", f"{child_t.name} is not an initial tree", here, e.site)
                    if child_t.root.label != target.label:
                        diag("LabelMismatch", f"{child_t.root.label} root at {target.label} site", here, e.site)
            elif e.op == ADJUNCTION:
                if not target.adjoinable:
                    diag("AdjunctionForbidden", f"no adjunction allowed at node {e.site}", here, e.site)
                if child_t is not None:
                    if not child_t.is_auxiliary:
                        diag("AuxNotAuxiliary", f"{child_t.name} is not an auxiliary tree", here, e.site)
                    if child_t.root.label != target.label:
                        diag("LabelMismatch", f"{child_t.root.label} root at {target.label} site", here, e.site)
            else:
                diag("UnknownOperation", f"operation {e.op!r}", here, e.site)
            visit(e.child, here + [str(e.site)])

    visit(root, [])
    for idx, where in sorted(tokens_seen.items()):
        if len(where) > 1:
            out.append(Diagnostic("DuplicateToken", f"token {idx} anchors {len(where)} nodes", where[0]))
    return sorted(set(out), key=Diagnostic.sort_key)

"""Grammar files, tagged sentences and output renderers.

Grammar files are UTF-8 s-expressions with ``;`` line comments::

    (grammar :start "S")
    (tree :name "a_saw" :class initial :anchor-pos ("VBD")
      (S (NP :subst :rel "nsubj") (VP (V :anchor) (NP :subst :rel "dobj"))))
    (tree :name "b_yesterday" :class auxiliary :anchor-pos ("RB") :adjrel "advmod"
      (S (Ad (ADV :anchor)) (S :foot)))

Node flags are ``:subst :foot :anchor :eps :na``, ``:term "lit"`` and
``:rel "label"``.  The header may also declare ``:terminals (...)`` and
``:nonterminals (...)`` beyond those the trees use.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .composition import (ADJUNCTION, DerivationNode, DerivationTree, DerivedTree, _as_derived,
                          yield_of)
from .dependencies import DependencyGraph
from .errors import GrammarSyntaxError, TokenFormatError, ValidationError
from .grammar import (ANCHOR, AUXILIARY, EPS, FOOT, INITIAL, NA, ROOT, SUBST, TERM,
                      ElementaryTree, GornAddress, Grammar, TreeNode, validate_grammar, walk)
from .lexicon import Token

BUNDLED = ("english", "tamil", "count", "ambiguity")

# ---------------------------------------------------------------------------
# s-expression reader

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<keyword>:[^\s()";]+)
  | (?P<symbol>[^\s()";:][^\s()";]*)
""", re.VERBOSE)


class Atom:
    __slots__ = ("value", "kind", "loc")

    def __init__(self, value, kind, loc):
        self.value = value
        self.kind = kind  # "string", "keyword", "symbol"
        self.loc = loc

    def __repr__(self):
        return f"Atom({self.value!r}, {self.kind})"


class SList(list):
    def __init__(self, items, loc):
        super().__init__(items)
        self.loc = loc


def _locate(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def read_sexprs(text: str) -> list:
    stack = [SList([], (1, 1))]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _locate(text, pos)
            if text[pos] == '"':
                raise GrammarSyntaxError("unterminated string", line, col)
            raise GrammarSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        loc = _locate(text, pos)
        if kind == "lparen":
            stack.append(SList([], loc))
        elif kind == "rparen":
            if len(stack) == 1:
                raise GrammarSyntaxError("unbalanced ')'", *loc)
            done = stack.pop()
            stack[-1].append(done)
        elif kind == "string":
            try:
                value = json.loads(m.group())
            except json.JSONDecodeError:
                raise GrammarSyntaxError("bad string escape", *loc) from None
            stack[-1].append(Atom(value, "string", loc))
        elif kind in ("keyword", "symbol"):
            value = m.group()[1:] if kind == "keyword" else m.group()
            stack[-1].append(Atom(value, kind, loc))
        pos = m.end()
    if len(stack) > 1:
        raise GrammarSyntaxError("unclosed '(' opened here", *stack[-1].loc)
    return list(stack[0])


# ---------------------------------------------------------------------------
# grammar documents

@dataclass
class GrammarDocument:
    text: str
    grammar: Grammar
    locations: dict = field(default_factory=dict)  # (tree name, address str or None) -> (line, col)

    def location_of(self, diag):
        if diag.tree is None:
            return self.locations.get((None, None))
        loc = None
        if diag.address is not None:
            loc = self.locations.get((diag.tree, str(diag.address)))
        return loc or self.locations.get((diag.tree, None))


def _expect_atom(x, kinds, what):
    if not isinstance(x, Atom) or x.kind not in kinds:
        loc = x.loc if hasattr(x, "loc") else (0, 0)
        raise GrammarSyntaxError(f"expected {what}", *loc)
    return x.value


def _string_list(x, what):
    if not isinstance(x, SList):
        loc = getattr(x, "loc", (0, 0))
        raise GrammarSyntaxError(f"expected a list of {what}", *loc)
    return tuple(_expect_atom(a, ("string", "symbol"), what) for a in x)


def _options(form, start):
    """Split ``:key value`` pairs from the trailing positional items."""
    opts, rest, i = {}, [], start
    while i < len(form):
        x = form[i]
        if isinstance(x, Atom) and x.kind == "keyword":
            if i + 1 >= len(form):
                raise GrammarSyntaxError(f"keyword :{x.value} needs a value", *x.loc)
            opts[x.value] = (form[i + 1], x.loc)
            i += 2
        else:
            rest.append(x)
            i += 1
    return opts, rest


def _read_node(form, name, a, locations) -> TreeNode:
    if not isinstance(form, SList) or not form:
        raise GrammarSyntaxError("expected a node (LABEL flags... children...)", *getattr(form, "loc", (0, 0)))
    label = _expect_atom(form[0], ("symbol", "string"), "node label")
    locations[(name, str(a))] = form.loc
    flags, literal, rel, kids = set(), None, None, []
    i = 1
    while i < len(form):
        x = form[i]
        if isinstance(x, Atom) and x.kind == "keyword":
            key = x.value
            if key in (SUBST, FOOT, ANCHOR, EPS, NA):
                flags.add(key)
            elif key == TERM:
                if i + 1 >= len(form):
                    raise GrammarSyntaxError(":term needs a literal", *x.loc)
                i += 1
                literal = _expect_atom(form[i], ("string", "symbol"), "term literal")
                flags.add(TERM)
            elif key == "rel":
                if i + 1 >= len(form):
                    raise GrammarSyntaxError(":rel needs a label", *x.loc)
                i += 1
                rel = _expect_atom(form[i], ("string", "symbol"), "relation label")
            else:
                raise GrammarSyntaxError(f"unknown node flag :{key}", *x.loc)
        elif isinstance(x, SList):
            kids.append(_read_node(x, name, a.child(len(kids) + 1), locations))
        else:
            raise GrammarSyntaxError(f"unexpected {x.value!r} in node {label}", *x.loc)
        i += 1
    return TreeNode(label, frozenset(flags), tuple(kids), literal, rel)


def _read_tree(form, locations) -> ElementaryTree:
    opts, rest = _options(form, 1)
    for key in opts:
        if key not in ("name", "class", "anchor-pos", "adjrel"):
            raise GrammarSyntaxError(f"unknown tree option :{key}", *opts[key][1])
    if "name" not in opts:
        raise GrammarSyntaxError("tree needs :name", *form.loc)
    name = _expect_atom(opts["name"][0], ("string", "symbol"), "tree name")
    cls = _expect_atom(opts["class"][0], ("symbol", "string"), "tree class") if "class" in opts else None
    if cls not in (INITIAL, AUXILIARY):
        loc = opts["class"][1] if "class" in opts else form.loc
        raise GrammarSyntaxError("tree needs :class initial or :class auxiliary", *loc)
    anchor_pos = _string_list(opts["anchor-pos"][0], "POS tags") if "anchor-pos" in opts else None
    adj_rel = _expect_atom(opts["adjrel"][0], ("string", "symbol"), "relation") if "adjrel" in opts else None
    if len(rest) != 1:
        raise GrammarSyntaxError(f"tree {name!r} needs exactly one root node", *form.loc)
    locations.setdefault((name, None), form.loc)
    root = _read_node(rest[0], name, ROOT, locations)
    return ElementaryTree(name, cls, root, anchor_pos, adj_rel)


def parse_grammar_document(text: str) -> GrammarDocument:
    """Parse without validating."""
    forms = read_sexprs(text)
    start, terminals, nonterminals = "S", None, None
    trees, locations = [], {}
    seen_header = False
    for form in forms:
        if not isinstance(form, SList) or not form:
            raise GrammarSyntaxError("expected (grammar ...) or (tree ...)", *form.loc)
        head = _expect_atom(form[0], ("symbol",), "form name")
        if head == "grammar":
            if seen_header:
                raise GrammarSyntaxError("duplicate grammar header", *form.loc)
            seen_header = True
            locations[(None, None)] = form.loc
            opts, rest = _options(form, 1)
            if rest:
                raise GrammarSyntaxError("unexpected item in grammar header", *rest[0].loc)
            for key, (val, loc) in opts.items():
                if key == "start":
                    start = _expect_atom(val, ("string", "symbol"), "start symbol")
                elif key == "terminals":
                    terminals = _string_list(val, "terminals")
                elif key == "nonterminals":
                    nonterminals = _string_list(val, "non-terminals")
                else:
                    raise GrammarSyntaxError(f"unknown grammar option :{key}", *loc)
        elif head == "tree":
            trees.append(_read_tree(form, locations))
        else:
            raise GrammarSyntaxError(f"unknown form {head!r}", *form[0].loc)
    locations.setdefault((None, None), (1, 1))
    g = Grammar(tuple(trees), start, terminals, nonterminals)
    return GrammarDocument(text, g, locations)


def read_grammar(text: str) -> Grammar:
    doc = parse_grammar_document(text)
    diags = validate_grammar(doc.grammar)
    if diags:
        raise ValidationError([(d, doc.location_of(d)) for d in diags])
    return doc.grammar


def load_grammar(path) -> Grammar:
    with open(path, encoding="utf-8") as fh:
        return read_grammar(fh.read())


def bundled_grammar_text(name: str) -> str:
    name = name.removesuffix(".tag")
    if name not in BUNDLED:
        raise FileNotFoundError(f"no bundled grammar {name!r}")
    return resources.files("tagforge").joinpath("data").joinpath(f"{name}.tag").read_text(encoding="utf-8")


def bundled_grammar(name: str) -> Grammar:
    """One of the grammars shipped with the package: english, tamil, count, ambiguity."""
    return read_grammar(bundled_grammar_text(name))


_BARE = re.compile(r'[^\s()";:][^\s()";]*\Z')


def _atom(s: str) -> str:
    return s if _BARE.match(s) else json.dumps(s, ensure_ascii=False)


def _quote(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _write_node(n: TreeNode, indent: int) -> str:
    bits = [_atom(n.label)]
    for f in (SUBST, FOOT, ANCHOR, EPS, NA):
        if f in n.flags:
            bits.append(":" + f)
    if TERM in n.flags:
        bits.append(":term " + _quote(n.literal or ""))
    if n.rel is not None:
        bits.append(":rel " + _quote(n.rel))
    head = "(" + " ".join(bits)
    if not n.children:
        return head + ")"
    pad = " " * (indent + 2)
    kids = "".join("\n" + pad + _write_node(c, indent + 2) for c in n.children)
    return head + kids + ")"


def write_grammar(g: Grammar) -> str:
    header = ["(grammar :start " + _quote(g.start)]
    if g.extra_terminals():
        header.append(":terminals (" + " ".join(_quote(s) for s in sorted(g.extra_terminals())) + ")")
    if g.extra_nonterminals():
        header.append(":nonterminals (" + " ".join(_quote(s) for s in sorted(g.extra_nonterminals())) + ")")
    out = [" ".join(header) + ")"]
    for t in g.trees:
        opts = [f":name {_quote(t.name)}", f":class {t.cls}"]
        if t.anchor_pos is not None:
            opts.append(":anchor-pos (" + " ".join(_quote(p) for p in t.anchor_pos) + ")")
        if t.adj_rel is not None:
            opts.append(":adjrel " + _quote(t.adj_rel))
        out.append("(tree " + " ".join(opts) + "\n  " + _write_node(t.root, 2) + ")")
    return "\n\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# tagged sentences

def read_sentences(text: str) -> list:
    """One sentence per line of ``surface/TAG`` tokens separated by single
    spaces; the last ``/`` splits surface from tag."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        toks, col = [], 1
        for raw in line.split(" "):
            if raw == "":
                raise TokenFormatError("empty token (tokens are separated by single spaces)", lineno, col)
            surface, slash, pos = raw.rpartition("/")
            if not slash:
                raise TokenFormatError(f"token {raw!r} has no /TAG", lineno, col)
            if not surface:
                raise TokenFormatError(f"token {raw!r} has an empty surface", lineno, col)
            if not pos:
                raise TokenFormatError(f"token {raw!r} has an empty tag", lineno, col)
            toks.append(Token(surface, pos, len(toks) + 1))
            col += len(raw) + 1
        out.append(toks)
    return out


def sentence_text(sentence) -> str:
    return " ".join(f"{t.surface}/{t.pos}" for t in sentence)


# ---------------------------------------------------------------------------
# renderers

def _render_node(n: TreeNode) -> str:
    if n.is_term:
        return n.literal
    if n.is_eps:
        return f"({n.label} ε)"
    return "(" + " ".join([n.label] + [_render_node(c) for c in n.children]) + ")"


def render_derived(t) -> str:
    """Single-line bracketing; term leaves print bare, eps leaves as ε."""
    root = _as_derived(t).root
    yield_of(root)  # raises IncompleteTree on open frontier nodes
    return _render_node(root)


def _lexeme_bracket(node: DerivationNode) -> str:
    return f"[{node.lexeme.surface}]" if node.lexeme is not None else ""


def render_derivation(d, style: str = "canonical") -> str:
    if isinstance(d, DerivationNode):
        d = DerivationTree(d)
    lines = []

    def canonical(node, depth, edge):
        row = "  " * depth + node.tree + _lexeme_bracket(node)
        if edge is not None:
            row += f" <{edge.op} @ {edge.site}>"
        lines.append(row)
        for e in node.children:
            canonical(e.child, depth + 1, e)

    def paper(node, depth, edge):
        lex = node.lexeme
        cols = [lex.surface if lex else "-", node.tree]
        if edge is not None:
            cols.append("{" + str(edge.site) + "}")
        cols.append(str(lex.index - 1) if lex else "-")
        cols.append((lex.pos or "-") if lex else "-")
        lines.append("  " * depth + "\t".join(cols))
        for e in node.children:
            paper(e.child, depth + 1, e)

    if style == "canonical":
        canonical(d.root, 0, None)
    elif style == "paper":
        paper(d.root, 0, None)
    else:
        raise ValueError(f"unknown derivation style {style!r}")
    return "\n".join(lines) + "\n"


def render_deps(dg: DependencyGraph, style: str = "triples") -> str:
    if style == "triples":
        lines = [str(r) for r in dg.ordered()]
    elif style == "argstruct":
        lines = [str(a) for a in dg.arguments]
    else:
        raise ValueError(f"unknown dependency style {style!r}")
    return "\n".join(lines) + "\n" if lines else ""


_DOT_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _dot_id(s: str) -> str:
    return s if _DOT_ID.match(s) else json.dumps(s, ensure_ascii=False)


def _dot_label(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def render_dot(obj) -> str:
    if isinstance(obj, (DerivationTree, DerivationNode)):
        return _dot_derivation(obj if isinstance(obj, DerivationTree) else DerivationTree(obj))
    if isinstance(obj, DependencyGraph):
        return _dot_deps(obj)
    if isinstance(obj, (DerivedTree, TreeNode)):
        return _dot_derived(_as_derived(obj).root)
    raise TypeError(f"cannot render {type(obj).__name__} as DOT")


def _dot_derivation(d: DerivationTree) -> str:
    ids, used = {}, {}
    for path, node in d.nodes():
        base = node.tree
        used[base] = used.get(base, 0) + 1
        ids[path] = base if used[base] == 1 else f"{base}#{used[base]}"
    out = ["digraph derivation {", "  node [shape=box];"]
    for path, node in d.nodes():
        label = node.tree + (f"\n{node.lexeme.surface}" if node.lexeme else "")
        out.append(f"  {_dot_id(ids[path])} [label={_dot_label(label)}];")
    for path, node in d.nodes():
        for e in node.children:
            style = "" if e.op == ADJUNCTION else ", style=dashed"
            out.append(f"  {_dot_id(ids[path])} -> {_dot_id(ids[path + (e.site,)])} "
                       f"[label=\"{e.op}@{e.site}\"{style}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _dot_derived(root: TreeNode) -> str:
    out = ["digraph derived {", "  node [shape=plaintext];"]
    edges = []
    for a, n in walk(root):
        nid = "n" + "_".join(["0", *map(str, a.path)])
        if n.is_term:
            label = n.literal
        elif n.is_eps:
            label = "ε"
        else:
            label = n.label + ("↓" if n.is_subst else "*" if n.is_foot else "")
        out.append(f"  {nid} [label={_dot_label(label)}];")
        if a.path:
            pid = "n" + "_".join(["0", *map(str, a.path[:-1])])
            edges.append(f"  {pid} -> {nid};")
    out += edges
    out.append("}")
    return "\n".join(out) + "\n"


def _dot_deps(dg: DependencyGraph) -> str:
    out = ["digraph dependencies {", f"  {_dot_id('ROOT-0')} [label=\"ROOT\"];"]
    for tok in sorted(dg.tokens, key=lambda t: t.index):
        out.append(f"  {_dot_id(f'{tok.surface}-{tok.index}')} [label={_dot_label(tok.surface)}];")
    for r in dg.ordered():
        out.append(f"  {_dot_id(str(r.head))} -> {_dot_id(str(r.dependent))} [label={_dot_label(r.label)}];")
    out.append("}")
    return "\n".join(out) + "\n"

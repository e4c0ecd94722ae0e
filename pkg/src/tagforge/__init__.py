"""Tree Adjoining Grammar toolkit: grammars, composition, an all-parses
chart parser, dependency extraction and a brute-force reference oracle."""

from .chart import (DerivationForest, accepted_strings, chart_size, enumerate_derivations,
                    parse_forest, recognize)
from .composition import (DerivationNode, DerivationTree, DerivedTree, Lexeme, adjoin, derivation,
                          replay_derivation, substitute, validate_derivation, yield_of)
from .dependencies import (ArgumentStructure, DependencyGraph, Relation, TokenRef,
                           argument_structure, mine_dependencies)
from .errors import TagError
from .formats import (bundled_grammar, load_grammar, read_grammar, read_sentences, render_deps,
                      render_derivation, render_derived, render_dot, write_grammar)
from .grammar import (Diagnostic, ElementaryTree, GornAddress, Grammar, TreeNode, validate_grammar,
                      validate_tree)
from .lexicon import Token, TreeInstance, instantiate, select_trees, tokens

__all__ = [
    "ArgumentStructure", "DependencyGraph", "DerivationForest", "DerivationNode", "DerivationTree",
    "DerivedTree", "Diagnostic", "ElementaryTree", "GornAddress", "Grammar", "Lexeme", "Relation",
    "TagError", "Token", "TokenRef", "TreeInstance", "TreeNode", "accepted_strings", "adjoin",
    "argument_structure", "bundled_grammar", "chart_size", "derivation", "enumerate_derivations",
    "instantiate", "load_grammar", "mine_dependencies", "parse_forest", "read_grammar",
    "read_sentences", "recognize", "render_deps", "render_derivation", "render_derived", "render_dot",
    "replay_derivation", "select_trees", "substitute", "tokens", "validate_derivation",
    "validate_grammar", "validate_tree", "write_grammar",
]

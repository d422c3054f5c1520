"""Parikh-equivalent finite automata for context-free grammars."""
from .automaton import WordNFA, build_parikh_automaton, default_k, gn_family, state_count
from .grammar import Derivation, Grammar, Production, Symbol, degree, parse_grammar
from .nfa import LetterNFA, to_letter_nfa, truncated_parikh_image
from .oracle import check_equivalence, grammar_parikh, indexed_grammar_parikh
from .parsetree import ParseTree, compact, dimension, tree_to_indexed_derivation
from .semilinear import SemilinearSet, nfa_parikh, slset_truncate

__version__ = "0.1.0"
